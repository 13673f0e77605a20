//! Metric families on `R^{2p} (x, y)` coordinates, optionally crossed with
//! a flat factor, plus pointwise metric evaluation.
//!
//! Coordinate convention: slots `0..p` are the `x` distribution, slots
//! `p..2p` the `y` distribution, and any remaining slots carry the flat
//! factor `diag(-1 x a, +1 x b)`. The split families all share the block
//! form
//!
//! ```text
//!     g = [[ psi, I ],      g^{-1} = [[ 0,  I   ],
//!          [ I,   0 ]]                [ I, -psi ]]
//! ```
//!
//! where `psi` is a symmetric matrix of polynomials: supplied directly
//! (`psi` family), expanded from a potential as `psi_ij = (d_i f)(d_j f)`
//! (`gradient` family), or assembled from connection symbols as
//! `psi_ij = -2 sum_k y_k G^k_ij(x)` (`affine` family, the only one whose
//! coefficients involve `y`).
//!
//! Signature convention: `(neg, pos)` counts negative directions first, so
//! `flat(a, 0)` is negative definite and the split families have signature
//! `(p + a, p + b)`.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::PolyMap;

/// Index bookkeeping for a chart `(x_1..x_p, y_1..y_p, w_1..w_{a+b})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChartLayout {
    pub p: usize,
    pub neg: usize,
    pub pos: usize,
}

impl ChartLayout {
    pub fn dim(&self) -> usize {
        2 * self.p + self.neg + self.pos
    }

    pub fn is_x(&self, i: usize) -> bool {
        i < self.p
    }

    pub fn is_y(&self, i: usize) -> bool {
        i >= self.p && i < 2 * self.p
    }

    pub fn is_flat(&self, i: usize) -> bool {
        i >= 2 * self.p && i < self.dim()
    }

    /// The y-slot paired with x-slot `i`.
    pub fn y_of(&self, i: usize) -> usize {
        debug_assert!(self.is_x(i));
        self.p + i
    }

    /// Diagonal entry of the flat block at chart slot `i`.
    pub fn flat_sign(&self, i: usize) -> f64 {
        debug_assert!(self.is_flat(i));
        if i - 2 * self.p < self.neg {
            -1.0
        } else {
            1.0
        }
    }
}

/// A point in chart coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointChart(pub Vec<f64>);

impl PointChart {
    pub fn origin(dim: usize) -> Self {
        PointChart(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl From<Vec<f64>> for PointChart {
    fn from(v: Vec<f64>) -> Self {
        PointChart(v)
    }
}

/// Symmetric matrix of polynomials, stored as the upper triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPolyMat {
    size: usize,
    nvars: usize,
    upper: Vec<PolyMap>, // row-major upper triangle, (i, j) with i <= j
}

impl SymPolyMat {
    pub fn zeros(size: usize, nvars: usize) -> Self {
        SymPolyMat {
            size,
            nvars,
            upper: vec![PolyMap::zero(nvars); size * (size + 1) / 2],
        }
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        debug_assert!(b < self.size);
        a * self.size - a * (a + 1) / 2 + b
    }

    pub fn get(&self, i: usize, j: usize) -> &PolyMap {
        &self.upper[self.slot(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: PolyMap) -> Result<()> {
        if value.nvars() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "entry has {} variables, matrix expects {}",
                value.nvars(),
                self.nvars
            )));
        }
        let s = self.slot(i, j);
        self.upper[s] = value;
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.upper.iter().all(PolyMap::is_zero)
    }

    /// Evaluate into a dense symmetric matrix.
    pub fn eval(&self, point: &[f64]) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.size, self.size);
        for i in 0..self.size {
            for j in i..self.size {
                let v = self.get(i, j).eval_slice(point);
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }
}

/// One of the supported metric families.
#[derive(Debug, Clone, PartialEq)]
pub enum MetricSpec {
    /// `g = [[psi(x), I], [I, 0]]` with `psi` symmetric polynomial data.
    Psi { p: usize, psi: SymPolyMat },
    /// The psi family specialized to `psi = df . df`; both the potential
    /// and the expanded tensor are retained.
    Gradient { p: usize, f: PolyMap, psi: SymPolyMat },
    /// Metric extension of a torsion-free connection on `R^p`:
    /// `psi_ij(x, y) = -2 sum_k y_k G^k_ij(x)`.
    Affine {
        p: usize,
        gamma: AffineSymbols,
        psi: SymPolyMat,
    },
    /// Constant `diag(-1 x neg, +1 x pos)`.
    Flat { neg: usize, pos: usize },
    /// Base family crossed with a flat factor (block diagonal).
    Product { base: Box<MetricSpec>, neg: usize, pos: usize },
}

/// Torsion-free connection symbols `G^k_ij = G^k_ji` on `R^p`,
/// polynomials in `x` only.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSymbols {
    p: usize,
    // upper[k] is the symmetric matrix i <= j for upper index k
    upper: Vec<SymPolyMat>,
}

impl AffineSymbols {
    pub fn zeros(p: usize) -> Self {
        AffineSymbols {
            p,
            upper: vec![SymPolyMat::zeros(p, p); p],
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &PolyMap {
        self.upper[k].get(i, j)
    }

    pub fn set(&mut self, i: usize, j: usize, k: usize, value: PolyMap) -> Result<()> {
        self.upper[k].set(i, j, value)
    }
}

impl MetricSpec {
    /// Validated psi-family constructor. `entries` maps 0-based `(i, j)`
    /// with `i <= j` to polynomials in `p` variables; missing entries are
    /// zero.
    pub fn psi(p: usize, entries: impl IntoIterator<Item = ((usize, usize), PolyMap)>) -> Result<Self> {
        let psi = build_sym(p, p, entries, "psi")?;
        Ok(MetricSpec::Psi { p, psi })
    }

    /// Gradient-family constructor: expands `psi_ij = (d_i f)(d_j f)`.
    pub fn gradient(p: usize, f: PolyMap) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("p must be positive".into()));
        }
        if f.nvars() != p {
            return Err(Error::DimMismatch(format!(
                "potential has {} variables, expected {p}",
                f.nvars()
            )));
        }
        let grads: Vec<PolyMap> = (0..p).map(|i| f.diff(i)).collect::<Result<_>>()?;
        let mut psi = SymPolyMat::zeros(p, p);
        for i in 0..p {
            for j in i..p {
                psi.set(i, j, grads[i].mul(&grads[j])?)?;
            }
        }
        Ok(MetricSpec::Gradient { p, f, psi })
    }

    /// Affine-family constructor from symbols `G^k_ij(x)`, `(i, j, k)`
    /// 0-based with `i <= j`.
    pub fn affine(
        p: usize,
        entries: impl IntoIterator<Item = ((usize, usize, usize), PolyMap)>,
    ) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidInput("p must be positive".into()));
        }
        let mut gamma = AffineSymbols::zeros(p);
        for ((i, j, k), poly) in entries {
            if i > j {
                return Err(Error::InvalidInput(format!(
                    "connection entry ({i},{j},{k}) must have i <= j"
                )));
            }
            if j >= p || k >= p {
                return Err(Error::InvalidInput(format!(
                    "connection index ({i},{j},{k}) out of range for p={p}"
                )));
            }
            if poly.nvars() != p {
                return Err(Error::DimMismatch(format!(
                    "connection entry ({i},{j},{k}) has {} variables, expected {p}",
                    poly.nvars()
                )));
            }
            if !gamma.get(i, j, k).is_zero() {
                return Err(Error::InvalidInput(format!(
                    "duplicate connection entry ({i},{j},{k})"
                )));
            }
            gamma.set(i, j, k, poly)?;
        }
        let psi = affine_psi(p, &gamma)?;
        Ok(MetricSpec::Affine { p, gamma, psi })
    }

    pub fn flat(neg: usize, pos: usize) -> Result<Self> {
        if neg + pos == 0 {
            return Err(Error::InvalidInput("flat factor must have positive dimension".into()));
        }
        Ok(MetricSpec::Flat { neg, pos })
    }

    pub fn product(base: MetricSpec, neg: usize, pos: usize) -> Result<Self> {
        match base {
            MetricSpec::Flat { .. } | MetricSpec::Product { .. } => Err(Error::InvalidInput(
                "product base must be a psi/gradient/affine family".into(),
            )),
            base => {
                if neg + pos == 0 {
                    return Err(Error::InvalidInput(
                        "product flat factor must have positive dimension".into(),
                    ));
                }
                Ok(MetricSpec::Product {
                    base: Box::new(base),
                    neg,
                    pos,
                })
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            MetricSpec::Psi { .. } => "psi",
            MetricSpec::Gradient { .. } => "gradient",
            MetricSpec::Affine { .. } => "affine",
            MetricSpec::Flat { .. } => "flat",
            MetricSpec::Product { .. } => "product",
        }
    }

    pub fn layout(&self) -> ChartLayout {
        match self {
            MetricSpec::Psi { p, .. } | MetricSpec::Gradient { p, .. } | MetricSpec::Affine { p, .. } => {
                ChartLayout { p: *p, neg: 0, pos: 0 }
            }
            MetricSpec::Flat { neg, pos } => ChartLayout { p: 0, neg: *neg, pos: *pos },
            MetricSpec::Product { base, neg, pos } => {
                let b = base.layout();
                ChartLayout { p: b.p, neg: *neg, pos: *pos }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.layout().dim()
    }

    /// The symmetric xx-block polynomials (in the family's own variables),
    /// when the family has one.
    pub fn psi_block(&self) -> Option<&SymPolyMat> {
        match self {
            MetricSpec::Psi { psi, .. }
            | MetricSpec::Gradient { psi, .. }
            | MetricSpec::Affine { psi, .. } => Some(psi),
            MetricSpec::Flat { .. } => None,
            MetricSpec::Product { base, .. } => base.psi_block(),
        }
    }

    /// Whether the xx-block depends only on the `x` coordinates (true for
    /// every family except the affine extension).
    pub fn psi_is_x_only(&self) -> bool {
        match self {
            MetricSpec::Affine { .. } => false,
            MetricSpec::Product { base, .. } => base.psi_is_x_only(),
            _ => true,
        }
    }

    /// The gradient potential, when present (directly or as product base).
    pub fn potential(&self) -> Option<&PolyMap> {
        match self {
            MetricSpec::Gradient { f, .. } => Some(f),
            MetricSpec::Product { base, .. } => base.potential(),
            _ => None,
        }
    }

    /// Connection symbols for the affine family.
    pub fn connection(&self) -> Option<&AffineSymbols> {
        match self {
            MetricSpec::Affine { gamma, .. } => Some(gamma),
            _ => None,
        }
    }

    /// The full metric as a symmetric matrix of polynomials in all `dim()`
    /// chart variables.
    pub fn chart_metric_polys(&self) -> Result<SymPolyMat> {
        let layout = self.layout();
        let n = layout.dim();
        let mut g = SymPolyMat::zeros(n, n);
        if let Some(psi) = self.psi_block() {
            for i in 0..layout.p {
                for j in i..layout.p {
                    g.set(i, j, psi.get(i, j).extended(n)?)?;
                }
            }
            for i in 0..layout.p {
                g.set(i, layout.y_of(i), PolyMap::constant(n, 1.0))?;
            }
        }
        for i in 0..n {
            if layout.is_flat(i) {
                g.set(i, i, PolyMap::constant(n, layout.flat_sign(i)))?;
            }
        }
        Ok(g)
    }

    /// Closed-form inverse metric as polynomials: `[[0, I], [I, -psi]]`
    /// on the split block, the flat block is its own inverse.
    pub fn chart_metric_inverse_polys(&self) -> Result<SymPolyMat> {
        let layout = self.layout();
        let n = layout.dim();
        let mut ginv = SymPolyMat::zeros(n, n);
        if let Some(psi) = self.psi_block() {
            for i in 0..layout.p {
                ginv.set(i, layout.y_of(i), PolyMap::constant(n, 1.0))?;
                for j in i..layout.p {
                    ginv.set(
                        layout.y_of(i),
                        layout.y_of(j),
                        psi.get(i, j).extended(n)?.scaled(-1.0),
                    )?;
                }
            }
        }
        for i in 0..n {
            if layout.is_flat(i) {
                ginv.set(i, i, PolyMap::constant(n, layout.flat_sign(i)))?;
            }
        }
        Ok(ginv)
    }

    /// Evaluate the metric, its inverse, and the signature at a point.
    pub fn metric_at(&self, point: &PointChart) -> Result<MetricAtPoint> {
        let layout = self.layout();
        let n = layout.dim();
        if point.dim() != n {
            return Err(Error::DimMismatch(format!(
                "point has dimension {}, metric has {n}",
                point.dim()
            )));
        }
        let g = self.chart_metric_polys()?.eval(point.coords());
        let g_inv = self.chart_metric_inverse_polys()?.eval(point.coords());

        // The block inverse is exact; treat any visible residual as an
        // internal failure rather than silently returning it.
        let residual = (&g * &g_inv - DMatrix::<f64>::identity(n, n)).amax();
        if residual > 1e-10 {
            return Err(Error::Internal(format!(
                "metric inverse residual {residual:e} exceeds 1e-10"
            )));
        }

        let eig = g.clone().symmetric_eigen();
        let scale = 1.0 + eig.eigenvalues.amax();
        let mut neg = 0;
        let mut pos = 0;
        for &ev in eig.eigenvalues.iter() {
            if ev < -1e-10 * scale {
                neg += 1;
            } else if ev > 1e-10 * scale {
                pos += 1;
            } else {
                return Err(Error::Internal(format!(
                    "metric is numerically singular at {:?} (eigenvalue {ev:e})",
                    point.coords()
                )));
            }
        }

        Ok(MetricAtPoint {
            layout,
            g,
            g_inv,
            signature: (neg, pos),
        })
    }
}

fn build_sym(
    size: usize,
    nvars: usize,
    entries: impl IntoIterator<Item = ((usize, usize), PolyMap)>,
    what: &str,
) -> Result<SymPolyMat> {
    if size == 0 {
        return Err(Error::InvalidInput("p must be positive".into()));
    }
    let mut m = SymPolyMat::zeros(size, nvars);
    for ((i, j), poly) in entries {
        if i > j {
            return Err(Error::InvalidInput(format!(
                "{what} entry ({i},{j}) must have i <= j"
            )));
        }
        if j >= size {
            return Err(Error::InvalidInput(format!(
                "{what} index ({i},{j}) out of range for size {size}"
            )));
        }
        if poly.nvars() != nvars {
            return Err(Error::DimMismatch(format!(
                "{what} entry ({i},{j}) has {} variables, expected {nvars}",
                poly.nvars()
            )));
        }
        if !m.get(i, j).is_zero() {
            return Err(Error::InvalidInput(format!("duplicate {what} entry ({i},{j})")));
        }
        m.set(i, j, poly)?;
    }
    Ok(m)
}

/// `psi_ij(x, y) = -2 sum_k y_k G^k_ij(x)` in `2p` variables.
fn affine_psi(p: usize, gamma: &AffineSymbols) -> Result<SymPolyMat> {
    let n = 2 * p;
    let mut psi = SymPolyMat::zeros(p, n);
    for i in 0..p {
        for j in i..p {
            let mut acc = PolyMap::zero(n);
            for k in 0..p {
                let gk = gamma.get(i, j, k);
                if gk.is_zero() {
                    continue;
                }
                let y_k = PolyMap::variable(n, p + k);
                acc = acc.add(&gk.extended(n)?.mul(&y_k)?.scaled(-2.0))?;
            }
            psi.set(i, j, acc)?;
        }
    }
    Ok(psi)
}

/// Metric data evaluated at a single point.
#[derive(Debug, Clone)]
pub struct MetricAtPoint {
    pub layout: ChartLayout,
    pub g: DMatrix<f64>,
    pub g_inv: DMatrix<f64>,
    /// `(negative, positive)` eigenvalue counts.
    pub signature: (usize, usize),
}

impl MetricAtPoint {
    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Inner product `u^T g v`.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> Result<f64> {
        if u.len() != self.dim() || v.len() != self.dim() {
            return Err(Error::DimMismatch(format!(
                "vectors of length {}/{} against metric of dimension {}",
                u.len(),
                v.len(),
                self.dim()
            )));
        }
        Ok(self.inner_slice(u, v))
    }

    pub(crate) fn inner_slice(&self, u: &[f64], v: &[f64]) -> f64 {
        let uv = DVector::from_column_slice(u);
        let vv = DVector::from_column_slice(v);
        (uv.transpose() * &self.g * vv)[(0, 0)]
    }

    /// Squared norm `(u, u)`.
    pub fn norm_sq(&self, u: &[f64]) -> Result<f64> {
        self.inner(u, u)
    }
}

// ---------------------------------------------------------------------------
// JSON encoding
//
// {"family": "psi"|"gradient"|"affine"|"flat"|"product",
//  "p": ..., "psi": {"i,j": PolyMap, ...}, "f": PolyMap,
//  "gamma": {"i,j,k": PolyMap, ...}, "a": ..., "b": ..., "base": {...}}
//
// Keys are 1-based with i <= j (and i <= j for gamma); unlisted entries are
// zero. Serialization emits only nonzero entries, which together with the
// graded-lex term order makes the encoding canonical.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
pub(crate) struct MetricJson {
    family: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    psi: Option<BTreeMap<String, PolyMap>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    f: Option<PolyMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<BTreeMap<String, PolyMap>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<Box<MetricJson>>,
}

fn parse_pair(key: &str) -> Result<(usize, usize)> {
    let parts: Vec<_> = key.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::InvalidInput(format!("expected \"i,j\" key, got {key:?}")));
    }
    let i: usize = parts[0]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad index in key {key:?}")))?;
    let j: usize = parts[1]
        .trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad index in key {key:?}")))?;
    if i == 0 || j == 0 {
        return Err(Error::InvalidInput(format!("keys are 1-based, got {key:?}")));
    }
    Ok((i - 1, j - 1))
}

fn parse_triple(key: &str) -> Result<(usize, usize, usize)> {
    let parts: Vec<_> = key.split(',').collect();
    if parts.len() != 3 {
        return Err(Error::InvalidInput(format!("expected \"i,j,k\" key, got {key:?}")));
    }
    let mut out = [0usize; 3];
    for (slot, part) in out.iter_mut().zip(parts.iter()) {
        let v: usize = part
            .trim()
            .parse()
            .map_err(|_| Error::InvalidInput(format!("bad index in key {key:?}")))?;
        if v == 0 {
            return Err(Error::InvalidInput(format!("keys are 1-based, got {key:?}")));
        }
        *slot = v - 1;
    }
    Ok((out[0], out[1], out[2]))
}

impl TryFrom<MetricJson> for MetricSpec {
    type Error = Error;

    fn try_from(raw: MetricJson) -> Result<Self> {
        match raw.family.as_str() {
            "psi" => {
                let p = raw.p.ok_or_else(|| Error::InvalidInput("psi family requires p".into()))?;
                let mut entries = Vec::new();
                for (key, poly) in raw.psi.unwrap_or_default() {
                    entries.push((parse_pair(&key)?, poly));
                }
                MetricSpec::psi(p, entries)
            }
            "gradient" => {
                let p = raw
                    .p
                    .ok_or_else(|| Error::InvalidInput("gradient family requires p".into()))?;
                let f = raw
                    .f
                    .ok_or_else(|| Error::InvalidInput("gradient family requires f".into()))?;
                MetricSpec::gradient(p, f)
            }
            "affine" => {
                let p = raw
                    .p
                    .ok_or_else(|| Error::InvalidInput("affine family requires p".into()))?;
                let mut entries = Vec::new();
                for (key, poly) in raw.gamma.unwrap_or_default() {
                    entries.push((parse_triple(&key)?, poly));
                }
                MetricSpec::affine(p, entries)
            }
            "flat" => MetricSpec::flat(raw.a.unwrap_or(0), raw.b.unwrap_or(0)),
            "product" => {
                let base = raw
                    .base
                    .ok_or_else(|| Error::InvalidInput("product family requires base".into()))?;
                MetricSpec::product(MetricSpec::try_from(*base)?, raw.a.unwrap_or(0), raw.b.unwrap_or(0))
            }
            other => Err(Error::InvalidInput(format!("unknown metric family {other:?}"))),
        }
    }
}

impl From<MetricSpec> for MetricJson {
    fn from(spec: MetricSpec) -> Self {
        match spec {
            MetricSpec::Psi { p, psi } => {
                let mut map = BTreeMap::new();
                for i in 0..p {
                    for j in i..p {
                        if !psi.get(i, j).is_zero() {
                            map.insert(format!("{},{}", i + 1, j + 1), psi.get(i, j).clone());
                        }
                    }
                }
                MetricJson {
                    family: "psi".into(),
                    p: Some(p),
                    psi: Some(map),
                    f: None,
                    gamma: None,
                    a: None,
                    b: None,
                    base: None,
                }
            }
            MetricSpec::Gradient { p, f, .. } => MetricJson {
                family: "gradient".into(),
                p: Some(p),
                psi: None,
                f: Some(f),
                gamma: None,
                a: None,
                b: None,
                base: None,
            },
            MetricSpec::Affine { p, gamma, .. } => {
                let mut map = BTreeMap::new();
                for i in 0..p {
                    for j in i..p {
                        for k in 0..p {
                            if !gamma.get(i, j, k).is_zero() {
                                map.insert(
                                    format!("{},{},{}", i + 1, j + 1, k + 1),
                                    gamma.get(i, j, k).clone(),
                                );
                            }
                        }
                    }
                }
                MetricJson {
                    family: "affine".into(),
                    p: Some(p),
                    psi: None,
                    f: None,
                    gamma: Some(map),
                    a: None,
                    b: None,
                    base: None,
                }
            }
            MetricSpec::Flat { neg, pos } => MetricJson {
                family: "flat".into(),
                p: None,
                psi: None,
                f: None,
                gamma: None,
                a: Some(neg),
                b: Some(pos),
                base: None,
            },
            MetricSpec::Product { base, neg, pos } => MetricJson {
                family: "product".into(),
                p: None,
                psi: None,
                f: None,
                gamma: None,
                a: Some(neg),
                b: Some(pos),
                base: Some(Box::new(MetricJson::from(*base))),
            },
        }
    }
}

impl Serialize for MetricSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MetricJson::from(self.clone()).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for MetricSpec {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MetricJson::deserialize(deserializer)?;
        MetricSpec::try_from(raw).map_err(serde::de::Error::custom)
    }
}
