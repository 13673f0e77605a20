//! Curvature of the metric families, by independent routes.
//!
//! The general route runs the textbook pipeline through exact polynomial
//! algebra: because the inverse metric of every family is itself polynomial
//! (`[[0, I], [I, -psi]]` plus a constant flat block), the Christoffel
//! symbols, the curvature tensor, and its coordinate derivatives are all
//! polynomials in the chart variables. They are computed once per metric
//! and evaluated per point.
//!
//! The closed-form route evaluates the second- and third-derivative
//! expressions that the split structure collapses to when the xx-block
//! depends on `x` alone:
//!
//! ```text
//! R_{ijkl}   = -1/2 (psi_{il/jk} + psi_{jk/il} - psi_{ik/jl} - psi_{jl/ik})
//! R_{ijkl;m} = -1/2 (psi_{il/jkm} + psi_{jk/ilm} - psi_{ik/jlm} - psi_{jl/ikm})
//! ```
//!
//! on pure-x indices and zero whenever an index touches the `y` or flat
//! blocks. The two routes (three, with the hypersurface route for gradient
//! metrics) must agree; the general route is the oracle.
//!
//! Index conventions, fixed once: `R(Z1,Z2)Z3 = [nabla_1, nabla_2] Z3`,
//! `R_{ijkl} = (R(d_i, d_j) d_k, d_l)`, and `nabla_r[[i,j,k,l,m]]` is the
//! covariant derivative of `R_{ijkl}` in the `d_m` direction.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hypersurface;
use crate::metric::{ChartLayout, MetricSpec, PointChart, SymPolyMat};
use crate::poly::PolyMap;
use crate::tensor::{Tensor, Tensor3, Tensor4, Tensor5};

/// Which formula family produced a curvature tensor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureRoute {
    /// Christoffel symbols from the metric, then `dGamma + Gamma Gamma`.
    General,
    /// Second/third-derivative closed form for x-only xx-blocks.
    ClosedForm,
    /// Second-fundamental-form products, gradient family only.
    Hypersurface,
}

/// Curvature data at a point: `R`, its covariant derivative, and Ricci.
#[derive(Debug, Clone)]
pub struct CurvatureData {
    pub point: PointChart,
    pub r: Tensor4,
    pub nabla_r: Tensor5,
    pub ricci: DMatrix<f64>,
}

impl CurvatureData {
    /// Max violation of `R_{ijkl} = -R_{jikl} = -R_{ijlk}`, relative to
    /// `1 + max |R|`.
    pub fn antisymmetry_residual(&self) -> f64 {
        let n = self.r.n();
        let scale = 1.0 + self.r.max_abs();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = *self.r.get([i, j, k, l]);
                        worst = worst.max((v + self.r.get([j, i, k, l])).abs());
                        worst = worst.max((v + self.r.get([i, j, l, k])).abs());
                    }
                }
            }
        }
        worst / scale
    }

    /// Max violation of the pair symmetry `R_{ijkl} = R_{klij}`.
    pub fn pair_symmetry_residual(&self) -> f64 {
        let n = self.r.n();
        let scale = 1.0 + self.r.max_abs();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        worst = worst
                            .max((self.r.get([i, j, k, l]) - self.r.get([k, l, i, j])).abs());
                    }
                }
            }
        }
        worst / scale
    }

    /// Max violation of the first Bianchi identity.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.r.n();
        let scale = 1.0 + self.r.max_abs();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.r.get([i, j, k, l])
                            + self.r.get([j, k, i, l])
                            + self.r.get([k, i, j, l]);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst / scale
    }

    /// Largest `|R|` and `|nabla R|` component carrying a y-block index.
    /// Expected to vanish for x-only xx-blocks.
    pub fn y_block_residual(&self, layout: &ChartLayout) -> (f64, f64) {
        let mut r_worst: f64 = 0.0;
        for (idx, &v) in self.r.enumerate() {
            if idx.iter().any(|&i| layout.is_y(i)) {
                r_worst = r_worst.max(v.abs());
            }
        }
        let mut dr_worst: f64 = 0.0;
        for (idx, &v) in self.nabla_r.enumerate() {
            if idx.iter().any(|&i| layout.is_y(i)) {
                dr_worst = dr_worst.max(v.abs());
            }
        }
        (r_worst, dr_worst)
    }

    pub fn max_abs_r(&self) -> f64 {
        self.r.max_abs()
    }

    pub fn max_abs_nabla(&self) -> f64 {
        self.nabla_r.max_abs()
    }
}

/// Per-metric cache of the polynomial curvature pipeline.
pub struct CurvatureEngine {
    spec: MetricSpec,
    layout: ChartLayout,
    g: SymPolyMat,
    g_inv: SymPolyMat,
    /// `gamma[[i, j, k]] = Gamma^k_{ij}`.
    gamma: Tensor<PolyMap, 3>,
    /// `r[[i, j, k, l]] = R_{ijkl}` as a polynomial.
    r: Tensor<PolyMap, 4>,
    /// `dr[[i, j, k, l, m]] = d_m R_{ijkl}` (coordinate derivative).
    dr: Tensor<PolyMap, 5>,
}

impl CurvatureEngine {
    pub fn new(spec: &MetricSpec) -> Result<Self> {
        let layout = spec.layout();
        let n = layout.dim();
        let g = spec.chart_metric_polys()?;
        let g_inv = spec.chart_metric_inverse_polys()?;

        // dg[[i, j, m]] = d_m g_{ij}
        let mut dg = Tensor::<PolyMap, 3>::filled(n, PolyMap::zero(n));
        for i in 0..n {
            for j in 0..n {
                let gij = g.get(i, j);
                if gij.is_zero() {
                    continue;
                }
                for m in 0..n {
                    dg.set([i, j, m], gij.diff(m)?);
                }
            }
        }

        // Gamma^k_{ij} = 1/2 g^{kl} (d_i g_{jl} + d_j g_{il} - d_l g_{ij})
        let mut gamma = Tensor::<PolyMap, 3>::filled(n, PolyMap::zero(n));
        for i in 0..n {
            for j in i..n {
                for k in 0..n {
                    let mut acc = PolyMap::zero(n);
                    for l in 0..n {
                        let ginv_kl = g_inv.get(k, l);
                        if ginv_kl.is_zero() {
                            continue;
                        }
                        let bracket = dg
                            .get([j, l, i])
                            .add(dg.get([i, l, j]))?
                            .sub(dg.get([i, j, l]))?;
                        if bracket.is_zero() {
                            continue;
                        }
                        acc = acc.add(&ginv_kl.mul(&bracket)?)?;
                    }
                    let sym = acc.scaled(0.5);
                    gamma.set([j, i, k], sym.clone());
                    gamma.set([i, j, k], sym);
                }
            }
        }

        // dgamma[[i, j, k, m]] = d_m Gamma^k_{ij}
        let mut dgamma = Tensor::<PolyMap, 4>::filled(n, PolyMap::zero(n));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let gijk = gamma.get([i, j, k]);
                    if gijk.is_zero() {
                        continue;
                    }
                    for m in 0..n {
                        dgamma.set([i, j, k, m], gijk.diff(m)?);
                    }
                }
            }
        }

        // R^m_{ijk} = d_i Gamma^m_{jk} - d_j Gamma^m_{ik}
        //           + Gamma^m_{iq} Gamma^q_{jk} - Gamma^m_{jq} Gamma^q_{ik},
        // then R_{ijkl} = g_{lm} R^m_{ijk}.
        let mut r = Tensor::<PolyMap, 4>::filled(n, PolyMap::zero(n));
        let mut up = vec![PolyMap::zero(n); n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for (m, slot) in up.iter_mut().enumerate() {
                        let mut acc = dgamma.get([j, k, m, i]).sub(dgamma.get([i, k, m, j]))?;
                        for q in 0..n {
                            let a = gamma.get([i, q, m]);
                            let b = gamma.get([j, k, q]);
                            if !a.is_zero() && !b.is_zero() {
                                acc = acc.add(&a.mul(b)?)?;
                            }
                            let c = gamma.get([j, q, m]);
                            let d = gamma.get([i, k, q]);
                            if !c.is_zero() && !d.is_zero() {
                                acc = acc.sub(&c.mul(d)?)?;
                            }
                        }
                        *slot = acc;
                    }
                    for l in 0..n {
                        let mut acc = PolyMap::zero(n);
                        for (m, rm) in up.iter().enumerate() {
                            let glm = g.get(l, m);
                            if glm.is_zero() || rm.is_zero() {
                                continue;
                            }
                            acc = acc.add(&glm.mul(rm)?)?;
                        }
                        r.set([i, j, k, l], acc);
                    }
                }
            }
        }

        let mut dr = Tensor::<PolyMap, 5>::filled(n, PolyMap::zero(n));
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let rijkl = r.get([i, j, k, l]);
                        if rijkl.is_zero() {
                            continue;
                        }
                        for m in 0..n {
                            dr.set([i, j, k, l, m], rijkl.diff(m)?);
                        }
                    }
                }
            }
        }

        Ok(CurvatureEngine {
            spec: spec.clone(),
            layout,
            g,
            g_inv,
            gamma,
            r,
            dr,
        })
    }

    pub fn spec(&self) -> &MetricSpec {
        &self.spec
    }

    pub fn layout(&self) -> ChartLayout {
        self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.dim()
    }

    fn check_point(&self, point: &PointChart) -> Result<()> {
        if point.dim() != self.dim() {
            return Err(Error::DimMismatch(format!(
                "point has dimension {}, metric has {}",
                point.dim(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Christoffel symbols `Gamma^k_{ij}` at a point.
    pub fn christoffel_at(&self, point: &PointChart) -> Result<Tensor3> {
        self.check_point(point)?;
        let n = self.dim();
        let mut out = Tensor3::new(n);
        for (idx, poly) in self.gamma.enumerate() {
            if !poly.is_zero() {
                out.set(idx, poly.eval_slice(point.coords()));
            }
        }
        Ok(out)
    }

    /// The all-lower curvature tensor `R_{ijkl}` at a point.
    pub fn riemann_at(&self, point: &PointChart) -> Result<Tensor4> {
        self.check_point(point)?;
        let n = self.dim();
        let mut out = Tensor4::new(n);
        for (idx, poly) in self.r.enumerate() {
            if !poly.is_zero() {
                out.set(idx, poly.eval_slice(point.coords()));
            }
        }
        Ok(out)
    }

    /// Covariant derivative `R_{ijkl;m}` at a point (coordinate derivative
    /// minus the four Christoffel corrections).
    pub fn nabla_riemann_at(&self, point: &PointChart) -> Result<Tensor5> {
        let gamma = self.christoffel_at(point)?;
        let r = self.riemann_at(point)?;
        self.nabla_from_parts(point, &gamma, &r)
    }

    fn nabla_from_parts(&self, point: &PointChart, gamma: &Tensor3, r: &Tensor4) -> Result<Tensor5> {
        let n = self.dim();
        let mut out = Tensor5::new(n);
        for (idx, poly) in self.dr.enumerate() {
            if !poly.is_zero() {
                out.set(idx, poly.eval_slice(point.coords()));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        for m in 0..n {
                            let mut corr = 0.0;
                            for q in 0..n {
                                corr += gamma.get([m, i, q]) * r.get([q, j, k, l])
                                    + gamma.get([m, j, q]) * r.get([i, q, k, l])
                                    + gamma.get([m, k, q]) * r.get([i, j, q, l])
                                    + gamma.get([m, l, q]) * r.get([i, j, k, q]);
                            }
                            if corr != 0.0 {
                                let v = out.get([i, j, k, l, m]) - corr;
                                out.set([i, j, k, l, m], v);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Ricci tensor `rho_{ij} = g^{kl} R_{kijl}` from the general route.
    pub fn ricci_at(&self, point: &PointChart) -> Result<DMatrix<f64>> {
        let r = self.riemann_at(point)?;
        let ginv = self.g_inv.eval(point.coords());
        Ok(ricci_from(&r, &ginv))
    }

    /// Full general-route curvature data at a point.
    pub fn curvature_at(&self, point: &PointChart) -> Result<CurvatureData> {
        let gamma = self.christoffel_at(point)?;
        let r = self.riemann_at(point)?;
        let nabla_r = self.nabla_from_parts(point, &gamma, &r)?;
        let ginv = self.g_inv.eval(point.coords());
        let ricci = ricci_from(&r, &ginv);
        Ok(CurvatureData {
            point: point.clone(),
            r,
            nabla_r,
            ricci,
        })
    }

    /// Curvature data by the requested route. Closed-form and hypersurface
    /// routes reject families they do not cover.
    pub fn curvature_with_route(
        &self,
        point: &PointChart,
        route: CurvatureRoute,
    ) -> Result<CurvatureData> {
        match route {
            CurvatureRoute::General => self.curvature_at(point),
            CurvatureRoute::ClosedForm => {
                let r = riemann_closed_form(&self.spec, point)?;
                let nabla_r = nabla_closed_form(&self.spec, point)?;
                let ginv = self.g_inv.eval(point.coords());
                let ricci = ricci_from(&r, &ginv);
                Ok(CurvatureData {
                    point: point.clone(),
                    r,
                    nabla_r,
                    ricci,
                })
            }
            CurvatureRoute::Hypersurface => {
                let r = hypersurface::riemann_hypersurface(&self.spec, point)?;
                let nabla_r = hypersurface::nabla_hypersurface(&self.spec, point)?;
                let ginv = self.g_inv.eval(point.coords());
                let ricci = ricci_from(&r, &ginv);
                Ok(CurvatureData {
                    point: point.clone(),
                    r,
                    nabla_r,
                    ricci,
                })
            }
        }
    }

    /// Polynomial access for diagnostics.
    pub fn gamma_poly(&self, i: usize, j: usize, k: usize) -> &PolyMap {
        self.gamma.get([i, j, k])
    }

    pub fn metric_polys(&self) -> &SymPolyMat {
        &self.g
    }
}

/// `rho_{ij} = g^{kl} R_{kijl}`.
pub fn ricci_from(r: &Tensor4, g_inv: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.n();
    let mut ricci = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0.0;
            for k in 0..n {
                for l in 0..n {
                    let w = g_inv[(k, l)];
                    if w != 0.0 {
                        acc += w * r.get([k, i, j, l]);
                    }
                }
            }
            ricci[(i, j)] = acc;
        }
    }
    ricci
}

fn require_x_only(spec: &MetricSpec) -> Result<()> {
    if !spec.psi_is_x_only() {
        return Err(Error::InvalidInput(format!(
            "closed-form route does not cover the {} family",
            spec.family_name()
        )));
    }
    Ok(())
}

/// Closed-form curvature for x-only xx-blocks: second derivatives of the
/// block, zero whenever an index leaves the x-block.
pub fn riemann_closed_form(spec: &MetricSpec, point: &PointChart) -> Result<Tensor4> {
    require_x_only(spec)?;
    let layout = spec.layout();
    let n = layout.dim();
    if point.dim() != n {
        return Err(Error::DimMismatch("point dimension".into()));
    }
    let mut out = Tensor4::new(n);
    let Some(psi) = spec.psi_block() else {
        return Ok(out); // flat: identically zero
    };
    let p = layout.p;
    let x = &point.coords()[..p];

    // psi_{ij/kl} evaluated at x
    let mut d2 = Tensor4::new(p);
    for i in 0..p {
        for j in 0..p {
            let entry = psi.get(i, j);
            if entry.is_zero() {
                continue;
            }
            for k in 0..p {
                let dk = entry.diff(k)?;
                if dk.is_zero() {
                    continue;
                }
                for l in k..p {
                    let v = dk.diff(l)?.eval_slice(x);
                    d2.set([i, j, k, l], v);
                    d2.set([i, j, l, k], v);
                }
            }
        }
    }

    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                for l in 0..p {
                    let v = -0.5
                        * (d2.get([i, l, j, k]) + d2.get([j, k, i, l])
                            - d2.get([i, k, j, l])
                            - d2.get([j, l, i, k]));
                    out.set([i, j, k, l], v);
                }
            }
        }
    }
    Ok(out)
}

/// Closed-form covariant derivative: plain third derivatives on pure-x
/// indices. The Christoffel corrections drop because the symbols take
/// values in the y-block, which the curvature annihilates.
pub fn nabla_closed_form(spec: &MetricSpec, point: &PointChart) -> Result<Tensor5> {
    require_x_only(spec)?;
    let layout = spec.layout();
    let n = layout.dim();
    if point.dim() != n {
        return Err(Error::DimMismatch("point dimension".into()));
    }
    let mut out = Tensor5::new(n);
    let Some(psi) = spec.psi_block() else {
        return Ok(out);
    };
    let p = layout.p;
    let x = &point.coords()[..p];

    // psi_{ij/klm} evaluated at x
    let mut d3 = Tensor5::new(p);
    for i in 0..p {
        for j in 0..p {
            let entry = psi.get(i, j);
            if entry.is_zero() {
                continue;
            }
            for k in 0..p {
                let dk = entry.diff(k)?;
                if dk.is_zero() {
                    continue;
                }
                for l in k..p {
                    let dkl = dk.diff(l)?;
                    if dkl.is_zero() {
                        continue;
                    }
                    for m in l..p {
                        let v = dkl.diff(m)?.eval_slice(x);
                        // fully symmetric in (k, l, m)
                        for perm in [[k, l, m], [k, m, l], [l, k, m], [l, m, k], [m, k, l], [m, l, k]] {
                            d3.set([i, j, perm[0], perm[1], perm[2]], v);
                        }
                    }
                }
            }
        }
    }

    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                for l in 0..p {
                    for m in 0..p {
                        let v = -0.5
                            * (d3.get([i, l, j, k, m]) + d3.get([j, k, i, l, m])
                                - d3.get([i, k, j, l, m])
                                - d3.get([j, l, i, k, m]));
                        out.set([i, j, k, l, m], v);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Max disagreement between two rank-4 tensors, normalized by
/// `1 + max(|a|, |b|)`.
pub fn tensor4_disagreement(a: &Tensor4, b: &Tensor4) -> f64 {
    assert_eq!(a.n(), b.n());
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    let mut worst: f64 = 0.0;
    for ((_, &va), (_, &vb)) in a.enumerate().zip(b.enumerate()) {
        worst = worst.max((va - vb).abs());
    }
    worst / scale
}

/// Same for rank-5 tensors.
pub fn tensor5_disagreement(a: &Tensor5, b: &Tensor5) -> f64 {
    assert_eq!(a.n(), b.n());
    let scale = 1.0 + a.max_abs().max(b.max_abs());
    let mut worst: f64 = 0.0;
    for ((_, &va), (_, &vb)) in a.enumerate().zip(b.enumerate()) {
        worst = worst.max((va - vb).abs());
    }
    worst / scale
}
