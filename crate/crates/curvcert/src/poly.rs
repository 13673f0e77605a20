//! Sparse multivariate polynomials with `f64` coefficients.
//!
//! This is the sole function representation used by the metric families:
//! every metric coefficient, potential, and connection symbol is a
//! `PolyMap`. Arithmetic and differentiation are exact at the term level
//! (coefficients combine in IEEE double); terms whose coefficients cancel
//! to exactly zero are dropped. Terms are kept in graded-lexicographic
//! order so that serialization, equality, and evaluation order are all
//! deterministic.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exponent vector of a single term, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial: a finite map from exponent vectors to
/// nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct PolyMap {
    nvars: usize,
    terms: BTreeMap<Monomial, f64>,
}

impl PolyMap {
    /// The zero polynomial in `nvars` variables.
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1, "polynomials need at least one variable");
        PolyMap {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// Constant polynomial.
    pub fn constant(nvars: usize, c: f64) -> Self {
        let mut p = Self::zero(nvars);
        if c != 0.0 {
            p.terms.insert(Monomial(vec![0; nvars]), c);
        }
        p
    }

    /// The coordinate polynomial `x_var` (0-based variable index).
    pub fn variable(nvars: usize, var: usize) -> Self {
        assert!(var < nvars, "variable index out of range");
        let mut exps = vec![0u32; nvars];
        exps[var] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(Monomial(exps), 1.0);
        p
    }

    /// Build from `(exponents, coefficient)` pairs, merging duplicates.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, f64)>,
    {
        let mut p = Self::zero(nvars);
        for (exps, coef) in terms {
            if exps.len() != nvars {
                return Err(Error::DimMismatch(format!(
                    "exponent vector has length {}, expected {nvars}",
                    exps.len()
                )));
            }
            if !coef.is_finite() {
                return Err(Error::InvalidInput("non-finite coefficient".into()));
            }
            p.add_term(Monomial(exps), coef);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, coef: f64) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if coef != 0.0 {
                    e.insert(coef);
                }
            }
            Entry::Occupied(mut e) => {
                let total = *e.get() + coef;
                if total == 0.0 {
                    e.remove();
                } else {
                    *e.get_mut() = total;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Iterate terms in graded-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, f64)> {
        self.terms.iter().map(|(m, &c)| (m, c))
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::total_degree).max().unwrap_or(0)
    }

    /// Evaluate at `point`; errors when the point length does not match.
    pub fn eval(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.nvars {
            return Err(Error::DimMismatch(format!(
                "point has length {}, polynomial has {} variables",
                point.len(),
                self.nvars
            )));
        }
        Ok(self.eval_slice(point))
    }

    /// Evaluation without the length check; callers guarantee the length.
    pub(crate) fn eval_slice(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut acc = 0.0;
        for (m, c) in self.terms.iter() {
            let mut t = *c;
            for (x, &e) in point.iter().zip(m.0.iter()) {
                if e > 0 {
                    t *= x.powi(e as i32);
                }
            }
            acc += t;
        }
        acc
    }

    /// Exact partial derivative with respect to variable `var` (0-based).
    pub fn diff(&self, var: usize) -> Result<PolyMap> {
        if var >= self.nvars {
            return Err(Error::InvalidInput(format!(
                "derivative index {var} out of range for {} variables",
                self.nvars
            )));
        }
        let mut out = Self::zero(self.nvars);
        for (m, &c) in self.terms.iter() {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[var] = e - 1;
            out.add_term(Monomial(exps), c * e as f64);
        }
        Ok(out)
    }

    pub fn add(&self, other: &PolyMap) -> Result<PolyMap> {
        self.check_same_vars(other)?;
        let mut out = self.clone();
        for (m, &c) in other.terms.iter() {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyMap) -> Result<PolyMap> {
        self.add(&other.scaled(-1.0))
    }

    pub fn mul(&self, other: &PolyMap) -> Result<PolyMap> {
        self.check_same_vars(other)?;
        let mut out = Self::zero(self.nvars);
        for (ma, &ca) in self.terms.iter() {
            for (mb, &cb) in other.terms.iter() {
                let exps: Vec<u32> = ma.0.iter().zip(mb.0.iter()).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exps), ca * cb);
            }
        }
        Ok(out)
    }

    /// The polynomial scaled by `c`.
    pub fn scaled(&self, c: f64) -> PolyMap {
        if c == 0.0 {
            return Self::zero(self.nvars);
        }
        PolyMap {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, &v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Reinterpret in a larger variable set: existing variables keep their
    /// indices, new trailing variables get exponent zero.
    pub fn extended(&self, nvars: usize) -> Result<PolyMap> {
        if nvars < self.nvars {
            return Err(Error::InvalidInput(format!(
                "cannot shrink polynomial from {} to {nvars} variables",
                self.nvars
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|(m, &c)| {
                let mut exps = m.0.clone();
                exps.resize(nvars, 0);
                (Monomial(exps), c)
            })
            .collect();
        Ok(PolyMap { nvars, terms })
    }

    fn check_same_vars(&self, other: &PolyMap) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::DimMismatch(format!(
                "polynomials have {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    _ => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}

// JSON encoding: {"nvars": p, "terms": [{"exps": [...], "coef": c}, ...]}.
// Duplicate exponent vectors, zero/non-finite coefficients, and wrong
// exponent lengths are rejected on input.

#[derive(Serialize, Deserialize)]
struct TermJson {
    exps: Vec<u32>,
    coef: f64,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct PolyJson {
    nvars: usize,
    terms: Vec<TermJson>,
}

impl From<PolyMap> for PolyJson {
    fn from(p: PolyMap) -> Self {
        PolyJson {
            nvars: p.nvars,
            terms: p
                .terms
                .iter()
                .map(|(m, &c)| TermJson {
                    exps: m.0.clone(),
                    coef: c,
                })
                .collect(),
        }
    }
}

impl TryFrom<PolyJson> for PolyMap {
    type Error = Error;

    fn try_from(raw: PolyJson) -> Result<Self> {
        if raw.nvars == 0 {
            return Err(Error::InvalidInput("nvars must be positive".into()));
        }
        let mut p = PolyMap::zero(raw.nvars);
        for t in raw.terms {
            if t.exps.len() != raw.nvars {
                return Err(Error::InvalidInput(format!(
                    "term exponent vector has length {}, expected {}",
                    t.exps.len(),
                    raw.nvars
                )));
            }
            if !t.coef.is_finite() || t.coef == 0.0 {
                return Err(Error::InvalidInput(
                    "term coefficients must be finite and nonzero".into(),
                ));
            }
            let m = Monomial(t.exps);
            if p.terms.contains_key(&m) {
                return Err(Error::InvalidInput(format!(
                    "duplicate exponent vector {:?}",
                    m.0
                )));
            }
            p.terms.insert(m, t.coef);
        }
        Ok(p)
    }
}
