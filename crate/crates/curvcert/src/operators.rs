//! The three natural curvature operators as matrices in the coordinate
//! frame, plus 2-plane classification and oriented orthonormalization for
//! indefinite inner products.
//!
//! All operators are built by contracting the all-lower curvature tensors
//! and raising one index with `g^{-1}`:
//!
//! * Jacobi:  `(J(X) Y, Z) = R(Y, X, X, Z)`, so `J = g^{-1} M` with
//!   `M_{be} = R_{bcde} X^c X^d` (symmetric; `J` is g-self-adjoint).
//! * Directional derivative operator (Szabó): `(S(X) Y, Z) = nabla
//!   R(Y, X, X, Z; X)`, same raising with the rank-5 tensor.
//! * Skew-symmetric curvature: `(K(pi) Y, Z) = R(X1, X2, Y, Z)` for an
//!   oriented orthonormal basis `{X1, X2}` of a nondegenerate plane
//!   (`g K` is antisymmetric); the operator depends on the orientation
//!   but not on the particular orthonormal basis.

use nalgebra::{DMatrix, DVector};

use crate::curvature::CurvatureData;
use crate::error::{Error, Result};
use crate::metric::{MetricAtPoint, PointChart};
use crate::tensor::{Tensor4, Tensor5};

/// Which operator a matrix realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Jacobi,
    Szabo,
    SkewCurvature,
}

/// The argument an operator was built from.
#[derive(Debug, Clone)]
pub enum OperatorArg {
    Vector(Vec<f64>),
    Plane(Box<PlaneSpec>),
}

/// Matrix realization of an operator in the coordinate frame.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub mat: DMatrix<f64>,
    pub kind: OperatorKind,
    pub point: PointChart,
    pub arg: OperatorArg,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Frobenius norm of the matrix.
    pub fn norm(&self) -> f64 {
        self.mat.norm()
    }

    /// Largest entry of the square, for nilpotency-of-index-2 checks.
    pub fn square_max_abs(&self) -> f64 {
        (&self.mat * &self.mat).amax()
    }

    /// Residual of g-self-adjointness (symmetry of `g * mat`), relative to
    /// `1 + |g * mat|`.
    pub fn self_adjoint_residual(&self, gp: &MetricAtPoint) -> f64 {
        let gm = &gp.g * &self.mat;
        let scale = 1.0 + gm.amax();
        (&gm - gm.transpose()).amax() / scale
    }

    /// Residual of g-antisymmetry (for the skew operator).
    pub fn antisymmetric_residual(&self, gp: &MetricAtPoint) -> f64 {
        let gm = &gp.g * &self.mat;
        let scale = 1.0 + gm.amax();
        (&gm + gm.transpose()).amax() / scale
    }

    /// `|mat * v|_inf` for the operator's own vector argument.
    pub fn annihilates_argument(&self) -> Option<f64> {
        match &self.arg {
            OperatorArg::Vector(x) => {
                Some((&self.mat * DVector::from_column_slice(x)).amax())
            }
            OperatorArg::Plane(_) => None,
        }
    }
}

fn check_vector(gp: &MetricAtPoint, x: &[f64]) -> Result<()> {
    if x.len() != gp.dim() {
        return Err(Error::DimMismatch(format!(
            "vector has length {}, metric has dimension {}",
            x.len(),
            gp.dim()
        )));
    }
    if x.iter().all(|&c| c == 0.0) {
        return Err(Error::InvalidInput("operator argument is the zero vector".into()));
    }
    Ok(())
}

/// Jacobi operator `Y -> R(Y, X) X`.
pub fn jacobi_op(curv: &CurvatureData, gp: &MetricAtPoint, x: &[f64]) -> Result<OperatorMatrix> {
    check_vector(gp, x)?;
    // M is symmetric, so raising the index is a plain product
    let m = contract_xx(&curv.r, x);
    let mat = &gp.g_inv * m;
    Ok(OperatorMatrix {
        mat,
        kind: OperatorKind::Jacobi,
        point: curv.point.clone(),
        arg: OperatorArg::Vector(x.to_vec()),
    })
}

/// `M_{be} = R_{bcde} X^c X^d`.
fn contract_xx(r: &Tensor4, x: &[f64]) -> DMatrix<f64> {
    let n = r.n();
    let mut m = DMatrix::zeros(n, n);
    for ([b, c, d, e], v) in r.nonzero() {
        let w = v * x[c] * x[d];
        if w != 0.0 {
            m[(b, e)] += w;
        }
    }
    m
}

/// Szabó operator `Y -> nabla_X R(Y, X) X`.
pub fn szabo_op(nabla_r: &Tensor5, gp: &MetricAtPoint, point: &PointChart, x: &[f64]) -> Result<OperatorMatrix> {
    check_vector(gp, x)?;
    let n = gp.dim();
    let mut m = DMatrix::zeros(n, n);
    for ([b, c, d, e, q], v) in nabla_r.nonzero() {
        let w = v * x[c] * x[d] * x[q];
        if w != 0.0 {
            m[(b, e)] += w;
        }
    }
    let mat = &gp.g_inv * m;
    Ok(OperatorMatrix {
        mat,
        kind: OperatorKind::Szabo,
        point: point.clone(),
        arg: OperatorArg::Vector(x.to_vec()),
    })
}

/// Type of a 2-plane under the induced inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlaneType {
    Spacelike,
    Timelike,
    Mixed,
    Degenerate,
}

impl PlaneType {
    pub fn name(&self) -> &'static str {
        match self {
            PlaneType::Spacelike => "spacelike",
            PlaneType::Timelike => "timelike",
            PlaneType::Mixed => "mixed",
            PlaneType::Degenerate => "degenerate",
        }
    }
}

/// A 2-plane given by a spanning pair with orientation and its Gram data.
#[derive(Debug, Clone)]
pub struct PlaneSpec {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    /// +1 keeps the (u, v) order, -1 flips the orientation.
    pub orientation: i8,
    pub ptype: PlaneType,
    pub gram: [[f64; 2]; 2],
}

impl PlaneSpec {
    pub fn gram_det(&self) -> f64 {
        self.gram[0][0] * self.gram[1][1] - self.gram[0][1] * self.gram[1][0]
    }

    /// The same plane with reversed orientation.
    pub fn flipped(&self) -> PlaneSpec {
        let mut out = self.clone();
        out.orientation = -out.orientation;
        out
    }
}

fn gram2(gp: &MetricAtPoint, u: &[f64], v: &[f64]) -> [[f64; 2]; 2] {
    let uu = gp.inner_slice(u, u);
    let uv = gp.inner_slice(u, v);
    let vv = gp.inner_slice(v, v);
    [[uu, uv], [uv, vv]]
}

fn euclidean_independent(u: &[f64], v: &[f64]) -> bool {
    let nu: f64 = u.iter().map(|a| a * a).sum::<f64>().sqrt();
    let nv: f64 = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return false;
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    let cos = dot / (nu * nv);
    (1.0 - cos * cos).abs() > 1e-18
}

/// Classify the span of `u, v` from the eigenvalue signs of its Gram
/// matrix; `det < 0` means mixed, `det ~ 0` degenerate.
pub fn classify_plane(gp: &MetricAtPoint, u: &[f64], v: &[f64]) -> Result<PlaneType> {
    if u.len() != gp.dim() || v.len() != gp.dim() {
        return Err(Error::DimMismatch("plane vectors".into()));
    }
    if !euclidean_independent(u, v) {
        return Err(Error::InvalidInput("plane vectors are linearly dependent".into()));
    }
    let g = gram2(gp, u, v);
    Ok(classify_gram(&g))
}

pub(crate) fn classify_gram(g: &[[f64; 2]; 2]) -> PlaneType {
    let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
    let scale = 1.0 + g[0][0].abs().max(g[1][1].abs()).max(g[0][1].abs());
    if det.abs() <= 1e-10 * scale * scale {
        return PlaneType::Degenerate;
    }
    if det < 0.0 {
        return PlaneType::Mixed;
    }
    // det > 0: definite; the trace decides which sign
    if g[0][0] + g[1][1] > 0.0 {
        PlaneType::Spacelike
    } else {
        PlaneType::Timelike
    }
}

/// Build a classified plane from a spanning pair (orientation +1).
pub fn plane_spec(gp: &MetricAtPoint, u: &[f64], v: &[f64]) -> Result<PlaneSpec> {
    let ptype = classify_plane(gp, u, v)?;
    Ok(PlaneSpec {
        u: u.to_vec(),
        v: v.to_vec(),
        orientation: 1,
        ptype,
        gram: gram2(gp, u, v),
    })
}

/// Orientation-preserving orthonormalization of a nondegenerate plane.
///
/// Picks a first vector with `|(w, w)|` bounded away from zero among
/// `u`, `v` (rotated to `(v, -u)` to keep the orientation), and `u + v`
/// (null-first bases), then projects and normalizes. Mixed planes are
/// canonicalized to signs `(+1, -1)`, again preserving orientation via
/// `(X1, X2) -> (X2, -X1)`.
pub fn orthonormal_oriented_basis(
    gp: &MetricAtPoint,
    u: &[f64],
    v: &[f64],
) -> Result<(Vec<f64>, Vec<f64>, (i8, i8))> {
    if u.len() != gp.dim() || v.len() != gp.dim() {
        return Err(Error::DimMismatch("plane vectors".into()));
    }
    let g = gram2(gp, u, v);
    if classify_gram(&g) == PlaneType::Degenerate {
        return Err(Error::Degenerate("plane is degenerate".into()));
    }

    let scale = 1.0 + g[0][0].abs().max(g[1][1].abs()).max(g[0][1].abs());
    let pivot_tol = 1e-6 * scale;

    let sum: Vec<f64> = u.iter().zip(v).map(|(a, b)| a + b).collect();
    let neg_u: Vec<f64> = u.iter().map(|a| -a).collect();
    let sum_norm = g[0][0] + 2.0 * g[0][1] + g[1][1];

    // Orientation-preserving candidate bases, tried in order so that an
    // already-orthonormal (u, v) passes through unchanged; the rotation
    // (v, -u) and the exchange (u+v, v) both have unit determinant.
    let candidates: [(&[f64], &[f64], f64); 3] = [
        (u, v, g[0][0]),
        (v, &neg_u, g[1][1]),
        (&sum, v, sum_norm),
    ];
    let (w1, w2, n1) = candidates
        .iter()
        .find(|c| c.2.abs() >= pivot_tol)
        .copied()
        .ok_or_else(|| {
            Error::Degenerate("no spanning vector with usable squared norm".into())
        })?;

    let s1 = n1.signum();
    let inv = 1.0 / n1.abs().sqrt();
    let x1: Vec<f64> = w1.iter().map(|a| a * inv).collect();

    // project w2 off x1: w2 - s1 (w2, x1) x1
    let proj = gp.inner_slice(w2, &x1);
    let mut r: Vec<f64> = w2
        .iter()
        .zip(x1.iter())
        .map(|(a, b)| a - s1 * proj * b)
        .collect();
    let n2 = gp.inner_slice(&r, &r);
    if n2.abs() < 1e-12 * scale {
        return Err(Error::Degenerate("projected second vector is null".into()));
    }
    let s2 = n2.signum();
    let inv2 = 1.0 / n2.abs().sqrt();
    for c in r.iter_mut() {
        *c *= inv2;
    }

    if s1 < 0.0 && s2 > 0.0 {
        // mixed plane came out (-1, +1); rotate to (+1, -1)
        let x2 = r;
        let new_x2: Vec<f64> = x1.iter().map(|a| -a).collect();
        return Ok((x2, new_x2, (1, -1)));
    }
    Ok((x1, r, (s1 as i8, s2 as i8)))
}

/// Skew-symmetric curvature operator `Y -> R(X1, X2) Y` of an oriented
/// nondegenerate plane.
pub fn skew_op(curv: &CurvatureData, gp: &MetricAtPoint, plane: &PlaneSpec) -> Result<OperatorMatrix> {
    if plane.ptype == PlaneType::Degenerate {
        return Err(Error::Degenerate("skew operator needs a nondegenerate plane".into()));
    }
    let (x1, x2, _signs) = orthonormal_oriented_basis(gp, &plane.u, &plane.v)?;
    let n = gp.dim();
    // K_{be} = R_{cdbe} X1^c X2^d (plane pair in the first two slots);
    // K is antisymmetric, so raising the index needs the transpose:
    // T^a_b = g^{ae} K_{be}.
    let mut k = DMatrix::zeros(n, n);
    for ([c, d, b, e], v) in curv.r.nonzero() {
        let w = v * x1[c] * x2[d];
        if w != 0.0 {
            k[(b, e)] += w;
        }
    }
    let mut mat = &gp.g_inv * k.transpose();
    if plane.orientation < 0 {
        mat = -mat;
    }
    Ok(OperatorMatrix {
        mat,
        kind: OperatorKind::SkewCurvature,
        point: curv.point.clone(),
        arg: OperatorArg::Plane(Box::new(plane.clone())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::CurvatureEngine;
    use crate::metric::MetricSpec;
    use crate::poly::PolyMap;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> PolyMap {
        PolyMap::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    fn half_sum_squares(p: usize, eps: &[f64]) -> MetricSpec {
        let terms: Vec<(Vec<u32>, f64)> = (0..p)
            .map(|i| {
                let mut e = vec![0u32; p];
                e[i] = 2;
                (e, 0.5 * eps[i])
            })
            .collect();
        MetricSpec::gradient(p, PolyMap::from_terms(p, terms).unwrap()).unwrap()
    }

    #[test]
    fn jacobi_vanishes_on_isotropic_frame_vectors() {
        let spec = half_sum_squares(3, &[1.0, 1.0, 1.0]);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart(vec![0.2, -0.5, 0.8, 0.1, 0.0, -0.3]);
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        let mut y_dir = vec![0.0; 6];
        y_dir[3] = 1.0; // d_1^y
        let j = jacobi_op(&curv, &gp, &y_dir).unwrap();
        assert_eq!(j.mat.amax(), 0.0);
    }

    #[test]
    fn jacobi_block_on_definite_hessian() {
        // f = (1/2) sum eps_i x_i^2, X = d_1^x:
        // (J(X) d_i^x, d_j^x) = eps_1 eps_i delta_ij for i, j >= 2
        let eps = [2.0, 1.0, -1.5];
        let spec = half_sum_squares(3, &eps);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart::origin(6);
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        let mut x = vec![0.0; 6];
        x[0] = 1.0;
        let j = jacobi_op(&curv, &gp, &x).unwrap();
        let gj = &gp.g * &j.mat;
        for i in 1..3 {
            for jj in 1..3 {
                let expected = if i == jj { eps[0] * eps[i] } else { 0.0 };
                assert!((gj[(jj, i)] - expected).abs() < 1e-12);
            }
        }
        assert!(j.annihilates_argument().unwrap() < 1e-12);
        assert!(j.self_adjoint_residual(&gp) < 1e-12);
    }

    #[test]
    fn jacobi_scaling_is_quadratic() {
        let spec = half_sum_squares(2, &[1.0, -1.0]);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart(vec![0.3, 0.7, -0.2, 0.4]);
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        let x = vec![0.4, -0.9, 0.2, 0.6];
        let x2: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
        let j1 = jacobi_op(&curv, &gp, &x).unwrap();
        let j2 = jacobi_op(&curv, &gp, &x2).unwrap();
        assert!((&j2.mat - &j1.mat * 4.0).amax() < 1e-12);
    }

    #[test]
    fn szabo_scaling_is_cubic_and_odd() {
        let f = poly(2, &[(&[3, 0], 1.0), (&[1, 2], 0.5), (&[2, 0], 0.5)]);
        let spec = MetricSpec::gradient(2, f).unwrap();
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart(vec![0.4, 0.2, -0.1, 0.5]);
        let gp = spec.metric_at(&pt).unwrap();
        let nabla = engine.nabla_riemann_at(&pt).unwrap();
        let x = vec![0.8, -0.3, 0.1, 0.2];
        let s1 = szabo_op(&nabla, &gp, &pt, &x).unwrap();
        assert!(s1.mat.amax() > 1e-6, "operator should be nonzero here");

        let x2: Vec<f64> = x.iter().map(|c| 2.0 * c).collect();
        let s2 = szabo_op(&nabla, &gp, &pt, &x2).unwrap();
        assert!((&s2.mat - &s1.mat * 8.0).amax() < 1e-10);

        let xm: Vec<f64> = x.iter().map(|c| -c).collect();
        let sm = szabo_op(&nabla, &gp, &pt, &xm).unwrap();
        assert!((&sm.mat + &s1.mat).amax() < 1e-12);

        // quadratic block: identically zero operator
        let quad = half_sum_squares(2, &[1.0, 1.0]);
        let qe = CurvatureEngine::new(&quad).unwrap();
        let qn = qe.nabla_riemann_at(&pt).unwrap();
        let qg = quad.metric_at(&pt).unwrap();
        assert_eq!(szabo_op(&qn, &qg, &pt, &x).unwrap().mat.amax(), 0.0);

        // isotropic frame vector
        let mut y_dir = vec![0.0; 4];
        y_dir[2] = 1.0;
        assert_eq!(szabo_op(&nabla, &gp, &pt, &y_dir).unwrap().mat.amax(), 0.0);
    }

    #[test]
    fn zero_vector_is_rejected() {
        let spec = half_sum_squares(2, &[1.0, 1.0]);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart::origin(4);
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        assert!(jacobi_op(&curv, &gp, &[0.0; 4]).is_err());
    }

    #[test]
    fn classify_plane_examples() {
        let spec = half_sum_squares(2, &[1.0, 1.0]);
        let pt = PointChart(vec![0.5, -0.3, 0.2, 0.1]);
        let gp = spec.metric_at(&pt).unwrap();

        // pi_1 = span{d_1^y, d_1^x}: Gram [[0, 1], [1, psi_11]], det -1
        let u = vec![0.0, 0.0, 1.0, 0.0];
        let v = vec![1.0, 0.0, 0.0, 0.0];
        assert_eq!(classify_plane(&gp, &u, &v).unwrap(), PlaneType::Mixed);
        let plane = plane_spec(&gp, &u, &v).unwrap();
        assert!((plane.gram_det() - (-1.0)).abs() < 1e-12);

        // dependent vectors are an input error
        let w: Vec<f64> = v.iter().map(|c| 2.0 * c).collect();
        assert!(classify_plane(&gp, &v, &w).is_err());
    }

    #[test]
    fn orthonormalization_fixes_orthonormal_input() {
        let spec = MetricSpec::flat(0, 3).unwrap();
        let gp = spec.metric_at(&PointChart::origin(3)).unwrap();
        let u = vec![1.0, 0.0, 0.0];
        let v = vec![0.0, 1.0, 0.0];
        let (x1, x2, signs) = orthonormal_oriented_basis(&gp, &u, &v).unwrap();
        assert_eq!(x1, u);
        assert_eq!(x2, v);
        assert_eq!(signs, (1, 1));
    }

    #[test]
    fn mixed_plane_canonical_signs() {
        // the pi_2(eps) spanning pair at a generic point
        let spec = half_sum_squares(2, &[1.0, 1.0]);
        let pt = PointChart(vec![0.4, -0.2, 0.3, 0.6]);
        let gp = spec.metric_at(&pt).unwrap();
        let e = 0.1f64;
        let mut u = vec![0.0; 4];
        u[2] = 1.0 / e;
        u[0] = e;
        let mut v = vec![0.0; 4];
        v[3] = -1.0 / e;
        v[1] = e;
        let plane = plane_spec(&gp, &u, &v).unwrap();
        assert_eq!(plane.ptype, PlaneType::Mixed);
        assert!((plane.gram_det() + 4.0).abs() < 0.1);

        let (x1, x2, signs) = orthonormal_oriented_basis(&gp, &u, &v).unwrap();
        assert_eq!(signs, (1, -1));
        assert!((gp.inner(&x1, &x1).unwrap() - 1.0).abs() < 1e-10);
        assert!((gp.inner(&x2, &x2).unwrap() + 1.0).abs() < 1e-10);
        assert!(gp.inner(&x1, &x2).unwrap().abs() < 1e-10);
    }

    #[test]
    fn null_first_basis_is_handled() {
        // pi_1 begins with the isotropic d_1^y
        let spec = half_sum_squares(2, &[1.0, 1.0]);
        let pt = PointChart(vec![0.5, -0.3, 0.2, 0.1]);
        let gp = spec.metric_at(&pt).unwrap();
        let u = vec![0.0, 0.0, 1.0, 0.0];
        let v = vec![1.0, 0.0, 0.0, 0.0];
        let (x1, x2, signs) = orthonormal_oriented_basis(&gp, &u, &v).unwrap();
        assert_eq!(signs, (1, -1));
        assert!((gp.inner(&x1, &x1).unwrap() - 1.0).abs() < 1e-10);
        assert!((gp.inner(&x2, &x2).unwrap() + 1.0).abs() < 1e-10);
        assert!(gp.inner(&x1, &x2).unwrap().abs() < 1e-10);
    }

    #[test]
    fn skew_operator_on_isotropic_plane_vanishes() {
        let spec = half_sum_squares(2, &[1.0, 1.0]);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart(vec![0.5, -0.3, 0.2, 0.1]);
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        let u = vec![0.0, 0.0, 1.0, 0.0];
        let v = vec![1.0, 0.0, 0.0, 0.0];
        let plane = plane_spec(&gp, &u, &v).unwrap();
        let k = skew_op(&curv, &gp, &plane).unwrap();
        assert!(k.mat.amax() < 1e-12);
    }

    #[test]
    fn skew_operator_basis_independence_and_orientation() {
        let spec = half_sum_squares(3, &[1.0, 1.0, 1.0]);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let pt = PointChart((0..6).map(|_| rng.gen_range(-0.5..0.5)).collect());
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();

        // find a spacelike plane by rejection
        let (u, v) = loop {
            let u: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let v: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            if let Ok(PlaneType::Spacelike) = classify_plane(&gp, &u, &v) {
                break (u, v);
            }
        };
        let plane = plane_spec(&gp, &u, &v).unwrap();
        let k = skew_op(&curv, &gp, &plane).unwrap();
        assert!(k.antisymmetric_residual(&gp) < 1e-9);

        // rotate the spanning pair: same operator
        let theta = 0.73f64;
        let (c, s) = (theta.cos(), theta.sin());
        let ur: Vec<f64> = u.iter().zip(&v).map(|(a, b)| c * a + s * b).collect();
        let vr: Vec<f64> = u.iter().zip(&v).map(|(a, b)| -s * a + c * b).collect();
        let rotated = plane_spec(&gp, &ur, &vr).unwrap();
        let kr = skew_op(&curv, &gp, &rotated).unwrap();
        let scale = 1.0 + k.mat.amax();
        assert!((&k.mat - &kr.mat).amax() / scale < 1e-9);

        // orientation flip negates
        let kf = skew_op(&curv, &gp, &plane.flipped()).unwrap();
        assert!((&k.mat + &kf.mat).amax() / scale < 1e-9);

        // swapping the spanning pair also flips the orientation
        let swapped = plane_spec(&gp, &v, &u).unwrap();
        let ks = skew_op(&curv, &gp, &swapped).unwrap();
        assert!((&k.mat + &ks.mat).amax() / scale < 1e-9);
    }

    #[test]
    fn skew_operator_matches_curvature_pairing() {
        // (K(pi) Y, Z) = R(X1, X2, Y, Z) for the returned orthonormal basis
        let spec = half_sum_squares(2, &[1.0, 1.0]);
        let engine = CurvatureEngine::new(&spec).unwrap();
        let pt = PointChart(vec![0.6, -0.4, 0.3, 0.2]);
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        let e = 0.1f64;
        let u = vec![e, 0.0, 1.0 / e, 0.0];
        let v = vec![0.0, e, 0.0, -1.0 / e];
        let plane = plane_spec(&gp, &u, &v).unwrap();
        let k = skew_op(&curv, &gp, &plane).unwrap();
        let (x1, x2, _) = orthonormal_oriented_basis(&gp, &u, &v).unwrap();
        let gk = &gp.g * &k.mat;
        for y in 0..4 {
            for z in 0..4 {
                let mut expected = 0.0;
                for c in 0..4 {
                    for d in 0..4 {
                        expected += curv.r.get([c, d, y, z]) * x1[c] * x2[d];
                    }
                }
                // Z^T (g K) Y indexes rows by Z, columns by Y
                assert!((gk[(z, y)] - expected).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn operator_ranges_and_kernels_live_in_y() {
        // columns of J land in the y-block; y-frame vectors are in the kernel
        let f = poly(3, &[(&[2, 1, 0], 0.7), (&[0, 0, 3], -0.4), (&[2, 0, 0], 0.5)]);
        let spec = MetricSpec::gradient(3, f).unwrap();
        let engine = CurvatureEngine::new(&spec).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let pt = PointChart((0..6).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let gp = spec.metric_at(&pt).unwrap();
        let curv = engine.curvature_at(&pt).unwrap();
        let x: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let j = jacobi_op(&curv, &gp, &x).unwrap();
        for col in 0..6 {
            for row in 0..3 {
                assert!(j.mat[(row, col)].abs() < 1e-12);
            }
        }
        for ycol in 3..6 {
            for row in 0..6 {
                assert!(j.mat[(row, ycol)].abs() < 1e-12);
            }
        }
        // J(Z) = J(X-part)
        let mut x_only = x.clone();
        for c in x_only.iter_mut().skip(3) {
            *c = 0.0;
        }
        let jx = jacobi_op(&curv, &gp, &x_only).unwrap();
        assert!((&j.mat - &jx.mat).amax() < 1e-10);
    }
}
