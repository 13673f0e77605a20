//! Gradient-family metrics as graphs in a flat ambient space.
//!
//! For a potential `f` on `R^p` the metric with `psi = df . df` is the
//! induced metric of the embedding
//!
//! ```text
//! F(x, y) = sum_i (x_i a_i + y_i b_i) + f(x) c
//! ```
//!
//! into `R^{2p+1}` carrying the inner product `sum a*.b* + c*.c*`
//! (signature `(p, p+1)`), with unit normal `nu = -sum f_i b_i + c`.
//! The second fundamental form is the Hessian of `f`, and the curvature
//! is the usual product of second fundamental forms
//!
//! ```text
//! R(Z1, Z2, Z3, Z4) = L(Z1, Z4) L(Z2, Z3) - L(Z1, Z3) L(Z2, Z4).
//! ```

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::metric::{MetricSpec, PointChart};
use crate::poly::PolyMap;
use crate::tensor::{Tensor4, Tensor5};

/// Sign pattern of the restricted second fundamental form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondFormClass {
    PositiveDefinite,
    NegativeDefinite,
    Indefinite,
    Degenerate,
}

/// The second fundamental form restricted to the x-distribution: the
/// Hessian of the potential, with its eigenvalue-sign classification.
#[derive(Debug, Clone)]
pub struct SecondForm {
    pub l: DMatrix<f64>,
    pub class: SecondFormClass,
}

impl SecondForm {
    pub fn is_nondegenerate(&self) -> bool {
        self.class != SecondFormClass::Degenerate
    }

    pub fn is_definite(&self) -> bool {
        matches!(
            self.class,
            SecondFormClass::PositiveDefinite | SecondFormClass::NegativeDefinite
        )
    }

    /// `L(u, v)` for x-block vectors of length p.
    pub fn apply(&self, u: &[f64], v: &[f64]) -> f64 {
        let uu = DVector::from_column_slice(u);
        let vv = DVector::from_column_slice(v);
        (uu.transpose() * &self.l * vv)[(0, 0)]
    }
}

fn potential_of(spec: &MetricSpec) -> Result<&PolyMap> {
    match spec {
        MetricSpec::Gradient { f, .. } => Ok(f),
        _ => Err(Error::InvalidInput(format!(
            "hypersurface data requires the gradient family, got {}",
            spec.family_name()
        ))),
    }
}

fn x_part<'a>(point: &'a PointChart, p: usize, dim: usize) -> Result<&'a [f64]> {
    if point.dim() != dim {
        return Err(Error::DimMismatch(format!(
            "point has dimension {}, metric has {dim}",
            point.dim()
        )));
    }
    Ok(&point.coords()[..p])
}

/// Hessian of `f` at the x-part of `point`, classified by eigenvalue signs
/// with tolerance `1e-8 * max |eigenvalue|`.
pub fn second_fundamental(f: &PolyMap, point: &PointChart) -> Result<SecondForm> {
    let p = f.nvars();
    if point.dim() != 2 * p {
        return Err(Error::DimMismatch(format!(
            "point has dimension {}, expected {}",
            point.dim(),
            2 * p
        )));
    }
    let x = &point.coords()[..p];
    let mut l = DMatrix::zeros(p, p);
    for i in 0..p {
        let di = f.diff(i)?;
        for j in i..p {
            let v = di.diff(j)?.eval_slice(x);
            l[(i, j)] = v;
            l[(j, i)] = v;
        }
    }
    let eig = l.clone().symmetric_eigen();
    let tol = 1e-8 * eig.eigenvalues.amax();
    let mut pos = 0;
    let mut neg = 0;
    let mut zero = 0;
    for &ev in eig.eigenvalues.iter() {
        if ev > tol {
            pos += 1;
        } else if ev < -tol {
            neg += 1;
        } else {
            zero += 1;
        }
    }
    let class = if zero > 0 {
        SecondFormClass::Degenerate
    } else if neg == 0 {
        SecondFormClass::PositiveDefinite
    } else if pos == 0 {
        SecondFormClass::NegativeDefinite
    } else {
        SecondFormClass::Indefinite
    };
    Ok(SecondForm { l, class })
}

/// Residuals of the flat-space embedding identities at a point.
#[derive(Debug, Clone, Copy)]
pub struct EmbedResiduals {
    /// `max |g_W(F_* e_a, F_* e_b) - g(e_a, e_b)|` over coordinate pairs.
    pub isometry: f64,
    /// `max |g_W(nu, F_* e_a)|`.
    pub normality: f64,
    /// `|g_W(nu, nu) - 1|`.
    pub unit_normal: f64,
}

impl EmbedResiduals {
    pub fn max(&self) -> f64 {
        self.isometry.max(self.normality).max(self.unit_normal)
    }
}

/// Check that the graph embedding reproduces the gradient-family metric:
/// differentials of the embedding against the ambient inner product,
/// orthogonality and unit length of the normal.
pub fn embed_check(f: &PolyMap, point: &PointChart) -> Result<EmbedResiduals> {
    let p = f.nvars();
    let spec = MetricSpec::gradient(p, f.clone())?;
    let gp = spec.metric_at(point)?;
    let x = x_part(point, p, 2 * p)?;

    let grads: Vec<f64> = (0..p)
        .map(|i| f.diff(i).map(|d| d.eval_slice(x)))
        .collect::<Result<_>>()?;

    // ambient basis order: a_1..a_p, b_1..b_p, c
    let m = 2 * p + 1;
    let mut g_w = DMatrix::<f64>::zeros(m, m);
    for i in 0..p {
        g_w[(i, p + i)] = 1.0;
        g_w[(p + i, i)] = 1.0;
    }
    g_w[(2 * p, 2 * p)] = 1.0;

    // pushforward columns: F_* d_i^x = a_i + f_i c, F_* d_i^y = b_i
    let mut push = DMatrix::<f64>::zeros(m, 2 * p);
    for i in 0..p {
        push[(i, i)] = 1.0;
        push[(2 * p, i)] = grads[i];
        push[(p + i, p + i)] = 1.0;
    }

    let mut nu = DVector::<f64>::zeros(m);
    for i in 0..p {
        nu[p + i] = -grads[i];
    }
    nu[2 * p] = 1.0;

    let induced = push.transpose() * &g_w * &push;
    let isometry = (&induced - &gp.g).amax();
    let normality = (nu.transpose() * &g_w * &push).amax();
    let unit_normal = ((nu.transpose() * &g_w * &nu)[(0, 0)] - 1.0).abs();

    Ok(EmbedResiduals {
        isometry,
        normality,
        unit_normal,
    })
}

/// Curvature from second-fundamental-form products (gradient family only):
/// `R_{ijkl} = L_{il} L_{jk} - L_{ik} L_{jl}` with `L` the Hessian of `f`
/// extended by zero outside the x-block.
pub fn riemann_hypersurface(spec: &MetricSpec, point: &PointChart) -> Result<Tensor4> {
    let f = potential_of(spec)?;
    let p = f.nvars();
    let n = spec.dim();
    let form = second_fundamental(f, point)?;
    let mut out = Tensor4::new(n);
    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                for l in 0..p {
                    let v = form.l[(i, l)] * form.l[(j, k)] - form.l[(i, k)] * form.l[(j, l)];
                    out.set([i, j, k, l], v);
                }
            }
        }
    }
    Ok(out)
}

/// Covariant derivative of the hypersurface curvature: product rule on the
/// Hessian, third derivatives of `f` supplying the derivative factors.
pub fn nabla_hypersurface(spec: &MetricSpec, point: &PointChart) -> Result<Tensor5> {
    let f = potential_of(spec)?;
    let p = f.nvars();
    let n = spec.dim();
    let x = x_part(point, p, n)?;
    let form = second_fundamental(f, point)?;

    // t[i][j][m] = f_{ijm}(x), fully symmetric
    let mut t = vec![0.0f64; p * p * p];
    let at = |i: usize, j: usize, m: usize| i * p * p + j * p + m;
    for i in 0..p {
        let di = f.diff(i)?;
        for j in i..p {
            let dij = di.diff(j)?;
            if dij.is_zero() {
                continue;
            }
            for m in j..p {
                let v = dij.diff(m)?.eval_slice(x);
                for perm in [
                    [i, j, m],
                    [i, m, j],
                    [j, i, m],
                    [j, m, i],
                    [m, i, j],
                    [m, j, i],
                ] {
                    t[at(perm[0], perm[1], perm[2])] = v;
                }
            }
        }
    }

    let mut out = Tensor5::new(n);
    for i in 0..p {
        for j in 0..p {
            for k in 0..p {
                for l in 0..p {
                    for m in 0..p {
                        let v = t[at(i, l, m)] * form.l[(j, k)] + form.l[(i, l)] * t[at(j, k, m)]
                            - t[at(i, k, m)] * form.l[(j, l)]
                            - form.l[(i, k)] * t[at(j, l, m)];
                        out.set([i, j, k, l, m], v);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{
        nabla_closed_form, riemann_closed_form, tensor4_disagreement, tensor5_disagreement,
        CurvatureEngine,
    };
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> PolyMap {
        PolyMap::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn hessian_of_quadratic_potentials() {
        // f = sum eps_i x_i^2 -> L = diag(2 eps_i)
        let f = poly(2, &[(&[2, 0], 1.0), (&[0, 2], -1.0)]);
        let form = second_fundamental(&f, &PointChart::origin(4)).unwrap();
        assert_eq!(form.l[(0, 0)], 2.0);
        assert_eq!(form.l[(1, 1)], -2.0);
        assert_eq!(form.class, SecondFormClass::Indefinite);

        // linear potential: identically degenerate
        let lin = poly(2, &[(&[1, 0], 3.0)]);
        let form = second_fundamental(&lin, &PointChart::origin(4)).unwrap();
        assert_eq!(form.l.amax(), 0.0);
        assert_eq!(form.class, SecondFormClass::Degenerate);

        // f = (x1^2 - x2^2 + x3^2)/2 -> diag(1, -1, 1)
        let f3 = poly(3, &[(&[2, 0, 0], 0.5), (&[0, 2, 0], -0.5), (&[0, 0, 2], 0.5)]);
        let form = second_fundamental(&f3, &PointChart::origin(6)).unwrap();
        assert_eq!(form.l[(0, 0)], 1.0);
        assert_eq!(form.l[(1, 1)], -1.0);
        assert_eq!(form.l[(2, 2)], 1.0);
        assert!(form.is_nondegenerate());
        assert_eq!(form.class, SecondFormClass::Indefinite);
    }

    #[test]
    fn embedding_residuals_vanish() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        // f = 0: everything exactly zero
        let res = embed_check(&PolyMap::zero(2), &PointChart::origin(4)).unwrap();
        assert_eq!(res.max(), 0.0);

        // f = x1^2 at random points
        let f = poly(2, &[(&[2, 0], 1.0)]);
        for _ in 0..5 {
            let pt = PointChart((0..4).map(|_| rng.gen_range(-1.0..1.0)).collect());
            let res = embed_check(&f, &pt).unwrap();
            assert!(res.max() <= 1e-12);
            assert!(res.unit_normal <= 1e-15);
        }

        // unit normal holds for any potential
        let g = poly(3, &[(&[1, 2, 0], -0.8), (&[0, 0, 3], 0.6)]);
        let pt = PointChart((0..6).map(|_| rng.gen_range(-1.0..1.0)).collect());
        assert!(embed_check(&g, &pt).unwrap().unit_normal <= 1e-14);
    }

    #[test]
    fn hypersurface_route_on_diagonal_hessian() {
        // f = (1/2) sum eps_i x_i^2: R_{ijkl} = eps_i eps_j (d_il d_jk - d_ik d_jl)
        let eps = [1.0, -1.0, 1.0];
        let f = poly(
            3,
            &[(&[2, 0, 0], 0.5), (&[0, 2, 0], -0.5), (&[0, 0, 2], 0.5)],
        );
        let spec = MetricSpec::gradient(3, f).unwrap();
        let pt = PointChart(vec![0.3, -0.4, 0.9, 0.0, 0.2, -0.1]);
        let r = riemann_hypersurface(&spec, &pt).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    for l in 0..3 {
                        let expected = eps[i]
                            * eps[j]
                            * ((if i == l { 1.0 } else { 0.0 }) * (if j == k { 1.0 } else { 0.0 })
                                - (if i == k { 1.0 } else { 0.0 })
                                    * (if j == l { 1.0 } else { 0.0 }));
                        assert!((r.get([i, j, k, l]) - expected).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn three_routes_agree_on_random_potentials() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for p in [2usize, 3] {
            for _ in 0..4 {
                let mut terms = Vec::new();
                for _ in 0..5 {
                    let mut exps = vec![0u32; p];
                    for _ in 0..rng.gen_range(1..=3u32) {
                        exps[rng.gen_range(0..p)] += 1;
                    }
                    terms.push((exps, rng.gen_range(-2.0..2.0)));
                }
                let f = PolyMap::from_terms(p, terms).unwrap();
                let spec = MetricSpec::gradient(p, f).unwrap();
                let engine = CurvatureEngine::new(&spec).unwrap();
                for _ in 0..3 {
                    let pt = PointChart((0..2 * p).map(|_| rng.gen_range(-1.0..1.0)).collect());
                    let general = engine.riemann_at(&pt).unwrap();
                    let closed = riemann_closed_form(&spec, &pt).unwrap();
                    let hyper = riemann_hypersurface(&spec, &pt).unwrap();
                    assert!(tensor4_disagreement(&general, &closed) < 1e-9);
                    assert!(tensor4_disagreement(&general, &hyper) < 1e-9);
                    let general5 = engine.nabla_riemann_at(&pt).unwrap();
                    let closed5 = nabla_closed_form(&spec, &pt).unwrap();
                    let hyper5 = nabla_hypersurface(&spec, &pt).unwrap();
                    assert!(tensor5_disagreement(&general5, &closed5) < 1e-9);
                    assert!(tensor5_disagreement(&general5, &hyper5) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn hypersurface_rejects_other_families() {
        let spec = MetricSpec::psi(2, []).unwrap();
        assert!(riemann_hypersurface(&spec, &PointChart::origin(4)).is_err());
    }
}
