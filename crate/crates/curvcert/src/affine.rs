//! Curvature of a torsion-free affine connection on `R^p`, without any
//! metric: used to test the correspondence between nilpotency of the
//! affine Jacobi operator and nilpotency of the Jacobi operator of the
//! associated metric extension.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::metric::AffineSymbols;
use crate::poly::PolyMap;
use crate::tensor::Tensor;

/// Polynomial curvature `R^l_{ijk}` of a torsion-free connection:
/// `d_i G^l_{jk} - d_j G^l_{ik} + G^l_{iq} G^q_{jk} - G^l_{jq} G^q_{ik}`.
pub struct AffineCurvature {
    p: usize,
    /// `r[[i, j, k, l]] = R^l_{ijk}` (upper index last).
    r: Tensor<PolyMap, 4>,
}

impl AffineCurvature {
    pub fn new(gamma: &AffineSymbols) -> Result<Self> {
        let p = gamma.p();
        let mut r = Tensor::filled(p, PolyMap::zero(p));
        for i in 0..p {
            for j in 0..p {
                for k in 0..p {
                    for l in 0..p {
                        let mut acc = gamma.get(j, k, l).diff(i)?.sub(&gamma.get(i, k, l).diff(j)?)?;
                        for q in 0..p {
                            let a = gamma.get(i, q, l);
                            let b = gamma.get(j, k, q);
                            if !a.is_zero() && !b.is_zero() {
                                acc = acc.add(&a.mul(b)?)?;
                            }
                            let c = gamma.get(j, q, l);
                            let d = gamma.get(i, k, q);
                            if !c.is_zero() && !d.is_zero() {
                                acc = acc.sub(&c.mul(d)?)?;
                            }
                        }
                        r.set([i, j, k, l], acc);
                    }
                }
            }
        }
        Ok(AffineCurvature { p, r })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_flat(&self) -> bool {
        self.r.iter().all(PolyMap::is_zero)
    }

    /// `R^l_{ijk}` evaluated at `x`.
    pub fn at(&self, x: &[f64]) -> Tensor<f64, 4> {
        let mut out = Tensor::new(self.p);
        for (idx, poly) in self.r.enumerate() {
            if !poly.is_zero() {
                out.set(idx, poly.eval_slice(x));
            }
        }
        out
    }

    /// Affine Jacobi operator `X2 -> R(X2, X1) X1` as a `p x p` matrix:
    /// `J^l_b = R^l_{bcd} X^c X^d`.
    pub fn jacobi(&self, x_pt: &[f64], x: &[f64]) -> DMatrix<f64> {
        let r = self.at(x_pt);
        let mut j = DMatrix::zeros(self.p, self.p);
        for ([b, c, d, l], v) in r.nonzero() {
            let w = v * x[c] * x[d];
            if w != 0.0 {
                j[(l, b)] += w;
            }
        }
        j
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricSpec;
    use crate::spectral::nilpotency_index;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> PolyMap {
        PolyMap::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    fn symbols(p: usize, entries: &[((usize, usize, usize), PolyMap)]) -> AffineSymbols {
        let spec = MetricSpec::affine(p, entries.iter().cloned()).unwrap();
        spec.connection().unwrap().clone()
    }

    #[test]
    fn zero_connection_is_flat() {
        let gamma = symbols(2, &[]);
        let curv = AffineCurvature::new(&gamma).unwrap();
        assert!(curv.is_flat());
    }

    #[test]
    fn single_x1_dependent_symbol_is_flat() {
        // G^2_{11} = x1: the two derivative terms cancel and the quadratic
        // terms have no matching indices
        let gamma = symbols(2, &[((0, 0, 1), poly(2, &[(&[1, 0], 1.0)]))]);
        let curv = AffineCurvature::new(&gamma).unwrap();
        assert!(curv.is_flat());
    }

    #[test]
    fn antisymmetric_ricci_connection_is_nilpotent() {
        // G^1_{11} = x2, G^2_{22} = -x1: curved, with traceless Jacobi
        let gamma = symbols(
            2,
            &[
                ((0, 0, 0), poly(2, &[(&[0, 1], 1.0)])),
                ((1, 1, 1), poly(2, &[(&[1, 0], -1.0)])),
            ],
        );
        let curv = AffineCurvature::new(&gamma).unwrap();
        assert!(!curv.is_flat());
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        for _ in 0..50 {
            let pt: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let x: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let j = curv.jacobi(&pt, &x);
            assert!(j.trace().abs() < 1e-12);
            assert!(nilpotency_index(&j, 1e-10).is_some());
            // the argument is always in the kernel
            let jx = &j * nalgebra::DVector::from_column_slice(&x);
            assert!(jx.amax() < 1e-12);
        }
    }

    #[test]
    fn non_nilpotent_connection_detected() {
        // G^2_{11} = x2 gives trace J = d2(G^2_11) X1^2 != 0
        let gamma = symbols(2, &[((0, 0, 1), poly(2, &[(&[0, 1], 1.0)]))]);
        let curv = AffineCurvature::new(&gamma).unwrap();
        assert!(!curv.is_flat());
        let j = curv.jacobi(&[0.5, 0.5], &[1.0, 0.0]);
        assert!(nilpotency_index(&j, 1e-10).is_none());
    }
}
