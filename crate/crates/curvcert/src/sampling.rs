//! Seeded sampling of points, unit vectors, and nondegenerate 2-planes.
//!
//! Unit vectors hit `(Z, Z) = sign` exactly (up to rounding) by solving the
//! last degree of freedom in closed form: against a y-slot when the x-part
//! is usable (the y-row of `g` is `[I 0 ...]`, so `(Z, e_{y_i}) = X_i` and
//! one y-component adjusts the norm linearly), otherwise by rescaling a
//! flat-factor draw.
//!
//! For product metrics the samplers are stratified: besides generic draws
//! they emit vectors (and planes) supported purely on the flat factor or
//! purely on the base, since the rank-degeneracy loci of the operators are
//! measure zero and would otherwise never be visited. Plane sampling is
//! rejection sampling against the classifier; no distributional uniformity
//! is claimed.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::metric::{ChartLayout, MetricAtPoint, MetricSpec, PointChart};
use crate::operators::{classify_plane, plane_spec, PlaneSpec, PlaneType};

const UNIT_ATTEMPTS: usize = 100;
const PLANE_ATTEMPTS: usize = 1000;

/// A random chart point with coordinates uniform in [-1, 1].
pub fn sample_point(dim: usize, rng: &mut ChaCha8Rng) -> PointChart {
    PointChart((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

/// Strata for unit-vector draws on product metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum VectorStratum {
    Generic,
    FlatOnly,
    BaseOnly,
}

/// Sample `Z` with `(Z, Z) = sign` (+1 or -1), exact to 1e-12.
pub fn sample_unit(
    spec: &MetricSpec,
    gp: &MetricAtPoint,
    sign: i8,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let layout = spec.layout();
    let target = sign as f64;
    if sign != 1 && sign != -1 {
        return Err(Error::InvalidInput("sign must be +1 or -1".into()));
    }
    for _ in 0..UNIT_ATTEMPTS {
        let stratum = pick_vector_stratum(&layout, sign, rng);
        if let Some(z) = try_unit_draw(&layout, gp, target, stratum, rng) {
            let q = gp.inner_slice(&z, &z);
            if (q - target).abs() <= 1e-12 {
                return Ok(z);
            }
        }
    }
    Err(Error::Sampling(format!(
        "no unit vector with (Z,Z) = {target} found in {UNIT_ATTEMPTS} attempts"
    )))
}

/// Unit vector whose x-part is the prescribed `x` (nonzero); the paired
/// y-component absorbs the norm. Used for targeted witness searches.
pub fn unit_with_x_part(
    layout: &ChartLayout,
    gp: &MetricAtPoint,
    x_part: &[f64],
    sign: i8,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if x_part.len() != layout.p {
        return Err(Error::DimMismatch("x-part length".into()));
    }
    let target = sign as f64;
    let pivot = x_part
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .ok_or_else(|| Error::InvalidInput("empty x-part".into()))?;
    if x_part[pivot].abs() < 1e-9 {
        return Err(Error::InvalidInput("x-part is numerically zero".into()));
    }
    let n = layout.dim();
    let mut z = vec![0.0; n];
    z[..layout.p].copy_from_slice(x_part);
    for i in layout.p..2 * layout.p {
        z[i] = rng.gen_range(-1.0..1.0);
    }
    adjust_y(layout, gp, &mut z, pivot, target);
    Ok(z)
}

fn pick_vector_stratum(layout: &ChartLayout, sign: i8, rng: &mut ChaCha8Rng) -> VectorStratum {
    let flat_dim = layout.neg + layout.pos;
    if layout.p == 0 {
        return VectorStratum::FlatOnly;
    }
    if flat_dim == 0 {
        return VectorStratum::Generic;
    }
    // flat-only needs the requested sign to be attainable there
    let flat_ok = (sign > 0 && layout.pos > 0) || (sign < 0 && layout.neg > 0);
    match rng.gen_range(0..5u32) {
        0 if flat_ok => VectorStratum::FlatOnly,
        1 => VectorStratum::BaseOnly,
        _ => VectorStratum::Generic,
    }
}

fn try_unit_draw(
    layout: &ChartLayout,
    gp: &MetricAtPoint,
    target: f64,
    stratum: VectorStratum,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<f64>> {
    let n = layout.dim();
    let mut z = vec![0.0; n];
    match stratum {
        VectorStratum::FlatOnly => {
            for i in 0..n {
                if layout.is_flat(i) {
                    z[i] = rng.gen_range(-1.0..1.0);
                }
            }
            rescale_to(gp, &mut z, target)
        }
        VectorStratum::BaseOnly | VectorStratum::Generic => {
            let upto = if stratum == VectorStratum::BaseOnly {
                2 * layout.p
            } else {
                n
            };
            for slot in z.iter_mut().take(upto) {
                *slot = rng.gen_range(-1.0..1.0);
            }
            // pivot on the largest x-component
            let pivot = (0..layout.p).max_by(|&a, &b| z[a].abs().partial_cmp(&z[b].abs()).unwrap())?;
            if z[pivot].abs() < 0.1 {
                return None; // redraw rather than divide by a small pivot
            }
            adjust_y(layout, gp, &mut z, pivot, target);
            Some(z)
        }
    }
}

/// Shift the y-component paired with x-slot `pivot` so that the squared
/// norm becomes exactly `target`: `(Z + t e_{y_i}, same) = (Z, Z) + 2 t X_i`.
fn adjust_y(layout: &ChartLayout, gp: &MetricAtPoint, z: &mut [f64], pivot: usize, target: f64) {
    let q = gp.inner_slice(z, z);
    let t = (target - q) / (2.0 * z[pivot]);
    z[layout.y_of(pivot)] += t;
}

/// Rescale a flat-block vector to squared norm `target`, when the signs
/// allow it.
fn rescale_to(gp: &MetricAtPoint, z: &mut [f64], target: f64) -> Option<Vec<f64>> {
    let q = gp.inner_slice(z, z);
    if q == 0.0 || q.signum() != target.signum() {
        return None;
    }
    let s = (target / q).sqrt();
    for c in z.iter_mut() {
        *c *= s;
    }
    Some(z.to_vec())
}

/// Random vector on the null cone of an indefinite symmetric form:
/// `x^T M x = 0` up to rounding. Returns `None` when the form has no
/// null directions (definite or zero).
pub fn null_direction_of_symmetric(m: &nalgebra::DMatrix<f64>, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    let eig = m.clone().symmetric_eigen();
    let n = m.nrows();
    let tol = 1e-10 * (1.0 + eig.eigenvalues.amax());
    let pos: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > tol).collect();
    let neg: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] < -tol).collect();
    if pos.is_empty() || neg.is_empty() {
        return None;
    }
    for _ in 0..20 {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q_pos: f64 = pos.iter().map(|&i| eig.eigenvalues[i] * coeffs[i] * coeffs[i]).sum();
        let q_neg: f64 = -neg.iter().map(|&i| eig.eigenvalues[i] * coeffs[i] * coeffs[i]).sum::<f64>();
        if q_pos < 1e-6 || q_neg < 1e-6 {
            continue;
        }
        // rescale the negative-part coordinates to cancel the form exactly
        let s = (q_pos / q_neg).sqrt();
        let mut x = nalgebra::DVector::zeros(n);
        for (i, &c) in coeffs.iter().enumerate() {
            let w = if neg.contains(&i) { c * s } else { c };
            x += w * eig.eigenvectors.column(i);
        }
        return Some(x.iter().copied().collect());
    }
    None
}

/// Strata for plane draws on product metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PlaneStratum {
    Generic,
    BaseOnly,
    FlatOnly,
    Split,
}

/// Sample a plane of the requested type by rejection against the
/// classifier.
pub fn sample_plane(
    spec: &MetricSpec,
    gp: &MetricAtPoint,
    ptype: PlaneType,
    rng: &mut ChaCha8Rng,
) -> Result<PlaneSpec> {
    if ptype == PlaneType::Degenerate {
        return Err(Error::InvalidInput("cannot request a degenerate plane".into()));
    }
    let layout = spec.layout();
    if !plane_type_attainable(gp, ptype) {
        return Err(Error::Sampling(format!(
            "{} planes are not attainable at signature {:?}",
            ptype.name(),
            gp.signature
        )));
    }
    for _ in 0..PLANE_ATTEMPTS {
        let stratum = pick_plane_stratum(&layout, rng);
        let (u, v) = draw_plane_pair(&layout, stratum, rng);
        if let Ok(t) = classify_plane(gp, &u, &v) {
            if t == ptype {
                return plane_spec(gp, &u, &v);
            }
        }
    }
    Err(Error::Sampling(format!(
        "no {} plane found in {PLANE_ATTEMPTS} attempts",
        ptype.name()
    )))
}

/// Whether the signature admits a plane of this type.
pub fn plane_type_attainable(gp: &MetricAtPoint, ptype: PlaneType) -> bool {
    let (neg, pos) = gp.signature;
    match ptype {
        PlaneType::Spacelike => pos >= 2,
        PlaneType::Timelike => neg >= 2,
        PlaneType::Mixed => neg >= 1 && pos >= 1,
        PlaneType::Degenerate => false,
    }
}

fn pick_plane_stratum(layout: &ChartLayout, rng: &mut ChaCha8Rng) -> PlaneStratum {
    let flat_dim = layout.neg + layout.pos;
    if layout.p == 0 {
        return PlaneStratum::FlatOnly;
    }
    if flat_dim == 0 {
        return PlaneStratum::Generic;
    }
    match rng.gen_range(0..6u32) {
        0 => PlaneStratum::BaseOnly,
        1 if flat_dim >= 2 => PlaneStratum::FlatOnly,
        2 | 3 => PlaneStratum::Split,
        _ => PlaneStratum::Generic,
    }
}

fn draw_plane_pair(layout: &ChartLayout, stratum: PlaneStratum, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<f64>) {
    let n = layout.dim();
    let draw_masked = |rng: &mut ChaCha8Rng, base: bool, flat: bool| -> Vec<f64> {
        (0..n)
            .map(|i| {
                let in_base = i < 2 * layout.p;
                if (in_base && base) || (!in_base && flat) {
                    rng.gen_range(-1.0..1.0)
                } else {
                    0.0
                }
            })
            .collect()
    };
    match stratum {
        PlaneStratum::Generic => (draw_masked(rng, true, true), draw_masked(rng, true, true)),
        PlaneStratum::BaseOnly => (draw_masked(rng, true, false), draw_masked(rng, true, false)),
        PlaneStratum::FlatOnly => (draw_masked(rng, false, true), draw_masked(rng, false, true)),
        PlaneStratum::Split => (draw_masked(rng, true, false), draw_masked(rng, false, true)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyMap;
    use rand::SeedableRng;

    fn poly(nvars: usize, terms: &[(&[u32], f64)]) -> PolyMap {
        PolyMap::from_terms(nvars, terms.iter().map(|(e, c)| (e.to_vec(), *c))).unwrap()
    }

    #[test]
    fn closed_form_adjustment_example() {
        // Z = d_1^x + t d_1^y with t = (1 - psi_11)/2 gives (Z, Z) = 1
        let spec = MetricSpec::psi(2, [((0, 0), poly(2, &[(&[0, 2], 1.0)]))]).unwrap();
        let pt = PointChart(vec![1.0, 3.0, 0.0, 0.0]); // psi_11 = 9
        let gp = spec.metric_at(&pt).unwrap();
        let t = (1.0 - 9.0) / 2.0;
        let z = vec![1.0, 0.0, t, 0.0];
        assert_eq!(gp.inner(&z, &z).unwrap(), 1.0);
        let t_neg = (-1.0 - 9.0) / 2.0;
        let z = vec![1.0, 0.0, t_neg, 0.0];
        assert_eq!(gp.inner(&z, &z).unwrap(), -1.0);
    }

    #[test]
    fn sampler_hits_target_norm_exactly() {
        let f = poly(3, &[(&[2, 0, 0], 0.5), (&[0, 2, 0], 0.5), (&[0, 0, 2], 0.5)]);
        let spec = MetricSpec::gradient(3, f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let pt = sample_point(6, &mut rng);
        let gp = spec.metric_at(&pt).unwrap();
        for _ in 0..1000 {
            let z = sample_unit(&spec, &gp, 1, &mut rng).unwrap();
            assert!((gp.inner(&z, &z).unwrap() - 1.0).abs() <= 1e-12);
            let z = sample_unit(&spec, &gp, -1, &mut rng).unwrap();
            assert!((gp.inner(&z, &z).unwrap() + 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn product_sampler_visits_flat_stratum() {
        let base = MetricSpec::gradient(2, poly(2, &[(&[2, 0], 0.5), (&[0, 2], 0.5)])).unwrap();
        let spec = MetricSpec::product(base, 2, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let pt = sample_point(6, &mut rng);
        let gp = spec.metric_at(&pt).unwrap();
        let mut saw_flat_only = false;
        for _ in 0..200 {
            let z = sample_unit(&spec, &gp, -1, &mut rng).unwrap();
            assert!((gp.inner(&z, &z).unwrap() + 1.0).abs() <= 1e-12);
            if z[..4].iter().all(|&c| c == 0.0) {
                saw_flat_only = true;
            }
        }
        assert!(saw_flat_only, "stratified sampler never drew a flat-factor vector");
        // spacelike is unattainable on the flat stratum but fine generically
        let z = sample_unit(&spec, &gp, 1, &mut rng).unwrap();
        assert!((gp.inner(&z, &z).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn plane_sampler_matches_request() {
        let f = poly(2, &[(&[2, 0], 0.5), (&[0, 2], 0.5)]);
        let spec = MetricSpec::gradient(2, f).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        let pt = sample_point(4, &mut rng);
        let gp = spec.metric_at(&pt).unwrap();
        for ptype in [PlaneType::Spacelike, PlaneType::Timelike, PlaneType::Mixed] {
            for _ in 0..20 {
                let plane = sample_plane(&spec, &gp, ptype, &mut rng).unwrap();
                assert_eq!(plane.ptype, ptype);
                // re-check the classification from the stored pair
                assert_eq!(classify_plane(&gp, &plane.u, &plane.v).unwrap(), ptype);
            }
        }
    }

    #[test]
    fn unattainable_types_are_rejected_fast() {
        let spec = MetricSpec::flat(0, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let gp = spec.metric_at(&PointChart::origin(3)).unwrap();
        assert!(sample_plane(&spec, &gp, PlaneType::Timelike, &mut rng).is_err());
        assert!(sample_unit(&spec, &gp, -1, &mut rng).is_err());
        // spacelike works
        let z = sample_unit(&spec, &gp, 1, &mut rng).unwrap();
        assert!((gp.inner(&z, &z).unwrap() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn targeted_x_part_sampler() {
        let f = poly(3, &[(&[2, 0, 0], 0.5), (&[0, 2, 0], 0.5), (&[0, 0, 2], 0.5)]);
        let spec = MetricSpec::gradient(3, f).unwrap();
        let layout = spec.layout();
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let pt = sample_point(6, &mut rng);
        let gp = spec.metric_at(&pt).unwrap();
        let x = [0.0, 0.0, 1.0];
        for sign in [1i8, -1] {
            let z = unit_with_x_part(&layout, &gp, &x, sign, &mut rng).unwrap();
            assert!((gp.inner(&z, &z).unwrap() - sign as f64).abs() <= 1e-12);
            assert_eq!(&z[..3], &x);
        }
    }
}
