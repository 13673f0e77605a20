//! Tolerance-aware spectral analysis of small dense matrices: eigenvalue
//! multisets, numerical rank, nilpotency index, and Jordan structure read
//! off rank sequences of (shifted) powers.
//!
//! The certified envelope of this crate is nilpotent operators; profiles
//! of matrices with clustered non-real spectra are returned with
//! `confident = false` rather than silently trusted.

use nalgebra::{Complex, DMatrix, Schur};
use serde_json::{json, Value};

use crate::error::{Error, Result};

fn scale_of(a: &DMatrix<f64>) -> f64 {
    1.0 + a.norm()
}

/// Complex eigenvalue multiset with small eigenvalues snapped to zero
/// (`|lambda| <= tol * (1 + |A|_F)`), sorted by (re, im) for determinism.
pub fn spectrum(a: &DMatrix<f64>, tol: f64) -> Result<Vec<Complex<f64>>> {
    if a.nrows() != a.ncols() {
        return Err(Error::InvalidInput("spectrum of a non-square matrix".into()));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    let scale = scale_of(a);
    let schur = Schur::try_new(a.clone(), f64::EPSILON, 100_000).ok_or_else(|| {
        Error::Numerical(format!(
            "Schur iteration did not converge on a {}x{} matrix (|A| = {:.3e})",
            a.nrows(),
            a.ncols(),
            a.norm()
        ))
    })?;
    let mut eigs: Vec<Complex<f64>> = schur
        .complex_eigenvalues()
        .iter()
        .map(|&l| {
            if l.norm() <= tol * scale {
                Complex::new(0.0, 0.0)
            } else {
                l
            }
        })
        .collect();
    eigs.sort_by(|x, y| {
        x.re.partial_cmp(&y.re)
            .unwrap()
            .then(x.im.partial_cmp(&y.im).unwrap())
    });
    Ok(eigs)
}

/// Count of singular values above `tol * sigma_max`; rank 0 when the whole
/// matrix is below `tol`.
pub fn numerical_rank(a: &DMatrix<f64>, tol: f64) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax <= tol {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

fn complex_rank(a: &DMatrix<Complex<f64>>, tol: f64) -> usize {
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0f64, |m, &s| m.max(s));
    if smax <= tol {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * smax).count()
}

/// Smallest `k <= n` with `|A^k|_F <= tol * (1 + |A|_F)^k`, or `None` when
/// the matrix is not nilpotent.
pub fn nilpotency_index(a: &DMatrix<f64>, tol: f64) -> Option<usize> {
    let n = a.nrows();
    let base = scale_of(a);
    let mut power = a.clone();
    for k in 1..=n {
        if power.norm() <= tol * base.powi(k as i32) {
            return Some(k);
        }
        power = &power * a;
    }
    None
}

/// Eigenvalues plus the Jordan block structure of the zero eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct JordanProfile {
    /// Snapped eigenvalue multiset, sorted by (re, im).
    pub eigenvalues: Vec<Complex<f64>>,
    /// Block sizes for the eigenvalue 0, descending; empty when 0 is not
    /// an eigenvalue.
    pub nilpotent_partition: Vec<usize>,
    /// `rank(A), rank(A^2), ...` up to stabilization.
    pub rank_sequence: Vec<usize>,
    /// False when the spectrum clusters too tightly for the block counts
    /// to be trustworthy.
    pub confident: bool,
}

impl JordanProfile {
    pub fn is_nilpotent(&self) -> bool {
        self.eigenvalues.iter().all(|l| l.norm() == 0.0)
    }

    pub fn json(&self) -> Value {
        json!({
            "eigenvalues": self.eigenvalues.iter().map(|l| vec![l.re, l.im]).collect::<Vec<_>>(),
            "nilpotent_partition": self.nilpotent_partition,
            "rank_sequence": self.rank_sequence,
            "confident": self.confident,
        })
    }
}

/// Block sizes for eigenvalue `lambda` from ranks of shifted powers:
/// the number of blocks of size >= k is `r_{k-1} - r_k`.
fn partition_for(a: &DMatrix<f64>, lambda: Complex<f64>, tol: f64) -> Vec<usize> {
    let n = a.nrows();
    let ac: DMatrix<Complex<f64>> = a.map(|v| Complex::new(v, 0.0));
    let shifted = &ac - DMatrix::from_diagonal_element(n, n, lambda);
    let mut ranks = vec![n];
    let mut power = DMatrix::identity(n, n);
    for _ in 1..=n {
        power = &power * &shifted;
        let r = complex_rank(&power, tol);
        let stable = *ranks.last().unwrap() == r;
        ranks.push(r);
        if stable || r == 0 {
            break;
        }
    }
    let mut partition = Vec::new();
    for k in 1..ranks.len() {
        let at_least_k = ranks[k - 1] - ranks[k];
        let at_least_k1 = if k + 1 < ranks.len() {
            ranks[k] - ranks[k + 1]
        } else {
            0
        };
        let exactly_k = at_least_k.saturating_sub(at_least_k1);
        for _ in 0..exactly_k {
            partition.push(k);
        }
    }
    partition.sort_unstable_by(|x, y| y.cmp(x));
    partition
}

/// Group a snapped spectrum into clusters of nearby eigenvalues, returning
/// `(center, multiplicity)` pairs.
fn cluster_spectrum(eigs: &[Complex<f64>], radius: f64) -> Vec<(Complex<f64>, usize)> {
    let mut clusters: Vec<(Complex<f64>, usize)> = Vec::new();
    for &l in eigs {
        if let Some(c) = clusters.iter_mut().find(|(c, _)| (l - *c).norm() <= radius) {
            c.1 += 1;
        } else {
            clusters.push((l, 1));
        }
    }
    clusters
}

/// Jordan profile via the spectrum and rank sequences of powers.
pub fn jordan_profile(a: &DMatrix<f64>, tol: f64) -> Result<JordanProfile> {
    let n = a.nrows();
    let eigenvalues = spectrum(a, tol)?;
    let scale = scale_of(a);
    let radius = (1e-6 * scale).max(10.0 * tol * scale);
    let clusters = cluster_spectrum(&eigenvalues, radius);

    let mut rank_sequence = Vec::new();
    let mut power = DMatrix::identity(n, n);
    let mut prev = n;
    for _ in 1..=n {
        power = &power * a;
        let r = numerical_rank(&power, tol);
        rank_sequence.push(r);
        if r == 0 || r == prev {
            break;
        }
        prev = r;
    }

    let nilpotent_partition = if clusters.iter().any(|(c, _)| c.norm() == 0.0) {
        partition_for(a, Complex::new(0.0, 0.0), tol)
    } else {
        Vec::new()
    };

    // cross-check: block sizes over all clusters must tile the dimension
    let mut total = nilpotent_partition.iter().sum::<usize>();
    let mut separated = true;
    for (i, (ci, _)) in clusters.iter().enumerate() {
        if ci.norm() > 0.0 {
            total += partition_for(a, *ci, tol).iter().sum::<usize>();
        }
        for (cj, _) in clusters.iter().skip(i + 1) {
            if (*ci - *cj).norm() < 1e-3 * scale {
                separated = false;
            }
        }
    }
    let nilpotent = clusters.len() == 1 && clusters[0].0.norm() == 0.0;
    let confident = total == n && (nilpotent || separated);

    Ok(JordanProfile {
        eigenvalues,
        nilpotent_partition,
        rank_sequence,
        confident,
    })
}

/// Jordan equivalence: equal dimension, matching snapped spectra, and
/// matching rank sequences of `(A - lambda I)^k` for every shared
/// eigenvalue cluster. For nilpotent matrices this reduces to equality of
/// the rank sequences of plain powers.
pub fn jordan_equivalent(a: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<bool> {
    if a.nrows() != b.nrows() {
        return Ok(false);
    }
    let ea = spectrum(a, tol)?;
    let eb = spectrum(b, tol)?;
    let scale = 1.0 + a.norm().max(b.norm());
    let radius = (1e-6 * scale).max(10.0 * tol * scale);

    // multiset match of snapped spectra
    if ea.len() != eb.len() {
        return Ok(false);
    }
    for (x, y) in ea.iter().zip(eb.iter()) {
        if (x - y).norm() > radius {
            return Ok(false);
        }
    }

    for (center, _) in cluster_spectrum(&ea, radius) {
        if partition_for(a, center, tol) != partition_for(b, center, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}
