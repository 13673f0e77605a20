//! Curvature-operator certification for balanced-signature metric families.
//!
//! The crate constructs pseudo-Riemannian metrics on `R^{2p}` (optionally
//! crossed with a flat factor of signature `(a,b)`) from sparse polynomial
//! data, computes Christoffel symbols, the Riemann tensor, its covariant
//! derivative and the Ricci tensor by several independent routes, realizes
//! the Jacobi, Szabó, and skew-symmetric curvature operators as matrices,
//! and certifies spectral and Jordan-form properties (nilpotency, rank laws,
//! Osserman/Szabó/IP-type constancy) by seeded sampling over the unit
//! pseudo-spheres and the nondegenerate 2-plane Grassmannians.
//!
//! Entry points:
//! * [`MetricSpec`] — the metric families and their JSON encoding.
//! * [`CurvatureEngine`] — exact polynomial curvature pipeline.
//! * [`operators`] / [`sampling`] — operator matrices and domain sampling.
//! * [`spectral`] — tolerance-aware rank, nilpotency, and Jordan profiles.
//! * [`verify`] — property certificates with reproducible JSON reports.

pub mod affine;
pub mod curvature;
pub mod hypersurface;
pub mod metric;
pub mod operators;
pub mod poly;
pub mod sampling;
pub mod spectral;
pub mod tensor;
pub mod verify;

mod error;

pub use curvature::{CurvatureData, CurvatureEngine, CurvatureRoute};
pub use error::{Error, Result};
pub use metric::{MetricAtPoint, MetricSpec, PointChart};
pub use poly::PolyMap;
pub use spectral::JordanProfile;
pub use verify::{VerificationReport, VerifyConfig};
