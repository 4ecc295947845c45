//! Tail dependence along paths of maximal dependence for bivariate copulas.
//!
//! The crate evaluates copula CDFs and tail copulas, maximizes the profile
//! tail copula `b ↦ Λ(b, 1/b)` (the MTCM), traces the per-level maximizer of
//! `x ↦ C(x, u²/x)`, and provides the t extreme-value spectral machinery and
//! the survival Marshall–Olkin singular curve used to cross-check them.

pub mod copula;
pub mod error;
pub mod path;
pub mod schedule;
pub mod singular;
pub mod special_math;
pub mod spectral;
pub mod tail;

pub use copula::{CopulaModel, PickandsFn, TCopula};
pub use error::{Error, Result};
pub use path::{
    equivalence_report, maximize_slice, trace_path, EquivalenceBudget, EquivalenceReport, PathFailure, PathPoint,
    PathResult,
};
pub use schedule::Schedule;
pub use singular::{asymptotic_report, cardano_roots, singular_curve, singular_root, AsymptoticReport, SingularCurvePoint};
pub use special_math::{Extrapolated, OptimResult1D, QuadratureSpec};
pub use spectral::SpectralModel;
pub use tail::{mtcm, MtcmOptions, MtcmResult, TailCopulaFn};
