use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument or model parameter lies outside its admissible domain.
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    /// An iterative routine stopped before reaching its tolerance.
    #[error("{op} did not converge: {detail}")]
    NoConvergence { op: &'static str, detail: String },

    /// A root-finding bracket without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    Bracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The tail copula is numerically identically zero.
    #[error("degenerate tail copula: max profile value {max_profile:e} below threshold {threshold:e}")]
    DegenerateTail { max_profile: f64, threshold: f64 },

    /// A u-schedule violating its ordering or range constraints.
    #[error("invalid schedule: {0}")]
    Schedule(String),

    /// Conditional inversion in the sampler failed for a uniform pair.
    #[error("conditional inversion failed at u = {u}, p = {p}: {detail}")]
    Inversion { u: f64, p: f64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_domain(ok: bool, what: &'static str, value: f64) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Domain { what, value })
    }
}
