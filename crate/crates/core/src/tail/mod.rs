//! Tail copulas `Λ(x, y) = lim_{t↓0} C(tx, ty)/t`, analytic and numeric, and
//! the maximal tail concordance solver.

mod mtcm;

pub use mtcm::{mtcm, MtcmOptions, MtcmResult};

use crate::copula::{CopulaModel, PickandsFn};
use crate::error::{check_domain, Result};
use crate::special_math::{aitken_tail, Extrapolated, StudentT};

/// `min(αx, βy)`, the tail copula of the survival Marshall–Olkin copula.
pub fn tail_copula_smo(alpha: f64, beta: f64, x: f64, y: f64) -> Result<f64> {
    check_domain(alpha > 0.0 && alpha <= 1.0, "alpha", alpha)?;
    check_domain(beta > 0.0 && beta <= 1.0, "beta", beta)?;
    check_positive(x, y)?;
    Ok((alpha * x).min(beta * y))
}

/// `x + y - (x+y) A(x/(x+y))` for an arbitrary Pickands function `A`.
pub fn tail_copula_from_pickands<A>(pickands: A, x: f64, y: f64) -> Result<f64>
where
    A: Fn(f64) -> f64,
{
    check_positive(x, y)?;
    let s = x + y;
    Ok(s - s * pickands(x / s))
}

/// Closed-form tail copula of the (radially symmetric) Student-t copula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TevTail {
    nu: f64,
    rho: f64,
    eta: f64,
    t_nu1: StudentT,
}

impl TevTail {
    pub fn new(nu: f64, rho: f64) -> Result<Self> {
        check_domain(rho > -1.0 && rho < 1.0, "rho", rho)?;
        let t_nu1 = StudentT::new(nu + 1.0)?;
        Ok(Self { nu, rho, eta: ((nu + 1.0) / (1.0 - rho * rho)).sqrt(), t_nu1 })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let inv_nu = 1.0 / self.nu;
        let first = x * self.t_nu1.cdf(self.eta * (self.rho - (y / x).powf(-inv_nu)));
        let second = y * self.t_nu1.cdf(self.eta * (self.rho - (x / y).powf(-inv_nu)));
        first + second
    }
}

/// `x T_{ν+1}(η[ρ - (y/x)^{-1/ν}]) + y T_{ν+1}(η[ρ - (x/y)^{-1/ν}])`.
pub fn tail_copula_tev(nu: f64, rho: f64, x: f64, y: f64) -> Result<f64> {
    check_positive(x, y)?;
    Ok(TevTail::new(nu, rho)?.eval(x, y))
}

/// Geometric default sequence `0.1 · 2^{-k}` down to `1e-5`.
pub fn default_t_sequence() -> Vec<f64> {
    let mut seq = Vec::new();
    let mut t = 0.1;
    while t >= 1e-5 {
        seq.push(t);
        t *= 0.5;
    }
    seq
}

/// Evaluates `C(tx, ty)/t` along `t_sequence` and extrapolates the limit from
/// the last three terms; the error is the spread of the final terms.
pub fn tail_copula_numeric(model: &CopulaModel, x: f64, y: f64, t_sequence: &[f64]) -> Result<Extrapolated> {
    check_positive(x, y)?;
    check_domain(!t_sequence.is_empty(), "t sequence length", 0.0)?;
    let scale = x.max(y);
    for pair in t_sequence.windows(2) {
        check_domain(pair[1] < pair[0], "t sequence (must decrease)", pair[1])?;
    }
    for &t in t_sequence {
        check_domain(t > 0.0 && t * scale <= 1.0, "t (need 0 < t max(x, y) <= 1)", t)?;
    }
    let ratios = t_sequence
        .iter()
        .map(|&t| Ok(model.cdf(t * x, t * y)? / t))
        .collect::<Result<Vec<f64>>>()?;
    Ok(aitken_tail(&ratios))
}

/// How a tail copula is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum TailCopulaFn {
    /// Survival Marshall–Olkin: `min(αx, βy)`.
    Smo { alpha: f64, beta: f64 },
    /// Survival of an extreme-value copula with the given Pickands function.
    Ev(PickandsFn),
    /// Student-t (equivalently survival t-EV) closed form.
    Tev(TevTail),
    /// `C(tx, ty)/t` extrapolated along a decreasing `t` sequence.
    Numeric { model: CopulaModel, t_sequence: Vec<f64> },
}

impl TailCopulaFn {
    /// Analytic tail copula where one is known, numeric limit otherwise.
    pub fn for_model(model: &CopulaModel) -> Self {
        match model {
            CopulaModel::StudentT(t) => {
                Self::Tev(TevTail::new(t.nu(), t.rho()).expect("validated t-copula parameters"))
            }
            CopulaModel::Independence | CopulaModel::Comonotone => Self::numeric(model.clone()),
            CopulaModel::Survival(inner) => match inner.as_ref() {
                CopulaModel::MarshallOlkin { alpha, beta } => Self::Smo { alpha: *alpha, beta: *beta },
                CopulaModel::AsymGumbel(a) => Self::Ev(*a),
                CopulaModel::StudentT(t) => {
                    Self::Tev(TevTail::new(t.nu(), t.rho()).expect("validated t-copula parameters"))
                }
                _ => Self::numeric(model.clone()),
            },
            _ => Self::numeric(model.clone()),
        }
    }

    pub fn numeric(model: CopulaModel) -> Self {
        Self::Numeric { model, t_sequence: default_t_sequence() }
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, Self::Numeric { .. })
    }

    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        check_positive(x, y)?;
        Ok(match self {
            Self::Smo { alpha, beta } => (alpha * x).min(beta * y),
            Self::Ev(a) => a.tail(x, y),
            Self::Tev(t) => t.eval(x, y),
            Self::Numeric { .. } => self.eval_with_error(x, y)?.value,
        })
    }

    /// Value with an error estimate (zero for closed forms).
    pub fn eval_with_error(&self, x: f64, y: f64) -> Result<Extrapolated> {
        match self {
            Self::Numeric { model, t_sequence } => {
                // 1-homogeneity keeps t·max(x, y) <= 1 for any (x, y)
                let c = x.max(y);
                let e = tail_copula_numeric(model, x / c, y / c, t_sequence)?;
                Ok(Extrapolated { value: (c * e.value).max(0.0), error: c * e.error })
            }
            _ => Ok(Extrapolated { value: self.eval(x, y)?, error: 0.0 }),
        }
    }
}

fn check_positive(x: f64, y: f64) -> Result<()> {
    check_domain(x > 0.0 && x.is_finite(), "x", x)?;
    check_domain(y > 0.0 && y.is_finite(), "y", y)
}
