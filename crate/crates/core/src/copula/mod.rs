//! Parametrized bivariate copula families, the survival transform and
//! samplers.

mod pickands;
mod sample;
mod t_copula;

use std::fmt;

pub use pickands::PickandsFn;
pub use sample::{sample, conditional_cdf, FD_STEP};
pub use t_copula::TCopula;

use crate::error::{check_domain, Result};

/// A bivariate copula with an evaluable CDF on the unit square.
///
/// Values are immutable once built; the validating constructors are the
/// intended way in.
#[derive(Debug, Clone, PartialEq)]
pub enum CopulaModel {
    Independence,
    Comonotone,
    Fgm { theta: f64 },
    MarshallOlkin { alpha: f64, beta: f64 },
    AsymGumbel(PickandsFn),
    StudentT(TCopula),
    /// The copula of `(1-U, 1-V)` for `(U, V)` distributed as the inner model.
    Survival(Box<CopulaModel>),
}

impl CopulaModel {
    pub fn fgm(theta: f64) -> Result<Self> {
        check_domain((-1.0..=1.0).contains(&theta), "FGM theta", theta)?;
        Ok(Self::Fgm { theta })
    }

    pub fn marshall_olkin(alpha: f64, beta: f64) -> Result<Self> {
        check_domain(alpha > 0.0 && alpha <= 1.0, "alpha", alpha)?;
        check_domain(beta > 0.0 && beta <= 1.0, "beta", beta)?;
        Ok(Self::MarshallOlkin { alpha, beta })
    }

    pub fn asym_gumbel(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        Ok(Self::AsymGumbel(PickandsFn::new(alpha, beta, theta)?))
    }

    pub fn student_t(nu: f64, rho: f64) -> Result<Self> {
        Ok(Self::StudentT(TCopula::new(nu, rho)?))
    }

    /// Survival copula `Ĉ(u, v) = -1 + u + v + C(1-u, 1-v)`; applying it twice
    /// returns the original model.
    pub fn survival(self) -> Self {
        match self {
            Self::Survival(inner) => *inner,
            other => Self::Survival(Box::new(other)),
        }
    }

    /// Short family tag, e.g. `smo` for a survival Marshall–Olkin copula.
    pub fn tag(&self) -> String {
        match self {
            Self::Independence => "indep".into(),
            Self::Comonotone => "comono".into(),
            Self::Fgm { .. } => "fgm".into(),
            Self::MarshallOlkin { .. } => "mo".into(),
            Self::AsymGumbel(_) => "ag".into(),
            Self::StudentT(_) => "t".into(),
            Self::Survival(inner) => match inner.as_ref() {
                Self::MarshallOlkin { .. } => "smo".into(),
                Self::AsymGumbel(_) => "sag".into(),
                other => format!("surv-{}", other.tag()),
            },
        }
    }

    /// True for models with `C(u, v) = C(v, u)`.
    pub fn is_exchangeable(&self) -> bool {
        match self {
            Self::Independence | Self::Comonotone | Self::Fgm { .. } | Self::StudentT(_) => true,
            Self::MarshallOlkin { alpha, beta } => alpha == beta,
            Self::AsymGumbel(a) => a.alpha() == a.beta(),
            Self::Survival(inner) => inner.is_exchangeable(),
        }
    }

    /// `C(u, v)`, clamped to the Fréchet–Hoeffding bounds to absorb rounding.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        check_domain((0.0..=1.0).contains(&u), "u", u)?;
        check_domain((0.0..=1.0).contains(&v), "v", v)?;
        let raw = self.cdf_raw(u, v)?;
        let upper = u.min(v);
        Ok(raw.clamp((u + v - 1.0).max(0.0).min(upper), upper))
    }

    fn cdf_raw(&self, u: f64, v: f64) -> Result<f64> {
        Ok(match self {
            Self::Independence => u * v,
            Self::Comonotone => u.min(v),
            Self::Fgm { theta } => u * v * (1.0 + theta * (1.0 - u) * (1.0 - v)),
            Self::MarshallOlkin { alpha, beta } => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    (u.powf(1.0 - alpha) * v).min(u * v.powf(1.0 - beta))
                }
            }
            Self::AsymGumbel(a) => {
                if u == 0.0 || v == 0.0 {
                    0.0
                } else {
                    (-a.stdf(-u.ln(), -v.ln())).exp()
                }
            }
            Self::StudentT(t) => t.cdf(u, v)?,
            Self::Survival(inner) => u + v - inner.co_cdf(u, v)?,
        })
    }

    /// `1 - C(1-s, 1-t)`, evaluated without cancellation for small `s, t`.
    pub(crate) fn co_cdf(&self, s: f64, t: f64) -> Result<f64> {
        Ok(match self {
            Self::Independence => s + t - s * t,
            Self::Comonotone => s.max(t),
            Self::Fgm { theta } => s + t - s * t - theta * s * t * (1.0 - s) * (1.0 - t),
            Self::MarshallOlkin { alpha, beta } => {
                let ls = (-s).ln_1p();
                let lt = (-t).ln_1p();
                let first = -((1.0 - alpha) * ls + lt).exp_m1();
                let second = -(ls + (1.0 - beta) * lt).exp_m1();
                first.max(second)
            }
            Self::AsymGumbel(a) => {
                let x = -(-s).ln_1p();
                let y = -(-t).ln_1p();
                -(-a.stdf(x, y)).exp_m1()
            }
            Self::StudentT(tc) => 1.0 - tc.cdf(1.0 - s, 1.0 - t)?,
            Self::Survival(inner) => s + t - inner.cdf_raw(s, t)?,
        })
    }
}

impl fmt::Display for CopulaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Independence => write!(f, "indep"),
            Self::Comonotone => write!(f, "comono"),
            Self::Fgm { theta } => write!(f, "fgm:theta={theta}"),
            Self::MarshallOlkin { alpha, beta } => write!(f, "mo:alpha={alpha},beta={beta}"),
            Self::AsymGumbel(a) => write!(f, "ag:alpha={},beta={},theta={}", a.alpha(), a.beta(), a.theta()),
            Self::StudentT(t) => write!(f, "t:nu={},rho={}", t.nu(), t.rho()),
            Self::Survival(inner) => match inner.as_ref() {
                Self::MarshallOlkin { alpha, beta } => write!(f, "smo:alpha={alpha},beta={beta}"),
                Self::AsymGumbel(a) => {
                    write!(f, "sag:alpha={},beta={},theta={}", a.alpha(), a.beta(), a.theta())
                }
                other => write!(f, "surv-{other}"),
            },
        }
    }
}
