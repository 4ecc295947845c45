use crate::error::{check_domain, Result};
use crate::special_math::{integrate_adaptive, QuadratureSpec, StudentT};

/// Bivariate Student-t copula `C_{ν,ρ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TCopula {
    nu: f64,
    rho: f64,
    t_nu: StudentT,
    t_nu1: StudentT,
}

/// Quadrature settings for the CDF: the absolute error stays far below 1e-8
/// while the relative tolerance keeps `C(u, v)/u` accurate for `u` near 1e-5.
const CDF_QUADRATURE: QuadratureSpec =
    QuadratureSpec { abs_tol: 1e-16, rel_tol: 1e-11, max_subdivisions: 200 };

impl TCopula {
    pub fn new(nu: f64, rho: f64) -> Result<Self> {
        check_domain(rho > -1.0 && rho < 1.0, "rho", rho)?;
        Ok(Self {
            nu,
            rho,
            t_nu: StudentT::new(nu)?,
            t_nu1: StudentT::new(nu + 1.0)?,
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn marginal(&self) -> &StudentT {
        &self.t_nu
    }

    /// `P(V <= v | U = u)` expressed through the marginal quantiles.
    pub(crate) fn conditional_on_quantiles(&self, q_given: f64, q_other: f64) -> f64 {
        let scale = ((self.nu + 1.0) / (self.nu + q_given * q_given)).sqrt() / (1.0 - self.rho * self.rho).sqrt();
        self.t_nu1.cdf((q_other - self.rho * q_given) * scale)
    }

    /// `C(u, v) = ∫_{-∞}^{T_ν^{-1}(u)} t_ν(q) T_{ν+1}(...) dq`, integrating over
    /// the smaller coordinate so the result is exactly exchangeable.
    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        if u <= 0.0 || v <= 0.0 {
            return Ok(0.0);
        }
        if u >= 1.0 {
            return Ok(v.min(1.0));
        }
        if v >= 1.0 {
            return Ok(u);
        }
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        let q_lo = self.t_nu.quantile(lo);
        let q_hi = self.t_nu.quantile(hi);
        let g = |q: f64| self.t_nu.pdf(q) * self.conditional_on_quantiles(q, q_hi);

        // q = q_end / τ maps τ ∈ (0, 1] onto (-∞, q_end] for q_end < 0
        let left_tail = |q_end: f64| {
            integrate_adaptive(
                |tau: f64| {
                    if tau <= 0.0 {
                        0.0
                    } else {
                        g(q_end / tau) * (-q_end) / (tau * tau)
                    }
                },
                0.0,
                1.0,
                &CDF_QUADRATURE,
            )
        };
        let value = if q_lo < -1.0 {
            left_tail(q_lo)?.value
        } else {
            let tail = left_tail(-1.0)?.value;
            let body = if q_lo > -1.0 {
                integrate_adaptive(g, -1.0, q_lo, &CDF_QUADRATURE)?.value
            } else {
                0.0
            };
            tail + body
        };
        Ok(value.clamp((u + v - 1.0).max(0.0).min(lo), lo))
    }
}
