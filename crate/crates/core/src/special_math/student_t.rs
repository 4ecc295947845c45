//! Univariate Student-t distribution.

use super::gamma::{beta_reg_pair, ln_beta, ln_gamma};
use crate::error::{check_domain, Result};

/// Student-t distribution with `nu > 0` degrees of freedom.
///
/// Normalizing constants are computed once at construction, which matters in
/// the copula integrands where the same `nu` is evaluated millions of times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudentT {
    nu: f64,
    ln_norm: f64,
    ln_beta_half: f64,
}

impl StudentT {
    pub fn new(nu: f64) -> Result<Self> {
        check_domain(nu > 0.0 && nu.is_finite(), "degrees of freedom", nu)?;
        let ln_norm = ln_gamma(0.5 * (nu + 1.0))
            - ln_gamma(0.5 * nu)
            - 0.5 * (nu * std::f64::consts::PI).ln();
        Ok(Self {
            nu,
            ln_norm,
            ln_beta_half: ln_beta(0.5 * nu, 0.5),
        })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.ln_pdf(x).exp()
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        if x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        self.ln_norm - 0.5 * (self.nu + 1.0) * (x * x / self.nu).ln_1p()
    }

    /// `P(T <= x)`; accurate in relative terms in the lower tail.
    pub fn cdf(&self, x: f64) -> f64 {
        if x == f64::NEG_INFINITY {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        if x == 0.0 {
            return 0.5;
        }
        let z = x * x;
        let (p, q) = if z < self.nu {
            let d = self.nu + z;
            (self.nu / d, z / d)
        } else {
            // divide through by z to avoid overflow for huge |x|
            let r = self.nu / z;
            (r / (1.0 + r), 1.0 / (1.0 + r))
        };
        let tail = 0.5 * beta_reg_pair(0.5 * self.nu, 0.5, p, q, self.ln_beta_half);
        if x < 0.0 {
            tail
        } else {
            1.0 - tail
        }
    }

    /// Upper tail `P(T > x)`.
    pub fn sf(&self, x: f64) -> f64 {
        self.cdf(-x)
    }

    /// Inverse CDF by safeguarded Newton iteration.
    pub fn quantile(&self, p: f64) -> f64 {
        if p <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if p >= 1.0 {
            return f64::INFINITY;
        }
        if p == 0.5 {
            return 0.0;
        }
        if p > 0.5 {
            // 1 - p is exact for p in [0.5, 1]
            return -self.lower_quantile(1.0 - p);
        }
        self.lower_quantile(p)
    }

    fn lower_quantile(&self, p: f64) -> f64 {
        let mut hi = 0.0_f64;
        let mut lo = -1.0_f64;
        while self.cdf(lo) > p {
            hi = lo;
            lo *= 2.0;
            if lo < -1e300 {
                return lo;
            }
        }
        // Power-law tail guess: T(x) ~ K/nu * |x|^-nu.
        let ln_k = self.ln_norm + 0.5 * (self.nu + 1.0) * self.nu.ln();
        let guess = -((ln_k - self.nu.ln() - p.ln()) / self.nu).exp();
        let mut x = if guess > lo && guess < hi {
            guess
        } else {
            0.5 * (lo + hi)
        };

        for _ in 0..200 {
            let f = self.cdf(x) - p;
            if f == 0.0 || f.abs() <= 1e-15 * p {
                return x;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let step = f / self.pdf(x);
            let mut next = x - step;
            if !(next > lo && next < hi) || !next.is_finite() {
                next = if hi < -1.0 && lo / hi > 4.0 {
                    -(lo * hi).sqrt()
                } else {
                    0.5 * (lo + hi)
                };
            }
            if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs() {
                return next;
            }
            x = next;
        }
        x
    }
}

/// Student-t CDF `T_nu(x)`.
pub fn student_t_cdf(x: f64, nu: f64) -> Result<f64> {
    check_domain(x.is_finite(), "t argument", x)?;
    Ok(StudentT::new(nu)?.cdf(x))
}

/// Student-t density `t_nu(x)`.
pub fn student_t_pdf(x: f64, nu: f64) -> Result<f64> {
    Ok(StudentT::new(nu)?.pdf(x))
}

/// Student-t quantile `T_nu^{-1}(p)`.
pub fn student_t_quantile(p: f64, nu: f64) -> Result<f64> {
    check_domain((0.0..=1.0).contains(&p), "probability", p)?;
    Ok(StudentT::new(nu)?.quantile(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_at_zero_and_limits() {
        assert_eq!(student_t_cdf(0.0, 5.0).unwrap(), 0.5);
        let t = StudentT::new(5.0).unwrap();
        assert_eq!(t.cdf(f64::INFINITY), 1.0);
        assert!((t.cdf(1e12) - 1.0).abs() < 1e-15);
        assert!(t.cdf(-1e12) > 0.0);
    }

    #[test]
    fn cdf_closed_forms() {
        // nu = 1 is Cauchy, nu = 2 has an algebraic CDF
        let c = StudentT::new(1.0).unwrap();
        let t2 = StudentT::new(2.0).unwrap();
        for &x in &[-30.0, -2.5, -0.3, 0.1, 1.7, 40.0] {
            let cauchy = 0.5 + (x as f64).atan() / std::f64::consts::PI;
            assert!((c.cdf(x) - cauchy).abs() < 1e-14, "cauchy {x}");
            let two = 0.5 + x / (2.0 * (2.0 + x * x as f64).sqrt());
            assert!((t2.cdf(x) - two).abs() < 1e-14, "nu=2 {x}");
        }
    }

    #[test]
    fn pdf_is_even_and_matches_cauchy() {
        let t = StudentT::new(3.5).unwrap();
        for &x in &[0.1, 1.0, 7.0] {
            assert_eq!(t.pdf(x), t.pdf(-x));
        }
        let c = StudentT::new(1.0).unwrap();
        let x = 0.7_f64;
        let exact = 1.0 / (std::f64::consts::PI * (1.0 + x * x));
        assert!((c.pdf(x) - exact).abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts_cdf() {
        for &nu in &[0.7, 2.0, 4.0, 30.0] {
            let t = StudentT::new(nu).unwrap();
            for &p in &[1e-12, 1e-5, 0.01, 0.3, 0.5, 0.8, 0.999] {
                let q = t.quantile(p);
                let back = t.cdf(q);
                assert!(((back - p) / p).abs() < 1e-12, "nu={nu} p={p} q={q} back={back}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(student_t_cdf(1.0, 0.0).is_err());
        assert!(student_t_cdf(f64::NAN, 3.0).is_err());
        assert!(student_t_cdf(f64::INFINITY, 3.0).is_err());
        assert!(student_t_pdf(1.0, -2.0).is_err());
        assert!(student_t_quantile(1.5, 3.0).is_err());
    }
}
