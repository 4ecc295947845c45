//! Spectral measure of the t extreme-value copula: its density on `(0, 1)`,
//! endpoint atoms, the transform `m(a)` and the profile integral `L(s)`.

use serde::Serialize;

use crate::error::{check_domain, Result};
use crate::special_math::{integrate_adaptive, maximize_1d, OptimResult1D, QuadratureSpec, StudentT};

/// Tolerances for the spectral integrals.
const SPECTRAL_QUADRATURE: QuadratureSpec =
    QuadratureSpec { abs_tol: 1e-15, rel_tol: 1e-12, max_subdivisions: 400 };

/// Relative truncation target for `L(s)`.
const L_TRUNCATION: f64 = 1e-14;

/// t-EV spectral data for `ν > 0`, `ρ ∈ (-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralModel {
    nu: f64,
    rho: f64,
    eta: f64,
    t_nu1: StudentT,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralSummary {
    pub nu: f64,
    pub rho: f64,
    pub eta: f64,
    pub endpoint_mass: f64,
    pub interior_mass: f64,
}

impl SpectralModel {
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

    /// `η = sqrt((ν+1)/(1-ρ²))`.
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `ln h` from `ln w` and `ln(1-w)`, so both ends keep full precision.
    fn ln_h(&self, ln_w: f64, ln_wc: f64) -> f64 {
        let nu = self.nu;
        let r_root = ((ln_wc - ln_w) / nu).exp();
        let ln_t = self.t_nu1.ln_pdf(self.eta * (r_root - self.rho));
        (self.eta / nu).ln() + ln_t - (2.0 * nu + 1.0) / nu * ln_w - (nu - 1.0) / nu * ln_wc
    }

    /// Density of the spectral measure on `(0, 1)`:
    /// `(η/ν) t_{ν+1}(η(r^{1/ν} - ρ)) / (w^{(2ν+1)/ν} (1-w)^{(ν-1)/ν})`, `r = (1-w)/w`.
    pub fn h_density(&self, w: f64) -> Result<f64> {
        check_domain(w > 0.0 && w < 1.0, "w (need 0 < w < 1)", w)?;
        Ok(self.ln_h(w.ln(), (-w).ln_1p()).exp())
    }

    /// Mass of the atom at each of `w = 0` and `w = 1`: `T_{ν+1}(-ηρ)`.
    pub fn endpoint_mass(&self) -> f64 {
        self.t_nu1.cdf(-self.eta * self.rho)
    }

    /// `∫ g(w) h(w) dw` after the substitution `w = 1/(1+u^ν)`, under which
    /// `h(w) dw = η (1+u^ν) t_{ν+1}(η(u-ρ)) du` is free of endpoint powers.
    fn integrate_substituted<G>(&self, g: G) -> Result<f64>
    where
        G: Fn(f64) -> f64,
    {
        let f = |u: f64| {
            let un = u.powf(self.nu);
            let w = if un.is_finite() { 1.0 / (1.0 + un) } else { 0.0 };
            let weight = self.eta * self.t_nu1.pdf(self.eta * (u - self.rho));
            if weight == 0.0 {
                0.0
            } else {
                g(w) * weight * (1.0 + un)
            }
        };
        let split = self.rho.max(0.0) + 1.0;
        let body = integrate_adaptive(f, 0.0, split, &SPECTRAL_QUADRATURE)?.value;
        let tail = integrate_adaptive(f, split, f64::INFINITY, &SPECTRAL_QUADRATURE)?.value;
        Ok(body + tail)
    }

    /// `∫₀¹ h(w) dw`, which should equal `2 T_{ν+1}(ηρ)`.
    pub fn interior_mass(&self) -> Result<f64> {
        self.integrate_substituted(|_| 1.0)
    }

    /// `∫₀¹ w h(w) dw`; together with the atom at 1 this is the unit first
    /// moment of the spectral measure.
    pub fn interior_first_moment(&self) -> Result<f64> {
        self.integrate_substituted(|w| w)
    }

    pub fn summary(&self) -> Result<SpectralSummary> {
        Ok(SpectralSummary {
            nu: self.nu,
            rho: self.rho,
            eta: self.eta,
            endpoint_mass: self.endpoint_mass(),
            interior_mass: self.interior_mass()?,
        })
    }

    /// `Λ(x, y) = ∫₀¹ min(wx, (1-w)y) h(w) dw`, integrated in `w` with a
    /// split at the kink `w = y/(x+y)`. The atoms contribute nothing.
    pub fn spectral_tail_copula(&self, x: f64, y: f64) -> Result<f64> {
        check_domain(x > 0.0 && x.is_finite(), "x", x)?;
        check_domain(y > 0.0 && y.is_finite(), "y", y)?;
        let kink = y / (x + y);
        let f = |w: f64| {
            if w <= 0.0 || w >= 1.0 {
                return 0.0;
            }
            let k = (w * x).min((1.0 - w) * y);
            k * self.ln_h(w.ln(), (-w).ln_1p()).exp()
        };
        let left = integrate_adaptive(f, 0.0, kink, &SPECTRAL_QUADRATURE)?.value;
        let right = integrate_adaptive(f, kink, 1.0, &SPECTRAL_QUADRATURE)?.value;
        Ok(left + right)
    }

    /// `m(a) = 2 {w(1-w)}^{3/2} h(w)` with `w = e^{2a}/(1+e^{2a})`.
    pub fn m_transform(&self, a: f64) -> Result<f64> {
        check_domain(a.is_finite(), "a", a)?;
        let ln_w = -softplus(-2.0 * a);
        let ln_wc = -softplus(2.0 * a);
        Ok(2.0 * (1.5 * (ln_w + ln_wc) + self.ln_h(ln_w, ln_wc)).exp())
    }

    /// `(2η/ν) e^{-(1+2/ν)a} t_{ν+1}(η(e^{-2a/ν} - ρ))`, the simplified form of
    /// `m(a)` (stated for `a > 0`; the algebra holds for every real `a`).
    pub fn m_closed_form(&self, a: f64) -> f64 {
        let nu = self.nu;
        let u = (-2.0 * a / nu).exp();
        2.0 * self.eta / nu * (-(1.0 + 2.0 / nu) * a).exp() * self.t_nu1.pdf(self.eta * (u - self.rho))
    }

    /// `d/da ln m(a) = ((ν+2)/ν) (u²-1)/(1+u²-2ρu)` with `u = e^{-2a/ν}`.
    pub fn ln_m_derivative(&self, a: f64) -> f64 {
        let u = (-2.0 * a / self.nu).exp();
        (self.nu + 2.0) / self.nu * (u * u - 1.0) / (1.0 + u * u - 2.0 * self.rho * u)
    }

    /// Envelope `m(a) <= K e^{-c|a|}` with `K = (2η/ν) sup t_{ν+1}`, `c = 1 + 2/ν`.
    pub fn m_envelope(&self) -> (f64, f64) {
        (2.0 * self.eta / self.nu * self.t_nu1.pdf(0.0), 1.0 + 2.0 / self.nu)
    }

    /// `L(s) = ∫ e^{-|s+a|} m(a) da`, which equals `Λ(e^s, e^{-s})`.
    ///
    /// The range is cut where the envelope bounds the discarded mass by a
    /// `1e-14` fraction of a lower bound on `L(s)`; the kink `a = -s` splits
    /// the quadrature.
    pub fn l_of_s(&self, s: f64) -> Result<f64> {
        check_domain(s.is_finite(), "s", s)?;
        let m = |a: f64| self.m_transform(a).unwrap_or(0.0);
        let (k, c) = self.m_envelope();
        let lower = 2.0 * (-1.0f64).exp() * m(-s - 1.0).min(m(-s + 1.0));
        let cut = if lower > 0.0 { (k / (c * L_TRUNCATION * lower)).ln() / c } else { 0.0 };
        let reach = cut.max(s.abs() + 1.0);
        let f = |a: f64| (-(s + a).abs()).exp() * m(a);
        let left = integrate_adaptive(f, -reach, -s, &SPECTRAL_QUADRATURE)?.value;
        let right = integrate_adaptive(f, -s, reach, &SPECTRAL_QUADRATURE)?.value;
        Ok(left + right)
    }

    /// Maximizes `L` over `s ∈ [lo, hi]`; `b* = e^{s*}`.
    pub fn argmax_l(&self, lo: f64, hi: f64, n_grid: usize, tol: f64) -> Result<OptimResult1D> {
        let failure = std::cell::RefCell::new(None);
        let r = maximize_1d(
            |s| match self.l_of_s(s) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            lo,
            hi,
            n_grid,
            tol,
        )?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }
}

/// `ln(1 + e^x)` without overflow.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tail::tail_copula_tev;

    fn sm() -> SpectralModel {
        SpectralModel::new(4.0, 0.5).unwrap()
    }

    #[test]
    fn eta_identity() {
        let s = sm();
        assert!((s.eta() * s.eta() * (1.0 - 0.25) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn density_symmetric_and_positive() {
        let s = sm();
        for k in 1..100 {
            let w = k as f64 / 100.0;
            let (a, b) = (s.h_density(w).unwrap(), s.h_density(1.0 - w).unwrap());
            assert!(a > 0.0);
            assert!((a - b).abs() <= 1e-12 * a.max(1.0), "w = {w}: {a} vs {b}");
        }
        assert!(s.h_density(0.0).is_err());
        assert!(s.h_density(1.0).is_err());
    }

    #[test]
    fn masses_balance() {
        let s = sm();
        let t5 = StudentT::new(5.0).unwrap();
        let interior = s.interior_mass().unwrap();
        assert!((interior - 2.0 * t5.cdf(s.eta() * 0.5)).abs() < 1e-9);
        assert!((2.0 * s.endpoint_mass() + interior - 2.0).abs() < 1e-9);
        assert!((s.interior_first_moment().unwrap() + s.endpoint_mass() - 1.0).abs() < 1e-9);
        assert_eq!(SpectralModel::new(3.0, 0.0).unwrap().endpoint_mass(), 0.5);
    }

    #[test]
    fn spectral_matches_closed_form() {
        let s = sm();
        for &(x, y) in &[(1.0, 1.0), (0.3, 2.0), (5.0, 0.2)] {
            let a = s.spectral_tail_copula(x, y).unwrap();
            let b = tail_copula_tev(4.0, 0.5, x, y).unwrap();
            assert!((a - b).abs() < 1e-9, "({x}, {y}): {a} vs {b}");
        }
    }

    #[test]
    fn m_forms_agree() {
        let s = sm();
        for &a in &[-3.0, -0.4, 0.0, 0.01, 0.7, 4.0, 20.0] {
            let (m1, m2) = (s.m_transform(a).unwrap(), s.m_closed_form(a));
            assert!((m1 - m2).abs() <= 1e-12 * m1.max(1e-300), "a = {a}: {m1} vs {m2}");
        }
    }

    #[test]
    fn l_at_zero_is_diagonal_tail() {
        let s = sm();
        let l0 = s.l_of_s(0.0).unwrap();
        assert!((l0 - tail_copula_tev(4.0, 0.5, 1.0, 1.0).unwrap()).abs() < 1e-10);
        let l = s.l_of_s(0.8).unwrap();
        assert!((l - tail_copula_tev(4.0, 0.5, 0.8f64.exp(), (-0.8f64).exp()).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn softplus_is_stable() {
        assert_eq!(softplus(-800.0), 0.0);
        assert_eq!(softplus(800.0), 800.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-16);
    }
}
