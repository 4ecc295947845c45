use crate::error::{check_domain, Result};

/// Asymmetric logistic Pickands dependence function
/// `A(w) = (1-α)w + (1-β)(1-w) + ((αw)^θ + (β(1-w))^θ)^{1/θ}`.
///
/// The argument is the share of the first margin, `w = x/(x+y)`, so that the
/// stable tail dependence function reads `ℓ(x, y) = (x+y) A(x/(x+y))` and the
/// `θ → ∞` limit is the Marshall–Olkin copula with the same `(α, β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PickandsFn {
    alpha: f64,
    beta: f64,
    theta: f64,
}

impl PickandsFn {
    pub fn new(alpha: f64, beta: f64, theta: f64) -> Result<Self> {
        check_domain(alpha > 0.0 && alpha <= 1.0, "alpha", alpha)?;
        check_domain(beta > 0.0 && beta <= 1.0, "beta", beta)?;
        check_domain(theta > 1.0 && theta.is_finite(), "theta", theta)?;
        Ok(Self { alpha, beta, theta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn eval(&self, w: f64) -> f64 {
        let w = w.clamp(0.0, 1.0);
        (1.0 - self.alpha) * w
            + (1.0 - self.beta) * (1.0 - w)
            + lp_norm(self.alpha * w, self.beta * (1.0 - w), self.theta)
    }

    /// Stable tail dependence function `ℓ(x, y)` for `x, y >= 0`.
    pub fn stdf(&self, x: f64, y: f64) -> f64 {
        (1.0 - self.alpha) * x + (1.0 - self.beta) * y + lp_norm(self.alpha * x, self.beta * y, self.theta)
    }

    /// `x + y - ℓ(x, y)`, the tail copula of the survival copula, written
    /// without the cancellation of the direct difference.
    pub fn tail(&self, x: f64, y: f64) -> f64 {
        let (ax, by) = (self.alpha * x, self.beta * y);
        let (hi, lo) = (ax.max(by), ax.min(by));
        if hi == 0.0 {
            return 0.0;
        }
        // hi + lo - hi (1 + r^θ)^{1/θ} = lo - hi ((1 + r^θ)^{1/θ} - 1)
        let r_pow = (lo / hi).powf(self.theta);
        (lo - hi * (r_pow.ln_1p() / self.theta).exp_m1()).max(0.0)
    }
}

/// `(a^θ + b^θ)^{1/θ}` for `a, b >= 0`, scaled to avoid overflow.
fn lp_norm(a: f64, b: f64, theta: f64) -> f64 {
    let hi = a.max(b);
    if hi == 0.0 || hi.is_infinite() {
        return hi;
    }
    let lo = a.min(b);
    hi * (1.0 + (lo / hi).powf(theta)).powf(1.0 / theta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_and_bounds() {
        let a = PickandsFn::new(0.35, 0.7, 2.0).unwrap();
        assert!((a.eval(0.0) - 1.0).abs() < 1e-15);
        assert!((a.eval(1.0) - 1.0).abs() < 1e-15);
        for i in 0..=1000 {
            let w = i as f64 / 1000.0;
            let v = a.eval(w);
            assert!(v <= 1.0 + 1e-15 && v >= w.max(1.0 - w) - 1e-15, "w={w} A={v}");
        }
    }

    #[test]
    fn stdf_matches_pickands_form() {
        let a = PickandsFn::new(0.2, 0.9, 3.5).unwrap();
        for &(x, y) in &[(1.0, 1.0), (0.3, 2.0), (5.0, 0.01)] {
            let via_a = (x + y) * a.eval(x / (x + y));
            assert!((a.stdf(x, y) - via_a).abs() < 1e-14);
            assert!((a.tail(x, y) - (x + y - via_a)).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(PickandsFn::new(0.0, 0.5, 2.0).is_err());
        assert!(PickandsFn::new(0.5, 1.2, 2.0).is_err());
        assert!(PickandsFn::new(0.5, 0.5, 1.0).is_err());
    }
}
