use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, Exp1, StandardNormal};

use super::CopulaModel;
use crate::error::{check_domain, Error, Result};
use crate::special_math::brent_root;

/// Step of the central difference used for `∂C/∂u`.
pub const FD_STEP: f64 = 1e-6;

/// `P(V <= v | U = u)` as a finite difference of the CDF in `u`.
pub fn conditional_cdf(model: &CopulaModel, u: f64, v: f64) -> Result<f64> {
    let h = FD_STEP;
    let d = if u < h {
        (model.cdf(u + h, v)? - model.cdf(u, v)?) / h
    } else if u > 1.0 - h {
        (model.cdf(u, v)? - model.cdf(u - h, v)?) / h
    } else {
        (model.cdf(u + h, v)? - model.cdf(u - h, v)?) / (2.0 * h)
    };
    Ok(d.clamp(0.0, 1.0))
}

/// Draws `n` pairs from `model`, deterministically for a given seed.
///
/// Marshall–Olkin uses the exponential shock construction, Student-t the
/// normal scale mixture, and the remaining families conditional inversion.
pub fn sample(model: &CopulaModel, n: usize, seed: u64) -> Result<Vec<(f64, f64)>> {
    check_domain(n >= 1, "sample size", n as f64)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw(model, &mut rng)).collect()
}

fn draw<R: Rng>(model: &CopulaModel, rng: &mut R) -> Result<(f64, f64)> {
    match model {
        CopulaModel::Independence => Ok((rng.random(), rng.random())),
        CopulaModel::Comonotone => {
            let u: f64 = rng.random();
            Ok((u, u))
        }
        CopulaModel::MarshallOlkin { alpha, beta } => {
            // shock rates with λ12 = 1: α = 1/(λ1+1), β = 1/(λ2+1)
            let rate1 = 1.0 / alpha - 1.0;
            let rate2 = 1.0 / beta - 1.0;
            let common: f64 = rng.sample(Exp1);
            let e1: f64 = rng.sample(Exp1);
            let e2: f64 = rng.sample(Exp1);
            let x = if rate1 > 0.0 { common.min(e1 / rate1) } else { common };
            let y = if rate2 > 0.0 { common.min(e2 / rate2) } else { common };
            Ok(((-x / alpha).exp(), (-y / beta).exp()))
        }
        CopulaModel::StudentT(t) => {
            let chi = ChiSquared::new(t.nu()).map_err(|_| Error::Domain { what: "degrees of freedom", value: t.nu() })?;
            let z1: f64 = StandardNormal.sample(rng);
            let z2: f64 = StandardNormal.sample(rng);
            let w: f64 = chi.sample(rng);
            let scale = (t.nu() / w).sqrt();
            let x1 = z1 * scale;
            let x2 = (t.rho() * z1 + (1.0 - t.rho() * t.rho()).sqrt() * z2) * scale;
            Ok((t.marginal().cdf(x1), t.marginal().cdf(x2)))
        }
        CopulaModel::Fgm { .. } | CopulaModel::AsymGumbel(_) => {
            let u: f64 = rng.random();
            let p: f64 = rng.random();
            Ok((u, invert_conditional(model, u, p)?))
        }
        CopulaModel::Survival(inner) => {
            let (u, v) = draw(inner, rng)?;
            Ok((1.0 - u, 1.0 - v))
        }
    }
}

fn invert_conditional(model: &CopulaModel, u: f64, p: f64) -> Result<f64> {
    let g = |v: f64| conditional_cdf(model, u, v).map(|c| c - p).unwrap_or(f64::NAN);
    brent_root(g, 0.0, 1.0, 1e-12).map_err(|e| Error::Inversion { u, p, detail: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comonotone_pairs_lie_on_diagonal() {
        let pairs = sample(&CopulaModel::Comonotone, 1000, 7).unwrap();
        assert!(pairs.iter().all(|(u, v)| u == v));
    }

    #[test]
    fn deterministic_given_seed() {
        let m = CopulaModel::asym_gumbel(0.35, 0.7, 2.0).unwrap().survival();
        assert_eq!(sample(&m, 50, 3).unwrap(), sample(&m, 50, 3).unwrap());
        assert_ne!(sample(&m, 50, 3).unwrap(), sample(&m, 50, 4).unwrap());
    }

    #[test]
    fn samples_stay_in_unit_square() {
        let models = [
            CopulaModel::fgm(0.8).unwrap(),
            CopulaModel::marshall_olkin(1.0, 0.3).unwrap(),
            CopulaModel::student_t(3.0, 0.9).unwrap(),
        ];
        for m in &models {
            for (u, v) in sample(m, 500, 11).unwrap() {
                assert!((0.0..=1.0).contains(&u) && (0.0..=1.0).contains(&v), "{m}");
            }
        }
    }

    #[test]
    fn conditional_cdf_of_independence() {
        let c = conditional_cdf(&CopulaModel::Independence, 0.4, 0.3).unwrap();
        assert!((c - 0.3).abs() < 1e-9);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(sample(&CopulaModel::Independence, 0, 1).is_err());
    }
}
