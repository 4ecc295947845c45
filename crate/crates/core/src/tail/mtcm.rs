use std::cell::RefCell;

use serde::Serialize;

use super::TailCopulaFn;
use crate::error::{Error, Result};
use crate::special_math::{scan_and_refine, DEFAULT_GRID};

/// Search settings for [`mtcm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MtcmOptions {
    /// Initial bracket `b ∈ [1/L, L]`.
    pub bound: f64,
    pub n_grid: usize,
    /// Absolute tolerance on `s = ln b`.
    pub tol: f64,
    /// Profiles whose maximum is below this are treated as degenerate.
    pub degeneracy_threshold: f64,
    /// Grid values within this (relative) distance of the best sample count as
    /// near-ties for the uniqueness flag.
    pub tie_tol: f64,
    pub max_expansions: usize,
}

impl Default for MtcmOptions {
    fn default() -> Self {
        Self {
            bound: 1e3,
            n_grid: DEFAULT_GRID,
            tol: 1e-11,
            degeneracy_threshold: 1e-10,
            tie_tol: 1e-9,
            max_expansions: 6,
        }
    }
}

/// Maximizer and maximum of the profile tail copula `b ↦ Λ(b, 1/b)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MtcmResult {
    pub b_star: f64,
    pub lambda_star: f64,
    pub unique: bool,
    pub n_evals: usize,
    /// `(b, Λ(b, 1/b))` on the final search grid.
    #[serde(skip)]
    pub profile_samples: Vec<(f64, f64)>,
    /// The maximizer stayed near the edge of the widest bracket tried.
    #[serde(skip)]
    pub near_boundary: bool,
}

/// Maximizes the profile tail copula in `s = ln b` over `[-ln L, ln L]`.
///
/// Since `Λ(b, 1/b) <= min(b, 1/b)`, any interior value above `1/L` rules out
/// the region outside the bracket; the bracket grows tenfold while the optimum
/// sits within 5% of its edge or does not exceed `1/L`.
pub fn mtcm(tail: &TailCopulaFn, opts: &MtcmOptions) -> Result<MtcmResult> {
    if !(opts.bound > 1.0) {
        return Err(Error::Domain { what: "MTCM bound (need > 1)", value: opts.bound });
    }
    let failure = RefCell::new(None);
    let profile = |s: f64| match tail.eval(s.exp(), (-s).exp()) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };

    let mut bound = opts.bound;
    let mut n_evals = 0;
    let mut expansions = 0;
    loop {
        let half = bound.ln();
        let scan = scan_and_refine(profile, -half, half, opts.n_grid, opts.tol)?;
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        n_evals += scan.result.evaluations;
        let best = scan.result.max_value;
        if !(best >= opts.degeneracy_threshold) {
            return Err(Error::DegenerateTail {
                max_profile: best,
                threshold: opts.degeneracy_threshold,
            });
        }
        let s_star = scan.result.argmax;
        let near_edge = s_star.abs() > 0.95 * half || best <= 1.0 / bound;
        if near_edge && expansions < opts.max_expansions {
            bound *= 10.0;
            expansions += 1;
            continue;
        }

        let grid_best = scan.values[scan.best_index];
        let threshold = grid_best - opts.tie_tol * grid_best.abs().max(1e-300);
        let unique = scan
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v >= threshold)
            .all(|(i, _)| i.abs_diff(scan.best_index) <= 1);

        let profile_samples = scan
            .grid
            .iter()
            .zip(&scan.values)
            .map(|(&s, &v)| (s.exp(), v))
            .collect();
        return Ok(MtcmResult {
            b_star: s_star.exp(),
            lambda_star: best,
            unique,
            n_evals,
            profile_samples,
            near_boundary: near_edge,
        });
    }
}
