//! Per-level search for the function of maximal dependence `φ*(u)`, the
//! path-based maximal tail dependence coefficient, and its comparison with
//! the MTCM.

use rayon::prelude::*;
use serde::Serialize;

use crate::copula::CopulaModel;
use crate::error::{check_domain, Error, Result};
use crate::schedule::Schedule;
use crate::special_math::{aitken_tail, refine_max, scan_and_refine, Extrapolated};
use crate::tail::{mtcm, MtcmOptions, TailCopulaFn};

/// Levels below this are refused: slice values scale like `u` and the CDF
/// error must stay far below `u` times the path tolerance.
pub const U_FLOOR: f64 = 1e-5;

/// Default tolerance on `ln x` for the slice refinement.
pub const DEFAULT_SLICE_TOL: f64 = 1e-10;

/// Slice values within this relative distance of the maximum count as ties.
const SLICE_TIE_TOL: f64 = 1e-13;

/// One level of the maximal path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PathPoint {
    pub u: f64,
    pub phi_star: f64,
    /// `u² / φ*(u)`.
    pub v_star: f64,
    /// `Π_{φ*}(u) = C(φ*(u), u²/φ*(u))`.
    pub pi_value: f64,
    pub ratio_b: f64,
    pub pi_over_u: f64,
    pub argmax_at_boundary: bool,
}

/// A level whose slice could not be maximized.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathFailure {
    pub u: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathResult {
    /// Successful levels in schedule order (decreasing `u`).
    pub points: Vec<PathPoint>,
    pub lambda_phi_star: Extrapolated,
    pub b_limit: Extrapolated,
    pub failures: Vec<PathFailure>,
}

/// The slice `s = ln x ↦ C(x, u²/x)` on `[ln u², 0]`, with the endpoints
/// mapped exactly so the arguments never leave the unit square.
struct Slice<'a> {
    model: &'a CopulaModel,
    u2: f64,
    lo: f64,
}

impl<'a> Slice<'a> {
    fn new(model: &'a CopulaModel, u: f64) -> Self {
        let u2 = u * u;
        Self { model, u2, lo: u2.ln() }
    }

    fn coords(&self, s: f64) -> (f64, f64) {
        if s <= self.lo {
            (self.u2, 1.0)
        } else if s >= 0.0 {
            (1.0, self.u2)
        } else {
            (s.exp().clamp(self.u2, 1.0), (self.lo - s).exp().clamp(self.u2, 1.0))
        }
    }

    fn eval(&self, s: f64) -> Result<f64> {
        let (x, y) = self.coords(s);
        self.model.cdf(x, y)
    }
}

/// Maximizes `x ↦ C(x, u²/x)` over `[u², 1]` on a grid uniform in `ln x`,
/// refined by Brent's method around the best cell.
///
/// Ties resolve to the smallest `x`; the boundary flag is raised when the
/// maximizer lies within one grid cell of either end.
pub fn maximize_slice(model: &CopulaModel, u: f64, n_grid: usize, tol: f64) -> Result<PathPoint> {
    check_domain(u > 0.0 && u <= 1.0, "u", u)?;
    if u == 1.0 {
        return Ok(point(u, 1.0, 1.0, model.cdf(1.0, 1.0)?, true));
    }
    let slice = Slice::new(model, u);
    let failure = std::cell::RefCell::new(None);
    let f = |s: f64| match slice.eval(s) {
        Ok(v) => v,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        }
    };
    let scan = scan_and_refine(f, slice.lo, 0.0, n_grid, tol)?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let mut s = scan.result.argmax;
    let mut value = scan.result.max_value;
    // rounding noise on a flat slice must not beat the smallest-x tie-break
    let floor = value - SLICE_TIE_TOL * value.abs();
    if let Some(i) = scan.values.iter().position(|&v| v >= floor) {
        if i < scan.best_index {
            s = scan.grid[i];
            value = scan.values[i];
        }
    }
    let boundary = s - slice.lo <= scan.spacing() || -s <= scan.spacing();
    let (x, y) = slice.coords(s);
    Ok(point(u, x, y, value, boundary))
}

fn point(u: f64, x: f64, y: f64, pi_value: f64, boundary: bool) -> PathPoint {
    PathPoint {
        u,
        phi_star: x,
        v_star: y,
        pi_value,
        ratio_b: x / u,
        pi_over_u: pi_value / u,
        argmax_at_boundary: boundary,
    }
}

/// Tries the hint `x = b·u` from the previous level: a local search in the
/// hint's grid cell replaces the slice maximum only if strictly better.
fn apply_hint(model: &CopulaModel, p: PathPoint, b_hint: f64, n_grid: usize, tol: f64) -> PathPoint {
    let slice = Slice::new(model, p.u);
    let s_hint = (b_hint * p.u).ln();
    if !(s_hint > slice.lo && s_hint < 0.0) {
        return p;
    }
    let cell = -slice.lo / (n_grid - 1) as f64;
    let (a, b) = ((s_hint - cell).max(slice.lo), (s_hint + cell).min(0.0));
    let f = |s: f64| slice.eval(s).unwrap_or(f64::NAN);
    let f0 = f(s_hint);
    let r = refine_max(&f, a, b, s_hint, f0, tol);
    let (s_best, v_best) = if r.max_value > f0 { (r.argmax, r.max_value) } else { (s_hint, f0) };
    if v_best > p.pi_value + SLICE_TIE_TOL * p.pi_value.abs() {
        let (x, y) = slice.coords(s_best);
        let boundary = s_best - slice.lo <= cell || -s_best <= cell;
        point(p.u, x, y, v_best, boundary)
    } else {
        p
    }
}

/// Maximizes every slice of the schedule and extrapolates `Π_{φ*}(u)/u` and
/// `φ*(u)/u` to `u ↓ 0` by Aitken's Δ² on the last three levels.
///
/// Slices run in parallel with full grids; a sequential pass then offers each
/// level the previous maximizer as an advisory hint, so the result does not
/// depend on the thread count.
pub fn trace_path(model: &CopulaModel, schedule: &Schedule, n_grid: usize, tol: f64) -> Result<PathResult> {
    if schedule.smallest() < U_FLOOR {
        return Err(Error::Schedule(format!("smallest u {} is below the floor {U_FLOOR}", schedule.smallest())));
    }
    let slices: Vec<(f64, Result<PathPoint>)> = schedule
        .as_slice()
        .par_iter()
        .map(|&u| (u, maximize_slice(model, u, n_grid, tol)))
        .collect();

    let mut points: Vec<PathPoint> = Vec::with_capacity(slices.len());
    let mut failures = Vec::new();
    for (u, r) in slices {
        match r {
            Ok(p) => {
                let p = match points.last() {
                    Some(prev) => apply_hint(model, p, prev.ratio_b, n_grid, tol),
                    None => p,
                };
                points.push(p);
            }
            Err(e) => failures.push(PathFailure { u, message: e.to_string() }),
        }
    }
    if points.is_empty() {
        return Err(Error::NoConvergence {
            op: "trace_path",
            detail: format!("every level failed; first: {}", failures[0].message),
        });
    }
    let pi: Vec<f64> = points.iter().map(|p| p.pi_over_u).collect();
    let ratio: Vec<f64> = points.iter().map(|p| p.ratio_b).collect();
    let mut lambda_phi_star = aitken_tail(&pi);
    lambda_phi_star.value = lambda_phi_star.value.clamp(0.0, 1.0);
    Ok(PathResult { points, lambda_phi_star, b_limit: aitken_tail(&ratio), failures })
}

/// Allowed gaps between the path-based and profile-based quantities, on top
/// of the extrapolation error estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceBudget {
    pub lambda: f64,
    pub b: f64,
}

impl Default for EquivalenceBudget {
    fn default() -> Self {
        Self { lambda: 0.01, b: 0.02 }
    }
}

/// Side-by-side comparison of `(λ*, b*)` with `(λ_{φ*}, lim φ*(u)/u)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivalenceReport {
    pub lambda_star: f64,
    pub lambda_phi_star: Extrapolated,
    pub lambda_gap: f64,
    pub lambda_budget: f64,
    pub b_star: f64,
    pub b_limit: Extrapolated,
    pub b_gap: f64,
    pub b_budget: f64,
    pub b_star_unique: bool,
    pub violation: bool,
}

/// Solves both sides and flags a violation when either gap exceeds its
/// budget. Fails with a degenerate-tail error when the tail copula vanishes,
/// in which case there is nothing to compare.
pub fn equivalence_report(
    model: &CopulaModel,
    tail: &TailCopulaFn,
    schedule: &Schedule,
    n_grid: usize,
    tol: f64,
    budget: EquivalenceBudget,
) -> Result<EquivalenceReport> {
    let m = mtcm(tail, &MtcmOptions::default())?;
    let path = trace_path(model, schedule, n_grid, tol)?;
    let lambda_gap = (path.lambda_phi_star.value - m.lambda_star).abs();
    let b_gap = (path.b_limit.value - m.b_star).abs();
    let lambda_budget = budget.lambda + path.lambda_phi_star.error;
    let b_budget = budget.b + path.b_limit.error;
    Ok(EquivalenceReport {
        lambda_star: m.lambda_star,
        lambda_phi_star: path.lambda_phi_star,
        lambda_gap,
        lambda_budget,
        b_star: m.b_star,
        b_limit: path.b_limit,
        b_gap,
        b_budget,
        b_star_unique: m.unique,
        violation: !(lambda_gap <= lambda_budget && b_gap <= b_budget),
    })
}
