//! The singular curve `(1-x)^α = (1-u²/x)^β` of the survival Marshall–Olkin
//! copula, its closed form when `β = 2α`, and its comparison with the maximal
//! path.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::path::PathResult;
use crate::schedule::Schedule;
use crate::special_math::brent_root;

/// Relative inset of the root bracket from `u²` and from `1`.
const BRACKET_INSET: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingularCurvePoint {
    pub u: f64,
    pub x_star: f64,
    /// `u² / x*`.
    pub v_star: f64,
    /// `(1-x*)^α - (1-u²/x*)^β`.
    pub residual: f64,
    /// `x* / u`.
    pub ratio: f64,
}

/// `h_u(x) = α ln(1-x) - β ln(1-u²/x)`, strictly decreasing on `(u², 1)`.
pub fn h_u(alpha: f64, beta: f64, u: f64, x: f64) -> f64 {
    let u2 = u * u;
    alpha * (-x).ln_1p() - beta * ((x - u2) / x).ln()
}

fn residual(alpha: f64, beta: f64, u: f64, x: f64) -> f64 {
    (1.0 - x).powf(alpha) - ((x - u * u) / x).powf(beta)
}

/// The unique solution of `(1-x)^α = (1-u²/x)^β` in `[u², 1]`.
pub fn singular_root(alpha: f64, beta: f64, u: f64) -> Result<SingularCurvePoint> {
    check_domain(alpha > 0.0 && alpha <= 1.0, "alpha", alpha)?;
    check_domain(beta > 0.0 && beta <= 1.0, "beta", beta)?;
    check_domain(u > 0.0 && u <= 1.0, "u", u)?;
    if u == 1.0 {
        return Ok(SingularCurvePoint { u, x_star: 1.0, v_star: 1.0, residual: 0.0, ratio: 1.0 });
    }
    let u2 = u * u;
    let h = |x: f64| h_u(alpha, beta, u, x);
    let mut lo = u2 * (1.0 + BRACKET_INSET);
    let mut hi = 1.0 - BRACKET_INSET;
    if !(h(lo) > 0.0 && h(hi) < 0.0) {
        // h diverges at both ends, so the sign change appears closer in
        lo = next_up(u2);
        hi = 1.0 - f64::EPSILON / 2.0;
    }
    let tol = f64::EPSILON * u2;
    let x = brent_root(h, lo, hi, tol).map_err(|e| Error::NoConvergence {
        op: "singular_root",
        detail: format!("u = {u}: {e}"),
    })?;
    Ok(SingularCurvePoint { u, x_star: x, v_star: u2 / x, residual: residual(alpha, beta, u, x), ratio: x / u })
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// Solves the curve at every level of the schedule.
pub fn singular_curve(alpha: f64, beta: f64, schedule: &Schedule) -> Result<Vec<SingularCurvePoint>> {
    schedule.iter().map(|u| singular_root(alpha, beta, u)).collect()
}

/// `P_u(x) = x³ - 2u²x + u⁴`, whose zeros are the curve points when `β = 2α`.
pub fn cubic(u: f64, x: f64) -> f64 {
    let u2 = u * u;
    x * x * x - 2.0 * u2 * x + u2 * u2
}

/// Trigonometric roots `2u sqrt(2/3) cos(acos(-3 sqrt(6) u / 8)/3 + 2πk/3)`,
/// `k = 0, 1, 2`; ordered as `x⁽¹⁾ < 0 < x⁽²⁾ < x⁽⁰⁾ <= 1`.
pub fn cardano_roots(u: f64) -> Result<[f64; 3]> {
    check_domain(u > 0.0 && u <= 1.0, "u", u)?;
    let amp = 2.0 * u * (2.0f64 / 3.0).sqrt();
    let theta = (-3.0 * 6f64.sqrt() * u / 8.0).acos() / 3.0;
    Ok([0, 1, 2].map(|k| amp * (theta + 2.0 * PI * k as f64 / 3.0).cos()))
}

/// One row of the path/curve comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub u: f64,
    pub phi_ratio: f64,
    pub x_ratio: f64,
    pub target: f64,
    /// `|φ*(u) - x*_u| / u`.
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub rows: Vec<AsymptoticRow>,
    /// `sqrt(β/α)`.
    pub target: f64,
    pub tolerance: f64,
    /// Both ratios at the smallest level lie within `tolerance` of the target.
    pub converged: bool,
}

/// Compares `φ*(u)/u` from a traced survival-MO path with `x*_u/u` and the
/// limit `sqrt(β/α)`, row by row. The path must cover exactly the schedule.
pub fn asymptotic_report(
    alpha: f64,
    beta: f64,
    schedule: &Schedule,
    path: &PathResult,
    tolerance: f64,
) -> Result<AsymptoticReport> {
    let path_us: Vec<f64> = path.points.iter().map(|p| p.u).collect();
    if path_us != schedule.as_slice() {
        return Err(Error::Schedule(format!(
            "path levels {path_us:?} do not match the schedule {schedule}"
        )));
    }
    let target = (beta / alpha).sqrt();
    let curve = singular_curve(alpha, beta, schedule)?;
    let rows: Vec<AsymptoticRow> = path
        .points
        .iter()
        .zip(&curve)
        .map(|(p, c)| AsymptoticRow {
            u: p.u,
            phi_ratio: p.ratio_b,
            x_ratio: c.ratio,
            target,
            gap: (p.phi_star - c.x_star).abs() / p.u,
        })
        .collect();
    let last = rows.last().expect("schedules are never empty");
    let converged = (last.phi_ratio - target).abs() <= tolerance && (last.x_ratio - target).abs() <= tolerance;
    Ok(AsymptoticReport { rows, target, tolerance, converged })
}
