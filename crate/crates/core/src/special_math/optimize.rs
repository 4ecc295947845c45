//! Bounded one-dimensional maximization: a coarse grid scan followed by
//! golden-section/parabolic refinement around the best grid cell.

use serde::Serialize;

use crate::error::{Error, Result};

/// Default number of grid points for the coarse scan.
pub const DEFAULT_GRID: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimResult1D {
    pub argmax: f64,
    pub max_value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Full record of a scan: the grid, its values and the refined optimum.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScan {
    pub result: OptimResult1D,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Index of the best grid sample (smallest abscissa among ties).
    pub best_index: usize,
}

impl GridScan {
    pub fn spacing(&self) -> f64 {
        if self.grid.len() < 2 {
            0.0
        } else {
            self.grid[1] - self.grid[0]
        }
    }
}

/// Maximizes `f` on `[lo, hi]`.
///
/// The result is never worse than the best of the `n_grid` samples; ties on the
/// grid resolve to the smallest abscissa and the refinement only replaces the
/// grid optimum when it is strictly better.
pub fn maximize_1d<F>(f: F, lo: f64, hi: f64, n_grid: usize, tol: f64) -> Result<OptimResult1D>
where
    F: Fn(f64) -> f64,
{
    scan_and_refine(f, lo, hi, n_grid, tol).map(|scan| scan.result)
}

pub fn scan_and_refine<F>(f: F, lo: f64, hi: f64, n_grid: usize, tol: f64) -> Result<GridScan>
where
    F: Fn(f64) -> f64,
{
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Domain { what: "maximization interval (need lo < hi)", value: hi - lo });
    }
    if n_grid < 3 {
        return Err(Error::Domain { what: "grid size (need >= 3)", value: n_grid as f64 });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain { what: "optimization tolerance", value: tol });
    }

    let step = (hi - lo) / (n_grid - 1) as f64;
    let grid: Vec<f64> = (0..n_grid)
        .map(|i| if i + 1 == n_grid { hi } else { lo + step * i as f64 })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| sanitize(f(x))).collect();

    let best_index = argmax_first(&values);
    let left = grid[best_index.saturating_sub(1)];
    let right = grid[(best_index + 1).min(n_grid - 1)];
    let x0 = grid[best_index];
    let f0 = values[best_index];

    let refined = refine_max(&f, left, right, x0, f0, tol);
    let mut result = OptimResult1D {
        argmax: x0,
        max_value: f0,
        evaluations: n_grid + refined.evaluations,
        converged: refined.converged,
    };
    if refined.max_value > f0 {
        result.argmax = refined.argmax;
        result.max_value = refined.max_value;
    }
    Ok(GridScan { result, grid, values, best_index })
}

/// Index of the largest value, first occurrence on ties.
fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Brent's golden-section/parabolic search for a maximum inside `[lo, hi]`,
/// started from a known point `(x0, f0)`.
pub fn refine_max<F>(f: &F, lo: f64, hi: f64, x0: f64, f0: f64, tol: f64) -> OptimResult1D
where
    F: Fn(f64) -> f64,
{
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    const MAX_ITER: usize = 200;

    let g = |x: f64| -sanitize(f(x));
    let (mut a, mut b) = (lo, hi);
    let mut x = x0;
    let mut w = x0;
    let mut v = x0;
    let mut fx = -sanitize(f0);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let mut evaluations = 0;

    for _ in 0..MAX_ITER {
        let xm = 0.5 * (a + b);
        let tol1 = tol / 3.0 + 4.0 * f64::EPSILON * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            return OptimResult1D { argmax: x, max_value: -fx, evaluations, converged: true };
        }
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() >= (0.5 * q * e_prev).abs() || p <= q * (a - x) || p >= q * (b - x) {
                e = if x >= xm { a - x } else { b - x };
                d = GOLDEN * e;
            } else {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
            }
        } else {
            e = if x >= xm { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = g(u);
        evaluations += 1;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    OptimResult1D { argmax: x, max_value: -fx, evaluations, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smooth_quadratic() {
        let r = maximize_1d(|x| -(x - 0.3) * (x - 0.3), 0.0, 1.0, DEFAULT_GRID, 1e-10).unwrap();
        assert!((r.argmax - 0.3).abs() < 1e-8, "{r:?}");
        assert!(r.converged);
    }

    #[test]
    fn constant_plateau_breaks_ties_left() {
        let r = maximize_1d(|_| 2.5, -1.0, 4.0, 11, 1e-10).unwrap();
        assert_eq!(r.max_value, 2.5);
        assert_eq!(r.argmax, -1.0);
        assert!(r.converged);
    }

    #[test]
    fn kink_at_sqrt_two() {
        let f = |b: f64| (0.35 * b).min(0.7 / b);
        let r = maximize_1d(f, 0.1, 10.0, DEFAULT_GRID, 1e-12).unwrap();
        assert!((r.argmax - 2f64.sqrt()).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn boundary_maximum() {
        let r = maximize_1d(|x| x, 0.0, 1.0, 16, 1e-10).unwrap();
        assert_eq!(r.argmax, 1.0);
        assert_eq!(r.max_value, 1.0);
    }

    #[test]
    fn nan_samples_are_ignored() {
        let r = maximize_1d(|x: f64| if x < 0.5 { f64::NAN } else { -x }, 0.0, 1.0, 21, 1e-10).unwrap();
        assert!((r.argmax - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(maximize_1d(|x| x, 1.0, 0.0, 10, 1e-8).is_err());
        assert!(maximize_1d(|x| x, 0.0, 1.0, 2, 1e-8).is_err());
        assert!(maximize_1d(|x| x, 0.0, 1.0, 10, 0.0).is_err());
    }
}
