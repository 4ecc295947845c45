//! Adaptive Gauss–Kronrod (7/15) quadrature on finite and infinite ranges.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and work limit for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > 0.0) {
            return Err(Error::Domain { what: "abs_tol", value: abs_tol });
        }
        if !(rel_tol >= 0.0) {
            return Err(Error::Domain { what: "rel_tol", value: rel_tol });
        }
        if max_subdivisions == 0 {
            return Err(Error::Domain { what: "max_subdivisions", value: 0.0 });
        }
        Ok(Self { abs_tol, rel_tol, max_subdivisions })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 500 }
    }
}

/// Value of an integral together with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod panel with the QUADPACK error heuristic. Nodes are
/// interior, so integrable endpoint singularities are never evaluated.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut res_k = f_center * WGK[7];
    let mut res_g = f_center * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Segment { a, b, value, error }
}

fn adaptive_finite<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let first = gk15(f, a, b);
    let mut evaluations = 15;
    let mut heap = BinaryHeap::new();
    // segments too narrow to split further keep their error but leave the queue
    let mut frozen_value = 0.0;
    let mut frozen_error = 0.0;
    heap.push(first);
    let mut value = first.value;
    let mut error = first.error;
    let mut subdivisions = 1;

    loop {
        if !value.is_finite() || !error.is_finite() {
            return Err(Error::NoConvergence {
                op: "integrate_adaptive",
                detail: format!("non-finite integrand on [{a}, {b}]"),
            });
        }
        let tol = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= tol {
            break;
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::NoConvergence {
                op: "integrate_adaptive",
                detail: format!(
                    "error {error:e} above tolerance {tol:e} after {subdivisions} subdivisions on [{a}, {b}]"
                ),
            });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        let scale = worst.a.abs().max(worst.b.abs()).max(f64::MIN_POSITIVE);
        if worst.b - worst.a <= 100.0 * f64::EPSILON * scale || mid <= worst.a || mid >= worst.b {
            frozen_value += worst.value;
            frozen_error += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        evaluations += 30;
        subdivisions += 1;
        heap.push(left);
        heap.push(right);
        value = frozen_value;
        error = frozen_error;
        for s in heap.iter() {
            value += s.value;
            error += s.error;
        }
    }

    let mut value = frozen_value;
    let mut error_sum = frozen_error;
    for s in heap.iter() {
        value += s.value;
        error_sum += s.error;
    }
    Ok(Integral { value, error: error_sum, evaluations })
}

/// Integrates `f` over `(a, b)`, where either bound may be infinite.
///
/// Infinite ranges are mapped onto finite ones (`x = a + t/(1-t)` for a
/// right-infinite range, its mirror for a left-infinite one, and
/// `x = t/(1-t^2)` for the whole line).
pub fn integrate_adaptive<F>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64) -> f64,
{
    if a.is_nan() || b.is_nan() || !(a < b) {
        return Err(Error::Domain { what: "integration bounds (need a < b)", value: b - a });
    }
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive_finite(&f, a, b, spec),
        (true, false) => {
            let g = |t: f64| {
                let s = 1.0 - t;
                let x = a + t / s;
                if x.is_finite() {
                    f(x) / (s * s)
                } else {
                    0.0
                }
            };
            adaptive_finite(&g, 0.0, 1.0, spec)
        }
        (false, true) => {
            let g = |t: f64| {
                let s = 1.0 - t;
                let x = b - t / s;
                if x.is_finite() {
                    f(x) / (s * s)
                } else {
                    0.0
                }
            };
            adaptive_finite(&g, 0.0, 1.0, spec)
        }
        (false, false) => {
            let g = |t: f64| {
                let s = 1.0 - t * t;
                let x = t / s;
                if x.is_finite() {
                    f(x) * (1.0 + t * t) / (s * s)
                } else {
                    0.0
                }
            };
            adaptive_finite(&g, -1.0, 1.0, spec)
        }
    }
}
