use serde::Serialize;

/// A limit estimate with its spread-based error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// Aitken Δ² acceleration on the last three terms of `seq`.
///
/// Only applied when the last two increments share a sign and shrink (a
/// geometrically converging tail); otherwise the last term is returned. The
/// error is the larger of the final increment and the extrapolation shift.
pub fn aitken_tail(seq: &[f64]) -> Extrapolated {
    match seq {
        [] => Extrapolated { value: f64::NAN, error: f64::INFINITY },
        [x] => Extrapolated { value: *x, error: f64::INFINITY },
        [x1, x2] => Extrapolated { value: *x2, error: (x2 - x1).abs() },
        [.., x0, x1, x2] => {
            let d1 = x1 - x0;
            let d2 = x2 - x1;
            let spread = d2.abs();
            let ratio = d2 / d1;
            let value = if d1 != 0.0 && ratio > 0.0 && ratio < 0.999 {
                x2 - d2 * d2 / (d2 - d1)
            } else {
                *x2
            };
            Extrapolated { value, error: spread.max((value - x2).abs()) }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_geometric_tail() {
        let seq: Vec<f64> = (0..6).map(|k| 2.0 + 0.7 * 0.5f64.powi(k)).collect();
        let e = aitken_tail(&seq);
        assert!((e.value - 2.0).abs() < 1e-14);
        assert!(e.error >= (seq[5] - seq[4]).abs());
    }

    #[test]
    fn oscillating_tail_is_not_extrapolated() {
        let e = aitken_tail(&[1.0, 1.2, 1.1]);
        assert_eq!(e.value, 1.1);
        assert!((e.error - 0.1).abs() < 1e-15);
    }

    #[test]
    fn constant_sequence() {
        let e = aitken_tail(&[0.5, 0.5, 0.5]);
        assert_eq!(e.value, 0.5);
        assert_eq!(e.error, 0.0);
    }

    #[test]
    fn short_sequences() {
        assert!(aitken_tail(&[]).value.is_nan());
        assert_eq!(aitken_tail(&[3.0]).value, 3.0);
        assert_eq!(aitken_tail(&[3.0, 2.0]).error, 1.0);
    }
}
