//! Decreasing sequences of `u` values shared by the path search and the
//! singular-curve solver, so their rows line up exactly.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// A strictly decreasing list of levels in `(0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Schedule(Vec<f64>);

impl Schedule {
    pub fn new(us: Vec<f64>) -> Result<Self> {
        if us.is_empty() {
            return Err(Error::Schedule("empty".into()));
        }
        if let Some(&u) = us.iter().find(|&&u| !(u > 0.0 && u <= 1.0)) {
            return Err(Error::Schedule(format!("{u} is outside (0, 1]")));
        }
        if let Some(w) = us.windows(2).find(|w| w[1] >= w[0]) {
            return Err(Error::Schedule(format!("not strictly decreasing at {} -> {}", w[0], w[1])));
        }
        Ok(Self(us))
    }

    /// `10^{-1}, 10^{-1.5}, ..., 10^{-4}`.
    pub fn decades(from_exp: f64, to_exp: f64, per_decade: usize) -> Result<Self> {
        if per_decade == 0 || !(from_exp <= to_exp) || from_exp < 0.0 {
            return Err(Error::Schedule(format!("bad decade range {from_exp}..{to_exp} x{per_decade}")));
        }
        let n = ((to_exp - from_exp) * per_decade as f64).round() as usize;
        Self::new((0..=n).map(|k| 10f64.powf(-(from_exp + k as f64 / per_decade as f64))).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The smallest (last) level.
    pub fn smallest(&self) -> f64 {
        *self.0.last().expect("schedules are never empty")
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.0.iter().copied()
    }
}

impl Default for Schedule {
    fn default() -> Self {
        Self::decades(1.0, 4.0, 2).expect("valid default schedule")
    }
}

/// Parses `default` or a comma-separated list such as `0.1,0.01,1e-3`.
impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("default") {
            return Ok(Self::default());
        }
        let us = s
            .split(',')
            .map(|item| {
                item.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Schedule(format!("cannot parse {item:?} as a number")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(us)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, u) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{u}")?;
        }
        Ok(())
    }
}
