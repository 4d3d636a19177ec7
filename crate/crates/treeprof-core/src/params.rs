//! Model parameters for the random m-ary search tree with pivot balance t.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Parameters of the splitting model.
///
/// A node of the tree holds up to `m - 1` keys and has `m` subtrees. Splits are
/// generated by sampling `r = m*t + m - 1` keys and using every `(t+1)`-st
/// order statistic as a pivot, so larger `t` gives more balanced splits.
/// `(m, t) = (2, 0)` is the ordinary binary search tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelParams {
    /// Branching factor (`m >= 2`).
    pub m: u64,
    /// Pivot-balance parameter (`t >= 0`).
    pub t: u64,
}

impl ModelParams {
    /// Validates and builds the parameter pair.
    pub fn new(m: u64, t: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParams(format!("m = {m}, need m >= 2")));
        }
        // The DP weights use f64 binomials; d <= 64 keeps every intermediate
        // comfortably inside the double range for the table sizes we support.
        let d = (m - 1) * (t + 1);
        if d > 64 {
            return Err(Error::InvalidParams(format!(
                "(m-1)(t+1) = {d} too large, need <= 64"
            )));
        }
        Ok(Self { m, t })
    }

    /// Number of sampled keys per split: `r = m*t + m - 1`.
    #[inline]
    pub fn r(&self) -> u64 {
        self.m * self.t + self.m - 1
    }

    /// Degree of the growth function F: `d = (m-1)(t+1)`.
    #[inline]
    pub fn d(&self) -> u64 {
        (self.m - 1) * (self.t + 1)
    }

    /// Binary search tree shorthand.
    pub fn bst() -> Self {
        Self { m: 2, t: 0 }
    }
}

impl std::fmt::Display for ModelParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(m={}, t={})", self.m, self.t)
    }
}
