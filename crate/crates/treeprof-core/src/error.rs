//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Crate-wide error enumeration.
#[derive(Debug, Error)]
pub enum Error {
    /// Model parameters violate `m >= 2` or `t >= 0` (or a configured cap).
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// An operation was called with `n` below the threshold it requires.
    #[error("key count n = {n} below required minimum {min} for {what}")]
    KeyCountBelowMinimum { n: u64, min: u64, what: &'static str },

    /// The degenerate two-way split has no free second coordinate.
    #[error("pair split is degenerate for m = 2: second subtree size is forced to n - 1 - l1")]
    DegeneratePair,

    /// Brute-force enumeration was asked for an `n` above its configured cap.
    #[error("enumeration cap exceeded: n = {n} > cap = {cap}")]
    EnumerationCapExceeded { n: u64, cap: u64 },

    /// Second-moment tables for m >= 3 are limited by a size cap.
    #[error("second-moment table for m >= 3 capped at N = {cap}, requested N = {requested}")]
    SecondMomentCapExceeded { requested: usize, cap: usize },

    /// Evaluation at (or too close to) a pole of the log-derivative sums.
    #[error("log-derivative pole: theta + {offset} ~ 0 (|value| = {magnitude:.3e})")]
    LogDerivativePole { offset: u64, magnitude: f64 },

    /// The simultaneous root iteration did not reach the residual tolerance.
    #[error("root finding did not converge after {iterations} iterations; worst residual {residual:.3e}")]
    RootsNotConverged { iterations: usize, residual: f64 },

    /// A monotone bracketing search failed to enclose a sign change.
    #[error("bracketing failure while solving {what}: no sign change on [{lo:.6}, {hi:.6}]")]
    BracketingFailure { what: &'static str, lo: f64, hi: f64 },

    /// Argument lies outside the open interval a formula is valid on.
    #[error("{what} = {value:.6} outside required open interval ({lo:.6}, {hi:.6})")]
    OutsideInterval { what: &'static str, value: f64, lo: f64, hi: f64 },

    /// Evaluation point escapes the domain where F is positive.
    #[error("domain violation: {0}")]
    DomainViolation(String),

    /// Discrete inversion needs a modulus strictly larger than the polynomial degree.
    #[error("inversion modulus M = {m} too small for n = {n}: need M >= n + 1")]
    ModulusTooSmall { m: usize, n: usize },

    /// A requested mean is zero, so a ratio statistic is undefined.
    #[error("expected profile value vanishes at (n = {n}, k = {k}); ratio undefined")]
    ZeroMean { n: usize, k: usize },

    /// Sample sets too small for a distance estimate.
    #[error("sample set too small: {len} < minimum {min}")]
    SampleTooSmall { len: usize, min: usize },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
