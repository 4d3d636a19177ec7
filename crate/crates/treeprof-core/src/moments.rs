//! Exact dynamic-programming moments of profiles and profile polynomials.
//!
//! Everything here evaluates recurrences of the form
//! `h(n) = m Σ_l p_{n,l} h(l) (+ extras)` where `p_{n,l}` is the split
//! marginal in force at `n`. The binomial weights are never materialized:
//! a streaming cascade maintains the sums `A_j(n) = Σ_l C(l,t) C(n-1-l,j) h(l)`
//! via Pascal updates, so one full pass over `n` costs `O(N (m-1)(t+1))`
//! instead of `O(N²)`. All tables are in double precision; the rational
//! oracle in [`crate::oracle`] is the reference they are tested against.

use crate::error::{Error, Result};
use crate::model::binom_f64;
use crate::params::ModelParams;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

/// Default row cap for second-moment series when `m >= 3` (the cross term is
/// the expensive part of the recursion).
pub const SECOND_MOMENT_DEFAULT_CAP: usize = 400;

/// Table of expected per-level counts: `mean[n][k] = E X_{n,k}` (or the
/// external analog).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentTable {
    pub params: ModelParams,
    pub mean: Vec<Vec<f64>>,
}

impl MomentTable {
    /// Largest tabulated n.
    pub fn n_max(&self) -> usize {
        self.mean.len() - 1
    }

    /// Largest tabulated level.
    pub fn k_max(&self) -> usize {
        self.mean.first().map(|r| r.len() - 1).unwrap_or(0)
    }

    /// `E X_{n,k}`, zero beyond the tabulated level range.
    pub fn value(&self, n: usize, k: usize) -> f64 {
        self.mean[n].get(k).copied().unwrap_or(0.0)
    }

    /// Sum of a row over tabulated levels.
    pub fn row_sum(&self, n: usize) -> f64 {
        self.mean[n].iter().sum()
    }
}

/// `G_n(z) = E W_n(z)` for `n = 0..=N`, optionally with `E |W_n(z)|²`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexMomentSeries {
    pub z: Complex64,
    pub g: Vec<Complex64>,
    pub g2: Option<Vec<f64>>,
}

/// Scalar the cascade can run over (f64 or Complex64).
pub(crate) trait CascadeValue:
    Copy
    + Default
    + std::ops::AddAssign
    + std::ops::Add<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Mul<f64, Output = Self>
    + std::ops::Div<f64, Output = Self>
{
    fn from_f64(x: f64) -> Self;
}

impl CascadeValue for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
}

impl CascadeValue for Complex64 {
    fn from_f64(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
}

/// Streaming evaluator of the split-expectation map `n ↦ m Σ_l p_{n,l} f(l)`.
///
/// Values `f(0), f(1), …` are fed in order; before feeding `f(n)` the map
/// value at `n` (which depends on `f(l)` for `l < n` only) can be read. The
/// supplementary uniform-subset law is applied automatically for
/// `m <= n < r`.
pub(crate) struct SplitCascade<T> {
    m: u64,
    t: u64,
    r: u64,
    q: u64,
    next: u64,
    hist: Vec<T>,
    acc: Vec<T>,
}

impl<T: CascadeValue> SplitCascade<T> {
    pub(crate) fn new(params: &ModelParams) -> Self {
        let r = params.r();
        let q = r - params.t - 1;
        Self {
            m: params.m,
            t: params.t,
            r,
            q,
            next: 0,
            hist: Vec::with_capacity(r as usize),
            acc: vec![T::default(); q as usize + 1],
        }
    }

    /// Map value at the current index `n` (defined for `n >= m`).
    pub(crate) fn value(&self) -> T {
        let n = self.next;
        debug_assert!(n >= self.m, "split map undefined below n = m");
        // Scale by m and divide by the binomial denominator last: when the
        // weighted sum is an exact integer multiple of the denominator (e.g.
        // the z = 1 recursion, where the map must return n − m + 1 exactly),
        // the division then rounds to the exact value.
        if n < self.r {
            // Supplementary regime: the t = 0 law with m - 1 pivots.
            let mut s = T::default();
            for (l, f) in self.hist.iter().enumerate() {
                s += *f * binom_f64(n - 1 - l as u64, self.m - 2);
            }
            s * self.m as f64 / binom_f64(n, self.m - 1)
        } else {
            self.acc[self.q as usize] * self.m as f64 / binom_f64(n, self.r)
        }
    }

    /// Feeds `f(n)` for the current index and advances to `n + 1`.
    pub(crate) fn feed(&mut self, v: T) {
        let n = self.next;
        if n < self.r {
            self.hist.push(v);
            if n + 1 == self.r {
                // Direct initialization of A_j(r) from the stored prefix.
                for j in 0..=self.q {
                    let mut s = T::default();
                    for (l, f) in self.hist.iter().enumerate() {
                        let w = binom_f64(l as u64, self.t)
                            * binom_f64(self.r - 1 - l as u64, j);
                        s += *f * w;
                    }
                    self.acc[j as usize] = s;
                }
            }
        } else {
            // A_j(n+1) = A_j(n) + A_{j-1}(n), plus the fresh l = n term in A_0.
            for j in (1..=self.q as usize).rev() {
                let prev = self.acc[j - 1];
                self.acc[j] += prev;
            }
            self.acc[0] += v * binom_f64(n, self.t);
        }
        self.next += 1;
    }
}

/// Expected key profile `E X_{n,k}` for `n <= n_max`, `k <= k_max`.
pub fn expected_profile_table(params: &ModelParams, n_max: usize, k_max: usize) -> MomentTable {
    let m = params.m;
    let mut mean = vec![vec![0.0f64; k_max + 1]; n_max + 1];
    for (n, row) in mean.iter_mut().enumerate() {
        row[0] = if (n as u64) < m { n as f64 } else { (m - 1) as f64 };
    }
    let mut prev: Vec<f64> = mean.iter().map(|row| row[0]).collect();
    for k in 1..=k_max {
        let mut cas = SplitCascade::<f64>::new(params);
        for n in 0..=n_max {
            if n as u64 >= m {
                mean[n][k] = cas.value();
            }
            cas.feed(prev[n]);
        }
        for n in 0..=n_max {
            prev[n] = mean[n][k];
        }
    }
    MomentTable {
        params: *params,
        mean,
    }
}

/// Expected external (free-position) profile `E Y_{n,k}`.
pub fn expected_external_table(params: &ModelParams, n_max: usize, k_max: usize) -> MomentTable {
    let m = params.m;
    let mut mean = vec![vec![0.0f64; k_max + 1]; n_max + 1];
    for (n, row) in mean.iter_mut().enumerate() {
        if (n as u64) + 1 < m {
            row[0] = (m - 1 - n as u64) as f64;
        }
    }
    let mut prev: Vec<f64> = mean.iter().map(|row| row[0]).collect();
    for k in 1..=k_max {
        let mut cas = SplitCascade::<f64>::new(params);
        for n in 0..=n_max {
            if n as u64 + 1 == m {
                // Full root with m empty children.
                mean[n][k] = m as f64 * prev[0];
            } else if n as u64 >= m {
                mean[n][k] = cas.value();
            }
            cas.feed(prev[n]);
        }
        for n in 0..=n_max {
            prev[n] = mean[n][k];
        }
    }
    MomentTable {
        params: *params,
        mean,
    }
}

/// Single expected profile value `E X_{n,k}` in O(n·k·(t+1)) time and O(n)
/// memory (no full table).
pub fn expected_profile_at(params: &ModelParams, n: usize, k: usize) -> f64 {
    let m = params.m;
    let mut prev: Vec<f64> = (0..=n)
        .map(|i| {
            if (i as u64) < m {
                i as f64
            } else {
                (m - 1) as f64
            }
        })
        .collect();
    for _ in 1..=k {
        let mut cas = SplitCascade::<f64>::new(params);
        let mut col = vec![0.0f64; n + 1];
        for (i, value) in prev.iter().enumerate() {
            if i as u64 >= m {
                col[i] = cas.value();
            }
            cas.feed(*value);
        }
        prev = col;
    }
    prev[n]
}

/// Single expected external profile value `E Y_{n,k}`.
pub fn expected_external_at(params: &ModelParams, n: usize, k: usize) -> f64 {
    let m = params.m;
    let mut prev: Vec<f64> = (0..=n)
        .map(|i| {
            if (i as u64) + 1 < m {
                (m - 1 - i as u64) as f64
            } else {
                0.0
            }
        })
        .collect();
    for _ in 1..=k {
        let mut cas = SplitCascade::<f64>::new(params);
        let mut col = vec![0.0f64; n + 1];
        for (i, value) in prev.iter().enumerate() {
            if i as u64 + 1 == m {
                col[i] = m as f64 * prev[0];
            } else if i as u64 >= m {
                col[i] = cas.value();
            }
            cas.feed(*value);
        }
        prev = col;
    }
    prev[n]
}

/// Generic expected-profile-polynomial recursion over a cascade scalar.
pub(crate) fn expected_w_series<T: CascadeValue>(
    params: &ModelParams,
    z: T,
    n_max: usize,
) -> Vec<T> {
    let m = params.m;
    let constant = T::from_f64((m - 1) as f64);
    let mut g: Vec<T> = Vec::with_capacity(n_max + 1);
    let mut cas = SplitCascade::<T>::new(params);
    for n in 0..=n_max {
        let val = if (n as u64) < m {
            T::from_f64(n as f64)
        } else {
            z * cas.value() + constant
        };
        g.push(val);
        cas.feed(val);
    }
    g
}

/// `G_n(z) = E W_n(z)` for `n = 0..=n_max`.
pub fn expected_w(params: &ModelParams, z: Complex64, n_max: usize) -> ComplexMomentSeries {
    ComplexMomentSeries {
        z,
        g: expected_w_series(params, z, n_max),
        g2: None,
    }
}

/// Generic external-polynomial recursion: `E U_n(z) = m z Σ p E U_l(z)` for
/// `n >= m - 1`, with `E U_n(z) = m - 1 - n` below.
pub(crate) fn expected_u_series<T: CascadeValue>(
    params: &ModelParams,
    z: T,
    n_max: usize,
) -> Vec<T> {
    let m = params.m;
    let mut u: Vec<T> = Vec::with_capacity(n_max + 1);
    let mut cas = SplitCascade::<T>::new(params);
    for n in 0..=n_max {
        let val = if (n as u64) + 1 < m {
            T::from_f64((m - 1 - n as u64) as f64)
        } else if (n as u64) + 1 == m {
            // Full root, m empty children one level down.
            z * u[0] * (m as f64)
        } else {
            z * cas.value()
        };
        u.push(val);
        cas.feed(val);
    }
    u
}

/// `E U_n(z)`, the expected external (free-position) profile polynomial.
pub fn expected_external_w(params: &ModelParams, z: Complex64, n_max: usize) -> ComplexMomentSeries {
    ComplexMomentSeries {
        z,
        g: expected_u_series(params, z, n_max),
        g2: None,
    }
}

/// `E W'_n(z)` for real `z >= 0`: the derivative recurrence
/// `E W'_n = m z Σ p E W'_l + m Σ p G_l`.
pub fn expected_w_derivative(params: &ModelParams, z: f64, n_max: usize) -> Result<Vec<f64>> {
    if !(z >= 0.0) {
        return Err(Error::DomainViolation(format!(
            "expected_w_derivative needs real z >= 0, got {z}"
        )));
    }
    let m = params.m;
    let g = expected_w_series::<f64>(params, z, n_max);
    let mut wp = vec![0.0f64; n_max + 1];
    let mut self_cas = SplitCascade::<f64>::new(params);
    let mut g_cas = SplitCascade::<f64>::new(params);
    for n in 0..=n_max {
        if n as u64 >= m {
            wp[n] = z * self_cas.value() + g_cas.value();
        }
        self_cas.feed(wp[n]);
        g_cas.feed(g[n]);
    }
    Ok(wp)
}

/// `E |W_n(z)|²` alongside `G_n(z)`, with the default m >= 3 row cap.
pub fn second_moment_w(
    params: &ModelParams,
    z: Complex64,
    n_max: usize,
) -> Result<ComplexMomentSeries> {
    second_moment_w_with_cap(params, z, n_max, SECOND_MOMENT_DEFAULT_CAP)
}

/// `E |W_n(z)|²` with an explicit row cap for `m >= 3` (the cross term makes
/// large tables expensive; callers must opt in).
pub fn second_moment_w_with_cap(
    params: &ModelParams,
    z: Complex64,
    n_max: usize,
    cap: usize,
) -> Result<ComplexMomentSeries> {
    if params.m >= 3 && n_max > cap {
        return Err(Error::SecondMomentCapExceeded {
            requested: n_max,
            cap,
        });
    }
    let m = params.m;
    let g = expected_w_series::<Complex64>(params, z, n_max);
    let zabs2 = z.norm_sqr();
    let pair_factor = zabs2 * (m * (m - 1)) as f64;
    let constant = ((m - 1) * (m - 1)) as f64;

    let mut g2 = vec![0.0f64; n_max + 1];
    for (n, slot) in g2.iter_mut().enumerate().take((m as usize).min(n_max + 1)) {
        *slot = (n * n) as f64; // W_n = n deterministically below m
    }

    let mut diag = SplitCascade::<f64>::new(params);
    let mut lin = SplitCascade::<Complex64>::new(params);
    let mut cross = CrossTerm::new(params);
    for n in 0..=n_max {
        if n as u64 >= m {
            let pair_mean = cross.pair_expectation(n, &g);
            g2[n] = zabs2 * diag.value()
                + pair_factor * pair_mean
                + 2.0 * (m - 1) as f64 * (z * lin.value()).re
                + constant;
        }
        diag.feed(g2[n]);
        lin.feed(g[n]);
    }
    Ok(ComplexMomentSeries {
        z,
        g,
        g2: Some(g2),
    })
}

/// Helper computing `E[G_{V1}(z) conj(G_{V2}(z))]` per n.
struct CrossTerm {
    params: ModelParams,
    // m >= 3 main regime: weighted self-convolution T(s) of C(l,t) G_l,
    // extended incrementally.
    conv: Vec<Complex64>,
}

impl CrossTerm {
    fn new(params: &ModelParams) -> Self {
        Self {
            params: *params,
            conv: Vec::new(),
        }
    }

    fn pair_expectation(&mut self, n: usize, g: &[Complex64]) -> f64 {
        let m = self.params.m;
        let t = self.params.t;
        let r = self.params.r();
        if m == 2 {
            // Degenerate pair: V2 = n - 1 - V1.
            let (t_eff, r_eff) = if (n as u64) >= r { (t, r) } else { (0, 1) };
            let mut acc = Complex64::default();
            // p_{n,l} via the ratio recursion, inlined.
            let q = r_eff - t_eff - 1;
            let mut w = ratio_start(n as u64, t_eff, q, r_eff);
            let l_max = n as u64 - 1 - q;
            let mut l = t_eff;
            while l <= l_max {
                acc += g[l as usize] * g[n - 1 - l as usize].conj() * w;
                if l == l_max {
                    break;
                }
                w *= (l + 1) as f64 / (l + 1 - t_eff) as f64;
                w *= (n as u64 - 1 - l - q) as f64 / (n as u64 - 1 - l) as f64;
                l += 1;
            }
            return acc.re;
        }
        if (n as u64) < r {
            // Supplementary pair law (t = 0), direct double loop; the regime
            // spans at most r - m values of n, each below r.
            let q2 = m - 3; // (m-2)( 0+1 ) - 1
            let denom = binom_f64(n as u64, m - 1);
            let mut acc = Complex64::default();
            for l1 in 0..n.saturating_sub(1) {
                for l2 in 0..(n - 1 - l1) {
                    let rest = (n - 2 - l1 - l2) as u64;
                    let w = binom_f64(rest, q2) / denom;
                    if w != 0.0 {
                        acc += g[l1] * g[l2].conj() * w;
                    }
                }
            }
            return acc.re;
        }
        // Main regime: extend T(s) = Σ_{l1+l2=s} C(l1,t) G_{l1} C(l2,t) conj(G_{l2}).
        let q2 = (m - 2) * (t + 1) - 1;
        while self.conv.len() + 2 <= n {
            let s = self.conv.len();
            let mut acc = Complex64::default();
            for l1 in 0..=s {
                let w = binom_f64(l1 as u64, t) * binom_f64((s - l1) as u64, t);
                if w != 0.0 {
                    acc += g[l1] * g[s - l1].conj() * w;
                }
            }
            self.conv.push(acc);
        }
        let denom = binom_f64(n as u64, r);
        let mut acc = Complex64::default();
        for (s, tv) in self.conv.iter().enumerate().take(n - 1) {
            let w = binom_f64((n - 2 - s) as u64, q2);
            if w != 0.0 {
                acc += *tv * w;
            }
        }
        (acc / denom).re
    }
}

/// First nonzero marginal weight `p_{n,t} = C(n-1-t, q)/C(n, t+q+1)`.
fn ratio_start(n: u64, t: u64, q: u64, r: u64) -> f64 {
    let mut x = 1.0f64;
    for i in 0..q {
        x *= (n - 1 - t - i) as f64 / (i + 1) as f64;
    }
    for i in 0..r {
        x *= (i + 1) as f64 / (n - i) as f64;
    }
    x
}
