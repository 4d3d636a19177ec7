//! Splitting model of the random m-ary search tree and profile simulators.
//!
//! A tree over `n` keys splits at the root into `m` subtrees whose sizes
//! follow the selection law: sample `r = m*t + m - 1` keys uniformly, sort
//! them, and use every `(t+1)`-st as a pivot. For `m <= n < r` (too few keys
//! for the selection law) the implemented supplementary rule picks the `m - 1`
//! pivots as a uniform subset, which is exactly the `t = 0` law; at
//! `n = m - 1` the root is full and all subtrees are empty. Profiles are
//! produced by recursive size splitting only — trees are never materialized.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::rng::RngStream;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Subtree sizes produced by one split of `n` keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitVector {
    /// The `m` subtree sizes; they sum to `n - (m-1)` when `n >= m - 1`.
    pub v: Vec<u64>,
    /// Number of keys that were split.
    pub n: u64,
}

/// Per-level key counts of one simulated tree (`counts[k]` = keys at depth k).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub counts: Vec<u64>,
}

impl ProfileSample {
    /// Total number of keys in the tree.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Per-level counts of free insertion positions of one simulated tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExternalProfileSample {
    pub counts: Vec<u64>,
}

/// Per-level node counts split by node type (a type-j node stores j keys).
///
/// `counts[j][k]` is the number of type-j nodes at depth k; rows run over
/// `j = 0..m-1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeProfileSample {
    pub counts: Vec<Vec<u64>>,
}

impl TypeProfileSample {
    /// Keys-per-level implied by the type counts: `Σ_j j * counts[j][k]`.
    pub fn implied_profile(&self) -> Vec<u64> {
        let levels = self.counts.iter().map(Vec::len).max().unwrap_or(0);
        let mut out = vec![0u64; levels];
        for (j, row) in self.counts.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                out[k] += j as u64 * c;
            }
        }
        out
    }
}

/// Marginal law of one subtree size under the selection law,
/// `p_l = C(l,t) C(n-1-l, (m-1)t+m-2) / C(n, r)` for `l = 0..n-1`.
///
/// Requires `n >= r`; probabilities are built by the multiplicative ratio
/// recursion, so no factorial ever overflows.
pub fn split_pmf(params: &ModelParams, n: u64) -> Result<Vec<f64>> {
    let r = params.r();
    if n < r {
        return Err(Error::KeyCountBelowMinimum {
            n,
            min: r,
            what: "split_pmf (selection law)",
        });
    }
    Ok(pmf_with_balance(n, params.t, params.r()))
}

/// Marginal split law actually in force at `n`: the selection law for
/// `n >= r`, the supplementary uniform-subset law (the `t = 0` law) for
/// `m <= n < r`.
pub fn effective_split_pmf(params: &ModelParams, n: u64) -> Result<Vec<f64>> {
    let r = params.r();
    if n >= r {
        split_pmf(params, n)
    } else if n >= params.m {
        Ok(pmf_with_balance(n, 0, params.m - 1))
    } else {
        Err(Error::KeyCountBelowMinimum {
            n,
            min: params.m,
            what: "effective_split_pmf",
        })
    }
}

/// `C(l, t) C(n-1-l, r-t-1) / C(n, r)` for all `l`, via ratio recursion.
fn pmf_with_balance(n: u64, t: u64, r: u64) -> Vec<f64> {
    let q = r - t - 1;
    let mut p = vec![0.0f64; n as usize];
    // First nonzero entry: l = t.
    let mut val = binom_ratio(n - 1 - t, q, n, r);
    let l_max = n - 1 - q;
    let mut l = t;
    while l <= l_max {
        p[l as usize] = val;
        if l == l_max {
            break;
        }
        // p_{l+1}/p_l = [(l+1)/(l+1-t)] * [(n-1-l-q)/(n-1-l)]
        val *= (l + 1) as f64 / (l + 1 - t) as f64;
        val *= (n - 1 - l - q) as f64 / (n - 1 - l) as f64;
        l += 1;
    }
    p
}

/// `C(a, b) / C(n, r)` with small lower indices, as a product of ratios.
fn binom_ratio(a: u64, b: u64, n: u64, r: u64) -> f64 {
    let mut x = 1.0f64;
    for i in 0..b {
        x *= (a - i) as f64 / (i + 1) as f64;
    }
    for i in 0..r {
        x *= (i + 1) as f64 / (n - i) as f64;
    }
    x
}

/// Binomial coefficient as f64 (small `k` only; used for weights).
pub(crate) fn binom_f64(n: u64, k: u64) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut x = 1.0f64;
    for i in 0..k {
        x *= (n - i) as f64 / (i + 1) as f64;
    }
    x
}

/// Joint law of two distinct subtree sizes under the selection law:
/// `C(l1,t) C(l2,t) C(n-l1-l2-2, (m-2)(t+1)-1) / C(n, r)`.
///
/// Only defined for `m >= 3`; for `m = 2` the second size is forced to
/// `n - 1 - l1` and the call reports the degenerate case.
pub fn split_pair_pmf(params: &ModelParams, n: u64, l1: u64, l2: u64) -> Result<f64> {
    if params.m == 2 {
        return Err(Error::DegeneratePair);
    }
    let r = params.r();
    if n < r {
        return Err(Error::KeyCountBelowMinimum {
            n,
            min: r,
            what: "split_pair_pmf (selection law)",
        });
    }
    Ok(pair_pmf_with_balance(n, params.m, params.t, r, l1, l2))
}

/// Pair law in force at `n` (selection law, or supplementary `t = 0` law for
/// `m <= n < r`). `m >= 3` only.
pub fn effective_split_pair_pmf(params: &ModelParams, n: u64, l1: u64, l2: u64) -> Result<f64> {
    if params.m == 2 {
        return Err(Error::DegeneratePair);
    }
    let r = params.r();
    if n >= r {
        split_pair_pmf(params, n, l1, l2)
    } else if n >= params.m {
        Ok(pair_pmf_with_balance(n, params.m, 0, params.m - 1, l1, l2))
    } else {
        Err(Error::KeyCountBelowMinimum {
            n,
            min: params.m,
            what: "effective_split_pair_pmf",
        })
    }
}

fn pair_pmf_with_balance(n: u64, m: u64, t: u64, r: u64, l1: u64, l2: u64) -> f64 {
    if l1 + l2 + 2 > n {
        return 0.0;
    }
    let rest = n - l1 - l2 - 2;
    let q2 = (m - 2) * (t + 1) - 1;
    if l1 < t || l2 < t || rest < q2 {
        return 0.0;
    }
    binom_f64(l1, t) * binom_f64(l2, t) * binom_ratio(rest, q2, n, r)
}

/// Draws one split of `n` keys.
///
/// For `n >= r` this realizes the selection law exactly by drawing a uniform
/// `r`-subset of ranks (partial Fisher–Yates) and reading off the gaps around
/// the pivots; for `m <= n < r` the supplementary uniform-subset rule is
/// used; `n = m - 1` returns the all-zero vector.
pub fn sample_split(params: &ModelParams, n: u64, rng: &mut RngStream) -> Result<SplitVector> {
    if n + 1 < params.m {
        return Err(Error::KeyCountBelowMinimum {
            n,
            min: params.m - 1,
            what: "sample_split",
        });
    }
    let mut sampler = TreeSampler::new(*params);
    let mut v = vec![0u64; params.m as usize];
    sampler.split_into(n, rng, &mut v);
    Ok(SplitVector { v, n })
}

/// Reusable simulator: owns the scratch buffers so per-node work allocates
/// nothing.
#[derive(Debug, Clone)]
pub struct TreeSampler {
    params: ModelParams,
    // Sparse virtual permutation for partial Fisher–Yates rank selection.
    fy_idx: Vec<u64>,
    fy_val: Vec<u64>,
    ranks: Vec<u64>,
    // DFS work stack of (subtree size, level).
    stack: Vec<(u64, u32)>,
    split_buf: Vec<u64>,
}

impl TreeSampler {
    pub fn new(params: ModelParams) -> Self {
        let r = params.r() as usize;
        Self {
            params,
            fy_idx: Vec::with_capacity(r),
            fy_val: Vec::with_capacity(r),
            ranks: Vec::with_capacity(r),
            stack: Vec::new(),
            split_buf: vec![0u64; params.m as usize],
        }
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    /// Uniform random `k`-subset of `0..n`, sorted, via partial Fisher–Yates
    /// on a sparse virtual array.
    fn sample_ranks(&mut self, n: u64, k: u64, rng: &mut RngStream) {
        self.fy_idx.clear();
        self.fy_val.clear();
        self.ranks.clear();
        for i in 0..k {
            let j = rng.random_range(i..n);
            let drawn = self.virtual_get(j);
            let displaced = self.virtual_get(i);
            self.virtual_set(j, displaced);
            self.ranks.push(drawn);
        }
        self.ranks.sort_unstable();
    }

    fn virtual_get(&self, pos: u64) -> u64 {
        for (idx, val) in self.fy_idx.iter().zip(&self.fy_val) {
            if *idx == pos {
                return *val;
            }
        }
        pos
    }

    fn virtual_set(&mut self, pos: u64, val: u64) {
        for (idx, v) in self.fy_idx.iter().zip(self.fy_val.iter_mut()) {
            if *idx == pos {
                *v = val;
                return;
            }
        }
        self.fy_idx.push(pos);
        self.fy_val.push(val);
    }

    /// Writes the `m` subtree sizes of one split of `n >= m - 1` keys.
    fn split_into(&mut self, n: u64, rng: &mut RngStream, out: &mut [u64]) {
        let m = self.params.m;
        debug_assert!(n + 1 >= m);
        if n == m - 1 {
            out.fill(0);
            return;
        }
        // Selection law when enough keys, otherwise the supplementary
        // uniform-subset rule, which is the t = 0 law.
        let (subset, step) = if n >= self.params.r() {
            (self.params.r(), self.params.t + 1)
        } else {
            (m - 1, 1)
        };
        self.sample_ranks(n, subset, rng);
        let mut prev: i64 = -1;
        for j in 0..(m - 1) as usize {
            let pivot = self.ranks[(step as usize) * (j + 1) - 1] as i64;
            out[j] = (pivot - prev - 1) as u64;
            prev = pivot;
        }
        out[(m - 1) as usize] = (n as i64 - 1 - prev) as u64;
    }

    /// Simulates the per-level key counts of a tree over `n` keys.
    pub fn sample_profile(&mut self, n: u64, rng: &mut RngStream) -> ProfileSample {
        let m = self.params.m;
        let mut counts = vec![0u64; 1];
        self.stack.clear();
        self.stack.push((n, 0));
        while let Some((s, lev)) = self.stack.pop() {
            if s == 0 {
                continue;
            }
            if lev as usize >= counts.len() {
                counts.resize(lev as usize + 1, 0);
            }
            if s < m {
                counts[lev as usize] += s;
                continue;
            }
            counts[lev as usize] += m - 1;
            let mut buf = std::mem::take(&mut self.split_buf);
            self.split_into(s, rng, &mut buf);
            for &c in buf.iter() {
                self.stack.push((c, lev + 1));
            }
            self.split_buf = buf;
        }
        ProfileSample { counts }
    }

    /// Simulates the per-level free-position counts of a tree over `n` keys.
    pub fn sample_external_profile(&mut self, n: u64, rng: &mut RngStream) -> ExternalProfileSample {
        let m = self.params.m;
        let mut counts = vec![0u64; 1];
        self.stack.clear();
        self.stack.push((n, 0));
        while let Some((s, lev)) = self.stack.pop() {
            if lev as usize >= counts.len() {
                counts.resize(lev as usize + 1, 0);
            }
            if s + 1 < m {
                // Leaf (possibly empty position): m - 1 - s free slots here.
                counts[lev as usize] += m - 1 - s;
                continue;
            }
            let mut buf = std::mem::take(&mut self.split_buf);
            self.split_into(s, rng, &mut buf);
            for &c in buf.iter() {
                self.stack.push((c, lev + 1));
            }
            self.split_buf = buf;
        }
        ExternalProfileSample { counts }
    }

    /// Simulates per-type node counts and the key profile of one shared tree.
    pub fn sample_type_profile(
        &mut self,
        n: u64,
        rng: &mut RngStream,
    ) -> (TypeProfileSample, ProfileSample) {
        let m = self.params.m as usize;
        let mut types = vec![vec![0u64; 1]; m];
        let mut keys = vec![0u64; 1];
        self.stack.clear();
        self.stack.push((n, 0));
        while let Some((s, lev)) = self.stack.pop() {
            let lev_us = lev as usize;
            if lev_us >= keys.len() {
                keys.resize(lev_us + 1, 0);
            }
            let ty = (s.min(m as u64 - 1)) as usize;
            if types[ty].len() <= lev_us {
                types[ty].resize(lev_us + 1, 0);
            }
            types[ty][lev_us] += 1;
            keys[lev_us] += ty as u64;
            if s + 1 < m as u64 {
                continue; // empty position or partially filled leaf
            }
            let mut buf = std::mem::take(&mut self.split_buf);
            self.split_into(s, rng, &mut buf);
            for &c in buf.iter() {
                self.stack.push((c, lev + 1));
            }
            self.split_buf = buf;
        }
        (TypeProfileSample { counts: types }, ProfileSample { counts: keys })
    }

    /// Number of keys at exactly `level` in one simulated tree (subtrees that
    /// cannot reach the level are pruned, which is exact).
    pub fn keys_at_level(&mut self, n: u64, level: u32, rng: &mut RngStream) -> u64 {
        let m = self.params.m;
        let mut total = 0u64;
        self.stack.clear();
        self.stack.push((n, 0));
        while let Some((s, lev)) = self.stack.pop() {
            let remaining = (level - lev) as u64;
            // A key at depth `remaining` below needs a path of full nodes:
            // at least (m-1) * remaining + 1 keys in this subtree.
            if s < (m - 1) * remaining + 1 {
                continue;
            }
            if lev == level {
                total += s.min(m - 1);
                continue;
            }
            if s < m {
                continue; // all keys of this subtree sit at `lev` < level
            }
            let mut buf = std::mem::take(&mut self.split_buf);
            self.split_into(s, rng, &mut buf);
            for &c in buf.iter() {
                self.stack.push((c, lev + 1));
            }
            self.split_buf = buf;
        }
        total
    }

    /// Number of free positions at exactly `level` in one simulated tree.
    pub fn external_at_level(&mut self, n: u64, level: u32, rng: &mut RngStream) -> u64 {
        let m = self.params.m;
        let mut total = 0u64;
        self.stack.clear();
        self.stack.push((n, 0));
        while let Some((s, lev)) = self.stack.pop() {
            let remaining = (level - lev) as u64;
            // A free slot at depth `remaining` below needs a path of full
            // nodes above it: at least (m-1) * remaining keys here.
            if s < (m - 1) * remaining {
                continue;
            }
            if lev == level {
                if s + 1 < m {
                    total += m - 1 - s;
                }
                continue;
            }
            if s + 1 < m {
                continue;
            }
            let mut buf = std::mem::take(&mut self.split_buf);
            self.split_into(s, rng, &mut buf);
            for &c in buf.iter() {
                self.stack.push((c, lev + 1));
            }
            self.split_buf = buf;
        }
        total
    }
}

/// One-shot convenience wrapper around [`TreeSampler::sample_profile`].
pub fn sample_profile(params: &ModelParams, n: u64, rng: &mut RngStream) -> ProfileSample {
    TreeSampler::new(*params).sample_profile(n, rng)
}

/// One-shot convenience wrapper around [`TreeSampler::sample_external_profile`].
pub fn sample_external_profile(
    params: &ModelParams,
    n: u64,
    rng: &mut RngStream,
) -> ExternalProfileSample {
    TreeSampler::new(*params).sample_external_profile(n, rng)
}

/// One-shot convenience wrapper around [`TreeSampler::sample_type_profile`].
pub fn sample_type_profile(
    params: &ModelParams,
    n: u64,
    rng: &mut RngStream,
) -> (TypeProfileSample, ProfileSample) {
    TreeSampler::new(*params).sample_type_profile(n, rng)
}
