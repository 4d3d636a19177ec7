//! Brute-force profile distributions in exact rational arithmetic.
//!
//! This module is the independent oracle for everything the DP layer
//! computes: it enumerates every split outcome recursively with exact
//! probabilities, producing the full joint distribution of the profile for
//! tiny `n`. It deliberately shares no code with the floating-point DP.

use crate::error::{Error, Result};
use crate::params::ModelParams;
use num::complex::Complex;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use std::collections::HashMap;
use std::rc::Rc;

/// Default cap on `n` for brute-force enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 12;

/// Exact joint distribution of a per-level count vector.
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    /// `(profile, probability)` pairs, sorted by profile; probabilities sum
    /// to exactly 1. Profiles carry no trailing zeros (the empty vector is
    /// the all-zero profile).
    pub support: Vec<(Vec<u64>, BigRational)>,
}

impl ExactDistribution {
    /// Exact mean of each level count.
    pub fn mean(&self) -> Vec<BigRational> {
        let levels = self.support.iter().map(|(p, _)| p.len()).max().unwrap_or(0);
        let mut out = vec![BigRational::zero(); levels];
        for (profile, prob) in &self.support {
            for (k, c) in profile.iter().enumerate() {
                out[k] += prob * BigRational::from_integer(BigInt::from(*c));
            }
        }
        out
    }

    /// Exact mean as f64 (for tolerance comparisons against the DP).
    pub fn mean_f64(&self) -> Vec<f64> {
        self.mean().iter().map(|x| x.to_f64().unwrap()).collect()
    }

    /// Exact `E Σ_k counts[k] z^k` at a rational complex point.
    pub fn expected_polynomial(&self, z: &Complex<BigRational>) -> Complex<BigRational> {
        let mut acc = Complex::new(BigRational::zero(), BigRational::zero());
        for (profile, prob) in &self.support {
            let val = eval_profile_poly(profile, z);
            acc = acc + val * Complex::new(prob.clone(), BigRational::zero());
        }
        acc
    }

    /// Exact `E |Σ_k counts[k] z^k|²` at a rational real point.
    pub fn expected_polynomial_sq(&self, z: &BigRational) -> BigRational {
        let zc = Complex::new(z.clone(), BigRational::zero());
        let mut acc = BigRational::zero();
        for (profile, prob) in &self.support {
            let val = eval_profile_poly(profile, &zc).re;
            acc += prob * (&val * &val);
        }
        acc
    }

    /// Sum of all probabilities (exactly 1 for a valid distribution).
    pub fn total_probability(&self) -> BigRational {
        self.support.iter().map(|(_, p)| p.clone()).sum()
    }
}

fn eval_profile_poly(profile: &[u64], z: &Complex<BigRational>) -> Complex<BigRational> {
    // Horner from the top level down.
    let mut acc = Complex::new(BigRational::zero(), BigRational::zero());
    for c in profile.iter().rev() {
        let coeff = Complex::new(
            BigRational::from_integer(BigInt::from(*c)),
            BigRational::zero(),
        );
        acc = acc * z.clone() + coeff;
    }
    acc
}

/// Exact binomial coefficient.
fn big_binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut acc = BigInt::from(1u32);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// All compositions of `total` into `parts` nonnegative parts.
fn compositions(total: u64, parts: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut cur = vec![0u64; parts as usize];
    fn rec(total: u64, idx: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if idx + 1 == cur.len() {
            cur[idx] = total;
            out.push(cur.clone());
            return;
        }
        for v in 0..=total {
            cur[idx] = v;
            rec(total - v, idx + 1, cur, out);
        }
    }
    rec(total, 0, &mut cur, &mut out);
    out
}

type Dist = Vec<(Vec<u64>, BigRational)>;

/// Memoizing enumerator of exact profile distributions.
#[derive(Debug)]
pub struct ProfileOracle {
    params: ModelParams,
    cap: u64,
    internal: Vec<Option<Rc<Dist>>>,
    external: Vec<Option<Rc<Dist>>>,
}

impl ProfileOracle {
    pub fn new(params: ModelParams, cap: u64) -> Self {
        Self {
            params,
            cap,
            internal: vec![None; cap as usize + 1],
            external: vec![None; cap as usize + 1],
        }
    }

    /// Exact distribution over split vectors of `n >= m - 1` keys, under the
    /// law in force at `n` (selection law / supplementary rule / forced zero
    /// vector).
    fn split_distribution(&self, n: u64) -> Dist {
        let m = self.params.m;
        let r = self.params.r();
        let t = self.params.t;
        debug_assert!(n + 1 >= m);
        if n == m - 1 {
            return vec![(vec![0; m as usize], BigRational::from_integer(1.into()))];
        }
        let comps = compositions(n - (m - 1), m);
        if n >= r {
            let denom = big_binom(n, r);
            comps
                .into_iter()
                .filter_map(|v| {
                    let mut num = BigInt::from(1u32);
                    for x in &v {
                        num *= big_binom(*x, t);
                        if num.is_zero() {
                            return None;
                        }
                    }
                    Some((v, BigRational::new(num, denom.clone())))
                })
                .collect()
        } else {
            let denom = big_binom(n, m - 1);
            let p = BigRational::new(BigInt::from(1u32), denom);
            comps.into_iter().map(|v| (v, p.clone())).collect()
        }
    }

    /// Exact joint distribution of the key profile of a tree over `n` keys.
    pub fn internal_distribution(&mut self, n: u64) -> Result<Rc<Dist>> {
        if n > self.cap {
            return Err(Error::EnumerationCapExceeded { n, cap: self.cap });
        }
        if let Some(d) = &self.internal[n as usize] {
            return Ok(Rc::clone(d));
        }
        let m = self.params.m;
        let dist: Dist = if n == 0 {
            vec![(vec![], BigRational::from_integer(1.into()))]
        } else if n < m {
            vec![(vec![n], BigRational::from_integer(1.into()))]
        } else {
            let mut acc: HashMap<Vec<u64>, BigRational> = HashMap::new();
            for (v, pv) in self.split_distribution(n) {
                let mut partial: Vec<(Vec<u64>, BigRational)> =
                    vec![(vec![m - 1], pv)];
                for &child in &v {
                    let child_dist = self.internal_distribution(child)?;
                    partial = combine_child(&partial, &child_dist);
                }
                for (profile, prob) in partial {
                    *acc.entry(profile).or_insert_with(BigRational::zero) += prob;
                }
            }
            sorted(acc)
        };
        let rc = Rc::new(dist);
        self.internal[n as usize] = Some(Rc::clone(&rc));
        Ok(rc)
    }

    /// Exact joint distribution of the free-position profile.
    pub fn external_distribution(&mut self, n: u64) -> Result<Rc<Dist>> {
        if n > self.cap {
            return Err(Error::EnumerationCapExceeded { n, cap: self.cap });
        }
        if let Some(d) = &self.external[n as usize] {
            return Ok(Rc::clone(d));
        }
        let m = self.params.m;
        let dist: Dist = if n + 1 < m {
            vec![(vec![m - 1 - n], BigRational::from_integer(1.into()))]
        } else {
            let mut acc: HashMap<Vec<u64>, BigRational> = HashMap::new();
            for (v, pv) in self.split_distribution(n) {
                let mut partial: Vec<(Vec<u64>, BigRational)> = vec![(vec![], pv)];
                for &child in &v {
                    let child_dist = self.external_distribution(child)?;
                    partial = combine_child(&partial, &child_dist);
                }
                for (profile, prob) in partial {
                    *acc.entry(profile).or_insert_with(BigRational::zero) += prob;
                }
            }
            sorted(acc)
        };
        let rc = Rc::new(dist);
        self.external[n as usize] = Some(Rc::clone(&rc));
        Ok(rc)
    }
}

/// Merges a child distribution (shifted down one level) into the running
/// product distribution.
fn combine_child(partial: &Dist, child: &Dist) -> Dist {
    let mut acc: HashMap<Vec<u64>, BigRational> = HashMap::new();
    for (base, pb) in partial {
        for (cprof, pc) in child {
            let mut merged = base.clone();
            if !cprof.is_empty() && merged.len() < cprof.len() + 1 {
                merged.resize(cprof.len() + 1, 0);
            }
            for (k, c) in cprof.iter().enumerate() {
                merged[k + 1] += c;
            }
            *acc.entry(merged).or_insert_with(BigRational::zero) += pb * pc;
        }
    }
    sorted(acc)
}

fn sorted(map: HashMap<Vec<u64>, BigRational>) -> Dist {
    let mut v: Dist = map.into_iter().collect();
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Exact joint profile distribution for `n` at the default cap.
pub fn enumerate_profile_distribution(params: &ModelParams, n: u64) -> Result<ExactDistribution> {
    if n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded {
            n,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut oracle = ProfileOracle::new(*params, DEFAULT_ENUMERATION_CAP);
    let dist = oracle.internal_distribution(n)?;
    Ok(ExactDistribution {
        support: dist.as_ref().clone(),
    })
}

/// Exact external-profile distribution for `n` at the default cap.
pub fn enumerate_external_distribution(params: &ModelParams, n: u64) -> Result<ExactDistribution> {
    if n > DEFAULT_ENUMERATION_CAP {
        return Err(Error::EnumerationCapExceeded {
            n,
            cap: DEFAULT_ENUMERATION_CAP,
        });
    }
    let mut oracle = ProfileOracle::new(*params, DEFAULT_ENUMERATION_CAP);
    let dist = oracle.external_distribution(n)?;
    Ok(ExactDistribution {
        support: dist.as_ref().clone(),
    })
}
