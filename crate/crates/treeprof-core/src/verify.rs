//! Numbered verification suite: eleven end-to-end checks of the library
//! against independent targets.
//!
//! Each criterion exercises one pillar — exact-rational oracle agreement,
//! closed forms, discrete-transform identities, Monte-Carlo consistency, or
//! convergence trends — and returns a [`CriterionReport`] with pass/fail,
//! wall time, and the measured quantities. Thresholds are hard-coded on
//! purpose: they are the contract this library is tested against, not
//! tunables. Criteria are deterministic given `(criterion, seed)`.

use crate::asymptotics;
use crate::error::{Error, Result};
use crate::limit;
use crate::model::TreeSampler;
use crate::moments;
use crate::oracle::{ExactDistribution, ProfileOracle};
use crate::params::ModelParams;
use crate::rng::RngStream;
use crate::spectral;
use crate::stats;
use num::complex::{Complex, Complex64};
use num::{BigInt, BigRational, ToPrimitive};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Number of verification criteria.
pub const CRITERION_COUNT: usize = 11;

/// Outcome of one verification criterion.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriterionReport {
    /// 1-based criterion id.
    pub id: usize,
    pub name: String,
    pub pass: bool,
    pub runtime_seconds: f64,
    /// One-line human-readable summary of what was measured.
    pub details: String,
    /// Key measured quantities, in a stable order.
    pub metrics: Vec<(String, f64)>,
}

type Outcome = (bool, String, Vec<(String, f64)>);

const NAMES: [&str; CRITERION_COUNT] = [
    "oracle-equivalence",
    "bst-closed-forms",
    "bst-critical-constants",
    "cauchy-inversion-identity",
    "saddle-trend-gate",
    "second-moment-exponent-gate",
    "mc-dp-consistency",
    "limit-process-statistics",
    "profile-limit-proxy",
    "arc-monotonicity-probe",
    "external-and-type-profiles",
];

/// Name of criterion `id` (1-based).
pub fn criterion_name(id: usize) -> Option<&'static str> {
    (1..=CRITERION_COUNT).contains(&id).then(|| NAMES[id - 1])
}

/// Runs one criterion. The seed feeds only the stochastic criteria; the
/// deterministic ones ignore it.
pub fn run_criterion(id: usize, seed: u64) -> Result<CriterionReport> {
    let name = criterion_name(id).ok_or_else(|| {
        Error::DomainViolation(format!("criterion id must be 1..={CRITERION_COUNT}, got {id}"))
    })?;
    let start = Instant::now();
    let (pass, details, metrics) = match id {
        1 => c01_oracle_equivalence()?,
        2 => c02_bst_closed_forms(seed)?,
        3 => c03_bst_critical_constants()?,
        4 => c04_inversion_identity()?,
        5 => c05_saddle_trend()?,
        6 => c06_exponent_gate()?,
        7 => c07_mc_dp_consistency(seed)?,
        8 => c08_limit_process_statistics(seed)?,
        9 => c09_profile_limit_proxy(seed)?,
        10 => c10_arc_monotonicity()?,
        _ => c11_external_and_types(seed)?,
    };
    Ok(CriterionReport {
        id,
        name: name.to_string(),
        pass,
        runtime_seconds: start.elapsed().as_secs_f64(),
        details,
        metrics,
    })
}

/// Runs all criteria in order.
pub fn run_all(seed: u64) -> Result<Vec<CriterionReport>> {
    (1..=CRITERION_COUNT).map(|id| run_criterion(id, seed)).collect()
}

fn reference_params() -> [ModelParams; 3] {
    [
        ModelParams::new(2, 0).expect("valid"),
        ModelParams::new(2, 1).expect("valid"),
        ModelParams::new(3, 0).expect("valid"),
    ]
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Mixed absolute/relative deviation: `|a−b| / max(1, |b|)`.
fn mixed_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

// ---------------------------------------------------------------------------
// 1. DP vs exact-rational oracle on every n ≤ 10.
// ---------------------------------------------------------------------------

fn c01_oracle_equivalence() -> Result<Outcome> {
    const N_MAX: u64 = 10;
    const TOL: f64 = 1e-12;
    // Dyadic points so the f64 image of the rational inputs is exact.
    let complex_points: [((i64, i64), (i64, i64)); 5] = [
        ((1, 2), (1, 2)),
        ((-3, 4), (1, 4)),
        ((5, 4), (-1, 2)),
        ((0, 1), (1, 1)),
        ((3, 2), (0, 1)),
    ];
    let real_points: [(i64, i64); 5] = [(1, 2), (3, 4), (1, 1), (3, 2), (2, 1)];

    let mut worst = 0.0f64;
    let mut comparisons = 0usize;
    for params in reference_params() {
        let mut oracle = ProfileOracle::new(params, N_MAX);
        let exact: Vec<ExactDistribution> = (0..=N_MAX)
            .map(|n| {
                Ok(ExactDistribution {
                    support: oracle.internal_distribution(n)?.as_ref().clone(),
                })
            })
            .collect::<Result<_>>()?;

        // Mean profile.
        let table = moments::expected_profile_table(&params, N_MAX as usize, N_MAX as usize);
        for (n, dist) in exact.iter().enumerate() {
            let mean = dist.mean_f64();
            for k in 0..=N_MAX as usize {
                let reference = mean.get(k).copied().unwrap_or(0.0);
                worst = worst.max(mixed_err(table.value(n, k), reference));
                comparisons += 1;
            }
        }

        // E W_n(z) at complex points.
        for ((re_n, re_d), (im_n, im_d)) in complex_points {
            let zq = Complex::new(rational(re_n, re_d), rational(im_n, im_d));
            let z = Complex64::new(re_n as f64 / re_d as f64, im_n as f64 / im_d as f64);
            let series = moments::expected_w(&params, z, N_MAX as usize);
            for (n, dist) in exact.iter().enumerate() {
                let o = dist.expected_polynomial(&zq);
                let oracle_value = Complex64::new(
                    o.re.to_f64().expect("finite rational"),
                    o.im.to_f64().expect("finite rational"),
                );
                let diff = (series.g[n] - oracle_value).norm();
                worst = worst.max(diff / oracle_value.norm().max(1.0));
                comparisons += 1;
            }
        }

        // E |W_n(z)|² at real points.
        for (num, den) in real_points {
            let zq = rational(num, den);
            let z = Complex64::new(num as f64 / den as f64, 0.0);
            let series = moments::second_moment_w(&params, z, N_MAX as usize)?;
            let g2 = series.g2.as_ref().expect("second moments requested");
            for (n, dist) in exact.iter().enumerate() {
                let reference = dist
                    .expected_polynomial_sq(&zq)
                    .to_f64()
                    .expect("finite rational");
                worst = worst.max(mixed_err(g2[n], reference));
                comparisons += 1;
            }
        }
    }
    let pass = worst <= TOL;
    Ok((
        pass,
        format!(
            "DP vs exact-rational oracle, n <= {N_MAX}, 3 parameter pairs: \
             worst deviation {worst:.3e} over {comparisons} comparisons (tol {TOL:.0e})"
        ),
        vec![
            ("worst_deviation".into(), worst),
            ("comparisons".into(), comparisons as f64),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 2. Binary-search-tree closed forms λ₁(z) = 2z, λ₁′ = 2, λ₁″ = 0.
// ---------------------------------------------------------------------------

fn c02_bst_closed_forms(seed: u64) -> Result<Outcome> {
    let params = ModelParams::bst();
    let mut rng = RngStream::new(seed, 2);
    let mut worst_root = 0.0f64;
    for _ in 0..20 {
        let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        let root = spectral::all_roots(&params, z, 1e-12)?;
        worst_root = worst_root.max((root.lambda1 - 2.0 * z).norm());
    }
    let mut worst_d1 = 0.0f64;
    let mut worst_d2 = 0.0f64;
    for _ in 0..20 {
        let beta = rng.random_range(0.05..2.5);
        let (d1, d2) = spectral::lambda1_derivs(&params, beta)?;
        worst_d1 = worst_d1.max((d1 - 2.0).abs());
        worst_d2 = worst_d2.max(d2.abs());
    }
    let pass = worst_root <= 1e-10 && worst_d1 <= 1e-8 && worst_d2 <= 1e-8;
    Ok((
        pass,
        format!(
            "20 random complex points: max |λ₁(z) − 2z| = {worst_root:.3e} (tol 1e-10); \
             20 random radii: max |λ₁′ − 2| = {worst_d1:.3e}, max |λ₁″| = {worst_d2:.3e} (tol 1e-8)"
        ),
        vec![
            ("worst_root_dev".into(), worst_root),
            ("worst_first_deriv_dev".into(), worst_d1),
            ("worst_second_deriv_dev".into(), worst_d2),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 3. Critical constants for (m=2, t=0) against quadratic closed forms and an
//    independent inline bisection of log(λ/2) = (λ−1)/λ.
// ---------------------------------------------------------------------------

fn c03_bst_critical_constants() -> Result<Outcome> {
    let params = ModelParams::bst();
    let c = spectral::critical_constants(&params, 1e-12)?;

    let exact_ok = c.alpha0 == 1.0 && c.alpha_max == 2.0;

    // Independent root finder for log(λ/2) = (λ−1)/λ, written inline so it
    // shares nothing with the library's bracketing code.
    let h = |lam: f64| (lam / 2.0).ln() - (lam - 1.0) / lam;
    let bisect = |mut lo: f64, mut hi: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = h(mid);
            if fm == 0.0 {
                return mid;
            }
            if (fm > 0.0) == (h(lo) > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    // h(0+) → +∞, h(1) < 0; h(2) < 0, h(∞) → +∞.
    let lam_minus = bisect(1e-9, 1.0 - 1e-9);
    let lam_plus = bisect(2.0, 100.0);
    // For this model α(β at λ) = 1/S₁(λ) = λ, so α± coincide with λ±.
    let dev_minus = (c.alpha_minus - lam_minus).abs().max((c.lambda_minus - lam_minus).abs());
    let dev_plus = (c.alpha_plus - lam_plus).abs().max((c.lambda_plus - lam_plus).abs());
    let saturation_ok = dev_minus <= 1e-8 && dev_plus <= 1e-8;

    let sqrt2 = std::f64::consts::SQRT_2;
    let dev_intervals = [
        (c.i_prime.0 - sqrt2).abs(),
        (c.i_prime.1 - (2.0 + sqrt2)).abs(),
        (c.j_prime.0 - (2.0 - sqrt2)).abs(),
        (c.j_prime.1 - (2.0 + sqrt2)).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    let intervals_ok = dev_intervals <= 1e-9;

    let pass = exact_ok && saturation_ok && intervals_ok;
    Ok((
        pass,
        format!(
            "alpha0 = {} (want exactly 1), alpha_max = {} (want exactly 2); \
             saturation constants vs independent bisection: dev- {dev_minus:.3e}, dev+ {dev_plus:.3e} (tol 1e-8); \
             I'/J' vs quadratic closed forms: worst {dev_intervals:.3e} (tol 1e-9)",
            c.alpha0, c.alpha_max
        ),
        vec![
            ("alpha0".into(), c.alpha0),
            ("alpha_max".into(), c.alpha_max),
            ("alpha_minus_dev".into(), dev_minus),
            ("alpha_plus_dev".into(), dev_plus),
            ("interval_dev".into(), dev_intervals),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 4. Discrete circle-transform inversion is an identity against the DP.
// ---------------------------------------------------------------------------

fn c04_inversion_identity() -> Result<Outcome> {
    const N_MAX: usize = 200;
    const TOL: f64 = 1e-9;
    // A level is resolvable on the circle of radius β when its term
    // E X_{n,k} β^k carries a non-negligible share of the total weight
    // Σ_j E X_{n,j} β^j; lighter terms sit below the transform's f64
    // rounding floor and carry no testable information.
    const MASS_FLOOR: f64 = 1e-4;
    let radii = [0.5f64, 1.0, 1.5];
    let mut worst = 0.0f64;
    let mut comparisons = 0usize;
    for params in reference_params() {
        let table = moments::expected_profile_table(&params, N_MAX, N_MAX - 1);
        for &beta in &radii {
            for n in 1..=N_MAX {
                let weights: Vec<f64> = (0..n)
                    .map(|k| table.value(n, k) * beta.powi(k as i32))
                    .collect();
                let total: f64 = weights.iter().sum();
                let k_cap = weights
                    .iter()
                    .rposition(|&w| w >= MASS_FLOOR * total)
                    .unwrap_or(0);
                let inverted = asymptotics::cauchy_inversion(&params, beta, n, k_cap, n + 1)?;
                for (k, &value) in inverted.iter().enumerate() {
                    if weights[k] < MASS_FLOOR * total {
                        continue;
                    }
                    let reference = table.value(n, k);
                    worst = worst.max((value - reference).abs() / reference);
                    comparisons += 1;
                }
            }
        }
    }
    let pass = worst <= TOL;
    Ok((
        pass,
        format!(
            "circle transform vs DP, n <= {N_MAX}, radii {radii:?}, 3 parameter pairs, levels \
             holding >= {MASS_FLOOR:.0e} of circle weight: worst relative error {worst:.3e} \
             over {comparisons} coefficients (tol {TOL:.0e})"
        ),
        vec![
            ("worst_rel_err".into(), worst),
            ("comparisons".into(), comparisons as f64),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 5. Saddle-point prediction vs DP at desk scale (trend gate).
// ---------------------------------------------------------------------------

fn c05_saddle_trend() -> Result<Outcome> {
    let params = ModelParams::bst();
    let alphas = [1.5f64, 2.0, 2.5];
    let mut metrics = Vec::new();
    let mut all_in_band = true;
    let mut all_closer = true;
    let mut lines = Vec::new();
    for &alpha in &alphas {
        let mut ratios = [0.0f64; 2];
        for (slot, &n) in [300usize, 3000].iter().enumerate() {
            let k = (alpha * (n as f64).ln()).round() as usize;
            let alpha_eff = k as f64 / (n as f64).ln();
            let (beta_eff, _) = spectral::beta_of_alpha(&params, alpha_eff, 1e-12)?;
            // The amplitude is an n-independent constant; estimate it from
            // the largest table so both scales test the same formula.
            let amp = asymptotics::estimate_amplitude(
                &params,
                Complex64::new(beta_eff, 0.0),
                3000,
                1500,
            )?;
            let estimate = asymptotics::mean_profile_asymptotic(&params, n, k, amp.e_hat.re)?;
            let dp = moments::expected_profile_at(&params, n, k);
            ratios[slot] = estimate.prediction / dp;
        }
        let in_band = (0.7..=1.3).contains(&ratios[1]);
        let closer = (ratios[1] - 1.0).abs() < (ratios[0] - 1.0).abs();
        all_in_band &= in_band;
        all_closer &= closer;
        lines.push(format!(
            "alpha {alpha}: ratio {:.4} @300 -> {:.4} @3000 (band {}, closer {})",
            ratios[0], ratios[1], in_band, closer
        ));
        metrics.push((format!("ratio_n300_alpha{alpha}"), ratios[0]));
        metrics.push((format!("ratio_n3000_alpha{alpha}"), ratios[1]));
    }
    let pass = all_in_band && all_closer;
    Ok((pass, lines.join("; "), metrics))
}

// ---------------------------------------------------------------------------
// 6. Second-moment growth exponent stays within its spectral bound.
// ---------------------------------------------------------------------------

fn c06_exponent_gate() -> Result<Outcome> {
    const N_MAX: usize = 2000;
    const SLACK_TOL: f64 = 0.15;
    let probes = [
        Complex64::new(0.9, 0.0),
        Complex64::new(1.2, 0.0),
        Complex64::new(1.5, 0.0),
        Complex64::new(0.8, 0.6),
        Complex64::new(1.0, 0.5),
        Complex64::new(0.7, 0.9),
    ];
    let mut worst_slack = f64::NEG_INFINITY;
    let mut pass = true;
    for params in [ModelParams::new(2, 0)?, ModelParams::new(2, 1)?] {
        for &z in &probes {
            let check = asymptotics::second_moment_exponent_check(&params, z, N_MAX)?;
            worst_slack = worst_slack.max(check.slack);
            pass &= check.slack <= SLACK_TOL;
        }
    }
    Ok((
        pass,
        format!(
            "log-log slope of E|W_n(z)|^2 vs spectral bound at 6 probes x 2 parameter pairs, \
             n <= {N_MAX}: worst slack {worst_slack:.4} (tol {SLACK_TOL})"
        ),
        vec![("worst_slack".into(), worst_slack)],
    ))
}

// ---------------------------------------------------------------------------
// 7. Monte-Carlo level counts agree with the DP mean.
// ---------------------------------------------------------------------------

fn c07_mc_dp_consistency(seed: u64) -> Result<Outcome> {
    let params = ModelParams::bst();
    let n = 2000u64;
    let reps = 20_000usize;
    let alpha = 2.0f64;
    let k = (alpha * (n as f64).ln()).floor() as usize;
    let base = RngStream::new(seed, 7);
    let ratios = limit::mc_profile_ratio(&params, n, alpha, reps, &base)?;
    let (mean, se) = stats::mean_se(&ratios);
    let sigmas = (mean - 1.0).abs() / se;
    let pass = sigmas <= 4.0;
    Ok((
        pass,
        format!(
            "{reps} simulated trees, n = {n}, level k = {k}: normalized mean {mean:.5} \
             is {sigmas:.2} SE from 1 (gate 4 SE, SE {se:.2e})"
        ),
        vec![
            ("mc_mean".into(), mean),
            ("mc_se".into(), se),
            ("sigmas_from_one".into(), sigmas),
            ("level".into(), k as f64),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 8. Fixed-point process: mean 1, closed-form variance, variance vanishing
//    at z = 1, and the admissibility interval's endpoints.
// ---------------------------------------------------------------------------

fn c08_limit_process_statistics(seed: u64) -> Result<Outcome> {
    let params = ModelParams::bst();
    let depth = 12usize;
    let draws = 100_000usize;
    let base = RngStream::new(seed, 8);
    let mut pass = true;
    let mut lines = Vec::new();
    let mut metrics = Vec::new();

    for (idx, &beta) in [0.9f64, 1.2].iter().enumerate() {
        let pop = limit::sample_y_population(&params, beta, depth, draws, &base.substream(idx as u64))?;
        let (mean, mean_se) = stats::mean_se(&pop);
        let mean_sig = (mean - 1.0).abs() / mean_se;
        let (var, var_se) = stats::variance_se(&pop);
        let exact = limit::variance_y(&params, beta)?;
        let var_sig = (var - exact).abs() / var_se;
        pass &= mean_sig <= 3.0 && var_sig <= 3.0;
        lines.push(format!(
            "beta {beta}: mean {mean:.5} ({mean_sig:.2} SE from 1), \
             variance {var:.4} vs closed form {exact:.4} ({var_sig:.2} SE)"
        ));
        metrics.push((format!("mean_sigmas_beta{beta}"), mean_sig));
        metrics.push((format!("var_sigmas_beta{beta}"), var_sig));
        metrics.push((format!("var_mc_beta{beta}"), var));
        metrics.push((format!("var_exact_beta{beta}"), exact));
    }

    let mut worst_var_at_one = 0.0f64;
    let mut flips_ok = true;
    for params in reference_params() {
        worst_var_at_one = worst_var_at_one.max(limit::variance_y(&params, 1.0)?.abs());
        let c = spectral::critical_constants(&params, 1e-12)?;
        for (endpoint, inward) in [(c.j.0, 1e-6), (c.j.1, -1e-6)] {
            let inside = limit::variance_y_denominator(&params, endpoint + inward)?;
            let outside = limit::variance_y_denominator(&params, endpoint - inward)?;
            flips_ok &= inside > 0.0 && outside < 0.0;
        }
    }
    pass &= worst_var_at_one <= 1e-12 && flips_ok;
    lines.push(format!(
        "variance at z=1: worst |Var| = {worst_var_at_one:.2e} (tol 1e-12); \
         denominator sign flips at both admissibility endpoints (+-1e-6): {flips_ok}"
    ));
    metrics.push(("worst_var_at_one".into(), worst_var_at_one));
    metrics.push(("endpoint_flips_ok".into(), if flips_ok { 1.0 } else { 0.0 }));

    Ok((pass, lines.join("; "), metrics))
}

// ---------------------------------------------------------------------------
// 9. Normalized level counts vs the fixed-point population (trend gate).
// ---------------------------------------------------------------------------

fn c09_profile_limit_proxy(seed: u64) -> Result<Outcome> {
    let params = ModelParams::bst();
    let alpha = 2.4f64;
    let beta = 1.2f64; // saddle radius of alpha = 2.4 for this model
    let reps = 5000usize;
    let base = RngStream::new(seed, 9);
    let reference = limit::sample_y_population(&params, beta, 14, 100_000, &base.substream(0))?;
    let mut ks_values = Vec::new();
    for (idx, &n) in [1_000u64, 10_000, 100_000].iter().enumerate() {
        let ratios = limit::mc_profile_ratio(&params, n, alpha, reps, &base.substream(1 + idx as u64))?;
        ks_values.push(stats::ks_two_sample(&ratios, &reference)?);
    }
    let decreasing = ks_values[1] < ks_values[0] && ks_values[2] < ks_values[1];
    let final_ok = ks_values[2] < 0.08;
    let pass = decreasing && final_ok;
    Ok((
        pass,
        format!(
            "KS(level ratios, fixed-point population) at alpha {alpha}: \
             {:.4} (n=1e3) -> {:.4} (n=1e4) -> {:.4} (n=1e5); strictly decreasing: {decreasing}, \
             final < 0.08: {final_ok}",
            ks_values[0], ks_values[1], ks_values[2]
        ),
        vec![
            ("ks_n1e3".into(), ks_values[0]),
            ("ks_n1e4".into(), ks_values[1]),
            ("ks_n1e5".into(), ks_values[2]),
        ],
    ))
}

// ---------------------------------------------------------------------------
// 10. Re λ₁ strictly decreases along circles |z| = β.
// ---------------------------------------------------------------------------

fn c10_arc_monotonicity() -> Result<Outcome> {
    let grid: Vec<f64> = (0..15).map(|j| 0.2 * j as f64).collect();
    let mut pass = true;
    let mut min_decrement = f64::INFINITY;
    for params in [ModelParams::new(2, 1)?, ModelParams::new(3, 0)?] {
        for beta in [0.8f64, 1.0, 1.5] {
            let probe = spectral::arc_monotonicity_probe(&params, beta, &grid)?;
            let all_dominant = probe.points.iter().all(|p| p.dominant);
            for pair in probe.points.windows(2) {
                min_decrement = min_decrement.min(pair[0].re_lambda1 - pair[1].re_lambda1);
            }
            pass &= probe.strictly_decreasing && all_dominant;
        }
    }
    Ok((
        pass,
        format!(
            "Re λ₁(βe^{{iφ}}) over φ = 0, 0.2, …, 2.8 at β in {{0.8, 1.0, 1.5}}, two parameter \
             pairs: dominance everywhere, minimum decrement {min_decrement:.4e} (must be > 0)"
        ),
        vec![("min_decrement".into(), min_decrement)],
    ))
}

// ---------------------------------------------------------------------------
// 11. Node-type identity, external amplitude stabilization, external trend.
// ---------------------------------------------------------------------------

fn c11_external_and_types(seed: u64) -> Result<Outcome> {
    let base = RngStream::new(seed, 11);
    let mut metrics = Vec::new();
    let mut lines = Vec::new();

    // (a) Per-draw identity: keys per level == Σ_j j · (type-j nodes per level).
    let params = ModelParams::new(3, 0)?;
    let mut sampler = TreeSampler::new(params);
    let mut identity_failures = 0usize;
    for i in 0..10_000u64 {
        let mut rng = base.substream(i);
        let (types, profile) = sampler.sample_type_profile(200, &mut rng);
        let implied = types.implied_profile();
        let levels = implied.len().max(profile.counts.len());
        for k in 0..levels {
            let a = implied.get(k).copied().unwrap_or(0);
            let b = profile.counts.get(k).copied().unwrap_or(0);
            if a != b {
                identity_failures += 1;
            }
        }
    }
    let identity_ok = identity_failures == 0;
    lines.push(format!(
        "type identity on 10^4 draws (n = 200): {identity_failures} level mismatches"
    ));
    metrics.push(("identity_failures".into(), identity_failures as f64));

    // (b) External amplitude at z = 1: positive, and the dyadic-N estimates
    // stabilize (each gap at most 3/4 of the previous, or at numerical floor).
    let mut amp_ok = true;
    for params in reference_params() {
        let sizes = [400usize, 800, 1600, 3200];
        let mut estimates = Vec::new();
        for &n_max in &sizes {
            let amp = asymptotics::estimate_amplitude_external(
                &params,
                Complex64::new(1.0, 0.0),
                n_max,
                n_max / 2,
            )?;
            amp_ok &= amp.e_hat.re > 0.0;
            estimates.push(amp.e_hat.re);
        }
        let gaps: Vec<f64> = estimates.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
        for pair in gaps.windows(2) {
            amp_ok &= pair[1] <= (0.75 * pair[0]).max(1e-9);
        }
        metrics.push((format!("external_amp_{params}"), *estimates.last().unwrap()));
    }
    lines.push(format!(
        "external amplitude at z=1 positive and dyadically stabilizing: {amp_ok}"
    ));

    // (c) External analog of the limit trend at alpha between the external
    // and internal admissible ranges.
    let bst = ModelParams::bst();
    let alpha = 1.2f64;
    let (beta, _) = spectral::beta_of_alpha(&bst, alpha, 1e-12)?;
    let reference = limit::sample_y_population(&bst, beta, 14, 100_000, &base.substream(20_000))?;
    let mut ks_values = Vec::new();
    for (idx, &n) in [1_000u64, 10_000, 100_000].iter().enumerate() {
        let ratios =
            limit::mc_external_ratio(&bst, n, alpha, 5000, &base.substream(30_000 + idx as u64))?;
        ks_values.push(stats::ks_two_sample(&ratios, &reference)?);
    }
    let external_trend_ok = ks_values[1] < ks_values[0] && ks_values[2] < ks_values[1];
    lines.push(format!(
        "external KS trend at alpha {alpha} (radius {beta:.2}): {:.4} -> {:.4} -> {:.4}, \
         strictly decreasing: {external_trend_ok}",
        ks_values[0], ks_values[1], ks_values[2]
    ));
    metrics.push(("external_ks_n1e3".into(), ks_values[0]));
    metrics.push(("external_ks_n1e4".into(), ks_values[1]));
    metrics.push(("external_ks_n1e5".into(), ks_values[2]));

    let pass = identity_ok && amp_ok && external_trend_ok;
    Ok((pass, lines.join("; "), metrics))
}
