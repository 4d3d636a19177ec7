//! The limiting fixed-point process Y(z) and tools to compare against it.
//!
//! The normalized profile polynomial `W_n(z)/E W_n(z)` converges to a
//! process `Y(z)` characterized by the distributional identity
//! `Y(z) ≐ Σ_r z V_r^{λ₁(z)−1} Y⁽ʳ⁾(z)` over a Dirichlet split vector `V`.
//! We sample Y by truncating that recursion at depth K with base value 1 —
//! a choice that keeps `E Y = 1` exact at every truncation depth, because
//! `m z E V^{λ₁(z)−1} = z/F(λ₁(z)) = 1`. Closed-form Dirichlet moments give
//! the variance of `Y(β)` for real β, finite exactly on the interval J, and
//! order-statistic couplings give empirical `ℓ_s`/KS distances between
//! simulated profiles and Y-populations.

use crate::error::{Error, Result};
use crate::model::TreeSampler;
use crate::moments;
use crate::params::ModelParams;
use crate::rng::RngStream;
use crate::spectral;
use crate::stats;
use num::complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

/// One split vector of the limiting law: m proportions on the simplex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirichletVector {
    pub v: Vec<f64>,
}

/// One depth-truncated draw of the fixed-point process.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LimitSample {
    pub z: Complex64,
    pub depth: usize,
    pub value: Complex64,
}

/// Empirical distance between two real sample populations.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Minimal-L^s distance estimate from the sorted (comonotone) coupling:
    /// `(mean |a_(i) − b_(i)|^s)^{min(1/s, 1)}`.
    pub ell_s: f64,
    /// Two-sample Kolmogorov–Smirnov statistic.
    pub ks: f64,
    /// The order s of the coupling cost.
    pub s: f64,
    pub size_a: usize,
    pub size_b: usize,
}

/// Draws a symmetric Dirichlet(t+1, …, t+1) vector of length m.
///
/// For t = 0 this is the uniform-spacings construction (exact, one uniform
/// per cut, components sum to 1 bit-exactly); for t ≥ 1, m independent
/// Gamma(t+1) draws are normalized, with the last component computed as the
/// residual so the simplex constraint stays exact.
pub fn sample_dirichlet(params: &ModelParams, rng: &mut RngStream) -> DirichletVector {
    DirichletVector {
        v: dirichlet_raw(params, &gamma_source(params), rng),
    }
}

fn gamma_source(params: &ModelParams) -> Option<Gamma<f64>> {
    if params.t == 0 {
        None
    } else {
        Some(Gamma::new((params.t + 1) as f64, 1.0).expect("valid gamma shape"))
    }
}

fn dirichlet_raw(params: &ModelParams, gamma: &Option<Gamma<f64>>, rng: &mut RngStream) -> Vec<f64> {
    let m = params.m as usize;
    match gamma {
        None => {
            // Uniform spacings of [0,1]: differences of sorted cuts.
            if m == 2 {
                let u: f64 = rng.random();
                return vec![u, 1.0 - u];
            }
            let mut cuts: Vec<f64> = (0..m - 1).map(|_| rng.random::<f64>()).collect();
            cuts.sort_unstable_by(f64::total_cmp);
            let mut v = Vec::with_capacity(m);
            let mut prev = 0.0;
            for c in cuts {
                v.push(c - prev);
                prev = c;
            }
            v.push(1.0 - prev);
            v
        }
        Some(g) => {
            let mut v: Vec<f64> = (0..m).map(|_| g.sample(rng)).collect();
            let total: f64 = v.iter().sum();
            let mut partial = 0.0;
            for x in v.iter_mut().take(m - 1) {
                *x /= total;
                partial += *x;
            }
            let residual = 1.0 - partial;
            v[m - 1] = if residual > 0.0 {
                residual
            } else {
                v[m - 1] / total
            };
            v
        }
    }
}

/// Moment `E V₁^a = 1/(m·F(a+1))` of one Dirichlet component.
pub fn dirichlet_moment(params: &ModelParams, a: f64) -> Result<f64> {
    let t = params.t as f64;
    if !(a > -(t + 1.0)) {
        return Err(Error::OutsideInterval {
            what: "dirichlet moment order a",
            value: a,
            lo: -(t + 1.0),
            hi: f64::INFINITY,
        });
    }
    Ok(1.0 / (params.m as f64 * spectral::f_eval_real(params, a + 1.0)))
}

/// Cross moment `E[V₁^a V₂^a] = Γ(m(t+1))Γ(t+1+a)² / (Γ(t+1)²Γ(m(t+1)+2a))`.
pub fn dirichlet_pair_moment(params: &ModelParams, a: f64) -> Result<f64> {
    let t = params.t as f64;
    let m = params.m as f64;
    if !(a > -(t + 1.0)) {
        return Err(Error::OutsideInterval {
            what: "dirichlet pair moment order a",
            value: a,
            lo: -(t + 1.0),
            hi: f64::INFINITY,
        });
    }
    let total = m * (t + 1.0);
    let log = ln_gamma(total) + 2.0 * ln_gamma(t + 1.0 + a)
        - 2.0 * ln_gamma(t + 1.0)
        - ln_gamma(total + 2.0 * a);
    Ok(log.exp())
}

/// Reusable sampler of depth-truncated Y(z) draws (λ₁ solved once).
pub struct YSampler {
    params: ModelParams,
    z: Complex64,
    /// λ₁(z) − 1.
    exponent: Complex64,
    gamma: Option<Gamma<f64>>,
    /// Fast path: z real positive and the exponent real.
    real_case: bool,
}

impl YSampler {
    pub fn new(params: &ModelParams, z: Complex64) -> Result<Self> {
        let lambda1 = if z.im == 0.0 && z.re == 1.0 {
            // F(2) = (mt+m)/(m(t+1)) = 1 for every (m,t), so λ₁(1) = 2
            // exactly; using the identity keeps the z = 1 telescoping
            // Y ≡ 1 bit-exact.
            Complex64::new(2.0, 0.0)
        } else if z.im == 0.0 && z.re > 0.0 {
            Complex64::new(spectral::lambda1_real(params, z.re, 1e-13)?, 0.0)
        } else {
            spectral::all_roots(params, z, 1e-12)?.lambda1
        };
        Ok(Self {
            params: *params,
            z,
            exponent: lambda1 - 1.0,
            gamma: gamma_source(params),
            real_case: z.im == 0.0 && z.re > 0.0 && lambda1.im == 0.0,
        })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn lambda1(&self) -> Complex64 {
        self.exponent + 1.0
    }

    /// One draw of Y^{(depth)}(z).
    pub fn sample(&self, depth: usize, rng: &mut RngStream) -> LimitSample {
        let value = if self.real_case {
            Complex64::new(self.recurse_real(depth, rng), 0.0)
        } else {
            self.recurse_complex(depth, rng)
        };
        LimitSample {
            z: self.z,
            depth,
            value,
        }
    }

    fn recurse_real(&self, depth: usize, rng: &mut RngStream) -> f64 {
        if depth == 0 {
            return 1.0;
        }
        let w = self.exponent.re;
        let v = dirichlet_raw(&self.params, &self.gamma, rng);
        let mut acc = 0.0;
        for vr in v {
            acc += self.z.re * vr.powf(w) * self.recurse_real(depth - 1, rng);
        }
        acc
    }

    fn recurse_complex(&self, depth: usize, rng: &mut RngStream) -> Complex64 {
        if depth == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let v = dirichlet_raw(&self.params, &self.gamma, rng);
        let mut acc = Complex64::default();
        for vr in v {
            // vr^w for real vr > 0: exp(w·ln vr).
            let weight = (self.exponent * vr.ln()).exp();
            acc += self.z * weight * self.recurse_complex(depth - 1, rng);
        }
        acc
    }
}

/// One depth-truncated draw of the fixed-point process Y(z).
pub fn sample_y(
    params: &ModelParams,
    z: Complex64,
    depth: usize,
    rng: &mut RngStream,
) -> Result<LimitSample> {
    Ok(YSampler::new(params, z)?.sample(depth, rng))
}

/// Population of real Y(β) draws, one derived RNG substream per draw (so the
/// population is identical however the draws are scheduled).
pub fn sample_y_population(
    params: &ModelParams,
    beta: f64,
    depth: usize,
    count: usize,
    base: &RngStream,
) -> Result<Vec<f64>> {
    if !(beta > 0.0) {
        return Err(Error::DomainViolation(format!(
            "Y population needs real beta > 0, got {beta}"
        )));
    }
    let sampler = YSampler::new(params, Complex64::new(beta, 0.0))?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = base.substream(i as u64);
        out.push(sampler.sample(depth, &mut rng).value.re);
    }
    Ok(out)
}

/// Closed-form denominator `1 − m β² E V^{2λ₁(β)−2}` of the second-moment
/// fixed point; positive exactly for β inside J.
pub fn variance_y_denominator(params: &ModelParams, beta: f64) -> Result<f64> {
    let lambda1 = spectral::lambda1_real(params, beta, 1e-13)?;
    let mu2 = dirichlet_moment(params, 2.0 * lambda1 - 2.0)?;
    Ok(1.0 - params.m as f64 * beta * beta * mu2)
}

/// Closed-form variance of Y(β) for real β in the admissible interval J.
///
/// `E Y² = m(m−1)β²·E[V₁^a V₂^a] / (1 − mβ²·E V^{2a})` with `a = λ₁(β)−1`;
/// the denominator's positivity on J is exactly the second-moment
/// admissibility condition, so outside J the variance is reported as
/// undefined rather than extrapolated.
pub fn variance_y(params: &ModelParams, beta: f64) -> Result<f64> {
    let constants = spectral::critical_constants(params, 1e-12)?;
    if !(beta > constants.j.0 && beta < constants.j.1) {
        return Err(Error::OutsideInterval {
            what: "beta for variance_y (must lie inside J)",
            value: beta,
            lo: constants.j.0,
            hi: constants.j.1,
        });
    }
    let lambda1 = spectral::lambda1_real(params, beta, 1e-13)?;
    let a = lambda1 - 1.0;
    let mu11 = dirichlet_pair_moment(params, a)?;
    let denom = variance_y_denominator(params, beta)?;
    let m = params.m as f64;
    let second = m * (m - 1.0) * beta * beta * mu11 / denom;
    Ok(second - 1.0)
}

/// Empirical quantile by linear interpolation between order statistics.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    let pos = p * (n as f64) - 0.5;
    if pos <= 0.0 {
        return sorted[0];
    }
    if pos >= (n - 1) as f64 {
        return sorted[n - 1];
    }
    let lo = pos.floor() as usize;
    let frac = pos - lo as f64;
    sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac
}

/// Empirical `ℓ_s` (sorted coupling) and KS distance between two real
/// sample sets.
///
/// Equal sizes pair order statistics directly; unequal sizes compare the
/// interpolated quantile functions on the finer grid.
pub fn empirical_distance(a: &[f64], b: &[f64], s: f64) -> Result<DistanceReport> {
    if a.len() < 100 || b.len() < 100 {
        return Err(Error::SampleTooSmall {
            len: a.len().min(b.len()),
            min: 100,
        });
    }
    if !(s > 0.0 && s <= 2.0) {
        return Err(Error::OutsideInterval {
            what: "coupling order s",
            value: s,
            lo: 0.0,
            hi: 2.0,
        });
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(f64::total_cmp);
    sb.sort_unstable_by(f64::total_cmp);
    let cost = if sa.len() == sb.len() {
        sa.iter()
            .zip(&sb)
            .map(|(x, y)| (x - y).abs().powf(s))
            .sum::<f64>()
            / sa.len() as f64
    } else {
        let grid = sa.len().max(sb.len());
        let mut acc = 0.0;
        for i in 0..grid {
            let p = (i as f64 + 0.5) / grid as f64;
            let qa = quantile_sorted(&sa, p);
            let qb = quantile_sorted(&sb, p);
            acc += (qa - qb).abs().powf(s);
        }
        acc / grid as f64
    };
    let ell_s = cost.powf((1.0 / s).min(1.0));
    let ks = stats::ks_two_sample(a, b)?;
    Ok(DistanceReport {
        ell_s,
        ks,
        s,
        size_a: a.len(),
        size_b: b.len(),
    })
}

/// Simulated normalized level occupancies `X_{n,k}/E X_{n,k}` at
/// `k = ⌊α log n⌋`, one derived RNG substream per replicate.
///
/// The exact DP mean is computed once (O(n·k) time, O(n) space); a mean
/// that underflows to ~0 (k far beyond the occupied band) is an error
/// rather than a division by zero.
pub fn mc_profile_ratio(
    params: &ModelParams,
    n: u64,
    alpha: f64,
    reps: usize,
    base: &RngStream,
) -> Result<Vec<f64>> {
    let k = (alpha * (n as f64).ln()).floor() as usize;
    let mean = moments::expected_profile_at(params, n as usize, k);
    if !(mean > 1e-300) {
        return Err(Error::ZeroMean { n: n as usize, k });
    }
    let mut sampler = TreeSampler::new(*params);
    let mut out = Vec::with_capacity(reps);
    for i in 0..reps {
        let mut rng = base.substream(i as u64);
        let count = sampler.keys_at_level(n, k as u32, &mut rng);
        out.push(count as f64 / mean);
    }
    Ok(out)
}

/// External analog of [`mc_profile_ratio`]: `Y_{n,k}/E Y_{n,k}`.
pub fn mc_external_ratio(
    params: &ModelParams,
    n: u64,
    alpha: f64,
    reps: usize,
    base: &RngStream,
) -> Result<Vec<f64>> {
    let k = (alpha * (n as f64).ln()).floor() as usize;
    let mean = moments::expected_external_at(params, n as usize, k);
    if !(mean > 1e-300) {
        return Err(Error::ZeroMean { n: n as usize, k });
    }
    let mut sampler = TreeSampler::new(*params);
    let mut out = Vec::with_capacity(reps);
    for i in 0..reps {
        let mut rng = base.substream(i as u64);
        let count = sampler.external_at_level(n, k as u32, &mut rng);
        out.push(count as f64 / mean);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn p(m: u64, t: u64) -> ModelParams {
        ModelParams::new(m, t).unwrap()
    }

    #[test]
    fn dirichlet_sums_to_one() {
        for (m, t) in [(2u64, 0u64), (2, 1), (3, 0), (3, 2), (5, 1)] {
            let params = p(m, t);
            let mut rng = RngStream::new(7, 0);
            for _ in 0..200 {
                let d = sample_dirichlet(&params, &mut rng);
                assert_eq!(d.v.len(), m as usize);
                let sum: f64 = d.v.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
                assert!(d.v.iter().all(|&x| x > 0.0));
            }
        }
    }

    #[test]
    fn dirichlet_component_mean_is_one_over_m() {
        for (m, t) in [(2u64, 0u64), (3, 1), (4, 2)] {
            let params = p(m, t);
            let mut rng = RngStream::new(11, 0);
            let draws = 20_000;
            let mut acc = vec![0.0f64; m as usize];
            for _ in 0..draws {
                let d = sample_dirichlet(&params, &mut rng);
                for (slot, x) in acc.iter_mut().zip(&d.v) {
                    *slot += x;
                }
            }
            // Var V₁ ≤ 1/(4(m(t+1)+1)); allow 4 sigma.
            let se = (0.25 / (m as f64 * (t as f64 + 1.0) + 1.0) / draws as f64).sqrt();
            for slot in acc {
                assert!((slot / draws as f64 - 1.0 / m as f64).abs() < 4.0 * se);
            }
        }
    }

    #[test]
    fn bst_dirichlet_marginal_is_uniform() {
        let params = p(2, 0);
        let mut rng = RngStream::new(5, 3);
        let draws: Vec<f64> = (0..20_000)
            .map(|_| sample_dirichlet(&params, &mut rng).v[0])
            .collect();
        let d = stats::ks_one_sample(&draws, |x| x.clamp(0.0, 1.0)).unwrap();
        let pv = stats::ks_p_value(d, draws.len());
        assert!(pv > 1e-3, "KS p = {pv}");
    }

    #[test]
    fn dirichlet_marginal_matches_beta_cdf() {
        // V₁ ~ Beta(t+1, (m−1)(t+1)).
        use statrs::distribution::{Beta, ContinuousCDF};
        let params = p(3, 1);
        let beta = Beta::new(2.0, 4.0).unwrap();
        let mut rng = RngStream::new(23, 1);
        let draws: Vec<f64> = (0..20_000)
            .map(|_| sample_dirichlet(&params, &mut rng).v[0])
            .collect();
        let d = stats::ks_one_sample(&draws, |x| beta.cdf(x)).unwrap();
        let pv = stats::ks_p_value(d, draws.len());
        assert!(pv > 1e-3, "KS p = {pv}");
    }

    #[test]
    fn moment_closed_forms() {
        let bst = p(2, 0);
        assert_abs_diff_eq!(dirichlet_moment(&bst, 0.0).unwrap(), 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dirichlet_moment(&bst, 1.0).unwrap(), 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(
            dirichlet_moment(&bst, 2.0).unwrap(),
            1.0 / 3.0,
            epsilon = 1e-14
        );
        assert!(dirichlet_moment(&bst, -1.0).is_err());
        assert_abs_diff_eq!(dirichlet_pair_moment(&bst, 0.0).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            dirichlet_pair_moment(&bst, 1.0).unwrap(),
            1.0 / 6.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn pair_moment_matches_monte_carlo() {
        let params = p(3, 1);
        let a = 1.3f64;
        let exact = dirichlet_pair_moment(&params, a).unwrap();
        let mut rng = RngStream::new(99, 0);
        let draws = 200_000;
        let samples: Vec<f64> = (0..draws)
            .map(|_| {
                let d = sample_dirichlet(&params, &mut rng);
                d.v[0].powf(a) * d.v[1].powf(a)
            })
            .collect();
        let (mean, se) = stats::mean_se(&samples);
        assert!(
            (mean - exact).abs() < 3.0 * se,
            "MC {mean} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn y_base_case_and_z_one_identity() {
        let mut rng = RngStream::new(1, 0);
        for (m, t) in [(2u64, 0u64), (2, 1), (3, 0), (3, 2)] {
            let params = p(m, t);
            let s0 = sample_y(&params, Complex64::new(1.7, 0.0), 0, &mut rng).unwrap();
            assert_eq!(s0.value, Complex64::new(1.0, 0.0));
            for depth in [1usize, 4, 9] {
                let s = sample_y(&params, Complex64::new(1.0, 0.0), depth, &mut rng).unwrap();
                assert_eq!(
                    s.value,
                    Complex64::new(1.0, 0.0),
                    "telescoping broken at {params} depth {depth}"
                );
            }
        }
    }

    #[test]
    fn y_mean_is_one() {
        let params = p(2, 0);
        let base = RngStream::new(42, 7);
        let pop = sample_y_population(&params, 1.2, 10, 30_000, &base).unwrap();
        let (mean, se) = stats::mean_se(&pop);
        assert!((mean - 1.0).abs() < 3.5 * se, "mean {mean} se {se}");
    }

    #[test]
    fn y_population_is_schedule_independent() {
        let params = p(2, 0);
        let base = RngStream::new(42, 7);
        let pop = sample_y_population(&params, 1.2, 6, 50, &base).unwrap();
        // Drawing replicate 17 in isolation reproduces the same value.
        let sampler = YSampler::new(&params, Complex64::new(1.2, 0.0)).unwrap();
        let mut rng = base.substream(17);
        let lone = sampler.sample(6, &mut rng).value.re;
        assert_eq!(pop[17], lone);
    }

    #[test]
    fn y_variance_matches_closed_form() {
        let params = p(2, 0);
        let beta = 1.2f64;
        let exact = variance_y(&params, beta).unwrap();
        let base = RngStream::new(4242, 0);
        let pop = sample_y_population(&params, beta, 12, 30_000, &base).unwrap();
        let (var, se) = stats::variance_se(&pop);
        // Depth truncation bias at K = 12 is far below the MC noise here.
        assert!(
            (var - exact).abs() < 3.5 * se,
            "MC var {var} vs exact {exact} (se {se})"
        );
    }

    #[test]
    fn variance_closed_forms() {
        for (m, t) in [(2u64, 0u64), (2, 1), (3, 0)] {
            let params = p(m, t);
            let v1 = variance_y(&params, 1.0).unwrap();
            assert_abs_diff_eq!(v1, 0.0, epsilon = 1e-12);
        }
        // Outside J the variance must be refused, not extrapolated.
        let c = spectral::critical_constants(&p(2, 0), 1e-12).unwrap();
        assert!(variance_y(&p(2, 0), c.j.1 + 0.01).is_err());
        assert!(variance_y(&p(2, 0), c.j.0 - 0.01).is_err());
    }

    #[test]
    fn variance_denominator_flips_at_j_endpoints() {
        for (m, t) in [(2u64, 0u64), (2, 1), (3, 0)] {
            let params = p(m, t);
            let c = spectral::critical_constants(&params, 1e-12).unwrap();
            for endpoint in [c.j.0, c.j.1] {
                let inside = variance_y_denominator(
                    &params,
                    endpoint + if endpoint == c.j.0 { 1e-6 } else { -1e-6 },
                )
                .unwrap();
                let outside = variance_y_denominator(
                    &params,
                    endpoint + if endpoint == c.j.0 { -1e-6 } else { 1e-6 },
                )
                .unwrap();
                assert!(
                    inside > 0.0 && outside < 0.0,
                    "{params} endpoint {endpoint}: {inside} / {outside}"
                );
            }
        }
    }

    #[test]
    fn depth_stabilization_contracts() {
        let params = p(2, 0);
        let beta = 1.2f64;
        let mut gaps = Vec::new();
        for k in [2usize, 4, 6] {
            let pop_a = sample_y_population(&params, beta, k, 4000, &RngStream::new(7, 1)).unwrap();
            let pop_b =
                sample_y_population(&params, beta, k + 2, 4000, &RngStream::new(7, 2)).unwrap();
            let rep = empirical_distance(&pop_a, &pop_b, 2.0).unwrap();
            gaps.push(rep.ell_s);
        }
        assert!(
            gaps[1] < gaps[0] && gaps[2] < gaps[1],
            "stabilization gaps not decreasing: {gaps:?}"
        );
    }

    #[test]
    fn distance_identities() {
        let a: Vec<f64> = (0..500).map(|i| (i as f64 * 0.618).sin()).collect();
        let same = empirical_distance(&a, &a, 2.0).unwrap();
        assert_eq!(same.ell_s, 0.0);
        assert_eq!(same.ks, 0.0);
        let shifted: Vec<f64> = a.iter().map(|x| x + 0.25).collect();
        let rep = empirical_distance(&a, &shifted, 1.0).unwrap();
        assert_abs_diff_eq!(rep.ell_s, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn distance_unequal_sizes_via_quantiles() {
        // Same underlying uniform grid at two resolutions: distance ~ 0.
        let a: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let b: Vec<f64> = (0..400).map(|i| (i as f64 + 0.5) / 400.0).collect();
        let rep = empirical_distance(&a, &b, 2.0).unwrap();
        assert!(rep.ell_s < 0.01, "ell_2 = {}", rep.ell_s);
    }

    #[test]
    fn distance_input_validation() {
        let small = vec![0.0; 50];
        let ok = vec![0.0; 200];
        assert!(empirical_distance(&small, &ok, 1.0).is_err());
        assert!(empirical_distance(&ok, &ok, 2.5).is_err());
    }

    #[test]
    fn ratio_population_mean_is_one() {
        let params = p(2, 0);
        let base = RngStream::new(31337, 0);
        let pop = mc_profile_ratio(&params, 300, 2.0, 4000, &base).unwrap();
        let (mean, se) = stats::mean_se(&pop);
        assert!((mean - 1.0).abs() < 4.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn ratio_rejects_vanishing_mean() {
        // alpha large enough that k >= n, where the mean is exactly zero.
        assert!(matches!(
            mc_profile_ratio(&p(2, 0), 50, 14.0, 10, &RngStream::new(1, 0)),
            Err(Error::ZeroMean { .. })
        ));
    }

    #[test]
    fn external_ratio_population_mean_is_one() {
        let params = p(2, 0);
        let base = RngStream::new(999, 4);
        let pop = mc_external_ratio(&params, 300, 1.2, 4000, &base).unwrap();
        let (mean, se) = stats::mean_se(&pop);
        assert!((mean - 1.0).abs() < 4.0 * se, "mean {mean} se {se}");
    }
}
