//! The characteristic function F(θ), its roots, and all critical constants.
//!
//! The growth of every profile moment is governed by
//! `F(θ) = t!/(m·r!) · (θ+t)(θ+t+1)···(θ+mt+m−2)`, a degree-d polynomial
//! with `d = (m−1)(t+1)`. For a given z, the roots of `F(θ) = z` drive the
//! `n^{λ−1}` scales; the dominant root `λ₁(z)` (largest real part) is the one
//! that survives in asymptotics. This module solves for roots (real case by
//! monotone bracketing, full complex set by Aberth iteration), differentiates
//! `λ₁` implicitly, inverts the saddle map `α = β λ₁′(β)`, and derives the
//! critical exponents `α₀ < α_max < α₊`, `α₋`, and the admissible intervals
//! `I ⊆ J` (with their images `I′`, `J′` under the saddle map).

use crate::error::{Error, Result};
use crate::params::ModelParams;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dominance-gap threshold below which the leading root is not considered
/// cleanly separated (boundary-slit region).
pub const DOMINANCE_GAP_TOL: f64 = 1e-9;

const MAX_ABERTH_ITER: usize = 400;
const BISECT_ITER: usize = 200;

/// Full root set of `F(θ) = z` with dominance diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DominantRoot {
    /// The evaluation point z.
    pub z: Complex64,
    /// Root with the largest real part.
    pub lambda1: Complex64,
    /// All d roots, sorted by descending real part (ties: descending
    /// imaginary part).
    pub all_roots: Vec<Complex64>,
    /// Re λ₁ − Re λ₂ (infinite when d = 1).
    pub gap: f64,
    /// Whether the dominant root is cleanly separated (gap above
    /// [`DOMINANCE_GAP_TOL`]).
    pub simple: bool,
}

impl DominantRoot {
    /// Three-valued membership test for the region where asymptotics with
    /// exponent s apply: requires Re λ₁ > s and a clean dominance gap.
    /// Returns `None` when the point sits too close to the boundary slit to
    /// classify.
    pub fn in_domain(&self, s: f64) -> Option<bool> {
        if !self.simple {
            return if self.lambda1.re <= s { Some(false) } else { None };
        }
        Some(self.lambda1.re > s)
    }
}

/// Critical exponents and admissible intervals for profile asymptotics.
///
/// Interval semantics (all open):
/// * `j = (β*₁, β*₂)` — where the second-moment scale stays dominated by the
///   square of the first-moment scale;
/// * `i = (max(β*₁, m^{−1/2}), β*₂) ⊆ j` — where additionally λ₁(β²) > 1;
/// * `i_prime`, `j_prime` — images of the above under the saddle map
///   β ↦ α(β).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CriticalConstants {
    pub alpha0: f64,
    pub alpha_max: f64,
    pub alpha_minus: f64,
    pub alpha_plus: f64,
    pub lambda_minus: f64,
    pub lambda_plus: f64,
    pub beta1_star: f64,
    pub beta2_star: f64,
    pub i: (f64, f64),
    pub i_prime: (f64, f64),
    pub j: (f64, f64),
    pub j_prime: (f64, f64),
}

/// Contraction diagnostics for the fixed-point argument at real x > 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ContractionMargin {
    /// g_x(s) = x^s / F(s(λ₁(x)−1)+1) at the requested s.
    pub g_at_s: f64,
    /// h′_x(1) = (λ₁(x)−1)·(F′/F)(λ₁(x)) − log x.
    pub h_prime_at_one: f64,
    /// Minimum of g over (1, s] found by golden-section search.
    pub min_g: f64,
    /// Argmin of the golden-section search.
    pub argmin_s: f64,
    /// Whether some s in (1, s] achieves g_x(s) < 1.
    pub contracts: bool,
}

/// One point of an arc probe of Re λ₁(β e^{iφ}).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ArcProbePoint {
    pub phi: f64,
    pub re_lambda1: f64,
    pub gap: f64,
    /// False when the dominance gap collapses (near the boundary slit).
    pub dominant: bool,
}

/// Result of probing Re λ₁ along a circular arc.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArcProbe {
    pub beta: f64,
    pub points: Vec<ArcProbePoint>,
    /// Strict decrease of Re λ₁ across consecutive points where dominance
    /// holds.
    pub strictly_decreasing: bool,
}

/// Leading factor `t!/(m·r!)` of F.
fn f_prefactor(params: &ModelParams) -> f64 {
    let mut c = 1.0f64;
    for i in 1..=params.t {
        c *= i as f64;
    }
    for i in 1..=params.r() {
        c /= i as f64;
    }
    c / params.m as f64
}

/// F(θ) = t!/(m·r!) · ∏_{i=t}^{mt+m−2} (θ+i).
pub fn f_eval(params: &ModelParams, theta: Complex64) -> Complex64 {
    let mut prod = Complex64::new(f_prefactor(params), 0.0);
    for i in params.t..=params.r() - 1 {
        prod *= theta + i as f64;
    }
    prod
}

/// Real-argument F for θ > −t (positive branch).
pub fn f_eval_real(params: &ModelParams, theta: f64) -> f64 {
    let mut prod = f_prefactor(params);
    for i in params.t..=params.r() - 1 {
        prod *= theta + i as f64;
    }
    prod
}

/// log F(θ) for real θ > −t, computed in log space (no overflow for large θ).
pub fn f_ln_real(params: &ModelParams, theta: f64) -> f64 {
    let mut acc = f_prefactor(params).ln();
    for i in params.t..=params.r() - 1 {
        acc += (theta + i as f64).ln();
    }
    acc
}

/// Logarithmic derivative F′/F = Σ_{i=t}^{mt+m−2} 1/(θ+i).
pub fn f_logderiv(params: &ModelParams, theta: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for i in params.t..=params.r() - 1 {
        let denom = theta + i as f64;
        if denom.norm() < 1e-12 {
            return Err(Error::LogDerivativePole {
                offset: i,
                magnitude: denom.norm(),
            });
        }
        acc += denom.inv();
    }
    Ok(acc)
}

/// Second log-sum Σ 1/(θ+i)², so that F″ = F·(S₁² − S₂).
pub fn f_second_logterm(params: &ModelParams, theta: Complex64) -> Result<Complex64> {
    let mut acc = Complex64::default();
    for i in params.t..=params.r() - 1 {
        let denom = theta + i as f64;
        if denom.norm() < 1e-12 {
            return Err(Error::LogDerivativePole {
                offset: i,
                magnitude: denom.norm(),
            });
        }
        acc += (denom * denom).inv();
    }
    Ok(acc)
}

fn s1_real(params: &ModelParams, theta: f64) -> f64 {
    (params.t..=params.r() - 1)
        .map(|i| 1.0 / (theta + i as f64))
        .sum()
}

fn s2_real(params: &ModelParams, theta: f64) -> f64 {
    (params.t..=params.r() - 1)
        .map(|i| 1.0 / ((theta + i as f64) * (theta + i as f64)))
        .sum()
}

/// Bisection to near machine precision; requires a sign change on [lo, hi].
fn bisect(what: &'static str, f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::BracketingFailure { what, lo, hi });
    }
    let decreasing = flo > 0.0;
    for _ in 0..BISECT_ITER {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break; // interval exhausted at double precision
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == decreasing {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The unique root of F(λ) = β on (−t, ∞), for real β > 0.
///
/// F is strictly increasing from 0 to ∞ there, so a monotone bracket always
/// exists; bisection is refined by a few Newton steps.
pub fn lambda1_real(params: &ModelParams, beta: f64, tol: f64) -> Result<f64> {
    if !(beta > 0.0) {
        return Err(Error::DomainViolation(format!(
            "lambda1_real needs beta > 0, got {beta}"
        )));
    }
    let t = params.t as f64;
    let ln_beta = beta.ln();
    let g = |lam: f64| f_ln_real(params, lam) - ln_beta;
    let mut lo = -t + 1e-12;
    let mut hi = -t + 1.0;
    let mut guard = 0;
    while g(hi) < 0.0 {
        hi = -t + 2.0 * (hi + t);
        guard += 1;
        if guard > 200 {
            return Err(Error::BracketingFailure {
                what: "lambda1_real upper bracket",
                lo,
                hi,
            });
        }
    }
    let mut lam = bisect("lambda1_real", g, lo, hi)?;
    lo = lam - 1e-6;
    hi = lam + 1e-6;
    // Newton polish on F(λ) − β with F′ = F·S₁.
    for _ in 0..4 {
        let f = f_eval_real(params, lam);
        let fp = f * s1_real(params, lam);
        if fp == 0.0 {
            break;
        }
        let step = (f - beta) / fp;
        let cand = lam - step;
        if cand > lo && cand < hi {
            lam = cand;
        }
    }
    let resid = (f_eval_real(params, lam) - beta).abs();
    debug_assert!(resid <= tol.max(1e-9) * (1.0 + beta), "residual {resid}");
    Ok(lam)
}

/// (λ₁′(β), λ₁″(β)) for real β > 0, by implicit differentiation of
/// F(λ₁(β)) = β: λ₁′ = 1/F′, λ₁″ = −F″/F′³.
pub fn lambda1_derivs(params: &ModelParams, beta: f64) -> Result<(f64, f64)> {
    let lam = lambda1_real(params, beta, 1e-13)?;
    let s1 = s1_real(params, lam);
    let s2 = s2_real(params, lam);
    let fp = beta * s1;
    let fpp = beta * (s1 * s1 - s2);
    Ok((1.0 / fp, -fpp / (fp * fp * fp)))
}

/// Saddle map α(β) = β λ₁′(β) = 1/S₁(λ₁(β)).
pub fn alpha_of_beta(params: &ModelParams, beta: f64) -> Result<f64> {
    let lam = lambda1_real(params, beta, 1e-13)?;
    Ok(1.0 / s1_real(params, lam))
}

/// Inverse saddle map: solves β λ₁′(β) = α, i.e. S₁(λ) = 1/α for
/// λ ∈ (−t, ∞), and returns (β, λ) with β = F(λ).
///
/// S₁ is strictly decreasing from +∞ to 0 on (−t, ∞), so the bracket is
/// monotone.
pub fn beta_of_alpha(params: &ModelParams, alpha: f64, _tol: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0) {
        return Err(Error::DomainViolation(format!(
            "beta_of_alpha needs alpha > 0, got {alpha}"
        )));
    }
    let t = params.t as f64;
    let target = 1.0 / alpha;
    let g = |lam: f64| s1_real(params, lam) - target;
    let lo = -t + 1e-12;
    let mut hi = -t + 1.0;
    let mut guard = 0;
    while g(hi) > 0.0 {
        hi = -t + 2.0 * (hi + t);
        guard += 1;
        if guard > 200 {
            return Err(Error::BracketingFailure {
                what: "beta_of_alpha upper bracket",
                lo,
                hi,
            });
        }
    }
    let lam = bisect("beta_of_alpha", g, lo, hi)?;
    Ok((f_eval_real(params, lam), lam))
}

/// Monic coefficients of ∏_{i=t}^{t+d−1}(θ+i), lowest degree first.
fn monic_shift_product(params: &ModelParams) -> Vec<f64> {
    let mut coeffs = vec![1.0f64];
    for i in params.t..=params.r() - 1 {
        // multiply by (θ + i)
        let mut next = vec![0.0; coeffs.len() + 1];
        for (p, c) in coeffs.iter().enumerate() {
            next[p + 1] += c;
            next[p] += c * i as f64;
        }
        coeffs = next;
    }
    coeffs
}

/// Root-modulus bound (Fujiwara): 2·max_k |a_{d−k}/a_d|^{1/k}.
///
/// Unlike the cruder `1 + max|a|` bound this stays within floating-point
/// range even when the coefficients are astronomically large (they grow like
/// (t+d)! for wide trees), because it takes k-th roots.
fn fujiwara_radius(coeffs: &[Complex64]) -> f64 {
    let d = coeffs.len() - 1;
    let mut best = 0.0f64;
    for k in 1..=d {
        let mut mag = coeffs[d - k].norm();
        if k == d {
            mag *= 0.5;
        }
        let bound = mag.powf(1.0 / k as f64);
        best = best.max(bound);
    }
    2.0 * best
}

/// All d roots of F(θ) = z by simultaneous Aberth iteration.
pub fn all_roots(params: &ModelParams, z: Complex64, tol: f64) -> Result<DominantRoot> {
    let d = params.d() as usize;
    let prefactor = f_prefactor(params); // t!/(m·r!)
    let shift = z / prefactor; // solve ∏(θ+i) = z·m·r!/t!

    if d == 1 {
        let root = shift - params.t as f64;
        return Ok(DominantRoot {
            z,
            lambda1: root,
            all_roots: vec![root],
            gap: f64::INFINITY,
            simple: true,
        });
    }

    // Monic polynomial P(θ) = ∏(θ+i) − shift, lowest degree first.
    let mut coeffs: Vec<Complex64> = monic_shift_product(params)
        .into_iter()
        .map(|c| Complex64::new(c, 0.0))
        .collect();
    coeffs[0] -= shift;

    let eval = |x: Complex64| -> (Complex64, Complex64) {
        // Horner for P and P′.
        let mut p = Complex64::default();
        let mut dp = Complex64::default();
        for c in coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    };

    // Circular initialization at the Fujiwara root bound, with an irrational
    // phase offset so no starting point sits on a symmetry axis.
    let radius = fujiwara_radius(&coeffs).max(1e-3);
    let mut roots: Vec<Complex64> = (0..d)
        .map(|i| {
            let angle = 2.0 * std::f64::consts::PI * (i as f64 / d as f64) + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    // Residual scale translating |P| back to |F(θ) − z|.
    let accept = tol * (1.0 + z.norm()) / prefactor;
    let mut converged = false;
    let mut iterations = 0;
    for iter in 0..MAX_ABERTH_ITER {
        iterations = iter + 1;
        let mut max_resid = 0.0f64;
        let mut max_step = 0.0f64;
        let snapshot = roots.clone();
        for i in 0..d {
            let (p, dp) = eval(snapshot[i]);
            max_resid = max_resid.max(p.norm());
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() == 0.0 {
                Complex64::new(1e-8, 1e-8)
            } else {
                p / dp
            };
            let mut repulse = Complex64::default();
            for (j, other) in snapshot.iter().enumerate() {
                if j != i {
                    let diff = snapshot[i] - other;
                    if diff.norm() > 1e-300 {
                        repulse += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulse;
            let step = if denom.norm() < 1e-12 {
                newton
            } else {
                newton / denom
            };
            roots[i] = snapshot[i] - step;
            max_step = max_step.max(step.norm() / (1.0 + roots[i].norm()));
        }
        if max_resid <= accept || max_step < 1e-15 {
            converged = max_resid <= accept;
            if converged {
                break;
            }
            if max_step < 1e-15 {
                // Stalled: accept only if the residual is still tiny in F-units.
                converged = max_resid * prefactor <= tol.max(1e-9) * (1.0 + z.norm()) * 1e3;
                break;
            }
        }
    }
    if !converged {
        let worst = roots
            .iter()
            .map(|r| (f_eval(params, *r) - z).norm())
            .fold(0.0f64, f64::max);
        return Err(Error::RootsNotConverged {
            iterations,
            residual: worst,
        });
    }

    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    let gap = roots[0].re - roots[1].re;
    Ok(DominantRoot {
        z,
        lambda1: roots[0],
        all_roots: roots,
        gap,
        simple: gap > DOMINANCE_GAP_TOL,
    })
}

/// Harmonic sum Σ_{j=a}^{b} 1/j.
fn harmonic(a: u64, b: u64) -> f64 {
    (a..=b).map(|j| 1.0 / j as f64).sum()
}

/// All critical exponents and admissible intervals.
///
/// * `α₀ = 1/(Σ_{j=t+1}^{(t+1)m−1} 1/j)`, `α_max = 1/(Σ_{j=t+2}^{(t+1)m} 1/j)`;
/// * `λ±` solve `log F(λ) = (λ−1)·S₁(λ)`, one root on each side of the
///   interval (−t, 1) ∪ (2, ∞); `α± = 1/S₁(λ±)`;
/// * `λ*` solve `F(2λ−1) = F(λ)²` on each side of λ = 1; `β*_j = F(λ*_j)`.
///
/// The tangency identity `λ₁(β(α)) − α·log β(α) − 1 = 0` is re-checked at
/// `α₊` through the independent `beta_of_alpha` path; failure to vanish
/// within `10·tol` is a bug signal.
pub fn critical_constants(params: &ModelParams, tol: f64) -> Result<CriticalConstants> {
    let m = params.m;
    let t = params.t;
    let tf = t as f64;
    let alpha0 = 1.0 / harmonic(t + 1, (t + 1) * m - 1);
    let alpha_max = 1.0 / harmonic(t + 2, (t + 1) * m);

    // g(λ) = log F(λ) − (λ−1) S₁(λ); g′ = (λ−1) S₂, so g is strictly
    // decreasing on (−t, 1) and strictly increasing on (1, ∞), with
    // g(−t⁺) = +∞, g(1) = −log m < 0, g(∞) = +∞: exactly one root per side.
    let g = |lam: f64| f_ln_real(params, lam) - (lam - 1.0) * s1_real(params, lam);
    let lambda_minus = bisect("lambda_minus", g, -tf + 1e-9, 1.0 - 1e-12)?;
    let mut hi = 4.0f64;
    let mut guard = 0;
    while g(hi) < 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 100 {
            return Err(Error::BracketingFailure {
                what: "lambda_plus upper bracket",
                lo: 2.0,
                hi,
            });
        }
    }
    let lambda_plus = bisect("lambda_plus", g, 2.0, hi)?;
    let alpha_minus = 1.0 / s1_real(params, lambda_minus);
    let alpha_plus = 1.0 / s1_real(params, lambda_plus);

    // u(λ) = log F(2λ−1) − 2 log F(λ): u((1−t)/2⁺) = −∞, u(1) = log m > 0,
    // u(∞) = −∞; roots λ*₁ < 1 < λ*₂.
    let u = |lam: f64| f_ln_real(params, 2.0 * lam - 1.0) - 2.0 * f_ln_real(params, lam);
    let lam_star_lo = bisect("lambda_star_1", u, (1.0 - tf) / 2.0 + 1e-9, 1.0)?;
    let mut hi = 4.0f64;
    let mut guard = 0;
    while u(hi) > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 100 {
            return Err(Error::BracketingFailure {
                what: "lambda_star_2 upper bracket",
                lo: 1.0,
                hi,
            });
        }
    }
    let lam_star_hi = bisect("lambda_star_2", u, 1.0, hi)?;
    let beta1_star = f_eval_real(params, lam_star_lo);
    let beta2_star = f_eval_real(params, lam_star_hi);

    let j = (beta1_star, beta2_star);
    let i = (beta1_star.max(1.0 / (m as f64).sqrt()), beta2_star);
    let i_prime = (alpha_of_beta(params, i.0)?, alpha_of_beta(params, i.1)?);
    let j_prime = (alpha_of_beta(params, j.0)?, alpha_of_beta(params, j.1)?);

    // Cross-validation of the tangency identity at α₊ via the independent
    // inverse-saddle path.
    let (beta_p, lam_p) = beta_of_alpha(params, alpha_plus, tol)?;
    let tangency = lam_p - alpha_plus * beta_p.ln() - 1.0;
    if tangency.abs() > 10.0 * tol.max(1e-13) {
        return Err(Error::DomainViolation(format!(
            "tangency identity at alpha_plus fails to vanish: {tangency:.3e}"
        )));
    }

    Ok(CriticalConstants {
        alpha0,
        alpha_max,
        alpha_minus,
        alpha_plus,
        lambda_minus,
        lambda_plus,
        beta1_star,
        beta2_star,
        i,
        i_prime,
        j,
        j_prime,
    })
}

/// Contraction diagnostics g_x(s) and h′_x(1) for the fixed-point argument.
///
/// `g_x(s) = x^s / F(s(λ₁(x)−1) + 1)` must dip below 1 for some s ∈ (1, 2]
/// for the contraction argument to close; `h′_x(1)` is its derivative at
/// s = 1 (positive means g initially decreases... g′(1) = −h′, see below).
pub fn contraction_margin(params: &ModelParams, x: f64, s: f64) -> Result<ContractionMargin> {
    if !(x > 0.0) {
        return Err(Error::DomainViolation(format!(
            "contraction_margin needs x > 0, got {x}"
        )));
    }
    if !(s > 1.0 && s <= 2.0) {
        return Err(Error::OutsideInterval {
            what: "contraction order s",
            value: s,
            lo: 1.0,
            hi: 2.0,
        });
    }
    let lam = lambda1_real(params, x, 1e-13)?;
    let t = params.t as f64;
    let arg = |ss: f64| ss * (lam - 1.0) + 1.0;
    if arg(s) <= -t {
        return Err(Error::DomainViolation(format!(
            "s(λ₁(x)−1)+1 = {} is outside F's positive domain (> {})",
            arg(s),
            -t
        )));
    }
    let g_fn = |ss: f64| (ss * x.ln() - f_ln_real(params, arg(ss))).exp();
    let g_at_s = g_fn(s);
    let h_prime_at_one = (lam - 1.0) * s1_real(params, lam) - x.ln();

    // Golden-section minimization of g over [1, s].
    let inv_phi = 0.618_033_988_749_894_9f64;
    let (mut a, mut b) = (1.0f64, s);
    let mut c = b - inv_phi * (b - a);
    let mut d_pt = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (g_fn(c), g_fn(d_pt));
    for _ in 0..120 {
        if fc < fd {
            b = d_pt;
            d_pt = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = g_fn(c);
        } else {
            a = c;
            c = d_pt;
            fc = fd;
            d_pt = a + inv_phi * (b - a);
            fd = g_fn(d_pt);
        }
        if b - a < 1e-12 {
            break;
        }
    }
    let argmin_s = 0.5 * (a + b);
    let min_g = g_fn(argmin_s).min(g_at_s);
    Ok(ContractionMargin {
        g_at_s,
        h_prime_at_one,
        min_g,
        argmin_s,
        contracts: min_g < 1.0,
    })
}

/// Re λ₁(β e^{iφ}) over a φ grid, with dominance diagnostics per point.
pub fn arc_monotonicity_probe(
    params: &ModelParams,
    beta: f64,
    phi_grid: &[f64],
) -> Result<ArcProbe> {
    if !(beta > 0.0) {
        return Err(Error::DomainViolation(format!(
            "arc probe needs beta > 0, got {beta}"
        )));
    }
    let mut points = Vec::with_capacity(phi_grid.len());
    for &phi in phi_grid {
        let z = Complex64::from_polar(beta, phi);
        let root = all_roots(params, z, 1e-12)?;
        points.push(ArcProbePoint {
            phi,
            re_lambda1: root.lambda1.re,
            gap: root.gap,
            dominant: root.simple,
        });
    }
    let mut strictly_decreasing = true;
    let mut prev: Option<f64> = None;
    for pt in &points {
        if !pt.dominant {
            continue;
        }
        if let Some(p) = prev {
            if pt.re_lambda1 >= p {
                strictly_decreasing = false;
            }
        }
        prev = Some(pt.re_lambda1);
    }
    Ok(ArcProbe {
        beta,
        points,
        strictly_decreasing,
    })
}
