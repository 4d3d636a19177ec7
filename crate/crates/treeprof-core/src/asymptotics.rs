//! Asymptotic formulas for expected profiles and their finite-n validation.
//!
//! The expected profile polynomial grows like `G_n(z) ≈ E(z) n^{λ₁(z)−1}`
//! with an amplitude `E(z)` that has no closed form; we estimate it by tail
//! extrapolation of exact DP values and feed it into the saddle-point
//! formula for `E X_{n,k}` at level ratio `α = k/log n`. A discrete Cauchy
//! inversion recovers exact level means from `G_n` evaluated on a circle —
//! an identity check, not an asymptotic one — and log-log slope fits bound
//! the second-moment growth.

use crate::error::{Error, Result};
use crate::moments::{self, ComplexMomentSeries};
use crate::params::ModelParams;
use crate::spectral;
use crate::stats::linear_fit;
use num::complex::Complex64;
use serde::{Deserialize, Serialize};

/// Tail-extrapolated amplitude `E(z)` (or external `Ē(z)`).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AmplitudeEstimate {
    pub z: Complex64,
    /// Fitted limit of `G_n(z)/n^{λ₁(z)−1}`.
    pub e_hat: Complex64,
    /// Fitted correction exponent in `e_n = E + c·n^{−δ}`, `δ ∈ (0, 1.5]`.
    pub delta_hat: f64,
    /// Root-mean-square residual of the fit over the window.
    pub residual: f64,
    /// True when the fit failed and `e_hat` fell back to the last tail value.
    pub degraded: bool,
}

/// Ingredients entering one saddle-point prediction.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SaddleIngredients {
    pub lambda1: f64,
    pub lambda1_second: f64,
    pub e_hat: f64,
}

/// Saddle-point prediction of `E X_{n,k}` at `α = k/log n`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SaddleEstimate {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub prediction: f64,
    pub ingredients: SaddleIngredients,
}

/// Log-log slope of a second-moment series against its theoretical bound.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ExponentCheck {
    pub z: Complex64,
    /// Fitted slope of `log E|W_n(z)|²` vs `log n` over the tail.
    pub slope: f64,
    /// `max{λ₁(|z|²)−1, 2 Re λ₁(z)−2, 0}`.
    pub bound: f64,
    /// `slope − bound`; should not exceed a small positive slack that
    /// absorbs unknowable `(log n)` factors.
    pub slack: f64,
    pub points: usize,
}

/// Least-squares fit of complex samples `e_j ≈ E + c·x_j` for fixed real
/// design values `x_j`. Returns `(E, c, rms)`.
///
/// The Cramer solution is arranged so that constant data returns that
/// constant bit-exactly (numerator and denominator become the identical
/// floating-point expression).
fn affine_fit(xs: &[f64], es: &[Complex64]) -> (Complex64, Complex64, f64) {
    let w = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let mut se = Complex64::default();
    let mut sxe = Complex64::default();
    for (x, e) in xs.iter().zip(es) {
        se += *e;
        sxe += *e * *x;
    }
    let det = w * sxx - sx * sx;
    if det == 0.0 {
        return (Complex64::new(f64::NAN, 0.0), Complex64::default(), f64::NAN);
    }
    let e0 = (se * sxx - sxe * sx) / det;
    let c = (sxe * w - se * sx) / det;
    let mut ss = 0.0;
    for (x, e) in xs.iter().zip(es) {
        ss += (*e - (e0 + c * *x)).norm_sqr();
    }
    (e0, c, (ss / w).sqrt())
}

/// Fits `e_n = E + c·n^{−δ}` over `(n, e_n)` pairs by scanning δ on a grid
/// and refining the best cell by golden-section search.
fn fit_tail_power(ns: &[usize], es: &[Complex64]) -> (Complex64, f64, f64) {
    let residual_at = |delta: f64| -> (Complex64, f64) {
        let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).powf(-delta)).collect();
        let (e0, _c, rms) = affine_fit(&xs, es);
        (e0, rms)
    };
    let mut best_delta = 0.025;
    let mut best_rms = f64::INFINITY;
    let mut k = 1;
    while k <= 60 {
        let delta = 0.025 * k as f64;
        let (_e, rms) = residual_at(delta);
        if rms.is_finite() && rms < best_rms {
            best_rms = rms;
            best_delta = delta;
        }
        k += 1;
    }
    // Golden-section refinement inside the winning bracket.
    let inv_phi = 0.618_033_988_749_894_9f64;
    let (mut a, mut b) = ((best_delta - 0.025).max(1e-6), (best_delta + 0.025).min(1.5));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (residual_at(c).1, residual_at(d).1);
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = residual_at(c).1;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = residual_at(d).1;
        }
        if b - a < 1e-10 {
            break;
        }
    }
    let refined = 0.5 * (a + b);
    let (e_ref, rms_ref) = residual_at(refined);
    if rms_ref.is_finite() && rms_ref <= best_rms {
        (e_ref, refined, rms_ref)
    } else {
        let (e0, rms) = residual_at(best_delta);
        (e0, best_delta, rms)
    }
}

fn amplitude_from_series(
    z: Complex64,
    lambda1: Complex64,
    series: &[Complex64],
    n_max: usize,
    window: usize,
) -> AmplitudeEstimate {
    let start = n_max.saturating_sub(window.saturating_sub(1)).max(2);
    let ns: Vec<usize> = (start..=n_max).collect();
    let exponent = lambda1 - 1.0;
    let es: Vec<Complex64> = ns
        .iter()
        .map(|&n| {
            // powf for real exponents (one rounding, and exact when the
            // exponent is exactly 1); complex exp otherwise.
            let scale = if exponent.im == 0.0 {
                Complex64::new((n as f64).powf(exponent.re), 0.0)
            } else {
                (exponent * (n as f64).ln()).exp()
            };
            series[n] / scale
        })
        .collect();
    let (e_hat, delta_hat, residual) = fit_tail_power(&ns, &es);
    let mean_mag = es.iter().map(|e| e.norm()).sum::<f64>() / es.len() as f64;
    let degraded = !e_hat.is_finite() || !(residual <= 0.25 * mean_mag.max(1e-300));
    if degraded {
        AmplitudeEstimate {
            z,
            e_hat: *es.last().unwrap(),
            delta_hat: 0.0,
            residual,
            degraded: true,
        }
    } else {
        AmplitudeEstimate {
            z,
            e_hat,
            delta_hat,
            residual,
            degraded: false,
        }
    }
}

fn check_amplitude_domain(params: &ModelParams, z: Complex64) -> Result<Complex64> {
    let root = spectral::all_roots(params, z, 1e-12)?;
    if root.in_domain(1.0) == Some(false) {
        return Err(Error::DomainViolation(format!(
            "z = {z} has Re λ₁ = {:.6} <= 1: outside the amplitude regime",
            root.lambda1.re
        )));
    }
    Ok(root.lambda1)
}

/// Estimates the internal amplitude `E(z)` by fitting
/// `G_n(z)/n^{λ₁(z)−1} = E + c·n^{−δ}` over the tail window
/// `n ∈ [N−window+1, N]`.
pub fn estimate_amplitude(
    params: &ModelParams,
    z: Complex64,
    n_max: usize,
    window: usize,
) -> Result<AmplitudeEstimate> {
    if n_max < 100 {
        return Err(Error::DomainViolation(format!(
            "amplitude estimation needs N >= 100, got {n_max}"
        )));
    }
    let lambda1 = check_amplitude_domain(params, z)?;
    let series = moments::expected_w(params, z, n_max);
    Ok(amplitude_from_series(
        z,
        lambda1,
        &series.g,
        n_max,
        window.max(8),
    ))
}

/// External analog: estimates `Ē(z)` from the free-position polynomial
/// `E U_n(z)`.
pub fn estimate_amplitude_external(
    params: &ModelParams,
    z: Complex64,
    n_max: usize,
    window: usize,
) -> Result<AmplitudeEstimate> {
    if n_max < 100 {
        return Err(Error::DomainViolation(format!(
            "amplitude estimation needs N >= 100, got {n_max}"
        )));
    }
    let lambda1 = check_amplitude_domain(params, z)?;
    let series = moments::expected_external_w(params, z, n_max);
    Ok(amplitude_from_series(
        z,
        lambda1,
        &series.g,
        n_max,
        window.max(8),
    ))
}

/// Saddle-point prediction
/// `E X_{n,k} ≈ E_hat · n^{λ₁(β)−α log β−1} / √(2π(α+β²λ₁″(β)) log n)`
/// at `α = k/log n`, valid for `α ∈ (α₀, α₊)`.
pub fn mean_profile_asymptotic(
    params: &ModelParams,
    n: usize,
    k: usize,
    e_hat: f64,
) -> Result<SaddleEstimate> {
    if n < 3 {
        return Err(Error::DomainViolation(format!(
            "saddle evaluation needs n >= 3, got {n}"
        )));
    }
    let constants = spectral::critical_constants(params, 1e-12)?;
    let log_n = (n as f64).ln();
    let alpha = k as f64 / log_n;
    if alpha <= constants.alpha0 || alpha >= constants.alpha_plus {
        return Err(Error::OutsideInterval {
            what: "saddle ratio alpha = k/log n",
            value: alpha,
            lo: constants.alpha0,
            hi: constants.alpha_plus,
        });
    }
    let (beta, lambda1) = spectral::beta_of_alpha(params, alpha, 1e-12)?;
    let (_, lambda1_second) = spectral::lambda1_derivs(params, beta)?;
    let exponent = lambda1 - alpha * beta.ln() - 1.0;
    let width = 2.0 * std::f64::consts::PI * (alpha + beta * beta * lambda1_second) * log_n;
    let prediction = e_hat * (exponent * log_n).exp() / width.sqrt();
    Ok(SaddleEstimate {
        n,
        k,
        alpha,
        beta,
        prediction,
        ingredients: SaddleIngredients {
            lambda1,
            lambda1_second,
            e_hat,
        },
    })
}

/// Gaussian shape of the profile near its mode:
/// `E X_{n,k} ≈ n/√(2π σ² log n) · exp(−(k − α_max log n)²/(2σ² log n))`
/// with `σ² = α_max + λ₁″(1)`.
///
/// Returns the value and whether `k` lies within the `O(√log n)` window
/// (3σ√log n) where the approximation is meaningful.
pub fn mode_gaussian(params: &ModelParams, n: usize, k: usize) -> Result<(f64, bool)> {
    let constants = spectral::critical_constants(params, 1e-12)?;
    let (_, lambda1_second) = spectral::lambda1_derivs(params, 1.0)?;
    let log_n = (n as f64).ln();
    let sigma2 = constants.alpha_max + lambda1_second;
    let dev = k as f64 - constants.alpha_max * log_n;
    let value = n as f64 / (2.0 * std::f64::consts::PI * sigma2 * log_n).sqrt()
        * (-dev * dev / (2.0 * sigma2 * log_n)).exp();
    let within_window = dev.abs() <= 3.0 * (sigma2 * log_n).sqrt();
    Ok((value, within_window))
}

/// Exact discrete inversion: recovers `E X_{n,k}` for `k = 0..=k_max` from
/// `M` evaluations of `G_n` on the circle of radius β.
///
/// Since `W_n` is a polynomial of degree < n, any `M >= n+1` makes this an
/// identity up to rounding — no asymptotics involved.
pub fn cauchy_inversion(
    params: &ModelParams,
    beta: f64,
    n: usize,
    k_max: usize,
    modulus: usize,
) -> Result<Vec<f64>> {
    if modulus < n + 1 {
        return Err(Error::ModulusTooSmall { m: modulus, n });
    }
    if !(beta > 0.0) {
        return Err(Error::DomainViolation(format!(
            "inversion radius must be positive, got {beta}"
        )));
    }
    // G_n(β ω^j) for all j; each j is one full DP pass.
    let mut ring = Vec::with_capacity(modulus);
    for j in 0..modulus {
        let angle = 2.0 * std::f64::consts::PI * j as f64 / modulus as f64;
        let z = Complex64::from_polar(beta, angle);
        let series = moments::expected_w(params, z, n);
        ring.push(series.g[n]);
    }
    let mut out = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mut acc = Complex64::default();
        for (j, g) in ring.iter().enumerate() {
            let angle = -2.0 * std::f64::consts::PI * (j * k % modulus) as f64 / modulus as f64;
            acc += g * Complex64::from_polar(1.0, angle);
        }
        let coeff = acc / modulus as f64 / beta.powi(k as i32);
        out.push(coeff.re);
    }
    Ok(out)
}

/// Fits the growth exponent of `E|W_n(z)|²` over the tail `[N/4, N]` and
/// compares it with `max{λ₁(|z|²)−1, 2 Re λ₁(z)−2, 0}`.
pub fn second_moment_exponent_check(
    params: &ModelParams,
    z: Complex64,
    n_max: usize,
) -> Result<ExponentCheck> {
    let series = moments::second_moment_w(params, z, n_max)?;
    second_moment_exponent_check_series(params, &series, n_max)
}

/// Same check on a precomputed series (callers with a raised cap).
pub fn second_moment_exponent_check_series(
    params: &ModelParams,
    series: &ComplexMomentSeries,
    n_max: usize,
) -> Result<ExponentCheck> {
    let g2 = series
        .g2
        .as_ref()
        .ok_or_else(|| Error::DomainViolation("series lacks second moments".into()))?;
    let z = series.z;
    if n_max + 1 > g2.len() {
        return Err(Error::DomainViolation(format!(
            "series tabulated to {} but n_max = {n_max}",
            g2.len() - 1
        )));
    }
    let lo = (n_max / 4).max(8);
    // ~25 geometrically spaced sample points in [N/4, N].
    let mut ns: Vec<usize> = Vec::new();
    let count = 25;
    for i in 0..count {
        let x = lo as f64 * (n_max as f64 / lo as f64).powf(i as f64 / (count - 1) as f64);
        let n = x.round() as usize;
        if ns.last() != Some(&n) {
            ns.push(n);
        }
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = ns.iter().map(|&n| g2[n].max(1e-300).ln()).collect();
    let (slope, _intercept, _rms) = linear_fit(&xs, &ys);

    let mut bound = 0.0f64;
    let abs2 = z.norm_sqr();
    if abs2 > 0.0 {
        bound = bound.max(spectral::lambda1_real(params, abs2, 1e-13)? - 1.0);
        let dom = spectral::all_roots(params, z, 1e-12)?;
        bound = bound.max(2.0 * dom.lambda1.re - 2.0);
    }
    Ok(ExponentCheck {
        z,
        slope,
        bound,
        slack: slope - bound,
        points: ns.len(),
    })
}

/// Remainder `r_{n,k} = (m−1)m^k − E X_{n,k}` against full-level capacity.
///
/// Tends to 0 for level ratios below the saturation exponent and to ∞ above
/// it; always nonnegative.
pub fn subcritical_remainder(params: &ModelParams, n: usize, k: usize) -> f64 {
    let capacity = (params.m - 1) as f64 * (params.m as f64).powi(k as i32);
    capacity - moments::expected_profile_at(params, n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::expected_profile_table;
    use approx::assert_abs_diff_eq;

    fn p(m: u64, t: u64) -> ModelParams {
        ModelParams::new(m, t).unwrap()
    }

    #[test]
    fn amplitude_at_one_is_exactly_one() {
        let est = estimate_amplitude(&p(2, 0), Complex64::new(1.0, 0.0), 400, 200).unwrap();
        assert_eq!(est.e_hat.re, 1.0);
        assert_eq!(est.e_hat.im, 0.0);
        assert!(!est.degraded);
        let est3 = estimate_amplitude(&p(3, 1), Complex64::new(1.0, 0.0), 400, 200).unwrap();
        assert_eq!(est3.e_hat.re, 1.0);
    }

    #[test]
    fn amplitude_positive_and_stable_for_real_z() {
        let params = p(2, 0);
        let z = Complex64::new(1.2, 0.0);
        let est = estimate_amplitude(&params, z, 1200, 600).unwrap();
        assert!(est.e_hat.re > 0.0);
        assert!(est.e_hat.im.abs() < 1e-12);
        assert!(!est.degraded);
        // Cauchy criterion on e_n along a dyadic ladder.
        let series = moments::expected_w(&params, z, 1600);
        let lam = spectral::all_roots(&params, z, 1e-12).unwrap().lambda1;
        let e_at = |n: usize| (series.g[n] / ((lam - 1.0) * (n as f64).ln()).exp()).norm();
        let d1 = (e_at(400) - e_at(200)).abs();
        let d2 = (e_at(800) - e_at(400)).abs();
        let d3 = (e_at(1600) - e_at(800)).abs();
        assert!(d2 < d1 && d3 < d2, "not Cauchy-converging: {d1} {d2} {d3}");
    }

    #[test]
    fn amplitude_fit_recovers_synthetic_law() {
        // e_n = E + c n^{−δ} planted exactly; fit must recover E and δ to 1%.
        let (e_true, c_true, delta_true) = (2.5f64, -1.3f64, 0.6f64);
        let ns: Vec<usize> = (500..=3000).collect();
        let es: Vec<Complex64> = ns
            .iter()
            .map(|&n| Complex64::new(e_true + c_true * (n as f64).powf(-delta_true), 0.0))
            .collect();
        let (e_hat, delta_hat, rms) = fit_tail_power(&ns, &es);
        assert!((e_hat.re - e_true).abs() / e_true < 0.01, "E = {e_hat}");
        assert!((delta_hat - delta_true).abs() / delta_true < 0.01, "δ = {delta_hat}");
        assert!(rms < 1e-10);
    }

    #[test]
    fn amplitude_rejects_tiny_tables() {
        assert!(estimate_amplitude(&p(2, 0), Complex64::new(1.0, 0.0), 50, 20).is_err());
    }

    #[test]
    fn external_amplitude_at_one_is_near_one_for_bst() {
        // E U_n(1) = n+1 ⇒ e_n = 1 + 1/n; fitted limit must be 1.
        let est = estimate_amplitude_external(&p(2, 0), Complex64::new(1.0, 0.0), 800, 400).unwrap();
        assert!((est.e_hat.re - 1.0).abs() < 1e-6, "{}", est.e_hat);
        assert!(est.e_hat.re > 0.0);
    }

    #[test]
    fn saddle_estimate_matches_formula_pieces() {
        let params = p(2, 0);
        let n = 1000usize;
        let k = 14usize; // α = 14/ln 1000 ≈ 2.03 ∈ (1, 4.31)
        let est = mean_profile_asymptotic(&params, n, k, 1.0).unwrap();
        assert_abs_diff_eq!(est.alpha, k as f64 / (n as f64).ln(), epsilon = 1e-15);
        // BST: β = α/2, λ₁ = α, λ₁″ = 0.
        assert_abs_diff_eq!(est.beta, est.alpha / 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(est.ingredients.lambda1, est.alpha, epsilon = 1e-9);
        assert_abs_diff_eq!(est.ingredients.lambda1_second, 0.0, epsilon = 1e-9);
        let log_n = (n as f64).ln();
        let expect = (est.alpha - est.alpha * est.beta.ln() - 1.0) * log_n;
        let manual = expect.exp() / (2.0 * std::f64::consts::PI * est.alpha * log_n).sqrt();
        assert_abs_diff_eq!(est.prediction, manual, epsilon = 1e-12 * manual);
    }

    #[test]
    fn saddle_rejects_out_of_range_alpha() {
        let params = p(2, 0);
        // α₀ = 1, α₊ ≈ 4.31; k = 2 at n = 1000 gives α ≈ 0.29.
        assert!(mean_profile_asymptotic(&params, 1000, 2, 1.0).is_err());
        assert!(mean_profile_asymptotic(&params, 1000, 40, 1.0).is_err());
    }

    #[test]
    fn saddle_exponent_sign_flips_at_alpha_plus() {
        let params = p(2, 0);
        let c = spectral::critical_constants(&params, 1e-12).unwrap();
        for alpha in [2.0f64, 3.0, 4.0, 4.25] {
            let (beta, lam) = spectral::beta_of_alpha(&params, alpha, 1e-12).unwrap();
            let exponent = lam - alpha * beta.ln() - 1.0;
            assert!(exponent > 0.0, "exponent negative below α₊ at α={alpha}");
        }
        let (beta, lam) = spectral::beta_of_alpha(&params, c.alpha_plus + 0.2, 1e-12).unwrap();
        assert!(lam - (c.alpha_plus + 0.2) * beta.ln() - 1.0 < 0.0);
    }

    #[test]
    fn mode_gaussian_shape() {
        let params = p(2, 0);
        let n = 3000usize;
        let log_n = (n as f64).ln();
        let mode = (2.0 * log_n).round() as usize;
        let (center, within) = mode_gaussian(&params, n, mode).unwrap();
        assert!(within);
        // BST: λ₁″(1) = 0 ⇒ σ² = α_max = 2.
        let manual = n as f64 / (4.0 * std::f64::consts::PI * log_n).sqrt()
            * (-(mode as f64 - 2.0 * log_n).powi(2) / (4.0 * log_n)).exp();
        assert_abs_diff_eq!(center, manual, epsilon = 1e-9 * manual);
        // Symmetry of the formula around the exact (non-integer) mode.
        let (lo, _) = mode_gaussian(&params, n, mode - 3).unwrap();
        let (hi, _) = mode_gaussian(&params, n, mode + 3).unwrap();
        let dev_lo = mode as f64 - 3.0 - 2.0 * log_n;
        let dev_hi = mode as f64 + 3.0 - 2.0 * log_n;
        let ratio = (lo / hi).ln();
        let expect = (dev_hi * dev_hi - dev_lo * dev_lo) / (4.0 * log_n);
        assert_abs_diff_eq!(ratio, expect, epsilon = 1e-9);
        // Far outside the window the flag trips.
        let (_, win) = mode_gaussian(&params, n, mode + 40).unwrap();
        assert!(!win);
    }

    #[test]
    fn inversion_recovers_bst_row_three() {
        let out = cauchy_inversion(&p(2, 0), 1.0, 3, 3, 8).unwrap();
        assert_abs_diff_eq!(out[0], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[1], 4.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[2], 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(out[3], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn inversion_matches_table_across_radii() {
        for (m, t) in [(2u64, 0u64), (3, 1)] {
            let params = p(m, t);
            let n = 60usize;
            let table = expected_profile_table(&params, n, n);
            for beta in [0.5f64, 1.0, 1.5] {
                let k_hi = 14usize;
                // Levels whose term E X_{n,k} β^k carries at least 1e-4 of
                // the circle's total weight are resolvable to full relative
                // precision; lighter terms sit under the transform's f64
                // rounding floor, so no tolerance makes sense for them.
                let total: f64 = (0..=n).map(|k| table.value(n, k) * beta.powi(k as i32)).sum();
                let out = cauchy_inversion(&params, beta, n, k_hi, n + 1).unwrap();
                let mut compared = 0usize;
                for (k, val) in out.iter().enumerate() {
                    let exact = table.value(n, k);
                    if exact * beta.powi(k as i32) < 1e-4 * total {
                        continue;
                    }
                    compared += 1;
                    assert!(
                        (val - exact).abs() / exact < 1e-9,
                        "{params} beta={beta} k={k}: {val} vs {exact}"
                    );
                }
                assert!(compared >= 5, "{params} beta={beta}: only {compared} levels");
            }
        }
    }

    #[test]
    fn inversion_rejects_small_modulus() {
        assert!(matches!(
            cauchy_inversion(&p(2, 0), 1.0, 10, 3, 10),
            Err(Error::ModulusTooSmall { .. })
        ));
    }

    #[test]
    fn exponent_check_at_z_one_is_tight() {
        let check =
            second_moment_exponent_check(&p(2, 0), Complex64::new(1.0, 0.0), 800).unwrap();
        assert_abs_diff_eq!(check.slope, 2.0, epsilon = 1e-6);
        assert_abs_diff_eq!(check.bound, 2.0, epsilon = 1e-9);
        assert!(check.slack.abs() < 1e-6);
    }

    #[test]
    fn exponent_check_probes() {
        // z = 1.2: bound = max{λ₁(1.44)−1, 2λ₁(1.2)−2, 0} = max{1.88, 2.8} = 2.8.
        let check =
            second_moment_exponent_check(&p(2, 0), Complex64::new(1.2, 0.0), 1000).unwrap();
        assert_abs_diff_eq!(check.bound, 2.8, epsilon = 1e-9);
        assert!(check.slack <= 0.15, "slack {}", check.slack);
        // z = i: bound = max{λ₁(1)−1, −2, 0} = 1.
        let check_i =
            second_moment_exponent_check(&p(2, 0), Complex64::new(0.0, 1.0), 1000).unwrap();
        assert_abs_diff_eq!(check_i.bound, 1.0, epsilon = 1e-9);
        assert!(check_i.slack <= 0.15, "slack {}", check_i.slack);
    }

    #[test]
    fn remainder_basics() {
        let params = p(2, 0);
        // k = 0 and n >= m: level 0 is saturated, remainder exactly 0.
        assert_abs_diff_eq!(subcritical_remainder(&params, 50, 0), 0.0, epsilon = 1e-12);
        // BST closed form: E X_{n,1} = 2 − 2/n, so r_{n,1} = 2/n.
        for n in [10usize, 100, 1000] {
            assert_abs_diff_eq!(
                subcritical_remainder(&params, n, 1),
                2.0 / n as f64,
                epsilon = 1e-10
            );
        }
        // Nonnegative across a grid.
        for k in 0..8 {
            for n in [5usize, 20, 80] {
                assert!(subcritical_remainder(&params, n, k) > -1e-9);
            }
        }
    }

    #[test]
    fn remainder_decreases_below_saturation_exponent() {
        let params = p(2, 0);
        let values: Vec<f64> = [100usize, 1000, 10000]
            .iter()
            .map(|&n| {
                let k = ((0.2 * (n as f64).ln()).floor() as usize).max(1);
                subcritical_remainder(&params, n, k)
            })
            .collect();
        assert!(values[1] < values[0] && values[2] < values[1], "{values:?}");
    }
}
