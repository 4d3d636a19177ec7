//! Small statistics toolkit used by the verification layers: KS statistics,
//! chi-square tests, and least-squares fits.

use crate::error::{Error, Result};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Two-sample Kolmogorov–Smirnov statistic `sup |F_a - F_b|`.
///
/// Inputs need not be sorted.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::SampleTooSmall {
            len: a.len().min(b.len()),
            min: 1,
        });
    }
    let mut sa = a.to_vec();
    let mut sb = b.to_vec();
    sa.sort_unstable_by(f64::total_cmp);
    sb.sort_unstable_by(f64::total_cmp);
    let (na, nb) = (sa.len() as f64, sb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0f64);
    while i < sa.len() && j < sb.len() {
        let x = sa[i].min(sb[j]);
        while i < sa.len() && sa[i] <= x {
            i += 1;
        }
        while j < sb.len() && sb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One-sample KS statistic of `data` against a continuous CDF.
pub fn ks_one_sample<F: Fn(f64) -> f64>(data: &[f64], cdf: F) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::SampleTooSmall { len: 0, min: 1 });
    }
    let mut s = data.to_vec();
    s.sort_unstable_by(f64::total_cmp);
    let n = s.len() as f64;
    let mut d = 0f64;
    for (i, x) in s.iter().enumerate() {
        let f = cdf(*x).clamp(0.0, 1.0);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    Ok(d)
}

/// Survival function of the Kolmogorov distribution,
/// `Q(x) = 2 Σ_{j>=1} (-1)^{j-1} exp(-2 j² x²)`.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    for j in 1..=100u32 {
        let term = (-2.0 * (j as f64).powi(2) * x * x).exp();
        sum += if j % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Approximate p-value for a one-sample KS statistic at sample size `n`
/// (Stephens' small-sample correction).
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_sf(d * (sn + 0.12 + 0.11 / sn))
}

/// Approximate p-value for a two-sample KS statistic with sizes `na`, `nb`.
pub fn ks_p_value_two_sample(d: f64, na: usize, nb: usize) -> f64 {
    let ne = (na as f64 * nb as f64) / (na as f64 + nb as f64);
    ks_p_value(d, ne.round().max(1.0) as usize)
}

/// Chi-square goodness-of-fit of observed counts against expected counts.
///
/// Bins with expected count below `min_expected` are pooled with their right
/// neighbour (and the trailing remainder with the last kept bin). Returns
/// `(statistic, degrees of freedom, p-value)`.
pub fn chi_square_gof(observed: &[u64], expected: &[f64], min_expected: f64) -> Result<(f64, usize, f64)> {
    assert_eq!(observed.len(), expected.len(), "bin count mismatch");
    let mut obs_pooled: Vec<f64> = Vec::new();
    let mut exp_pooled: Vec<f64> = Vec::new();
    let (mut oacc, mut eacc) = (0.0, 0.0);
    for (o, e) in observed.iter().zip(expected) {
        oacc += *o as f64;
        eacc += *e;
        if eacc >= min_expected {
            obs_pooled.push(oacc);
            exp_pooled.push(eacc);
            oacc = 0.0;
            eacc = 0.0;
        }
    }
    if eacc > 0.0 || oacc > 0.0 {
        if let (Some(o), Some(e)) = (obs_pooled.last_mut(), exp_pooled.last_mut()) {
            *o += oacc;
            *e += eacc;
        } else {
            obs_pooled.push(oacc);
            exp_pooled.push(eacc);
        }
    }
    if obs_pooled.len() < 2 {
        return Err(Error::SampleTooSmall {
            len: obs_pooled.len(),
            min: 2,
        });
    }
    let stat: f64 = obs_pooled
        .iter()
        .zip(&exp_pooled)
        .map(|(o, e)| (o - e) * (o - e) / e)
        .sum();
    let dof = obs_pooled.len() - 1;
    let chi = ChiSquared::new(dof as f64).expect("dof >= 1");
    Ok((stat, dof, 1.0 - chi.cdf(stat)))
}

/// Two-sample chi-square homogeneity test over shared integer-valued bins.
///
/// `a` and `b` are per-bin counts over the same support. Returns
/// `(statistic, degrees of freedom, p-value)`.
pub fn chi_square_homogeneity(a: &[u64], b: &[u64], min_expected: f64) -> Result<(f64, usize, f64)> {
    assert_eq!(a.len(), b.len(), "bin count mismatch");
    let na: u64 = a.iter().sum();
    let nb: u64 = b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(Error::SampleTooSmall { len: 0, min: 1 });
    }
    // Pool bins until both expected counts are large enough.
    let total = (na + nb) as f64;
    let (fa, fb) = (na as f64 / total, nb as f64 / total);
    let mut rows: Vec<(f64, f64)> = Vec::new();
    let (mut aacc, mut bacc) = (0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        aacc += *x as f64;
        bacc += *y as f64;
        let col = aacc + bacc;
        if col * fa >= min_expected && col * fb >= min_expected {
            rows.push((aacc, bacc));
            aacc = 0.0;
            bacc = 0.0;
        }
    }
    if aacc > 0.0 || bacc > 0.0 {
        if let Some(last) = rows.last_mut() {
            last.0 += aacc;
            last.1 += bacc;
        } else {
            rows.push((aacc, bacc));
        }
    }
    if rows.len() < 2 {
        return Err(Error::SampleTooSmall {
            len: rows.len(),
            min: 2,
        });
    }
    let mut stat = 0.0;
    for (oa, ob) in &rows {
        let col = oa + ob;
        let (ea, eb) = (col * fa, col * fb);
        stat += (oa - ea) * (oa - ea) / ea + (ob - eb) * (ob - eb) / eb;
    }
    let dof = rows.len() - 1;
    let chi = ChiSquared::new(dof as f64).expect("dof >= 1");
    Ok((stat, dof, 1.0 - chi.cdf(stat)))
}

/// Ordinary least squares `y ~ intercept + slope * x`.
///
/// Returns `(slope, intercept, rms residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two points");
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - intercept - slope * x;
            e * e
        })
        .sum();
    (slope, intercept, (rss / n).sqrt())
}

/// Mean and standard error of the mean.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Sample variance together with the standard error of the variance estimate
/// (via the empirical fourth central moment).
pub fn variance_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for x in xs {
        let c = x - mean;
        m2 += c * c;
        m4 += c * c * c * c;
    }
    m2 /= n;
    m4 /= n;
    let var = m2 * n / (n - 1.0);
    let se = ((m4 - m2 * m2).max(0.0) / n).sqrt();
    (var, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn ks_identical_is_zero() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ks_disjoint_is_one() {
        let a = [0.0, 1.0];
        let b = [5.0, 6.0];
        assert_eq!(ks_two_sample(&a, &b).unwrap(), 1.0);
    }

    #[test]
    fn ks_shift_statistic() {
        // Uniform grids offset by half a step: D = 1/2 asymptotically.
        let a: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        let b: Vec<f64> = (0..1000).map(|i| i as f64 + 500.0).collect();
        let d = ks_two_sample(&a, &b).unwrap();
        assert_abs_diff_eq!(d, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn ks_one_sample_uniform() {
        let data: Vec<f64> = (0..10_000).map(|i| (i as f64 + 0.5) / 10_000.0).collect();
        let d = ks_one_sample(&data, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!(d < 1e-4, "d = {d}");
    }

    #[test]
    fn kolmogorov_sf_reference() {
        // Classical table value: Q(1.36) ~ 0.049.
        let q = kolmogorov_sf(1.36);
        assert!((q - 0.049).abs() < 2e-3, "q = {q}");
        assert_eq!(kolmogorov_sf(0.0), 1.0);
        assert!(kolmogorov_sf(3.0) < 1e-7);
    }

    #[test]
    fn chi_square_uniform_counts() {
        let obs = [100u64, 110, 95, 101, 94];
        let exp = [100.0; 5];
        let (_, dof, p) = chi_square_gof(&obs, &exp, 5.0).unwrap();
        assert_eq!(dof, 4);
        assert!(p > 0.5, "p = {p}");
    }

    #[test]
    fn linear_fit_recovers_line() {
        let xs: Vec<f64> = (0..50).map(|i| i as f64 / 10.0).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 2.0 * x).collect();
        let (s, b, r) = linear_fit(&xs, &ys);
        assert_abs_diff_eq!(s, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 3.0, epsilon = 1e-12);
        assert!(r < 1e-12);
    }

    #[test]
    fn variance_se_normal_scale() {
        // Deterministic quasi-sample via inverse CDF of uniform grid is fine
        // for a smoke check of magnitudes.
        let xs: Vec<f64> = (0..1000).map(|i| (i as f64 / 999.0) * 2.0 - 1.0).collect();
        let (v, se) = variance_se(&xs);
        assert!(v > 0.0 && se > 0.0 && se < v);
    }
}
