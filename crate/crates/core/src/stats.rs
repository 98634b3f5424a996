//! Small descriptive-statistics helpers shared by the estimators.

/// Arithmetic mean; `None` for an empty slice.
pub fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    Some(xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation with Bessel's correction. Zero for a single value.
pub fn sample_std_dev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    if xs.len() < 2 {
        return Some(0.0);
    }
    let ss: f64 = xs.iter().map(|x| (x - m) * (x - m)).sum();
    Some((ss / (xs.len() - 1) as f64).sqrt())
}

/// Standard error of the mean, `s / sqrt(n)`.
pub fn standard_error(xs: &[f64]) -> Option<f64> {
    Some(sample_std_dev(xs)? / (xs.len() as f64).sqrt())
}

/// Median of the values (mean of the two central values for even counts).
pub fn median(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Some(if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    })
}

/// Mean after discarding `fraction` of the values from each tail.
///
/// The number discarded per tail is `floor(fraction * n)`.
pub fn trimmed_mean(xs: &[f64], fraction: f64) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let cut = (fraction * v.len() as f64).floor() as usize;
    let kept = &v[cut..v.len() - cut];
    if kept.is_empty() {
        return median(xs);
    }
    mean(kept)
}

/// Two-sided Kolmogorov–Smirnov distance between the empirical distribution
/// of `xs` and a continuous reference CDF.
pub fn ks_distance(xs: &[f64], cdf: impl Fn(f64) -> f64) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in v.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    Some(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_statistics() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(mean(&xs), Some(2.5));
        assert_eq!(median(&xs), Some(2.5));
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        let s = sample_std_dev(&xs).unwrap();
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((standard_error(&xs).unwrap() - s / 2.0).abs() < 1e-15);
        assert_eq!(mean(&[]), None);
    }

    #[test]
    fn trimmed_mean_drops_tails() {
        let mut xs: Vec<f64> = (0..20).map(f64::from).collect();
        xs[19] = 1e9;
        // 5% of 20 is one value per tail.
        let t = trimmed_mean(&xs, 0.05).unwrap();
        assert!((t - (1..19).map(f64::from).sum::<f64>() / 18.0).abs() < 1e-12);
    }

    #[test]
    fn ks_distance_of_uniform_grid() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let d = ks_distance(&xs, |x| x.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.005).abs() < 1e-12);
    }
}
