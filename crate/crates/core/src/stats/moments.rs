//! Sample moments with leave-one-out (jackknife) standard errors.

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample covariance.
pub fn covariance(x: &[f64], y: &[f64]) -> f64 {
    let (mx, my) = (mean(x), mean(y));
    x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / (x.len() as f64 - 1.0)
}

pub fn variance(x: &[f64]) -> f64 {
    covariance(x, x)
}

/// Standard error of the mean.
pub fn mean_se(x: &[f64]) -> f64 {
    (variance(x) / x.len() as f64).sqrt()
}

/// Unbiased sample covariance and its jackknife standard error.
pub fn covariance_jackknife(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let full = covariance(x, y);
    if x.len() < 3 {
        return (full, f64::NAN);
    }
    // Leave-one-out covariances from centered data in O(n):
    // C_{-i} = (n - 1)/(n - 2) · (C - d_i e_i · n / (n - 1)²) with d, e centered at the full means.
    let (mx, my) = (mean(x), mean(y));
    let loo: Vec<f64> = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let (d, e) = (a - mx, b - my);
            (n - 1.0) / (n - 2.0) * (full - d * e * n / ((n - 1.0) * (n - 1.0)))
        })
        .collect();
    let m = mean(&loo);
    let ss: f64 = loo.iter().map(|v| (v - m) * (v - m)).sum();
    (full, ((n - 1.0) / n * ss).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jackknife_matches_brute_force() {
        let x: Vec<f64> = (0..40).map(|i| ((i * 37) % 11) as f64 * 0.3 + (i as f64).sin()).collect();
        let y: Vec<f64> = x.iter().enumerate().map(|(i, v)| v * 0.5 + (i as f64 * 1.7).cos()).collect();
        let (c, se) = covariance_jackknife(&x, &y);
        let n = x.len();
        let loo: Vec<f64> = (0..n)
            .map(|i| {
                let xs: Vec<f64> = x.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
                let ys: Vec<f64> = y.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| *v).collect();
                covariance(&xs, &ys)
            })
            .collect();
        let m = mean(&loo);
        let want = ((n as f64 - 1.0) / n as f64 * loo.iter().map(|v| (v - m).powi(2)).sum::<f64>()).sqrt();
        assert!((c - covariance(&x, &y)).abs() < 1e-15);
        assert!((se - want).abs() < 1e-12 * want);
    }

    #[test]
    fn variance_of_constants_is_zero() {
        assert_eq!(variance(&[2.0; 10]), 0.0);
    }
}
