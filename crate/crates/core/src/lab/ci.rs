use statrs::function::beta::beta_reg;

use crate::error::{Error, Result};

/// Solves I_x(a, b) = target for x by bisection.
fn beta_quantile(a: f64, b: f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if beta_reg(a, b, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-17 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided Clopper–Pearson interval for x successes in n trials at the
/// given confidence level.
pub fn clopper_pearson(x: u64, n: u64, confidence: f64) -> (f64, f64) {
    if n == 0 {
        return (0.0, 1.0);
    }
    let alpha = 1.0 - confidence;
    let (xf, nf) = (x as f64, n as f64);
    let lo = if x == 0 {
        0.0
    } else {
        beta_quantile(xf, nf - xf + 1.0, alpha / 2.0)
    };
    let hi = if x == n {
        1.0
    } else if x == 0 {
        1.0 - (alpha / 2.0).powf(1.0 / nf)
    } else {
        beta_quantile(xf + 1.0, nf - xf, 1.0 - alpha / 2.0)
    };
    (lo, hi)
}

/// Wald interval; refused below 10 successes or failures.
pub fn normal_interval(x: u64, n: u64, z: f64) -> Result<(f64, f64)> {
    if x < 10 || n - x < 10 {
        return Err(Error::InvalidParameter(format!(
            "normal approximation needs at least 10 successes and failures (x={x}, n={n})"
        )));
    }
    let p = x as f64 / n as f64;
    let half = z * (p * (1.0 - p) / n as f64).sqrt();
    Ok((p - half, p + half))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_successes() {
        let (lo, hi) = clopper_pearson(0, 1000, 0.95);
        assert_eq!(lo, 0.0);
        assert!((hi - (1.0 - 0.025f64.powf(1e-3))).abs() < 1e-15);
        assert!(hi < 4.0 / 1000.0);
    }

    #[test]
    fn interval_endpoints_have_the_right_tail_mass() {
        let (x, n) = (7u64, 50u64);
        let (lo, hi) = clopper_pearson(x, n, 0.95);
        // P(X >= x | lo) = 0.025 and P(X <= x | hi) = 0.025
        assert!((beta_reg(7.0, 44.0, lo) - 0.025).abs() < 1e-10);
        assert!((1.0 - beta_reg(8.0, 43.0, hi) - 0.025).abs() < 1e-10);
        assert!(lo < 0.14 && 0.14 < hi);
        assert_eq!(clopper_pearson(n, n, 0.95).1, 1.0);
    }

    #[test]
    fn normal_refused_for_rare_events() {
        assert!(normal_interval(5, 1000, 1.96).is_err());
        let (lo, hi) = normal_interval(500, 1000, 1.96).unwrap();
        assert!(lo < 0.5 && hi > 0.5);
    }
}
