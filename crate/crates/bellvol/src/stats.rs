//! Binomial-proportion statistics for the Monte Carlo estimators.
//!
//! Intervals are Wilson score intervals rather than Wald: their coverage
//! stays honest when the estimated fraction sits near 0, which happens for
//! Werner states near the violation threshold and for the small CHSH
//! fraction.

use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided standard-normal critical value for a confidence level in (0, 1):
/// `z = Φ⁻¹(1 - (1 - confidence)/2)`.
pub fn two_sided_z(confidence: f64) -> f64 {
    assert!(
        confidence > 0.0 && confidence < 1.0,
        "confidence level must lie strictly inside (0, 1), got {confidence}"
    );
    let standard_normal = Normal::new(0.0, 1.0).expect("standard normal is valid");
    standard_normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0)
}

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence level. Returns `(low, high)` with
/// `0 <= low <= p_hat <= high <= 1`.
pub fn wilson_interval(successes: u64, trials: u64, confidence: f64) -> (f64, f64) {
    assert!(trials > 0, "Wilson interval needs at least one trial");
    assert!(successes <= trials);
    let z = two_sided_z(confidence);
    let n = trials as f64;
    let p_hat = successes as f64 / n;
    let z2_over_n = z * z / n;
    let denominator = 1.0 + z2_over_n;
    let center = (p_hat + z2_over_n / 2.0) / denominator;
    let half_width =
        z * (p_hat * (1.0 - p_hat) / n + z2_over_n / (4.0 * n)).sqrt() / denominator;
    ((center - half_width).max(0.0), (center + half_width).min(1.0))
}

/// Plain binomial standard error `sqrt(p_hat (1 - p_hat) / n)`.
pub fn binomial_stderr(successes: u64, trials: u64) -> f64 {
    assert!(trials > 0);
    let p_hat = successes as f64 / trials as f64;
    (p_hat * (1.0 - p_hat) / trials as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn critical_values_match_reference_quantiles() {
        assert_abs_diff_eq!(two_sided_z(0.90), 1.6448536269514722, epsilon = 1e-8);
        assert_abs_diff_eq!(two_sided_z(0.95), 1.959963984540054, epsilon = 1e-8);
        assert_abs_diff_eq!(two_sided_z(0.99), 2.5758293035489004, epsilon = 1e-8);
        assert_abs_diff_eq!(two_sided_z(0.999), 3.2905267314919255, epsilon = 1e-8);
    }

    #[test]
    #[should_panic(expected = "confidence level")]
    fn rejects_confidence_outside_unit_interval() {
        two_sided_z(1.0);
    }

    #[test]
    fn wilson_brackets_the_point_estimate() {
        for &(k, n) in &[(0u64, 100u64), (1, 100), (50, 100), (99, 100), (100, 100)] {
            let (low, high) = wilson_interval(k, n, 0.99);
            let p_hat = k as f64 / n as f64;
            assert!(low >= 0.0 && high <= 1.0);
            assert!(low <= p_hat && p_hat <= high, "({k}, {n}): [{low}, {high}]");
        }
    }

    #[test]
    fn wilson_stays_informative_at_zero_counts() {
        // Unlike Wald, the interval at k = 0 has positive width.
        let (low, high) = wilson_interval(0, 1_000_000, 0.99);
        assert_eq!(low, 0.0);
        assert!(high > 0.0 && high < 1e-4);
    }

    #[test]
    fn wilson_reference_value() {
        // k = 10, n = 100, 95%: the canonical textbook example.
        let (low, high) = wilson_interval(10, 100, 0.95);
        assert_abs_diff_eq!(low, 0.0552, epsilon = 5e-4);
        assert_abs_diff_eq!(high, 0.1744, epsilon = 5e-4);
    }

    #[test]
    fn stderr_matches_hand_value() {
        // p = 1/3 at 1e7 samples: sqrt((1/3)(2/3)/1e7) ≈ 1.49e-4.
        let stderr = binomial_stderr(3_333_333, 10_000_000);
        assert_abs_diff_eq!(stderr, 1.49e-4, epsilon = 2e-6);
    }

    #[test]
    fn narrower_with_more_trials() {
        let (l1, h1) = wilson_interval(33, 100, 0.99);
        let (l2, h2) = wilson_interval(3300, 10_000, 0.99);
        assert!(h2 - l2 < h1 - l1);
    }
}
