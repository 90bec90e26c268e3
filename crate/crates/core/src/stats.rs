//! Distribution helpers shared by the detectors and the discriminant tables.

use statrs::function::beta::beta_reg;
use statrs::function::erf::erfc;

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Upper-tail probability `P(F > f)` for an F distribution with
/// `(df1, df2)` degrees of freedom.
pub fn f_upper_tail(f: f64, df1: f64, df2: f64) -> f64 {
    if f.is_nan() {
        return f64::NAN;
    }
    if f <= 0.0 {
        return 1.0;
    }
    if f.is_infinite() {
        return 0.0;
    }
    // P(F > f) = I_{d2/(d2 + d1 f)}(d2/2, d1/2)
    let x = df2 / (df2 + df1 * f);
    beta_reg(df2 / 2.0, df1 / 2.0, x).clamp(0.0, 1.0)
}

/// Arithmetic mean and sample standard deviation (divisor `n - 1`).
/// A single value has standard deviation 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1) as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cdf_reference_points() {
        assert_abs_diff_eq!(normal_cdf(0.0), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(normal_cdf(1.959963984540054), 0.975, epsilon = 1e-10);
        assert_abs_diff_eq!(normal_cdf(-1.0), 0.15865525393145707, epsilon = 1e-10);
    }

    #[test]
    fn f_tail_edges() {
        assert_eq!(f_upper_tail(0.0, 4.0, 245.0), 1.0);
        assert_eq!(f_upper_tail(f64::INFINITY, 4.0, 245.0), 0.0);
        // F(1, n) tail equals two-sided t tail; F(1, inf)-ish ~ chi2(1): check a
        // standard table value, F_{0.05}(4, 245) ≈ 2.41.
        let p = f_upper_tail(2.4089, 4.0, 245.0);
        assert!((p - 0.05).abs() < 1e-3, "{p}");
    }

    #[test]
    fn sample_std_uses_n_minus_one() {
        let (m, s) = mean_std(&[1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0]);
        assert_abs_diff_eq!(m, 0.0);
        assert_abs_diff_eq!(s, (10.0f64 / 9.0).sqrt(), epsilon = 1e-12);
    }
}
