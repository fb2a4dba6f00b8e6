//! Small numeric helpers shared across modules.

use std::f64::consts::PI;

use num_complex::Complex64;

/// Neumaier-compensated sum in iteration order.
pub fn neumaier_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

/// Prefix sums `s_k = Σ_{i<=k} v_i`, each compensated.
pub fn neumaier_prefix_sums(values: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut sum = 0.0f64;
    let mut carry = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
        out.push(sum + carry);
    }
    out
}

/// `exp(2πi · num / den)`, exact at multiples of a quarter turn.
pub fn unit_root(num: usize, den: usize) -> Complex64 {
    let num = num % den;
    if (4 * num).is_multiple_of(den) {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * num as f64 / den as f64).sin_cos();
    Complex64::new(c, s)
}

/// CSV number format: 17 significant digits, scientific notation.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Least-squares line `y = intercept + slope · x` and Pearson correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub correlation: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return None;
    }
    let n = x.len() as f64;
    let mx = neumaier_sum(x.iter().copied()) / n;
    let my = neumaier_sum(y.iter().copied()) / n;
    let sxx = neumaier_sum(x.iter().map(|a| (a - mx) * (a - mx)));
    let syy = neumaier_sum(y.iter().map(|b| (b - my) * (b - my)));
    let sxy = neumaier_sum(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)));
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let correlation = if syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    };
    Some(LinearFit {
        slope,
        intercept: my - slope * mx,
        correlation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(neumaier_sum(values), 2.0);
        assert_eq!(
            neumaier_prefix_sums(&values),
            vec![1e16, 1e16 + 1.0, 1.0, 2.0]
        );
    }

    #[test]
    fn quarter_roots_are_exact() {
        assert_eq!(unit_root(1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(unit_root(1, 4), Complex64::new(0.0, 1.0));
        assert_eq!(unit_root(6, 8), Complex64::new(0.0, -1.0));
        assert_eq!(unit_root(3, 3), Complex64::new(1.0, 0.0));
        let w = unit_root(1, 3);
        assert!((w - Complex64::new(-0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn fit_of_exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [3.0, 5.0, 7.0, 9.0];
        let fit = linear_fit(&x, &y).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.correlation - 1.0).abs() < 1e-12);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
    }
}
