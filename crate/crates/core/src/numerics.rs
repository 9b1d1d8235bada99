//! Small numerically stable special functions shared across modules.

use std::f64::consts::LN_2;

/// `log(cosh(x))` without overflow for large `|x|`.
pub fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - LN_2
}

/// `log(Σ exp(xᵢ))` for a slice of finite or `-inf` terms.
pub fn log_sum_exp(terms: &[f64]) -> f64 {
    let max = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    if max == f64::INFINITY {
        return f64::INFINITY;
    }
    let sum: f64 = terms.iter().map(|&t| (t - max).exp()).sum();
    max + sum.ln()
}

/// Natural-log binary entropy `-p log p - (1-p) log(1-p)` with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    fn term(x: f64) -> f64 {
        if x <= 0.0 {
            0.0
        } else {
            -x * x.ln()
        }
    }
    term(p) + term(1.0 - p)
}

/// `log C(n, k)` through log-gamma.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Mean and standard error (sample standard deviation over `√count`).
pub fn mean_and_stderr(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().copied().collect::<CompensatedSum>().value() / n as f64;
    if n < 2 {
        return (mean, f64::NAN);
    }
    let var = values
        .iter()
        .map(|&x| (x - mean) * (x - mean))
        .collect::<CompensatedSum>()
        .value()
        / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_cosh_matches_direct_and_survives_large_arguments() {
        for &x in &[0.0, 0.3, -1.7, 5.0, 20.0] {
            let direct = f64::cosh(x).ln();
            assert!((log_cosh(x) - direct).abs() < 1e-14);
        }
        assert!((log_cosh(1000.0) - (1000.0 - LN_2)).abs() < 1e-12);
        assert_eq!(log_cosh(-800.0), log_cosh(800.0));
    }

    #[test]
    fn log_sum_exp_handles_large_and_empty() {
        let v = log_sum_exp(&[1000.0, 1000.0]);
        assert!((v - (1000.0 + LN_2)).abs() < 1e-12);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn ln_binomial_small_values() {
        assert!((ln_binomial(4, 2) - 6f64.ln()).abs() < 1e-12);
        assert!((ln_binomial(8, 4) - 70f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        let s: CompensatedSum = xs.iter().copied().collect();
        assert_eq!(s.value(), 2.0);
    }
}
