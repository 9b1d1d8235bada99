//! Ensemble-averaged fractal dimensions in the `(u, v) = (0, ∞)` limit.

use crate::error::{Error, Result};
use crate::numerics::ln_binomial;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;
use std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractalDimension {
    pub q: u32,
    pub lambda: f64,
    pub value: f64,
    /// False once the norm-fluctuation term is no longer subleading.
    pub valid: bool,
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q must be >= 2, got {q}")));
    }
    Ok(())
}

/// Largest `λ` at which the mean-IPR approximation is trusted.
pub fn dq_validity_threshold(q: u32) -> Result<f64> {
    check_q(q)?;
    let q = q as f64;
    let denom = ln_gamma(4.0 * q + 1.0) - 4.0 * ln_gamma(2.0 * q + 1.0) + 4.0 * ln_gamma(q + 1.0);
    Ok(LN_2 / denom)
}

/// `D̄_q = 1 − qλ/(1−q) + λ log C(2q, q) / ((1−q) log 2)`.
pub fn fractal_dimension_dq(q: u32, lambda: f64) -> Result<FractalDimension> {
    check_q(q)?;
    if !(lambda.is_finite() && lambda >= 0.0) {
        return Err(Error::InvalidParameters(format!(
            "lambda must be >= 0, got {lambda}"
        )));
    }
    let qf = q as f64;
    let value = 1.0 - qf * lambda / (1.0 - qf)
        + lambda * ln_binomial(2 * q as u64, q as u64) / ((1.0 - qf) * LN_2);
    Ok(FractalDimension {
        q,
        lambda,
        value,
        valid: lambda < dq_validity_threshold(q)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statmech::LAMBDA_C;

    #[test]
    fn d2_saturates_rank_bound() {
        for l in [0.1, 0.5, 1.0] {
            let d = fractal_dimension_dq(2, l).unwrap();
            assert!((d.value - (1.0 - l / LAMBDA_C)).abs() < 1e-12);
        }
    }

    #[test]
    fn validity_edge() {
        let t = dq_validity_threshold(2).unwrap();
        assert!((t - LN_2 / (35.0f64 / 18.0).ln()).abs() < 1e-12);
        assert!((t - 1.04).abs() < 0.01);
        assert!(fractal_dimension_dq(2, 1.0).unwrap().valid);
        assert!(!fractal_dimension_dq(2, 1.1).unwrap().valid);
    }

    #[test]
    fn zero_lambda_and_bad_q() {
        for q in 2..6 {
            assert_eq!(fractal_dimension_dq(q, 0.0).unwrap().value, 1.0);
        }
        assert!(fractal_dimension_dq(1, 0.5).is_err());
    }
}
