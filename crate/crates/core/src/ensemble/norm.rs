use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::rbm::{build_state, sample_weights, RbmParams};
use crate::rng::sample_seed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormFluctuation {
    /// `(1/N) log(mean(Z²) / mean(Z)²)` with `Z = ⟨Ψ|Ψ⟩`.
    pub value: f64,
    /// Delta-method standard error.
    pub stderr: f64,
    pub samples: usize,
}

/// The statistic from per-sample `log⟨Ψ|Ψ⟩` values. Norms are rescaled by
/// the largest one before exponentiating, which leaves the ratio unchanged.
pub fn norm_fluctuation_statistic(n_spins: usize, log_norms: &[f64]) -> Result<NormFluctuation> {
    let k = log_norms.len();
    if k < 2 {
        return Err(Error::InvalidParameters(format!(
            "need at least 2 samples, got {k}"
        )));
    }
    if n_spins == 0 {
        return Err(Error::InvalidParameters("N must be positive".into()));
    }
    if log_norms.iter().any(|x| x.is_nan() || *x == f64::INFINITY) {
        return Err(Error::Domain("log-norms must be finite or -inf".into()));
    }
    let top = log_norms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return Err(Error::ZeroState);
    }
    let z: Vec<f64> = log_norms.iter().map(|x| (x - top).exp()).collect();
    let kf = k as f64;
    let b = z.iter().copied().collect::<CompensatedSum>().value() / kf;
    let a = z.iter().map(|x| x * x).collect::<CompensatedSum>().value() / kf;
    let value = (a.ln() - 2.0 * b.ln()) / n_spins as f64;

    let var_z = z
        .iter()
        .map(|x| (x - b).powi(2))
        .collect::<CompensatedSum>()
        .value()
        / (kf - 1.0);
    let var_z2 = z
        .iter()
        .map(|x| (x * x - a).powi(2))
        .collect::<CompensatedSum>()
        .value()
        / (kf - 1.0);
    let cov = z
        .iter()
        .map(|x| (x * x - a) * (x - b))
        .collect::<CompensatedSum>()
        .value()
        / (kf - 1.0);
    let var_f = (var_z2 / (a * a) - 4.0 * cov / (a * b) + 4.0 * var_z / (b * b)) / kf;
    Ok(NormFluctuation {
        value,
        stderr: var_f.max(0.0).sqrt() / n_spins as f64,
        samples: k,
    })
}

/// Samples `samples` states at one point and evaluates the statistic.
pub fn norm_fluctuation(
    params: &RbmParams,
    samples: usize,
    master_seed: u64,
) -> Result<NormFluctuation> {
    let logs: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let w = sample_weights(params, sample_seed(master_seed, 0, s))?;
            Ok(build_state(&w)?.log_norm_squared())
        })
        .collect::<Result<_>>()?;
    norm_fluctuation_statistic(params.n_visible, &logs)
}
