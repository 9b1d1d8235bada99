//! Inverse participation ratios, fractal dimensions and the `D_q` entropy bound.

use super::density::{renyi_entropy, state_spectrum};
use super::SubregionMask;
use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::rbm::StateVector;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IprResult {
    pub q: u32,
    /// `Σ |Ψ|^{2q} / (Σ |Ψ|²)^q`.
    pub ipr: f64,
    /// `log(IPR_q) / ((1 − q) N log 2)`.
    pub dq: f64,
}

fn check_q(q: u32) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidParameters(format!("q must be >= 2, got {q}")));
    }
    Ok(())
}

fn power_sum(p: &[f64], q: u32) -> f64 {
    p.iter()
        .map(|&x| x.powi(q as i32))
        .collect::<CompensatedSum>()
        .value()
}

pub fn ipr_fractal_dimension(state: &StateVector, q: u32) -> Result<IprResult> {
    check_q(q)?;
    let p = state.probabilities()?;
    let ipr = power_sum(&p, q);
    let dq = ipr.ln() / ((1.0 - q as f64) * state.n_spins() as f64 * LN_2);
    Ok(IprResult { q, ipr, dq })
}

/// Slacks of `Σ|Ψ̃|^{2q} ≤ Σ ξ^q` and of `S_q / N ≤ D_q log 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DqBound {
    pub q: u32,
    pub ipr_sum: f64,
    pub schmidt_sum: f64,
    /// `Σ ξ^q − Σ |Ψ̃|^{2q}`.
    pub moment_slack: f64,
    pub renyi_density: f64,
    pub dq: f64,
    /// `D_q log 2 − S_q / N`.
    pub entropy_slack: f64,
}

impl DqBound {
    pub fn holds(&self, tol: f64) -> bool {
        self.moment_slack >= -tol && self.entropy_slack >= -tol
    }
}

pub fn dq_bound_check(state: &StateVector, mask: &SubregionMask, q: u32) -> Result<DqBound> {
    check_q(q)?;
    let p = state.probabilities()?;
    let ipr_sum = power_sum(&p, q);
    let spectrum = state_spectrum(state, mask)?;
    let schmidt_sum = power_sum(&spectrum.xi, q);
    let n = state.n_spins() as f64;
    let dq = ipr_sum.ln() / ((1.0 - q as f64) * n * LN_2);
    let renyi_density = renyi_entropy(&spectrum, q as f64) / n;
    Ok(DqBound {
        q,
        ipr_sum,
        schmidt_sum,
        moment_slack: schmidt_sum - ipr_sum,
        renyi_density,
        dq,
        entropy_slack: dq * LN_2 - renyi_density,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbm::{build_state, sample_weights, RbmParams};
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn uniform_and_basis_states() {
        let s = StateVector::from_amplitudes(vec![c(1.0); 16]).unwrap();
        for q in 2..5 {
            assert!((ipr_fractal_dimension(&s, q).unwrap().dq - 1.0).abs() < 1e-12);
        }
        let mut amps = vec![c(0.0); 16];
        amps[5] = c(2.0);
        let s = StateVector::from_amplitudes(amps).unwrap();
        assert_eq!(ipr_fractal_dimension(&s, 2).unwrap().dq, 0.0);
        assert!(ipr_fractal_dimension(&s, 1).is_err());
        let z = StateVector::from_amplitudes(vec![c(0.0); 4]).unwrap();
        assert!(matches!(
            ipr_fractal_dimension(&z, 2),
            Err(Error::ZeroState)
        ));
    }

    #[test]
    fn saturation_cases() {
        // A computational basis state and a Bell pair.
        let prod = StateVector::from_amplitudes(vec![c(0.0), c(0.0), c(0.8), c(0.0)]).unwrap();
        let bell =
            StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)])
                .unwrap();
        let m = SubregionMask::new(2, 1).unwrap();
        for s in [prod, bell] {
            for q in 2..5 {
                let b = dq_bound_check(&s, &m, q).unwrap();
                assert!(b.moment_slack.abs() < 1e-14, "{b:?}");
            }
        }
    }

    #[test]
    fn bound_holds_on_samples() {
        let p = RbmParams::new(8, 6, 0.3, 2.0).unwrap();
        let m = SubregionMask::from_sites(8, &[0, 1, 4]).unwrap();
        for seed in 0..20 {
            let s = build_state(&sample_weights(&p, seed).unwrap()).unwrap();
            for q in 2..5 {
                assert!(dq_bound_check(&s, &m, q).unwrap().holds(1e-10));
            }
        }
    }
}
