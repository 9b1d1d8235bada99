use crate::error::{Error, Result};
use crate::numerics::log_cosh;
use crate::rbm::{build_state, log_amplitude_at, sample_weights, RbmParams, StateVector};
use crate::rng::{rng_from_seed, sample_seed, standard_normal_pair};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

pub const DESIGN_MAX_SPINS: usize = 14;
const NULL_TOL: f64 = 1e-10;
const CHUNK: usize = 128;

/// Results of the three first-moment checks on an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub n_spins: usize,
    pub samples: usize,
    /// Samples where `Ψ(s) = Ψ(s̄)` failed bitwise for some `s`.
    pub symmetry_failures: usize,
    pub symmetry_exact: bool,
    /// Upper bound on `max_s ‖ρ̄|s₋⟩‖`.
    pub null_residual: f64,
    pub null_vectors_ok: bool,
    /// `2^{N−1}⟨χ|(ρ̄ − 𝟙/2^{N−1})|χ⟩` per test state.
    pub test_values: Vec<f64>,
    /// Sampling standard error of each test value.
    pub test_stderrs: Vec<f64>,
    pub test_mean: f64,
    pub test_min: f64,
    pub test_max: f64,
    pub fraction_positive: f64,
}

/// Test states `(|s₊⟩ + |s'₊⟩)/√2`: `s` has the top spin up, `s'` flips one
/// lower spin that is up in `s`, so each unordered pair appears once.
fn test_pairs(n: usize) -> Vec<(usize, usize)> {
    let half = 1usize << (n - 1);
    let mut out = Vec::new();
    for s in 0..half {
        for j in 0..n - 1 {
            if s >> j & 1 == 0 {
                out.push((s, s | 1 << j));
            }
        }
    }
    out
}

#[derive(Clone)]
struct Acc {
    failures: usize,
    null: Vec<f64>,
    y: Vec<f64>,
    y2: Vec<f64>,
}

impl Acc {
    fn new(half: usize, pairs: usize) -> Self {
        Self {
            failures: 0,
            null: vec![0.0; half],
            y: vec![0.0; pairs],
            y2: vec![0.0; pairs],
        }
    }

    fn add(
        &mut self,
        state: &StateVector,
        symmetric: bool,
        pairs: &[(usize, usize)],
    ) -> Result<()> {
        if !symmetric {
            self.failures += 1;
        }
        let psi = state.normalized()?;
        let a = psi.amplitudes();
        let full = a.len() - 1;
        for (s, acc) in self.null.iter_mut().enumerate() {
            *acc += (a[s] - a[s ^ full]).norm() * FRAC_1_SQRT_2;
        }
        let scale = (a.len() / 2) as f64;
        for (k, &(s, t)) in pairs.iter().enumerate() {
            let y = scale * (a[s] + a[t]).norm_sqr();
            self.y[k] += y;
            self.y2[k] += y * y;
        }
        Ok(())
    }

    fn merge(&mut self, other: &Acc) {
        self.failures += other.failures;
        for (x, y) in self.null.iter_mut().zip(&other.null) {
            *x += y;
        }
        for (x, y) in self.y.iter_mut().zip(&other.y) {
            *x += y;
        }
        for (x, y) in self.y2.iter_mut().zip(&other.y2) {
            *x += y;
        }
    }
}

/// Fixed-size chunks reduced in order keep the result thread-count independent.
fn run<F>(n: usize, samples: usize, make: F) -> Result<DesignReport>
where
    F: Fn(u64) -> Result<(StateVector, bool)> + Sync,
{
    if n > DESIGN_MAX_SPINS {
        return Err(Error::Capacity {
            n,
            cap: DESIGN_MAX_SPINS,
        });
    }
    if n < 3 || samples < 2 {
        return Err(Error::InvalidParameters(format!(
            "need N >= 3 and at least 2 samples, got N={n}, samples={samples}"
        )));
    }
    let half = 1usize << (n - 1);
    let pairs = test_pairs(n);
    let chunks: Vec<Acc> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = Acc::new(half, pairs.len());
            for k in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let (state, sym) = make(k as u64)?;
                acc.add(&state, sym, &pairs)?;
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut total = Acc::new(half, pairs.len());
    for c in &chunks {
        total.merge(c);
    }

    let k = samples as f64;
    let null_residual = total.null.iter().map(|x| x / k).fold(0.0, f64::max);
    let mut values = Vec::with_capacity(pairs.len());
    let mut stderrs = Vec::with_capacity(pairs.len());
    for (s1, s2) in total.y.iter().zip(&total.y2) {
        let mean = s1 / k;
        let var = ((s2 / k - mean * mean) * k / (k - 1.0)).max(0.0);
        values.push(mean - 1.0);
        stderrs.push((var / k).sqrt());
    }
    let test_mean = values.iter().sum::<f64>() / values.len() as f64;
    Ok(DesignReport {
        n_spins: n,
        samples,
        symmetry_failures: total.failures,
        symmetry_exact: total.failures == 0,
        null_residual,
        null_vectors_ok: null_residual <= NULL_TOL,
        test_mean,
        test_min: values.iter().copied().fold(f64::INFINITY, f64::min),
        test_max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        fraction_positive: values.iter().filter(|&&v| v > 0.0).count() as f64 / values.len() as f64,
        test_values: values,
        test_stderrs: stderrs,
    })
}

/// Runs the checks on `n_samples` RBM states. The symmetry check compares
/// independent evaluations of `Ψ(s)` and `Ψ(s̄)` as well as the stored vector.
pub fn design_obstruction_check(
    params: &RbmParams,
    n_samples: usize,
    seed: u64,
) -> Result<DesignReport> {
    params.validate()?;
    let n = params.n_visible;
    if n > DESIGN_MAX_SPINS {
        return Err(Error::Capacity {
            n,
            cap: DESIGN_MAX_SPINS,
        });
    }
    run(n, n_samples, |k| {
        let w = sample_weights(params, sample_seed(seed, 0, k))?;
        let state = build_state(&w)?;
        let full = (1u64 << n) - 1;
        let mut sym = true;
        for s in 0..1u64 << (n - 1) {
            let (x, y) = (log_amplitude_at(&w, s), log_amplitude_at(&w, s ^ full));
            let stored = state.amplitude(s as usize) == state.amplitude((s ^ full) as usize);
            if x.log_magnitude().to_bits() != y.log_magnitude().to_bits()
                || x.phase().to_bits() != y.phase().to_bits()
                || !stored
            {
                sym = false;
                break;
            }
        }
        Ok((state, sym))
    })
}

/// Leading-order value of the rescaled test-state expectation, neglecting
/// norm fluctuations: `E[Ψ(s)Ψ*(s')] / E|Ψ(s)|²` for `s·s' = N − 2`, which is
/// `[cosh((1 − 2/N)t) / cosh t]^M` with `t = u² + v²`.
pub fn offdiagonal_prediction(params: &RbmParams) -> f64 {
    let n = params.n_visible as f64;
    let t = params.u * params.u + params.v * params.v;
    let rho = 1.0 - 2.0 / n;
    (params.n_hidden as f64 * (log_cosh(rho * t) - log_cosh(t))).exp()
}

/// The same checks on Haar-random states of the spin-flip-symmetric
/// subspace, whose average is exactly `𝟙/2^{N−1}` there.
pub fn haar_symmetric_control(n: usize, n_samples: usize, seed: u64) -> Result<DesignReport> {
    run(n, n_samples, |k| {
        let mut rng = rng_from_seed(sample_seed(seed, 1, k));
        let dim = 1usize << n;
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        for s in 0..dim / 2 {
            let (re, im) = standard_normal_pair(&mut rng);
            amps[s] = Complex64::new(re, im);
            amps[s ^ (dim - 1)] = amps[s];
        }
        Ok((StateVector::from_amplitudes(amps)?, true))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_enumeration() {
        let p = test_pairs(4);
        assert_eq!(p.len(), 8 * 3 / 2);
        for &(s, t) in &p {
            assert_eq!((s ^ t).count_ones(), 1);
            assert!(s < 8 && t < 8);
        }
        let mut sorted = p.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), p.len());
    }

    #[test]
    fn prediction_limits() {
        let p = RbmParams::new(10, 8, 0.0, 0.0).unwrap();
        assert_eq!(offdiagonal_prediction(&p), 1.0);
        let p = RbmParams::new(10, 8, 0.0, 4.0).unwrap();
        let expected = 8.0 * ((12.8f64).cosh().ln() - (16.0f64).cosh().ln());
        assert!((offdiagonal_prediction(&p).ln() - expected).abs() < 1e-9);
    }

    #[test]
    fn rbm_samples_match_prediction() {
        let p = RbmParams::from_lambda(8, 0.75, 0.5, 0.5).unwrap();
        let r = design_obstruction_check(&p, 2000, 11).unwrap();
        assert!(r.symmetry_exact);
        assert!(r.null_vectors_ok, "{}", r.null_residual);
        assert_eq!(r.null_residual, 0.0);
        assert_eq!(r.fraction_positive, 1.0);
        let pred = offdiagonal_prediction(&p);
        assert!(
            (r.test_mean - pred).abs() < 0.05,
            "{} vs {pred}",
            r.test_mean
        );
    }

    #[test]
    fn strong_imaginary_weights_decorrelate_neighbours() {
        let p = RbmParams::from_lambda(8, 0.75, 0.0, 4.0).unwrap();
        let r = design_obstruction_check(&p, 400, 11).unwrap();
        assert!(r.symmetry_exact && r.null_vectors_ok);
        assert!(offdiagonal_prediction(&p) < 1e-9);
        let mean_err = r.test_stderrs.iter().sum::<f64>() / r.test_stderrs.len() as f64;
        assert!(
            r.test_mean.abs() < 3.0 * mean_err,
            "{} vs {mean_err}",
            r.test_mean
        );
    }

    #[test]
    fn haar_control_is_unbiased() {
        let r = haar_symmetric_control(6, 4000, 3).unwrap();
        assert!(r.null_vectors_ok);
        let within = r
            .test_values
            .iter()
            .zip(&r.test_stderrs)
            .filter(|(v, e)| v.abs() < 4.0 * **e)
            .count();
        assert!(within as f64 > 0.97 * r.test_values.len() as f64);
        let mean_err = r.test_stderrs.iter().sum::<f64>() / r.test_stderrs.len() as f64;
        assert!(
            r.test_mean.abs() < 3.0 * mean_err,
            "{} vs {}",
            r.test_mean,
            mean_err
        );
    }

    #[test]
    fn thread_independent_and_capped() {
        let p = RbmParams::new(6, 4, 0.2, 1.0).unwrap();
        let a = design_obstruction_check(&p, 300, 5).unwrap();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(|| design_obstruction_check(&p, 300, 5).unwrap());
        assert_eq!(a, b);
        let big = RbmParams::new(15, 4, 0.2, 1.0).unwrap();
        assert!(matches!(
            design_obstruction_check(&big, 2, 0),
            Err(Error::Capacity { .. })
        ));
    }
}
