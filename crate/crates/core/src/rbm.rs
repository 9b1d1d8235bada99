//! Zero-bias Gaussian RBM ensemble: weight sampling and wavefunction evaluation.
//!
//! The unnormalized amplitude of an Ising configuration `s` is
//! `Ψ(s) = ∏ₘ cosh(Σⱼ w_{mj} sʲ)`. Configurations are indexed little-endian:
//! bit `b` of the index holds spin `b` (0-based), with bit value 0 meaning
//! `+1` and bit value 1 meaning `-1`.

use crate::error::{Error, Result};
use crate::numerics::{log_cosh, CompensatedSum};
use crate::rng::{rng_from_seed, standard_normal_pair};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// Default largest number of spins `build_state` will materialize.
pub const DEFAULT_MAX_SPINS: usize = 24;

/// A point of the ensemble: `N` visible spins, `M` hidden units and the
/// real/imaginary weight scales `u`, `v` (variances `u²/N`, `v²/N`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RbmParams {
    pub n_visible: usize,
    pub n_hidden: usize,
    pub u: f64,
    pub v: f64,
}

impl RbmParams {
    pub fn new(n_visible: usize, n_hidden: usize, u: f64, v: f64) -> Result<Self> {
        let p = Self {
            n_visible,
            n_hidden,
            u,
            v,
        };
        p.validate()?;
        Ok(p)
    }

    /// Picks `M = round(λN)` (halves round away from zero).
    pub fn from_lambda(n_visible: usize, lambda: f64, u: f64, v: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        Self::new(
            n_visible,
            (lambda * n_visible as f64).round() as usize,
            u,
            v,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_visible == 0 || self.n_hidden == 0 {
            return Err(Error::InvalidParameters(format!(
                "need N > 0 and M > 0, got N={} M={}",
                self.n_visible, self.n_hidden
            )));
        }
        if self.n_visible > 63 {
            return Err(Error::InvalidParameters(format!(
                "at most 63 visible spins supported, got {}",
                self.n_visible
            )));
        }
        for (name, x) in [("u", self.u), ("v", self.v)] {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::InvalidParameters(format!(
                    "{name} must be finite and nonnegative, got {x}"
                )));
            }
        }
        Ok(())
    }

    /// Hidden-unit density `λ = M/N`.
    pub fn lambda(&self) -> f64 {
        self.n_hidden as f64 / self.n_visible as f64
    }

    pub fn real_std(&self) -> f64 {
        self.u / (self.n_visible as f64).sqrt()
    }

    pub fn imag_std(&self) -> f64 {
        self.v / (self.n_visible as f64).sqrt()
    }
}

/// One sampled network: an `M × N` complex weight matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n_hidden: usize,
    n_visible: usize,
    entries: Vec<Complex64>,
    seed: u64,
    purely_imaginary: bool,
}

impl WeightMatrix {
    /// Wraps explicit weights (row `m` holds `w_{m,0..N}`); the seed is recorded as 0.
    pub fn from_entries(
        n_hidden: usize,
        n_visible: usize,
        entries: Vec<Complex64>,
    ) -> Result<Self> {
        if n_hidden == 0 || n_visible == 0 || n_visible > 63 {
            return Err(Error::InvalidParameters(format!(
                "bad weight shape {n_hidden}x{n_visible}"
            )));
        }
        if entries.len() != n_hidden * n_visible {
            return Err(Error::DimensionMismatch {
                expected: n_hidden * n_visible,
                got: entries.len(),
            });
        }
        let purely_imaginary = entries.iter().all(|w| w.re == 0.0);
        Ok(Self {
            n_hidden,
            n_visible,
            entries,
            seed: 0,
            purely_imaginary,
        })
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_visible(&self) -> usize {
        self.n_visible
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, m: usize, j: usize) -> Complex64 {
        self.entries[m * self.n_visible + j]
    }

    /// True when every real part is exactly zero (the `u = 0` line), in which
    /// case all amplitudes are real.
    pub fn is_purely_imaginary(&self) -> bool {
        self.purely_imaginary
    }

    fn split(&self) -> usize {
        self.n_visible / 2
    }

    /// `W_m(s)` for every hidden unit, summed as (low half) + (high half) in
    /// ascending site order. Flipping every spin negates both partial sums
    /// exactly, so `W(s̄) = -W(s)` bit for bit.
    fn fields(&self, index: u64, out: &mut [Complex64]) {
        let h = self.split();
        for (m, slot) in out.iter_mut().enumerate() {
            let row = &self.entries[m * self.n_visible..(m + 1) * self.n_visible];
            let lo = partial_field(&row[..h], index);
            let hi = partial_field(&row[h..], index >> h);
            *slot = lo + hi;
        }
    }
}

fn spin_of(bits: u64, j: usize) -> f64 {
    if (bits >> j) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

fn partial_field(row: &[Complex64], bits: u64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, w) in row.iter().enumerate() {
        if (bits >> j) & 1 == 0 {
            acc += w;
        } else {
            acc -= w;
        }
    }
    acc
}

/// Draws `w_{mj} = u/√N · z₁ + i v/√N · z₂` with `(z₁, z₂)` from one Box–Muller
/// pair per entry, rows in order `m = 0..M`, columns `j = 0..N`.
pub fn sample_weights(params: &RbmParams, seed: u64) -> Result<WeightMatrix> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    let (sr, si) = (params.real_std(), params.imag_std());
    let len = params.n_hidden * params.n_visible;
    let mut entries = Vec::with_capacity(len);
    for _ in 0..len {
        let (z1, z2) = standard_normal_pair(&mut rng);
        entries.push(Complex64::new(sr * z1, si * z2));
    }
    let purely_imaginary = entries.iter().all(|w| w.re == 0.0);
    Ok(WeightMatrix {
        n_hidden: params.n_hidden,
        n_visible: params.n_visible,
        entries,
        seed,
        purely_imaginary,
    })
}

/// An amplitude as `exp(log_scale) · mantissa`, with the mantissa kept in a
/// moderate range so products of many large `cosh` factors never overflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledAmplitude {
    pub log_scale: f64,
    pub mantissa: Complex64,
}

impl ScaledAmplitude {
    pub fn log_magnitude(&self) -> f64 {
        self.log_scale + self.mantissa.norm().ln()
    }

    pub fn phase(&self) -> f64 {
        self.mantissa.arg()
    }

    /// Converts to an ordinary complex number (may overflow to infinity).
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }
}

const RENORM_HI: f64 = 1e150;
const RENORM_LO: f64 = 1e-150;

fn mul_cosh(log_scale: &mut f64, mantissa: &mut Complex64, z: Complex64) {
    // cosh is even: evaluate on the representative with x > 0 (or x = 0, y >= 0).
    let z = if z.re < 0.0 || (z.re == 0.0 && z.im < 0.0) {
        -z
    } else {
        z
    };
    let (x, y) = (z.re, z.im);
    let (s, c) = y.sin_cos();
    if x < 1.0 {
        *mantissa *= Complex64::new(x.cosh() * c, x.sinh() * s);
    } else {
        // cosh z = e^x / 2 · (e^{iy} + e^{-2x} e^{-iy})
        let t = (-2.0 * x).exp();
        *mantissa *= Complex64::new(c * (1.0 + t), s * (1.0 - t));
        *log_scale += x - LN_2;
    }
    let r = mantissa.norm();
    if r > RENORM_HI || (r < RENORM_LO && r > 0.0) {
        *log_scale += r.ln();
        *mantissa /= r;
    }
}

fn cos_product(fields: &[Complex64]) -> ScaledAmplitude {
    let mut log_scale = 0.0;
    let mut prod = 1.0f64;
    for w in fields {
        prod *= w.im.abs().cos();
        let r = prod.abs();
        if r < RENORM_LO && r > 0.0 {
            log_scale += r.ln();
            prod /= r;
        }
    }
    ScaledAmplitude {
        log_scale,
        mantissa: Complex64::new(prod, 0.0),
    }
}

fn cosh_product(fields: &[Complex64]) -> ScaledAmplitude {
    let mut log_scale = 0.0;
    let mut mantissa = Complex64::new(1.0, 0.0);
    for &w in fields {
        mul_cosh(&mut log_scale, &mut mantissa, w);
    }
    ScaledAmplitude {
        log_scale,
        mantissa,
    }
}

fn config_index(n: usize, config: &[i8]) -> Result<u64> {
    if config.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: config.len(),
        });
    }
    let mut index = 0u64;
    for (j, &s) in config.iter().enumerate() {
        match s {
            1 => {}
            -1 => index |= 1 << j,
            other => {
                return Err(Error::InvalidParameters(format!(
                    "spin values must be +1 or -1, got {other}"
                )))
            }
        }
    }
    Ok(index)
}

/// Ising configuration (`±1` per site) for a basis index.
pub fn config_from_index(n: usize, index: u64) -> Vec<i8> {
    (0..n).map(|j| spin_of(index, j) as i8).collect()
}

/// `Ψ(s)` as a log-scaled amplitude.
pub fn log_amplitude(weights: &WeightMatrix, config: &[i8]) -> Result<ScaledAmplitude> {
    let index = config_index(weights.n_visible, config)?;
    Ok(log_amplitude_at(weights, index))
}

pub(crate) fn log_amplitude_at(weights: &WeightMatrix, index: u64) -> ScaledAmplitude {
    let mut fields = vec![Complex64::new(0.0, 0.0); weights.n_hidden];
    weights.fields(index, &mut fields);
    if weights.purely_imaginary {
        cos_product(&fields)
    } else {
        cosh_product(&fields)
    }
}

/// `Ψ(s) = ∏ₘ cosh(Σⱼ w_{mj} sʲ)`.
pub fn amplitude(weights: &WeightMatrix, config: &[i8]) -> Result<Complex64> {
    Ok(log_amplitude(weights, config)?.value())
}

/// The full vector of `2^N` amplitudes. Stored values are
/// `exp(-log_scale) · Ψ(s)`; `log_scale` is zero unless the largest
/// amplitude would exceed `e^600`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_spins: usize,
    amplitudes: Vec<Complex64>,
    log_scale: f64,
}

const SAFE_LOG_MAGNITUDE: f64 = 600.0;

impl StateVector {
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameters(format!(
                "state length must be a power of two >= 2, got {len}"
            )));
        }
        Ok(Self {
            n_spins: len.trailing_zeros() as usize,
            amplitudes,
            log_scale: 0.0,
        })
    }

    pub fn n_spins(&self) -> usize {
        self.n_spins
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Stored (possibly rescaled) amplitudes.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn log_scale(&self) -> f64 {
        self.log_scale
    }

    /// True amplitude `Ψ(index)`; may overflow when `log_scale` is large.
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index] * self.log_scale.exp()
    }

    pub fn is_real(&self) -> bool {
        self.amplitudes.iter().all(|a| a.im == 0.0)
    }

    fn stored_norm_squared(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .collect::<CompensatedSum>()
            .value()
    }

    /// `⟨Ψ|Ψ⟩ = Σ |Ψ(s)|²` with compensated summation.
    pub fn norm_squared(&self) -> f64 {
        self.stored_norm_squared() * (2.0 * self.log_scale).exp()
    }

    /// `log ⟨Ψ|Ψ⟩`, finite even when the norm itself overflows.
    pub fn log_norm_squared(&self) -> f64 {
        self.stored_norm_squared().ln() + 2.0 * self.log_scale
    }

    /// Unit-norm copy.
    pub fn normalized(&self) -> Result<StateVector> {
        let n2 = self.stored_norm_squared();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroState);
        }
        let inv = 1.0 / n2.sqrt();
        Ok(StateVector {
            n_spins: self.n_spins,
            amplitudes: self.amplitudes.iter().map(|a| a * inv).collect(),
            log_scale: 0.0,
        })
    }

    /// Amplitudes divided by the norm, as probabilities `|Ψ̃(s)|²`.
    pub fn probabilities(&self) -> Result<Vec<f64>> {
        let n2 = self.stored_norm_squared();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroState);
        }
        Ok(self.amplitudes.iter().map(|a| a.norm_sqr() / n2).collect())
    }
}

/// Materializes all `2^N` amplitudes (cap [`DEFAULT_MAX_SPINS`]).
pub fn build_state(weights: &WeightMatrix) -> Result<StateVector> {
    build_state_with_cap(weights, DEFAULT_MAX_SPINS)
}

/// Like [`build_state`] with an explicit spin-count cap.
pub fn build_state_with_cap(weights: &WeightMatrix, max_spins: usize) -> Result<StateVector> {
    let n = weights.n_visible;
    if n > max_spins {
        return Err(Error::Capacity { n, cap: max_spins });
    }
    let m = weights.n_hidden;
    let h = weights.split();
    let dim = 1usize << n;
    let full_mask = dim - 1;

    // Partial fields for the low `h` sites and the high `n - h` sites.
    let lo_tab = field_table(weights, 0, h);
    let hi_tab = field_table(weights, h, n);
    let lo_mask = (1usize << h) - 1;

    let half = dim / 2;
    let mut scaled = Vec::with_capacity(half);
    let mut fields = vec![Complex64::new(0.0, 0.0); m];
    for idx in 0..half {
        let lo = &lo_tab[(idx & lo_mask) * m..(idx & lo_mask) * m + m];
        let hi = &hi_tab[(idx >> h) * m..(idx >> h) * m + m];
        for k in 0..m {
            fields[k] = lo[k] + hi[k];
        }
        scaled.push(if weights.purely_imaginary {
            cos_product(&fields)
        } else {
            cosh_product(&fields)
        });
    }

    let peak = scaled
        .iter()
        .map(ScaledAmplitude::log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    let log_scale = if peak > SAFE_LOG_MAGNITUDE { peak } else { 0.0 };

    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
    for (idx, a) in scaled.iter().enumerate() {
        let value = a.mantissa * (a.log_scale - log_scale).exp();
        amplitudes[idx] = value;
        amplitudes[idx ^ full_mask] = value;
    }
    Ok(StateVector {
        n_spins: n,
        amplitudes,
        log_scale,
    })
}

/// Table of `Σ_{j ∈ [from, to)} w_{mj} sʲ` over all sub-configurations of
/// those sites, laid out as `[sub_index * M + m]`.
fn field_table(weights: &WeightMatrix, from: usize, to: usize) -> Vec<Complex64> {
    let m = weights.n_hidden;
    let count = 1usize << (to - from);
    let mut tab = Vec::with_capacity(count * m);
    for bits in 0..count as u64 {
        for k in 0..m {
            let row = &weights.entries[k * weights.n_visible..(k + 1) * weights.n_visible];
            tab.push(partial_field(&row[from..to], bits));
        }
    }
    tab
}

/// `(1/N) log E[⟨Ψ|Ψ⟩] = λ(u² − v²) + λ log cosh(u² + v²) + log 2`.
pub fn average_norm_squared_analytic(params: &RbmParams) -> f64 {
    let (u2, v2) = (params.u * params.u, params.v * params.v);
    let lambda = params.lambda();
    lambda * (u2 - v2) + lambda * log_cosh(u2 + v2) + LN_2
}
