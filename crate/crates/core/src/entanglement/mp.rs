//! Marchenko–Pastur reference for the entanglement-Hamiltonian density.
//!
//! For a Haar-random state on `d_A × d_B` (`d_A ≤ d_B`), `μ = d_A ξ` follows
//! the Marchenko–Pastur law with ratio `c = d_A / d_B`, whose density in
//! `ε = −log ξ` is `√((μ₊ − μ)(μ − μ₋)) / (2πc)` with `μ = d_A e^{−ε}`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Lower cut on `μ` when the support touches zero (`c = 1`).
const MU_FLOOR: f64 = 1e-12;
const PANELS_PER_BIN: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarchenkoPastur {
    pub dim_a: usize,
    pub dim_b: usize,
    pub ratio: f64,
    /// `n_bins + 1` ascending `ε` edges spanning the support.
    pub edges: Vec<f64>,
    /// Bin-averaged density in `ε`.
    pub density: Vec<f64>,
}

fn support(c: f64) -> (f64, f64) {
    let s = c.sqrt();
    ((1.0 - s).powi(2), (1.0 + s).powi(2))
}

fn check_dims(dim_a: usize, dim_b: usize) -> Result<f64> {
    if dim_a == 0 || dim_b == 0 || dim_a > dim_b {
        return Err(Error::InvalidParameters(format!(
            "need 0 < dim_a <= dim_b, got {dim_a} x {dim_b}"
        )));
    }
    Ok(dim_a as f64 / dim_b as f64)
}

/// Pointwise density in `ε`.
pub fn marchenko_pastur_density(dim_a: usize, dim_b: usize, epsilon: f64) -> Result<f64> {
    let c = check_dims(dim_a, dim_b)?;
    let (lo, hi) = support(c);
    let mu = dim_a as f64 * (-epsilon).exp();
    if mu <= lo || mu >= hi {
        return Ok(0.0);
    }
    Ok(((hi - mu) * (mu - lo)).sqrt() / (2.0 * PI * c))
}

/// `∫ p(μ) dμ` over `[m1, m2] ∩ support` using `μ = m + r cos θ`, which
/// turns the integrand into the smooth `r² sin²θ / (2πc (m + r cos θ))`.
fn mass(c: f64, m1: f64, m2: f64) -> f64 {
    let (lo, hi) = support(c);
    let (m1, m2) = (m1.max(lo), m2.min(hi));
    if m2 <= m1 {
        return 0.0;
    }
    let m = 0.5 * (lo + hi);
    let r = 0.5 * (hi - lo);
    let theta = |mu: f64| ((mu - m) / r).clamp(-1.0, 1.0).acos();
    let (t1, t2) = (theta(m2), theta(m1));
    let f = |t: f64| {
        let (s, co) = t.sin_cos();
        let den = m + r * co;
        if den <= 0.0 {
            // c = 1 at θ = π: sin²θ / (1 + cos θ) → 1 − cos θ.
            r * (1.0 - co) / (2.0 * PI * c)
        } else {
            r * r * s * s / (2.0 * PI * c * den)
        }
    };
    // Composite Simpson.
    let n = PANELS_PER_BIN;
    let h = (t2 - t1) / n as f64;
    let mut acc = f(t1) + f(t2);
    for k in 1..n {
        acc += f(t1 + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// Bin-integrated density on `n_bins` equal `ε` bins covering the support.
pub fn marchenko_pastur_reference(
    dim_a: usize,
    dim_b: usize,
    n_bins: usize,
) -> Result<MarchenkoPastur> {
    let c = check_dims(dim_a, dim_b)?;
    if n_bins == 0 {
        return Err(Error::InvalidParameters("need at least one bin".into()));
    }
    let (lo, hi) = support(c);
    let da = dim_a as f64;
    let eps_min = da.ln() - hi.ln();
    let eps_max = da.ln() - lo.max(MU_FLOOR).ln();
    marchenko_pastur_on_edges(dim_a, dim_b, eps_min, eps_max, n_bins)
}

/// Bin-averaged density on `n_bins` equal bins of `[eps_min, eps_max]`.
pub fn marchenko_pastur_on_edges(
    dim_a: usize,
    dim_b: usize,
    eps_min: f64,
    eps_max: f64,
    n_bins: usize,
) -> Result<MarchenkoPastur> {
    let c = check_dims(dim_a, dim_b)?;
    let da = dim_a as f64;
    let w = (eps_max - eps_min) / n_bins as f64;
    let edges: Vec<f64> = (0..=n_bins).map(|k| eps_min + k as f64 * w).collect();
    let density = edges
        .windows(2)
        .map(|e| mass(c, da * (-e[1]).exp(), da * (-e[0]).exp()) / (e[1] - e[0]))
        .collect();
    Ok(MarchenkoPastur {
        dim_a,
        dim_b,
        ratio: c,
        edges,
        density,
    })
}

impl MarchenkoPastur {
    pub fn integral(&self) -> f64 {
        self.edges
            .windows(2)
            .zip(&self.density)
            .map(|(e, d)| (e[1] - e[0]) * d)
            .sum()
    }
}
