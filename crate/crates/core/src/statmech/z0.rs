//! Single-order-parameter model for the squared-norm average.

use super::optimize::{golden_section, symmetric_grid};
use super::{
    FreeEnergyLandscape, FreeEnergyTerms, LandscapeEntry, ModelParams, OrderParameterPoint,
    DEFAULT_GRID_STEP, REFINE_TOL,
};
use crate::error::{Error, Result};
use crate::numerics::{binary_entropy, log_cosh, log_sum_exp};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// `|φ*|` below this is reported as the symmetric phase.
const SYMMETRIC_PHI_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Z0Phase {
    Symmetric,
    Broken,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Z0Minimum {
    /// Canonical (nonnegative) minimizer.
    pub phi: f64,
    pub free_energy: f64,
    pub phase: Z0Phase,
}

fn check_phi(phi: f64) -> Result<()> {
    if !(phi.abs() <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("|phi|={} exceeds 1", phi.abs())));
    }
    Ok(())
}

/// Energy density `𝓔(φ)`. With `v = ∞` the dominant-exponential limit is used.
pub fn z0_energy_density(phi: f64, p: &ModelParams) -> Result<f64> {
    check_phi(phi)?;
    Ok(energy_unchecked(phi, p))
}

fn energy_unchecked(phi: f64, p: &ModelParams) -> f64 {
    let (u2, lambda) = (p.u * p.u, p.lambda);
    if p.is_v_infinite() {
        let x = 4.0 * phi * u2;
        return if phi.abs() < 1.0 {
            -lambda * (4.0 * u2 + log_cosh(x) - 2.0 * LN_2)
        } else {
            // log(e^{2u²} cosh(4u²)/2 + e^{-2u²}/4)
            let inner =
                log_sum_exp(&[2.0 * u2 + log_cosh(4.0 * u2) - LN_2, -2.0 * u2 - 2.0 * LN_2]);
            -lambda * (inner + 2.0 * u2 - LN_2)
        };
    }
    let v2 = p.v * p.v;
    let s = u2 + v2;
    let log_omega = log_sum_exp(&[
        0.0,
        2.0 * s - LN_2 + log_cosh(4.0 * phi * u2),
        -2.0 * s - LN_2 + log_cosh(4.0 * phi * v2),
    ]);
    -lambda * (log_omega + 2.0 * (u2 - v2) - LN_2)
}

/// Entropy density `log 2 + H_b((1 − φ)/2)`.
pub fn z0_entropy_density(phi: f64) -> Result<f64> {
    check_phi(phi)?;
    Ok(entropy_unchecked(phi))
}

fn entropy_unchecked(phi: f64) -> f64 {
    LN_2 + binary_entropy((1.0 - phi.clamp(-1.0, 1.0)) / 2.0)
}

pub fn z0_free_energy(phi: f64, p: &ModelParams) -> Result<FreeEnergyTerms> {
    check_phi(phi)?;
    Ok(terms(phi, p))
}

fn terms(phi: f64, p: &ModelParams) -> FreeEnergyTerms {
    FreeEnergyTerms::new(energy_unchecked(phi, p), entropy_unchecked(phi))
}

fn f(phi: f64, p: &ModelParams) -> f64 {
    energy_unchecked(phi, p) - entropy_unchecked(phi)
}

/// Grid-located local minima refined by golden section; returns `(φ, 𝓕)` pairs.
fn local_minima(p: &ModelParams, step: f64) -> (Vec<f64>, Vec<f64>, Vec<(f64, f64)>) {
    let grid = symmetric_grid(1.0, step);
    let values: Vec<f64> = grid.iter().map(|&x| f(x, p)).collect();
    let h = grid[1] - grid[0];
    let n = grid.len();
    let mut out = Vec::new();
    for i in 0..n {
        let left = if i > 0 { values[i - 1] } else { f64::INFINITY };
        let right = if i + 1 < n {
            values[i + 1]
        } else {
            f64::INFINITY
        };
        if values[i] <= left && values[i] <= right {
            let lo = (grid[i] - h).max(-1.0);
            let hi = (grid[i] + h).min(1.0);
            let (x, fx) = golden_section(|t| f(t, p), lo, hi, REFINE_TOL);
            out.push(if fx < values[i] {
                (x, fx)
            } else {
                (grid[i], values[i])
            });
        }
    }
    for x in [-1.0, 0.0, 1.0] {
        out.push((x, f(x, p)));
    }
    (grid, values, out)
}

fn pick_global(cands: &[(f64, f64)]) -> (f64, f64) {
    let best = cands.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let tol = 1e-12 * best.abs().max(1.0);
    // Among (near-)degenerate candidates prefer the nonnegative representative.
    cands
        .iter()
        .filter(|c| c.1 <= best + tol)
        .copied()
        .max_by(|x, y| {
            let kx = (x.0 >= 0.0, -x.0.abs());
            let ky = (y.0 >= 0.0, -y.0.abs());
            kx.partial_cmp(&ky)
                .unwrap()
                .then(y.1.partial_cmp(&x.1).unwrap())
        })
        .unwrap()
}

/// Global minimum of `𝓕(φ)` on `[-1, 1]`.
pub fn minimize_z0(p: &ModelParams) -> Z0Minimum {
    let (_, _, cands) = local_minima(p, DEFAULT_GRID_STEP);
    let (phi, fx) = pick_global(&cands);
    // 𝓕 is even, so |φ| is the canonical representative.
    let phi = phi.abs();
    Z0Minimum {
        phi,
        free_energy: fx,
        phase: if phi < SYMMETRIC_PHI_TOL {
            Z0Phase::Symmetric
        } else {
            Z0Phase::Broken
        },
    }
}

/// `(1/N) log E[⟨Ψ|Ψ⟩²] ≈ −𝓕*`.
pub fn z0_log_average(p: &ModelParams) -> f64 {
    -minimize_z0(p).free_energy
}

/// Bisection on `λ ∈ [lo, hi]` for the symmetric-to-broken transition.
/// The phase must differ at the two ends.
pub fn critical_lambda(u: f64, v: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let base = ModelParams::new(u, v, lo)?;
    let phase = |l: f64| minimize_z0(&base.with_lambda(l)).phase;
    let (mut a, mut b) = (lo, hi);
    let pa = phase(a);
    if pa == phase(b) {
        return Err(Error::Domain(format!(
            "no phase change between lambda={lo} and {hi}"
        )));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if phase(m) == pa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Tabulated `𝓕(φ)` with its local minima.
pub fn z0_landscape(p: &ModelParams, step: f64) -> Result<FreeEnergyLandscape> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidParameters(format!(
            "grid step must be in (0, 1], got {step}"
        )));
    }
    let (grid, _, cands) = local_minima(p, step);
    let entry = |x: f64| LandscapeEntry {
        point: OrderParameterPoint::z0(x),
        terms: terms(x, p),
    };
    let grid = grid.into_iter().map(entry).collect();
    let mut minima: Vec<(f64, f64)> = Vec::new();
    let mut sorted = cands.clone();
    sorted.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    for c in sorted {
        // The explicit landmark candidates are only kept if they are minima.
        let is_local = {
            let h = 1e-6;
            let fl = if c.0 - h >= -1.0 {
                f(c.0 - h, p)
            } else {
                f64::INFINITY
            };
            let fr = if c.0 + h <= 1.0 {
                f(c.0 + h, p)
            } else {
                f64::INFINITY
            };
            c.1 <= fl && c.1 <= fr
        };
        if is_local && !minima.iter().any(|m| (m.0 - c.0).abs() < 1e-4) {
            minima.push(c);
        }
    }
    let (gphi, _) = pick_global(&cands);
    Ok(FreeEnergyLandscape {
        grid,
        minima: minima.into_iter().map(|c| entry(c.0)).collect(),
        global_minimum: entry(gphi.abs()),
    })
}
