//! Large-`N` replica statistical-mechanics models.
//!
//! `Z₀ = E[⟨Ψ|Ψ⟩²]` reduces to a single order parameter `φ = s₁·s₂/N`, and
//! the swap-operator numerator `Z₁` to a pair `(φ_A, φ_B)` split over a
//! subregion of fraction `a`. Each model is a free-energy density
//! `F = E − S` whose global minimum controls the exponential growth rate of
//! the corresponding ensemble average. The free energies are evaluated
//! without any additive renormalization; only differences (and the Rényi
//! estimate built from them) carry physical meaning.
//!
//! Passing `v = f64::INFINITY` selects the dominant-exponential limit
//! (`N → ∞` first, then `v → ∞`), which is a separate code path from the
//! log-sum-exp evaluation used for finite `v`.

mod fractal;
mod optimize;
mod page;
mod z0;
mod z1;

pub use fractal::{dq_validity_threshold, fractal_dimension_dq, FractalDimension};
pub use optimize::golden_section;
pub use page::{
    half_system_phase_diagram, limit_page_curve, page_plateau_height, s2_estimate,
    s2_estimate_with, PageCurve, PageCurvePoint, PageRegime, PhaseDiagramRow, S2Estimate,
};
pub use z0::{
    critical_lambda, minimize_z0, z0_energy_density, z0_entropy_density, z0_free_energy,
    z0_landscape, z0_log_average, Z0Minimum, Z0Phase,
};
pub use z1::{
    minimize_z1, minimize_z1_with, z1_free_energy, z1_landscape, SymmetryLabel, Z1Minimum,
    Z1Options,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::LN_2;

/// `λ_c = log 2 / (log 3 − log 2)`, the first-order `Z₀` transition at `(u, v) = (0, ∞)`.
pub const LAMBDA_C: f64 = LN_2 / (1.098_612_288_668_109_8 - LN_2);

/// Default order-parameter grid step for the minimizers.
pub const DEFAULT_GRID_STEP: f64 = 1e-3;

/// Refinement tolerance in order-parameter space.
pub const REFINE_TOL: f64 = 1e-8;

/// Thermodynamic-limit ensemble coordinates. `v` may be `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub u: f64,
    pub v: f64,
    pub lambda: f64,
}

impl ModelParams {
    pub fn new(u: f64, v: f64, lambda: f64) -> Result<Self> {
        if !(u.is_finite() && u >= 0.0) {
            return Err(Error::InvalidParameters(format!(
                "u must be finite and >= 0, got {u}"
            )));
        }
        if v.is_nan() || v < 0.0 {
            return Err(Error::InvalidParameters(format!(
                "v must be >= 0 (or +inf), got {v}"
            )));
        }
        if !(lambda.is_finite() && lambda >= 0.0) {
            return Err(Error::InvalidParameters(format!(
                "lambda must be finite and >= 0, got {lambda}"
            )));
        }
        Ok(Self { u, v, lambda })
    }

    /// The `(u, v) = (0, ∞)` limit at the given `λ`.
    pub fn limit(lambda: f64) -> Self {
        Self {
            u: 0.0,
            v: f64::INFINITY,
            lambda,
        }
    }

    pub fn with_lambda(self, lambda: f64) -> Self {
        Self { lambda, ..self }
    }

    pub fn is_v_infinite(&self) -> bool {
        self.v.is_infinite()
    }
}

/// A point `(φ_A, φ_B)` of the coupled-chain model on subregion fraction `a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterPoint {
    pub phi_a: f64,
    pub phi_b: f64,
    pub a: f64,
}

/// Slack allowed on the domain bounds before a point is rejected.
const DOMAIN_SLACK: f64 = 1e-12;

impl OrderParameterPoint {
    pub fn new(phi_a: f64, phi_b: f64, a: f64) -> Result<Self> {
        let p = Self { phi_a, phi_b, a };
        p.validate()?;
        Ok(p)
    }

    /// The `Z₀` specialization `a = 0, φ_A = 0, φ_B = φ`.
    pub fn z0(phi: f64) -> Self {
        Self {
            phi_a: 0.0,
            phi_b: phi,
            a: 0.0,
        }
    }

    pub fn b(&self) -> f64 {
        1.0 - self.a
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.a) {
            return Err(Error::Domain(format!(
                "subregion fraction a={} outside [0, 1]",
                self.a
            )));
        }
        if !(self.phi_a.abs() <= self.a + DOMAIN_SLACK) {
            return Err(Error::Domain(format!(
                "|phi_a|={} exceeds a={}",
                self.phi_a.abs(),
                self.a
            )));
        }
        if !(self.phi_b.abs() <= self.b() + DOMAIN_SLACK) {
            return Err(Error::Domain(format!(
                "|phi_b|={} exceeds b={}",
                self.phi_b.abs(),
                self.b()
            )));
        }
        Ok(())
    }
}

/// Energy, entropy and free-energy densities at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyTerms {
    pub energy: f64,
    pub entropy: f64,
    pub free_energy: f64,
}

impl FreeEnergyTerms {
    fn new(energy: f64, entropy: f64) -> Self {
        Self {
            energy,
            entropy,
            free_energy: energy - entropy,
        }
    }
}

/// One tabulated landscape entry.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LandscapeEntry {
    pub point: OrderParameterPoint,
    pub terms: FreeEnergyTerms,
}

/// A tabulated free-energy surface with its located minima.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FreeEnergyLandscape {
    pub grid: Vec<LandscapeEntry>,
    pub minima: Vec<LandscapeEntry>,
    pub global_minimum: LandscapeEntry,
}
