//! Level-spacing ratios of the entanglement Hamiltonian and reference laws.

use super::EntanglementSpectrum;
use crate::error::{Error, Result};
use crate::numerics::mean_and_stderr;
use crate::rng::{rng_from_seed, standard_normal_pair};
use nalgebra::{Matrix3, SymmetricEigen};
use serde::{Deserialize, Serialize};

/// Histogram bin width for `p(r̃)`.
pub const RATIO_BIN_WIDTH: f64 = 0.02;

/// `⟨r̃⟩ = 2 log 2 − 1` for uncorrelated (Poisson) levels.
pub const POISSON_MEAN_REDUCED_RATIO: f64 = 2.0 * std::f64::consts::LN_2 - 1.0;

/// Normalized density histogram on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    /// Bin centers.
    pub centers: Vec<f64>,
    pub density: Vec<f64>,
}

impl Histogram {
    pub fn unit_interval(values: &[f64], bin_width: f64) -> Self {
        let bins = (1.0 / bin_width).round() as usize;
        let mut counts = vec![0usize; bins];
        for &v in values {
            let k = ((v / bin_width) as usize).min(bins - 1);
            counts[k] += 1;
        }
        let total = values.len().max(1) as f64;
        Self {
            bin_width,
            centers: (0..bins).map(|k| (k as f64 + 0.5) * bin_width).collect(),
            density: counts
                .iter()
                .map(|&c| c as f64 / (total * bin_width))
                .collect(),
        }
    }

    pub fn integral(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.bin_width
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelStatistics {
    /// `r_n = δ_n / δ_{n−1}` over ascending `ε`.
    pub ratios: Vec<f64>,
    /// `r̃_n = min(r_n, 1/r_n)`.
    pub reduced: Vec<f64>,
    /// `ε` of the level shared by the two spacings of each ratio.
    pub positions: Vec<f64>,
    pub histogram: Histogram,
}

/// Ratios over the `ε` levels of one sector (`None` uses every level).
/// Only eigenvalues above the cutoff enter, since `ε` is undefined for zeros.
pub fn level_spacing_ratios(
    spectrum: &EntanglementSpectrum,
    sector: Option<i8>,
) -> Result<LevelStatistics> {
    let mut eps: Vec<f64> = match (sector, &spectrum.sector) {
        (None, _) => spectrum.epsilon.clone(),
        (Some(s), Some(labels)) => spectrum
            .epsilon
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == s)
            .map(|(&e, _)| e)
            .collect(),
        (Some(_), None) => {
            return Err(Error::InvalidParameters(
                "spectrum carries no sector labels".into(),
            ))
        }
    };
    if eps.len() < 3 {
        return Err(Error::TooFewLevels {
            needed: 3,
            found: eps.len(),
        });
    }
    eps.sort_by(f64::total_cmp);
    Ok(ratios_from_levels(&eps))
}

fn ratios_from_levels(eps: &[f64]) -> LevelStatistics {
    let mut ratios = Vec::with_capacity(eps.len());
    let mut reduced = Vec::with_capacity(eps.len());
    let mut positions = Vec::with_capacity(eps.len());
    for n in 1..eps.len() - 1 {
        let prev = eps[n] - eps[n - 1];
        let next = eps[n + 1] - eps[n];
        if prev == 0.0 && next == 0.0 {
            continue;
        }
        let r = next / prev;
        ratios.push(r);
        reduced.push(if r > 1.0 { 1.0 / r } else { r });
        positions.push(eps[n]);
    }
    let histogram = Histogram::unit_interval(&reduced, RATIO_BIN_WIDTH);
    LevelStatistics {
        ratios,
        reduced,
        positions,
        histogram,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowedRatio {
    pub center: f64,
    pub mean: f64,
    pub stderr: f64,
    pub count: usize,
}

/// Mean `r̃` over ratios whose level lies in `(center − Δ, center + Δ)`,
/// pooled over all given statistics.
pub fn windowed_mean_reduced_ratio(
    stats: &[LevelStatistics],
    center: f64,
    half_width: f64,
) -> Result<WindowedRatio> {
    let vals: Vec<f64> = stats
        .iter()
        .flat_map(|s| s.positions.iter().zip(&s.reduced))
        .filter(|(&e, _)| (e - center).abs() < half_width)
        .map(|(_, &r)| r)
        .collect();
    if vals.is_empty() {
        return Err(Error::EmptyWindow { center });
    }
    let (mean, stderr) = mean_and_stderr(&vals);
    Ok(WindowedRatio {
        center,
        mean,
        stderr,
        count: vals.len(),
    })
}

/// Bin-averaged Poisson law `p(r̃) = 2/(1 + r̃)²` on the histogram bins.
pub fn poisson_reference(bin_width: f64) -> Histogram {
    let bins = (1.0 / bin_width).round() as usize;
    let cdf = |x: f64| 2.0 - 2.0 / (1.0 + x);
    Histogram {
        bin_width,
        centers: (0..bins).map(|k| (k as f64 + 0.5) * bin_width).collect(),
        density: (0..bins)
            .map(|k| {
                let lo = k as f64 * bin_width;
                (cdf(lo + bin_width) - cdf(lo)) / bin_width
            })
            .collect(),
    }
}

/// Sampled `r̃` law of 3×3 Gaussian-orthogonal-ensemble matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoeSurrogate {
    pub histogram: Histogram,
    pub mean: f64,
    /// Eigenvalue triples, ascending.
    pub spectra: Vec<[f64; 3]>,
}

pub fn goe_surrogate(samples: usize, seed: u64) -> GoeSurrogate {
    let mut rng = rng_from_seed(seed);
    let mut reduced = Vec::with_capacity(samples);
    let mut spectra = Vec::with_capacity(samples);
    let diag_scale = 1.0;
    let off_scale = std::f64::consts::FRAC_1_SQRT_2;
    for _ in 0..samples {
        let (a, b) = standard_normal_pair(&mut rng);
        let (c, d) = standard_normal_pair(&mut rng);
        let (e, f) = standard_normal_pair(&mut rng);
        let m = Matrix3::new(
            a * diag_scale,
            d * off_scale,
            e * off_scale,
            d * off_scale,
            b * diag_scale,
            f * off_scale,
            e * off_scale,
            f * off_scale,
            c * diag_scale,
        );
        let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        spectra.push([ev[0], ev[1], ev[2]]);
        let r = (ev[2] - ev[1]) / (ev[1] - ev[0]);
        reduced.push(if r > 1.0 { 1.0 / r } else { r });
    }
    let mean = reduced.iter().sum::<f64>() / reduced.len().max(1) as f64;
    GoeSurrogate {
        histogram: Histogram::unit_interval(&reduced, RATIO_BIN_WIDTH),
        mean,
        spectra,
    }
}
