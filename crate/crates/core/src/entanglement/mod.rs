//! Exact finite-`N` entanglement diagnostics on materialized state vectors.

mod density;
mod ipr;
mod levels;
mod mp;
mod sector;

pub use density::{
    entanglement_spectrum, reduced_density_matrix, renyi2_entropy, renyi_entropy, state_spectrum,
    swap_renyi2, von_neumann_entropy, SWAP_MAX_SPINS,
};
pub use ipr::{dq_bound_check, ipr_fractal_dimension, DqBound, IprResult};
pub use levels::{
    goe_surrogate, level_spacing_ratios, poisson_reference, windowed_mean_reduced_ratio,
    GoeSurrogate, Histogram, LevelStatistics, WindowedRatio, POISSON_MEAN_REDUCED_RATIO,
    RATIO_BIN_WIDTH,
};
pub use mp::{
    marchenko_pastur_density, marchenko_pastur_on_edges, marchenko_pastur_reference,
    MarchenkoPastur,
};
pub use sector::{sector_project, sector_spectrum, SectorBlocks};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Eigenvalues at or below this are treated as exact zeros.
pub const EIGEN_CUTOFF: f64 = 1e-12;

/// Sites of subregion `A` as a bit mask over the `N` spins (bit `j` is site `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubregionMask {
    n: usize,
    bits: u64,
}

impl SubregionMask {
    /// Requires `1 ≤ |A| ≤ N − 1`.
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(Error::InvalidParameters(format!("mask over {n} spins")));
        }
        if bits >> n != 0 {
            return Err(Error::InvalidParameters(format!(
                "mask {bits:#b} has bits beyond {n} spins"
            )));
        }
        let size = bits.count_ones() as usize;
        if size == 0 || size == n {
            return Err(Error::InvalidParameters(format!(
                "subregion must be nonempty and proper, got |A|={size} of N={n}"
            )));
        }
        Ok(Self { n, bits })
    }

    /// The first `size` sites.
    pub fn contiguous(n: usize, size: usize) -> Result<Self> {
        let bits = if size >= 64 {
            u64::MAX
        } else {
            (1u64 << size) - 1
        };
        Self::new(n, bits)
    }

    pub fn from_sites(n: usize, sites: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &s in sites {
            if s >= n {
                return Err(Error::InvalidParameters(format!(
                    "site {s} out of range for N={n}"
                )));
            }
            bits |= 1 << s;
        }
        Self::new(n, bits)
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn size(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn complement(&self) -> Self {
        Self {
            n: self.n,
            bits: !self.bits & ((1u64 << self.n) - 1),
        }
    }

    /// Splits a full configuration index into `(i_A, i_B)`, each packing the
    /// subregion's bits in ascending site order.
    pub fn split(&self, index: u64) -> (usize, usize) {
        (
            extract_bits(index, self.bits),
            extract_bits(index, !self.bits & ((1u64 << self.n) - 1)),
        )
    }
}

fn extract_bits(x: u64, mut mask: u64) -> usize {
    let mut out = 0usize;
    let mut k = 0;
    while mask != 0 {
        let low = mask.trailing_zeros();
        out |= (((x >> low) & 1) as usize) << k;
        k += 1;
        mask &= mask - 1;
    }
    out
}

/// Descending reduced-density-matrix eigenvalues of a normalized state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementSpectrum {
    pub xi: Vec<f64>,
    /// `−log ξ_k` for the leading `ξ_k > EIGEN_CUTOFF` (a prefix of `xi`).
    pub epsilon: Vec<f64>,
    /// Spin-flip sector (`±1`) of each `xi` entry, when resolved.
    pub sector: Option<Vec<i8>>,
}

impl EntanglementSpectrum {
    /// Sorts descending, clips tiny negatives and fills `epsilon`.
    pub(crate) fn from_eigenvalues(mut pairs: Vec<(f64, i8)>, labelled: bool) -> Self {
        pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
        let xi: Vec<f64> = pairs.iter().map(|p| p.0.max(0.0)).collect();
        let epsilon = xi
            .iter()
            .take_while(|&&x| x > EIGEN_CUTOFF)
            .map(|x| -x.ln())
            .collect();
        Self {
            xi,
            epsilon,
            sector: labelled.then(|| pairs.iter().map(|p| p.1).collect()),
        }
    }

    /// Number of eigenvalues above `threshold`.
    pub fn rank(&self, threshold: f64) -> usize {
        self.xi.iter().filter(|&&x| x > threshold).count()
    }

    pub fn trace(&self) -> f64 {
        self.xi.iter().sum()
    }
}
