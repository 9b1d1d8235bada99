//! Block diagonalization of `ρ_A` under the subregion spin flip `Σ_A`.

use super::density::check_density;
use super::{EntanglementSpectrum, SubregionMask};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

const OFF_BLOCK_TOL: f64 = 1e-10;

/// The `Σ_A = +1` and `Σ_A = −1` diagonal blocks in the basis
/// `(|s⟩ ± |s̄⟩)/√2`, with `s` the smaller index of each flip pair.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlocks {
    pub plus: DMatrix<Complex64>,
    pub minus: DMatrix<Complex64>,
    /// Frobenius norm of the discarded off-diagonal block.
    pub off_block_norm: f64,
}

pub fn sector_project(rho: &DMatrix<Complex64>, mask: &SubregionMask) -> Result<SectorBlocks> {
    let d = 1usize << mask.size();
    if rho.nrows() != d || rho.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: rho.nrows(),
        });
    }
    let flip = d - 1;
    let half = d / 2;
    // Representatives are the indices whose top bit is clear.
    let mut plus = DMatrix::from_element(half, half, Complex64::new(0.0, 0.0));
    let mut minus = plus.clone();
    let mut off = 0.0;
    for r in 0..half {
        let rb = r ^ flip;
        for c in 0..half {
            let cb = c ^ flip;
            let (a, b, e, f) = (rho[(r, c)], rho[(r, cb)], rho[(rb, c)], rho[(rb, cb)]);
            plus[(r, c)] = (a + b + e + f) * 0.5;
            minus[(r, c)] = (a - b - e + f) * 0.5;
            off += ((a - b + e - f) * 0.5).norm_sqr();
        }
    }
    // ⟨+|ρ|−⟩ and ⟨−|ρ|+⟩ are Hermitian conjugates; count both.
    let off_block_norm = (2.0 * off).sqrt();
    if off_block_norm > OFF_BLOCK_TOL {
        return Err(Error::SymmetryViolation(off_block_norm));
    }
    Ok(SectorBlocks {
        plus,
        minus,
        off_block_norm,
    })
}

fn block_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    if m.iter().all(|z| z.im == 0.0) {
        SymmetricEigen::new(m.map(|z| z.re))
            .eigenvalues
            .iter()
            .copied()
            .collect()
    } else {
        SymmetricEigen::new(m.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }
}

/// Spectrum of `ρ_A` with per-eigenvalue `Σ_A` labels.
pub fn sector_spectrum(
    rho: &DMatrix<Complex64>,
    mask: &SubregionMask,
) -> Result<EntanglementSpectrum> {
    check_density(rho)?;
    let blocks = sector_project(rho, mask)?;
    let mut pairs: Vec<(f64, i8)> = block_eigenvalues(&blocks.plus)
        .into_iter()
        .map(|x| (x, 1))
        .collect();
    pairs.extend(
        block_eigenvalues(&blocks.minus)
            .into_iter()
            .map(|x| (x, -1)),
    );
    Ok(EntanglementSpectrum::from_eigenvalues(pairs, true))
}
