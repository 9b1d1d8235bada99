//! Partial traces, spectra and Rényi / von Neumann entropies.

use super::{EntanglementSpectrum, SubregionMask, EIGEN_CUTOFF};
use crate::error::{Error, Result};
use crate::numerics::CompensatedSum;
use crate::rbm::StateVector;
use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Largest `N` accepted by the doubled-copy swap contraction.
pub const SWAP_MAX_SPINS: usize = 14;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-8;

fn check_mask(state: &StateVector, mask: &SubregionMask) -> Result<()> {
    if mask.n_spins() != state.n_spins() {
        return Err(Error::DimensionMismatch {
            expected: state.n_spins(),
            got: mask.n_spins(),
        });
    }
    Ok(())
}

/// `Ψ̃` reshaped to a `2^|A| × 2^|B|` matrix.
fn psi_matrix<T: nalgebra::Scalar + Copy>(
    amps: &[Complex64],
    mask: &SubregionMask,
    zero: T,
    map: impl Fn(Complex64) -> T,
) -> DMatrix<T> {
    let da = 1usize << mask.size();
    let db = 1usize << (mask.n_spins() - mask.size());
    let mut m = DMatrix::<T>::from_element(da, db, zero);
    for (idx, &a) in amps.iter().enumerate() {
        let (ia, ib) = mask.split(idx as u64);
        m[(ia, ib)] = map(a);
    }
    m
}

/// `ρ_A = Tr_B |Ψ̃⟩⟨Ψ̃|` of the normalized state.
pub fn reduced_density_matrix(
    state: &StateVector,
    mask: &SubregionMask,
) -> Result<DMatrix<Complex64>> {
    check_mask(state, mask)?;
    let psi = state.normalized()?;
    let m = psi_matrix(psi.amplitudes(), mask, Complex64::new(0.0, 0.0), |a| a);
    Ok(&m * m.adjoint())
}

fn hermitian_deviation(rho: &DMatrix<Complex64>) -> f64 {
    let n = rho.nrows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((rho[(i, j)] - rho[(j, i)].conj()).norm());
        }
    }
    dev
}

fn real_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

fn complex_eigenvalues(m: DMatrix<Complex64>) -> Vec<f64> {
    SymmetricEigen::new(m).eigenvalues.iter().copied().collect()
}

/// Square, Hermitian and unit trace, within tolerance.
pub(super) fn check_density(rho: &DMatrix<Complex64>) -> Result<()> {
    if rho.nrows() != rho.ncols() {
        return Err(Error::DimensionMismatch {
            expected: rho.nrows(),
            got: rho.ncols(),
        });
    }
    let dev = hermitian_deviation(rho);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let tr: f64 = rho.diagonal().iter().map(|z| z.re).sum();
    if (tr - 1.0).abs() > TRACE_TOL {
        return Err(Error::Domain(format!(
            "density matrix trace {tr} differs from 1"
        )));
    }
    Ok(())
}

/// Full Hermitian eigendecomposition of a unit-trace density matrix.
pub fn entanglement_spectrum(rho: &DMatrix<Complex64>) -> Result<EntanglementSpectrum> {
    check_density(rho)?;
    let vals = if rho.iter().all(|z| z.im == 0.0) {
        real_eigenvalues(rho.map(|z| z.re))
    } else {
        complex_eigenvalues(rho.clone())
    };
    Ok(EntanglementSpectrum::from_eigenvalues(
        vals.into_iter().map(|x| (x, 0)).collect(),
        false,
    ))
}

/// Nonzero spectrum of `ρ_A`, computed on whichever side of the cut is smaller.
/// The returned `xi` has `2^min(|A|, |B|)` entries.
pub fn state_spectrum(state: &StateVector, mask: &SubregionMask) -> Result<EntanglementSpectrum> {
    check_mask(state, mask)?;
    let small = if mask.size() * 2 <= mask.n_spins() {
        *mask
    } else {
        mask.complement()
    };
    let psi = state.normalized()?;
    let vals = if psi.is_real() {
        let m = psi_matrix(psi.amplitudes(), &small, 0.0, |a| a.re);
        real_eigenvalues(&m * m.transpose())
    } else {
        let m = psi_matrix(psi.amplitudes(), &small, Complex64::new(0.0, 0.0), |a| a);
        complex_eigenvalues(&m * m.adjoint())
    };
    Ok(EntanglementSpectrum::from_eigenvalues(
        vals.into_iter().map(|x| (x, 0)).collect(),
        false,
    ))
}

/// `S_q = log(Σ ξ^q) / (1 − q)` for `q > 0, q ≠ 1`; `q = 1` gives von Neumann.
pub fn renyi_entropy(spectrum: &EntanglementSpectrum, q: f64) -> f64 {
    if (q - 1.0).abs() < 1e-15 {
        return von_neumann_entropy(spectrum);
    }
    let s: CompensatedSum = spectrum
        .xi
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x.powf(q))
        .collect();
    (s.value().ln() / (1.0 - q)).max(0.0)
}

/// `−log Σ ξ²`.
pub fn renyi2_entropy(spectrum: &EntanglementSpectrum) -> f64 {
    let s: CompensatedSum = spectrum.xi.iter().map(|&x| x * x).collect();
    (-s.value().ln()).max(0.0)
}

/// `−Σ ξ log ξ` over `ξ > EIGEN_CUTOFF`.
pub fn von_neumann_entropy(spectrum: &EntanglementSpectrum) -> f64 {
    let s: CompensatedSum = spectrum
        .xi
        .iter()
        .filter(|&&x| x > EIGEN_CUTOFF)
        .map(|&x| -x * x.ln())
        .collect();
    s.value().max(0.0)
}

/// `−log(Z₁/Z₀)` by direct contraction of two copies of the state with the
/// subregion swap, without forming `ρ_A`. Cost `4^N`.
pub fn swap_renyi2(state: &StateVector, mask: &SubregionMask) -> Result<f64> {
    check_mask(state, mask)?;
    let n = state.n_spins();
    if n > SWAP_MAX_SPINS {
        return Err(Error::Capacity {
            n,
            cap: SWAP_MAX_SPINS,
        });
    }
    let psi = state.normalized()?;
    let a = psi.amplitudes();
    let in_a = mask.bits() as usize;
    let in_b = !in_a & (a.len() - 1);
    let mut z1 = CompensatedSum::new();
    for s1 in 0..a.len() {
        let c1 = a[s1].conj();
        for s2 in 0..a.len() {
            let t1 = (s2 & in_a) | (s1 & in_b);
            let t2 = (s1 & in_a) | (s2 & in_b);
            z1.add((c1 * a[s2].conj() * a[t1] * a[t2]).re);
        }
    }
    let z0: f64 = a
        .iter()
        .map(|x| x.norm_sqr())
        .collect::<CompensatedSum>()
        .value();
    Ok(-(z1.value() / (z0 * z0)).ln())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rbm::{build_state, sample_weights, RbmParams};
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn bell() -> StateVector {
        // (|↑↑⟩ + |↓↓⟩)/√2 → indices 0 and 3
        StateVector::from_amplitudes(vec![c(FRAC_1_SQRT_2), c(0.0), c(0.0), c(FRAC_1_SQRT_2)])
            .unwrap()
    }

    fn product() -> StateVector {
        let a = [0.6, 0.8];
        let b = [Complex64::new(0.0, 1.0), c(0.0)];
        let mut amps = vec![c(0.0); 4];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                amps[i | j << 1] = y * *x;
            }
        }
        StateVector::from_amplitudes(amps).unwrap()
    }

    #[test]
    fn bell_state_values() {
        let m = SubregionMask::new(2, 1).unwrap();
        let rho = reduced_density_matrix(&bell(), &m).unwrap();
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15 && rho[(0, 1)].norm() < 1e-15);
        let sp = entanglement_spectrum(&rho).unwrap();
        assert!((sp.xi[0] - 0.5).abs() < 1e-14 && (sp.xi[1] - 0.5).abs() < 1e-14);
        assert!((sp.epsilon[0] - LN_2).abs() < 1e-13);
        assert!((renyi2_entropy(&sp) - LN_2).abs() < 1e-13);
        assert!((von_neumann_entropy(&sp) - LN_2).abs() < 1e-13);
        assert!((swap_renyi2(&bell(), &m).unwrap() - LN_2).abs() < 1e-13);
    }

    #[test]
    fn product_state_is_pure() {
        let m = SubregionMask::new(2, 1).unwrap();
        let sp = entanglement_spectrum(&reduced_density_matrix(&product(), &m).unwrap()).unwrap();
        assert_eq!(sp.rank(1e-10), 1);
        assert!(renyi2_entropy(&sp).abs() < 1e-13);
        assert!(swap_renyi2(&product(), &m).unwrap().abs() < 1e-13);
    }

    #[test]
    fn zero_weight_state_is_unentangled() {
        let p = RbmParams::new(6, 3, 0.0, 0.0).unwrap();
        let s = build_state(&sample_weights(&p, 1).unwrap()).unwrap();
        let m = SubregionMask::from_sites(6, &[0, 2, 5]).unwrap();
        let sp = state_spectrum(&s, &m).unwrap();
        assert_eq!(sp.rank(1e-10), 1);
        assert!(renyi2_entropy(&sp) < 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut rho = DMatrix::<Complex64>::identity(2, 2) * c(0.5);
        rho[(0, 1)] = c(0.1);
        assert!(matches!(
            entanglement_spectrum(&rho),
            Err(Error::NotHermitian(_))
        ));
    }

    /// Roots of the characteristic polynomial (Faddeev–LeVerrier
    /// coefficients, sign-change bracketing and bisection).
    fn char_poly_roots(a: &DMatrix<Complex64>) -> Vec<f64> {
        let n = a.nrows();
        let mut coeffs = vec![c(1.0)];
        let mut mk = DMatrix::<Complex64>::zeros(n, n);
        let id = DMatrix::<Complex64>::identity(n, n);
        for k in 1..=n {
            mk = a * (&mk + &id * *coeffs.last().unwrap());
            let ck = -mk.trace() / c(k as f64);
            coeffs.push(ck);
        }
        let p = |x: f64| coeffs.iter().fold(0.0, |acc, z| acc * x + z.re);
        let bound = 1.0 + a.iter().map(|z| z.norm()).sum::<f64>();
        let steps = 200_000;
        let mut roots = Vec::new();
        let mut prev = -bound;
        for i in 1..=steps {
            let x = -bound + 2.0 * bound * i as f64 / steps as f64;
            if p(prev) * p(x) <= 0.0 {
                let (mut lo, mut hi) = (prev, x);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if p(lo) * p(mid) <= 0.0 {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            prev = x;
        }
        roots.sort_by(|x, y| y.total_cmp(x));
        roots
    }

    #[test]
    fn spectrum_matches_characteristic_polynomial() {
        use crate::rng::{rng_from_seed, standard_normal_pair};
        let mut rng = rng_from_seed(99);
        for _ in 0..5 {
            let x = DMatrix::<Complex64>::from_fn(4, 4, |_, _| {
                let (re, im) = standard_normal_pair(&mut rng);
                Complex64::new(re, im)
            });
            let mut rho = &x * x.adjoint();
            let tr = rho.trace();
            rho /= tr;
            let sp = entanglement_spectrum(&rho).unwrap();
            let roots = char_poly_roots(&rho);
            assert_eq!(roots.len(), 4);
            for (e, r) in sp.xi.iter().zip(&roots) {
                assert!((e - r).abs() < 1e-8, "{e} vs {r}");
            }
        }
    }

    #[test]
    fn swap_matches_eigen_route_on_samples() {
        let p = RbmParams::new(8, 6, 0.5, 1.5).unwrap();
        let masks = [
            SubregionMask::contiguous(8, 4).unwrap(),
            SubregionMask::from_sites(8, &[0, 3, 6]).unwrap(),
            SubregionMask::from_sites(8, &[1, 2, 4, 5, 7]).unwrap(),
        ];
        for seed in 0..10 {
            let s = build_state(&sample_weights(&p, seed).unwrap()).unwrap();
            for m in &masks {
                let full = entanglement_spectrum(&reduced_density_matrix(&s, m).unwrap()).unwrap();
                let fast = state_spectrum(&s, m).unwrap();
                let sw = swap_renyi2(&s, m).unwrap();
                assert!((renyi2_entropy(&full) - sw).abs() < 1e-10);
                assert!((renyi2_entropy(&fast) - sw).abs() < 1e-10);
                assert!((full.trace() - 1.0).abs() < 1e-10);
                assert!(von_neumann_entropy(&full) >= renyi2_entropy(&full) - 1e-12);
            }
        }
    }

    #[test]
    fn complement_symmetry_and_rank_bound() {
        let p = RbmParams::new(10, 3, 0.0, 4.0).unwrap();
        for seed in 0..5 {
            let s = build_state(&sample_weights(&p, seed).unwrap()).unwrap();
            let m = SubregionMask::contiguous(10, 5).unwrap();
            let sa = renyi2_entropy(&state_spectrum(&s, &m).unwrap());
            let sb = renyi2_entropy(&state_spectrum(&s, &m.complement()).unwrap());
            assert!((sa - sb).abs() < 1e-9);
            let sp = entanglement_spectrum(&reduced_density_matrix(&s, &m).unwrap()).unwrap();
            assert!(sp.rank(1e-10) <= 8);
        }
    }

    #[test]
    fn swap_capacity() {
        let s = StateVector::from_amplitudes(vec![c(1.0); 1 << 15]).unwrap();
        let m = SubregionMask::contiguous(15, 3).unwrap();
        assert!(matches!(swap_renyi2(&s, &m), Err(Error::Capacity { .. })));
    }
}
