use proptest::prelude::*;
use rbment::entanglement::{
    dq_bound_check, reduced_density_matrix, renyi2_entropy, renyi_entropy, sector_spectrum,
    state_spectrum, swap_renyi2, von_neumann_entropy, SubregionMask,
};
use rbment::rbm::{build_state, config_from_index, log_amplitude, sample_weights};
use rbment::statmech::{
    limit_page_curve, s2_estimate, z0_free_energy, z1_free_energy, ModelParams, OrderParameterPoint,
};
use rbment::{RbmParams, StateVector};

fn state(n: usize, m: usize, u: f64, v: f64, seed: u64) -> StateVector {
    let w = sample_weights(&RbmParams::new(n, m, u, v).unwrap(), seed).unwrap();
    build_state(&w).unwrap()
}

fn small_ensemble() -> impl Strategy<Value = (usize, usize, f64, f64, u64)> {
    (4usize..=9).prop_flat_map(|n| {
        (
            Just(n),
            1usize..=n + 2,
            0.0..1.5f64,
            0.1..5.0f64,
            any::<u64>(),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn weights_are_a_pure_function_of_seed((n, m, u, v, seed) in small_ensemble()) {
        let p = RbmParams::new(n, m, u, v).unwrap();
        let a = sample_weights(&p, seed).unwrap();
        let b = sample_weights(&p, seed).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn spin_flip_symmetry_is_exact((n, m, u, v, seed) in small_ensemble(), idx in any::<u64>()) {
        let w = sample_weights(&RbmParams::new(n, m, u, v).unwrap(), seed).unwrap();
        let s = config_from_index(n, idx % (1 << n));
        let flipped: Vec<i8> = s.iter().map(|x| -x).collect();
        let a = log_amplitude(&w, &s).unwrap();
        let b = log_amplitude(&w, &flipped).unwrap();
        prop_assert_eq!(a.log_magnitude().to_bits(), b.log_magnitude().to_bits());
        prop_assert_eq!(a.value(), b.value());
    }

    #[test]
    fn rank_bound((n, m, u, v, seed) in small_ensemble(), size in 1usize..8) {
        let size = size.min(n - 1);
        let psi = state(n, m, u, v, seed);
        let sp = state_spectrum(&psi, &SubregionMask::contiguous(n, size).unwrap()).unwrap();
        let cap = 1usize << m.min(size).min(n - size);
        prop_assert!(sp.xi.iter().filter(|&&x| x > 1e-10).count() <= cap);
    }

    #[test]
    fn complement_symmetry((n, m, u, v, seed) in small_ensemble(), bits in any::<u64>()) {
        let psi = state(n, m, u, v, seed);
        let sites: Vec<usize> = (0..n).filter(|j| bits >> j & 1 == 1).collect();
        prop_assume!(!sites.is_empty() && sites.len() < n);
        let mask = SubregionMask::from_sites(n, &sites).unwrap();
        let a = renyi2_entropy(&state_spectrum(&psi, &mask).unwrap());
        let b = renyi2_entropy(&state_spectrum(&psi, &mask.complement()).unwrap());
        prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
    }

    #[test]
    fn swap_matches_eigen((n, m, u, v, seed) in small_ensemble(), size in 1usize..8) {
        let mask = SubregionMask::contiguous(n, size.min(n - 1)).unwrap();
        let psi = state(n, m, u, v, seed);
        let eigen = renyi2_entropy(&state_spectrum(&psi, &mask).unwrap());
        prop_assert!((swap_renyi2(&psi, &mask).unwrap() - eigen).abs() < 1e-10);
    }

    #[test]
    fn sectors_merge_to_full_spectrum((n, m, u, v, seed) in small_ensemble(), size in 1usize..8) {
        let mask = SubregionMask::contiguous(n, size.min(n - 1)).unwrap();
        let psi = state(n, m, u, v, seed);
        let rho = reduced_density_matrix(&psi, &mask).unwrap();
        let full = rbment::entanglement::entanglement_spectrum(&rho).unwrap();
        let merged = sector_spectrum(&rho, &mask).unwrap();
        prop_assert_eq!(full.xi.len(), merged.xi.len());
        for (x, y) in full.xi.iter().zip(&merged.xi) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn dq_bound_and_entropy_ordering((n, m, u, v, seed) in small_ensemble(), size in 1usize..8) {
        let mask = SubregionMask::contiguous(n, size.min(n - 1)).unwrap();
        let psi = state(n, m, u, v, seed);
        for q in 2..=4 {
            let b = dq_bound_check(&psi, &mask, q).unwrap();
            prop_assert!(b.holds(1e-12), "q={} {:?}", q, b);
        }
        let sp = state_spectrum(&psi, &mask).unwrap();
        let svn = von_neumann_entropy(&sp);
        for q in [1.5, 2.0, 3.0, 4.0] {
            prop_assert!(svn >= renyi_entropy(&sp, q) - 1e-12);
        }
    }

    #[test]
    fn z1_reduces_to_z0(u in 0.0..2.0f64, v in 0.05..8.0f64, lambda in 0.05..3.0f64, phi in -1.0..1.0f64) {
        let p = ModelParams::new(u, v, lambda).unwrap();
        let z1 = z1_free_energy(&OrderParameterPoint::new(0.0, phi, 0.0).unwrap(), &p).unwrap();
        let z0 = z0_free_energy(phi, &p).unwrap();
        prop_assert!((z1.free_energy - z0.free_energy).abs() < 1e-12);
        let neg = z0_free_energy(-phi, &p).unwrap();
        prop_assert!((neg.free_energy - z0.free_energy).abs() < 1e-12);
    }

    #[test]
    fn z1_exchange_symmetry(
        u in 0.0..2.0f64, v in 0.05..8.0f64, lambda in 0.05..3.0f64,
        a in 0.0..1.0f64, x in -1.0..1.0f64, y in -1.0..1.0f64,
    ) {
        let p = ModelParams::new(u, v, lambda).unwrap();
        let (pa, pb) = (x * a, y * (1.0 - a));
        let f = z1_free_energy(&OrderParameterPoint::new(pa, pb, a).unwrap(), &p).unwrap();
        let g = z1_free_energy(&OrderParameterPoint::new(pb, pa, 1.0 - a).unwrap(), &p).unwrap();
        prop_assert!((f.free_energy - g.free_energy).abs() < 1e-12);
    }

    #[test]
    fn limit_page_curve_obeys_rank_bound(lambda in 0.01..1.7f64) {
        let curve = limit_page_curve(lambda, 41).unwrap();
        for pt in curve.points {
            let cap = pt.a.min(1.0 - pt.a).min(lambda) * std::f64::consts::LN_2;
            prop_assert!(pt.entropy_density <= cap + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn s2_estimate_complement_symmetry(u in 0.0..1.0f64, v in 0.5..6.0f64, lambda in 0.1..2.0f64, a in 0.05..0.45f64) {
        let p = ModelParams::new(u, v, lambda).unwrap();
        let x = s2_estimate(a, &p).unwrap().value;
        let y = s2_estimate(1.0 - a, &p).unwrap().value;
        prop_assert!((x - y).abs() < 1e-9, "{} vs {}", x, y);
    }
}
