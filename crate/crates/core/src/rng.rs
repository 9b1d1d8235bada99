//! Seeding discipline and Gaussian sampling.
//!
//! All randomness goes through [`SampleRng`] (ChaCha8 seeded from a `u64`)
//! and standard normals come from the Box–Muller transform, so a given seed
//! produces the same weights on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

pub type SampleRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-sample seed derived from the master seed, the parameter-point index
/// and the sample index.
pub fn sample_seed(master: u64, point: u64, sample: u64) -> u64 {
    mix64(mix64(mix64(master) ^ point) ^ sample.rotate_left(32))
}

/// A pair of independent standard normals (Box–Muller).
pub fn standard_normal_pair<R: Rng + ?Sized>(rng: &mut R) -> (f64, f64) {
    // 1 - U keeps the radius argument in (0, 1].
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    let r = (-2.0 * u1.ln()).sqrt();
    let (s, c) = (TAU * u2).sin_cos();
    (r * c, r * s)
}
