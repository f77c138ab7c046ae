//! Seed derivation for reproducible parallel work.

use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

/// SplitMix64 output function; a bijective 64-bit mixer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a path of indices into a base seed. Different paths give
/// unrelated streams regardless of the order work is scheduled in.
pub fn derive_seed(base: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix64(base), |acc, &p| mix64(acc ^ mix64(p)))
}

pub fn stream(base: u64, path: &[u64]) -> SplitMix64 {
    SplitMix64::seed_from_u64(derive_seed(base, path))
}
