//! Deterministic random streams and seed derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The per-run pseudorandom stream. ChaCha8 output is specified
/// independently of platform and word size, so equal seeds give equal draws.
pub type RngStream = ChaCha8Rng;

pub fn stream(seed: u64) -> RngStream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finaliser.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a over a byte string. Used to fingerprint configurations.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
    const PRIME: u64 = 0x0000_0100_0000_01b3;
    bytes.iter().fold(OFFSET, |h, &b| (h ^ u64::from(b)).wrapping_mul(PRIME))
}

/// Seed for run `index` of the configuration with `fingerprint`.
///
/// Depends only on its three inputs, so adding runs or reordering
/// configurations never changes the seed of an existing run.
pub fn derive_seed(master_seed: u64, fingerprint: u64, index: u64) -> u64 {
    mix64(mix64(mix64(master_seed) ^ fingerprint) ^ index)
}
