//! Seeded RNG streams and child-seed derivation.
//!
//! Every stochastic component takes an explicit RNG so that a run is a pure
//! function of its seed. Trials derive pairwise-distinct child seeds from a
//! master seed via a splittable counter scheme, which makes trial results
//! independent of execution order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The simulator's RNG. ChaCha8 is seedable, portable, and its stream is
/// stable across platforms, unlike `StdRng`.
pub type SimRng = ChaCha8Rng;

/// Build a simulator RNG from a 64-bit seed.
pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer (Steele et al.). Used as a mixing function only.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Derive the child seed for trial `index` under `master`.
///
/// Counter-based: child(i) depends only on (master, i), so trials can run in
/// any order or in parallel and still see identical streams.
pub fn child_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5851_f42d_4c95_7f2d)))
}

/// FNV-1a 64-bit digest, hex-encoded. Stable across releases (unlike
/// `DefaultHasher`), used to stamp traces with a config fingerprint.
pub fn fnv1a64_hex(bytes: &[u8]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{h:016x}")
}
