//! Deterministic seed derivation.
//!
//! All randomness in the crate flows from explicit `u64` seeds through
//! ChaCha8. Derived seeds are produced by a fixed FNV-1a/SplitMix64 chain
//! so that results are reproducible across platforms, toolchains, and
//! thread counts — no dependence on `std` hashers, which are allowed to
//! change between releases.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// FNV-1a over a byte slice.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = FNV_OFFSET;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(FNV_PRIME);
    }
    h
}

/// SplitMix64 finalizer; decorrelates structured inputs.
pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mix a master seed with a sequence of string tags and integer lanes.
///
/// The canonical way to derive independent random streams: the same
/// `(seed, tags, lanes)` triple always yields the same value, different
/// triples yield decorrelated values.
pub fn derive(seed: u64, tags: &[&str], lanes: &[u64]) -> u64 {
    let mut h = fnv1a(&seed.to_le_bytes());
    for t in tags {
        h ^= fnv1a(t.as_bytes());
        h = splitmix64(h);
    }
    for &l in lanes {
        h ^= fnv1a(&l.to_le_bytes());
        h = splitmix64(h);
    }
    h
}

/// ChaCha8 stream for a derived seed.
pub fn rng(seed: u64, tags: &[&str], lanes: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(seed, tags, lanes))
}
