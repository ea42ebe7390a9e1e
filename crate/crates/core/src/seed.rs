//! Deterministic seed derivation.
//!
//! Every random stream in a run is derived from the single user seed by
//! mixing in a task key (pair name, feature percent, fold index, ...) with
//! SplitMix64. The derived seed depends only on the key, never on the order
//! in which tasks are scheduled.

/// One SplitMix64 output step.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `key` into `seed`.
pub fn derive(seed: u64, key: u64) -> u64 {
    splitmix64(seed ^ splitmix64(key))
}

/// FNV-1a over the bytes of `s`; stable across platforms and releases.
pub fn hash_str(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ u64::from(b)).wrapping_mul(0x0000_0100_0000_01B3)
    })
}
