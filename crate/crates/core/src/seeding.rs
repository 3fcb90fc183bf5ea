//! Deterministic seed derivation.
//!
//! Replications, generators, splits and model initializations each get their
//! own RNG stream derived from one master seed. Streams are decorrelated
//! with a SplitMix64-style integer hash rather than naive addition.

/// Derives an independent seed for `stream` from `master`.
pub fn derive_seed(master: u64, stream: u64) -> u64 {
    // Golden-gamma multiply separates consecutive stream ids; the SplitMix64
    // finalizer mixes the result.
    let mut z = master ^ stream
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(0x632B_E59B_D9B4_E019);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
