//! Deterministic derivation of per-stream seeds.
//!
//! Every randomized routine in this crate owns an explicit seeded stream.
//! Parallel trials derive their stream seed as `derive(seed, trial_index)`,
//! so any subset of trials is reproducible independently of execution order
//! or worker count. Random codebooks derive per-codeword seeds the same way.

/// Mixes a base seed with a stream index into an independent-looking seed.
///
/// This is the splitmix64 finalizer applied to `seed ^ index * phi`; it is a
/// fixed function of its inputs and never changes between runs or platforms.
#[must_use]
pub fn derive(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
