//! Encoders and decoders.
//!
//! Two code families:
//!
//! * [`RandomCodebook`] — `2^ceil(nR)` codewords of i.i.d. Bernoulli(1/2)
//!   bits, regenerated on demand from a seed. Decoding searches for the
//!   unique codeword that the surviving fragments cover: exact substring
//!   cover for the noiseless channel, typical cover for the noisy one.
//!   Short fragments are discarded first (below `log2 n` bits noiseless,
//!   below `log2(n)/(1-H(p))` bits noisy).
//! * [`IndexedCodeLayout`] — the constructive scheme for deterministic
//!   equal-length tearing: each fragment starts with its position index,
//!   so the decoder just sorts by index and concatenates payloads.
//!
//! A decode that finds zero or several covering codewords is a failure;
//! any competing codeword is an error event, so ambiguity is never resolved
//! by guessing.

mod cover;

pub use cover::{Alignment, TYPICALITY_FLOOR, cover_exact, cover_typical, typicality_check};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capacity::binary_entropy;
use crate::channel::{Fragment, TornOutput, random_bits};
use crate::error::{Error, Result};
use crate::seeding;

/// Desk-scale guard: random codebooks larger than this are refused.
pub const MAX_RANDOM_CODEBOOK: u64 = 1 << 20;

/// Random codebook of `2^ceil(n R)` length-`n` codewords.
///
/// Codewords are not stored; codeword `i` is regenerated from
/// `derive(seed, i)`, so the codebook is fully reproducible from its seed.
#[derive(Debug, Clone, Copy)]
pub struct RandomCodebook {
    n: usize,
    rate: f64,
    seed: u64,
    size: u64,
}

impl RandomCodebook {
    pub fn new(n: usize, rate: f64, seed: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::parameter("block length must be positive".to_string()));
        }
        if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
            return Err(Error::parameter(format!(
                "rate must lie in [0, 1] bits/symbol, got {rate}"
            )));
        }
        let message_bits = (n as f64 * rate).ceil() as u32;
        if message_bits >= 63 {
            return Err(Error::Infeasible(format!(
                "codebook of 2^{message_bits} codewords exceeds the desk-scale \
                 guard of {MAX_RANDOM_CODEBOOK}"
            )));
        }
        let size = 1u64 << message_bits;
        if size > MAX_RANDOM_CODEBOOK {
            return Err(Error::Infeasible(format!(
                "codebook of {size} codewords exceeds the desk-scale guard \
                 of {MAX_RANDOM_CODEBOOK}"
            )));
        }
        Ok(RandomCodebook { n, rate, seed, size })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Number of codewords `M = 2^ceil(n R)`.
    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The `message`-th codeword, regenerated from the codebook seed.
    pub fn codeword(&self, message: u64) -> Result<Vec<u8>> {
        if message >= self.size {
            return Err(Error::parameter(format!(
                "message {message} out of range for codebook of size {}",
                self.size
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seeding::derive(self.seed, message));
        Ok(random_bits(self.n, &mut rng))
    }
}

/// Layout of the index-prefixed constructive code.
///
/// The block is cut into `n / frag_len` equal fragments; each carries a
/// `ceil(log2(n/frag_len))`-bit position index followed by payload bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IndexedCodeLayout {
    pub n: usize,
    pub frag_len: usize,
    pub index_bits: usize,
    pub payload_bits: usize,
}

impl IndexedCodeLayout {
    pub fn new(n: usize, frag_len: usize) -> Result<Self> {
        if n == 0 || frag_len == 0 || !n.is_multiple_of(frag_len) {
            return Err(Error::parameter(format!(
                "fragment length {frag_len} must divide the block length {n}"
            )));
        }
        let pieces = n / frag_len;
        let index_bits = if pieces <= 1 { 0 } else { (pieces as f64).log2().ceil() as usize };
        if index_bits >= frag_len {
            return Err(Error::parameter(format!(
                "{index_bits} index bits leave no payload in fragments of \
                 {frag_len} bits"
            )));
        }
        Ok(IndexedCodeLayout { n, frag_len, index_bits, payload_bits: frag_len - index_bits })
    }

    /// Total message bits per block.
    pub fn message_bits(&self) -> usize {
        (self.n / self.frag_len) * self.payload_bits
    }

    /// Achieved rate `payload_bits / frag_len = 1 - index_bits / frag_len`.
    pub fn rate(&self) -> f64 {
        self.payload_bits as f64 / self.frag_len as f64
    }

    /// Lays message bits out as `index || payload` per fragment.
    pub fn encode(&self, message: &[u8]) -> Result<Vec<u8>> {
        if message.len() != self.message_bits() {
            return Err(Error::parameter(format!(
                "message must have exactly {} bits, got {}",
                self.message_bits(),
                message.len()
            )));
        }
        let pieces = self.n / self.frag_len;
        let mut out = Vec::with_capacity(self.n);
        for (i, payload) in message.chunks(self.payload_bits).enumerate() {
            debug_assert!(i < pieces);
            out.extend(index_to_bits(i as u64, self.index_bits));
            out.extend_from_slice(payload);
        }
        Ok(out)
    }

    /// Sorts fragments by index prefix and concatenates payloads.
    ///
    /// Intended for outputs of the noiseless fixed-length channel without
    /// deletions; anything else surfaces as a decode failure, not an error.
    pub fn decode(&self, output: &TornOutput) -> std::result::Result<Vec<u8>, IndexedDecodeFailure> {
        let pieces = self.n / self.frag_len;
        let mut payloads: Vec<Option<&[u8]>> = vec![None; pieces];
        for frag in output.fragments() {
            if frag.len() != self.frag_len {
                return Err(IndexedDecodeFailure::BadFragmentLength {
                    expected: self.frag_len,
                    got: frag.len(),
                });
            }
            let idx = bits_to_index(&frag.bits()[..self.index_bits]) as usize;
            if idx >= pieces {
                return Err(IndexedDecodeFailure::IndexOutOfRange { index: idx });
            }
            if payloads[idx].is_some() {
                return Err(IndexedDecodeFailure::DuplicateIndex { index: idx });
            }
            payloads[idx] = Some(&frag.bits()[self.index_bits..]);
        }
        let mut message = Vec::with_capacity(self.message_bits());
        for (idx, payload) in payloads.iter().enumerate() {
            match payload {
                Some(bits) => message.extend_from_slice(bits),
                None => return Err(IndexedDecodeFailure::MissingIndex { index: idx }),
            }
        }
        Ok(message)
    }
}

/// Why an indexed decode failed. These are experiment outcomes (counted as
/// decoding errors), not crate errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexedDecodeFailure {
    MissingIndex { index: usize },
    DuplicateIndex { index: usize },
    IndexOutOfRange { index: usize },
    BadFragmentLength { expected: usize, got: usize },
}

/// Big-endian index bits of fixed width.
pub fn index_to_bits(index: u64, width: usize) -> Vec<u8> {
    (0..width).rev().map(|b| ((index >> b) & 1) as u8).collect()
}

/// Inverse of [`index_to_bits`].
pub fn bits_to_index(bits: &[u8]) -> u64 {
    bits.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
}

/// Either code family, with its rate metadata.
#[derive(Debug, Clone, Copy)]
pub enum Codebook {
    Random(RandomCodebook),
    Indexed(IndexedCodeLayout),
}

impl Codebook {
    pub fn n(&self) -> usize {
        match self {
            Codebook::Random(cb) => cb.n(),
            Codebook::Indexed(layout) => layout.n,
        }
    }

    pub fn rate(&self) -> f64 {
        match self {
            Codebook::Random(cb) => cb.rate(),
            Codebook::Indexed(layout) => layout.rate(),
        }
    }

    /// log2 of the codebook size (number of message bits).
    pub fn log2_size(&self) -> u32 {
        match self {
            Codebook::Random(cb) => cb.len().trailing_zeros(),
            Codebook::Indexed(layout) => layout.message_bits() as u32,
        }
    }
}

/// Result of a cover-search decode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeReport {
    /// Decoded message index, or `None` on failure (zero or >= 2 candidates).
    pub message: Option<u64>,
    /// Number of codewords covered by the filtered fragments.
    pub candidates: u64,
    /// Positions covered in the decoded codeword (0 unless decode succeeded).
    pub covered: usize,
}

/// Shortest fragment length the noiseless decoder keeps: `ceil(log2 n)`.
pub fn noiseless_filter_len(n: usize) -> usize {
    (n as f64).log2().ceil() as usize
}

/// Shortest fragment length the noisy decoder keeps:
/// `ceil(log2(n) / (1 - H(p)))`, the optimal discard threshold.
pub fn noisy_filter_len(n: usize, p: f64) -> Result<usize> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::parameter(format!(
            "crossover probability must lie in [0, 0.5), got {p}"
        )));
    }
    Ok(((n as f64).log2() / (1.0 - binary_entropy(p))).ceil() as usize)
}

fn filtered_fragments(output: &TornOutput, min_len: usize) -> Vec<Fragment> {
    output.fragments().iter().filter(|f| f.len() >= min_len).cloned().collect()
}

fn cover_decode<F>(codebook: &RandomCodebook, covers: F) -> DecodeReport
where
    F: Fn(&[u8]) -> Option<Alignment>,
{
    let mut candidates = 0u64;
    let mut best: Option<(u64, usize)> = None;
    for message in 0..codebook.len() {
        let codeword = codebook
            .codeword(message)
            .expect("message indices below len() are always valid");
        if let Some(alignment) = covers(&codeword) {
            candidates += 1;
            best = Some((message, alignment.covered));
        }
    }
    match (candidates, best) {
        (1, Some((message, covered))) => {
            DecodeReport { message: Some(message), candidates, covered }
        }
        _ => DecodeReport { message: None, candidates, covered: 0 },
    }
}

/// Substring-cover decoding for the noiseless channel.
///
/// Fragments shorter than `log2 n` are discarded; the decoder declares the
/// unique codeword containing all remaining fragments as disjoint
/// substrings, and fails on zero or multiple candidates.
pub fn decode_noiseless(codebook: &RandomCodebook, output: &TornOutput) -> Result<DecodeReport> {
    if output.n() != codebook.n() {
        return Err(Error::parameter(format!(
            "output block length {} does not match codebook length {}",
            output.n(),
            codebook.n()
        )));
    }
    let keep = filtered_fragments(output, noiseless_filter_len(codebook.n()));
    Ok(cover_decode(codebook, |cw| cover_exact(cw, &keep)))
}

/// Typical-cover decoding for the noisy channel.
///
/// Fragments shorter than `log2(n)/(1-H(p))` are discarded; the decoder
/// declares the unique codeword typically covered by the remainder.
pub fn decode_noisy(
    codebook: &RandomCodebook,
    output: &TornOutput,
    p: f64,
    eps_prime: f64,
) -> Result<DecodeReport> {
    if output.n() != codebook.n() {
        return Err(Error::parameter(format!(
            "output block length {} does not match codebook length {}",
            output.n(),
            codebook.n()
        )));
    }
    if eps_prime < 0.0 {
        return Err(Error::parameter(format!(
            "typicality slack must be >= 0, got {eps_prime}"
        )));
    }
    let keep = filtered_fragments(output, noisy_filter_len(codebook.n(), p)?);
    Ok(cover_decode(codebook, |cw| cover_typical(cw, &keep, p, eps_prime)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{ChannelParams, parse_bits, transmit};
    use crate::distributions::{DeletionPolicy, FragmentLengthModel};

    #[test]
    fn random_codebook_is_reproducible() {
        let cb = RandomCodebook::new(64, 0.25, 99).unwrap();
        assert_eq!(cb.len(), 1 << 16);
        assert_eq!(cb.codeword(3).unwrap(), cb.codeword(3).unwrap());
        assert_ne!(cb.codeword(3).unwrap(), cb.codeword(4).unwrap());
        assert!(cb.codeword(cb.len()).is_err());
    }

    #[test]
    fn oversized_codebook_is_refused() {
        let err = RandomCodebook::new(64, 0.5, 0).unwrap_err();
        assert!(matches!(err, Error::Infeasible(_)), "2^32 codewords must be refused");
        assert!(RandomCodebook::new(40, 0.5, 0).is_ok(), "2^20 is the boundary");
    }

    #[test]
    fn indexed_layout_arithmetic() {
        let layout = IndexedCodeLayout::new(1024, 64).unwrap();
        assert_eq!(layout.index_bits, 4);
        assert_eq!(layout.payload_bits, 60);
        assert!((layout.rate() - 60.0 / 64.0).abs() < 1e-15);
        assert_eq!(layout.message_bits(), 960);

        // n = 8, l = 4: two pieces, one index bit, three payload bits.
        let small = IndexedCodeLayout::new(8, 4).unwrap();
        assert_eq!(small.index_bits, 1);
        assert_eq!(small.payload_bits, 3);
        assert_eq!(small.message_bits(), 6);

        assert!(IndexedCodeLayout::new(10, 4).is_err(), "4 does not divide 10");
        assert!(IndexedCodeLayout::new(1024, 2).is_err(), "index eats the fragment");
    }

    #[test]
    fn indexed_rate_gap_to_alpha_shrinks() {
        // The per-fragment index cost ceil(log2(n/l))/l differs from
        // alpha_n = log2(n)/l by log2(l)/l, which shrinks as the fragments
        // grow along the n grid.
        let grid = [(1usize << 10, 16usize), (1 << 14, 32), (1 << 18, 64)];
        let mut last_gap = f64::INFINITY;
        for (n, l) in grid {
            let layout = IndexedCodeLayout::new(n, l).unwrap();
            assert!((layout.rate() - (1.0 - layout.index_bits as f64 / l as f64)).abs() < 1e-15);
            let alpha_n = (n as f64).log2() / l as f64;
            let gap = (layout.index_bits as f64 / l as f64 - alpha_n).abs();
            assert!(gap < last_gap, "gap {gap} at n={n}, l={l}");
            last_gap = gap;
        }
    }

    #[test]
    fn indexed_round_trip_exhaustive_small() {
        let layout = IndexedCodeLayout::new(8, 4).unwrap();
        let params = ChannelParams {
            n: 8,
            model: FragmentLengthModel::Fixed { mean_len: 4.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        for message in 0u64..(1 << 6) {
            let bits = index_to_bits(message, 6);
            let x = layout.encode(&bits).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(message);
            let out = transmit(&x, &params, &mut rng).unwrap();
            assert_eq!(layout.decode(&out).unwrap(), bits, "message {message}");
        }
    }

    #[test]
    fn indexed_decode_failures() {
        let layout = IndexedCodeLayout::new(8, 4).unwrap();
        let x = layout.encode(&parse_bits("011010").unwrap()).unwrap();
        let frag0 = Fragment::new(x[..4].to_vec());
        let frag1 = Fragment::new(x[4..].to_vec());

        let missing = TornOutput::new(8, vec![frag0.clone()]);
        assert!(matches!(
            layout.decode(&missing),
            Err(IndexedDecodeFailure::MissingIndex { .. })
        ));

        let duplicated = TornOutput::new(8, vec![frag0.clone(), frag0.clone()]);
        assert!(matches!(
            layout.decode(&duplicated),
            Err(IndexedDecodeFailure::DuplicateIndex { .. })
        ));

        let ok = TornOutput::new(8, vec![frag0, frag1]);
        assert!(layout.decode(&ok).is_ok());
    }

    #[test]
    fn single_codeword_always_decodes() {
        // Rate 0 gives the one-codeword codebook; any valid output of its
        // own codeword decodes to message 0.
        let cb = RandomCodebook::new(32, 0.0, 5).unwrap();
        assert_eq!(cb.len(), 1);
        let x = cb.codeword(0).unwrap();
        let params = ChannelParams {
            n: 32,
            model: FragmentLengthModel::Fixed { mean_len: 16.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let out = transmit(&x, &params, &mut rng).unwrap();
        let report = decode_noiseless(&cb, &out).unwrap();
        assert_eq!(report.message, Some(0));
        assert_eq!(report.covered, 32);
    }

    #[test]
    fn all_short_fragments_mean_ambiguity() {
        // Every fragment below log2(n) is discarded; all codewords then
        // cover vacuously, so the decode fails on ambiguity.
        let cb = RandomCodebook::new(16, 0.25, 5).unwrap();
        let out = TornOutput::new(
            16,
            vec![Fragment::new(vec![0, 1]), Fragment::new(vec![1, 0])],
        );
        let report = decode_noiseless(&cb, &out).unwrap();
        assert_eq!(report.message, None);
        assert_eq!(report.candidates, cb.len());
    }

    #[test]
    fn decode_report_json_shape() {
        let hit = DecodeReport { message: Some(3), candidates: 1, covered: 16 };
        assert_eq!(
            serde_json::to_string(&hit).unwrap(),
            r#"{"message":3,"candidates":1,"covered":16}"#
        );
        let miss = DecodeReport { message: None, candidates: 2, covered: 0 };
        assert_eq!(
            serde_json::to_string(&miss).unwrap(),
            r#"{"message":null,"candidates":2,"covered":0}"#
        );
    }

    #[test]
    fn filter_thresholds() {
        assert_eq!(noiseless_filter_len(1024), 10);
        assert_eq!(noiseless_filter_len(24), 5);
        assert_eq!(noisy_filter_len(1024, 0.0).unwrap(), 10);
        // ceil(4 / (1 - H(0.02))) = ceil(4.659) = 5.
        assert_eq!(noisy_filter_len(16, 0.02).unwrap(), 5);
        assert!(noisy_filter_len(16, 0.5).is_err());
    }

    #[test]
    fn single_codeword_noisy_recovery_rate() {
        // One unbroken 2048-bit fragment concentrates the mismatch rate
        // tightly around p, so the band eps' * p = 0.015 accepts the true
        // alignment nearly always.
        let n = 2048;
        let (p, eps_prime) = (0.05, 0.3);
        let cb = RandomCodebook::new(n, 0.0, 33).unwrap();
        let params = ChannelParams {
            n,
            model: FragmentLengthModel::Fixed { mean_len: n as f64 },
            policy: DeletionPolicy::Zero,
            p,
        };
        let trials = 100u64;
        let mut recovered = 0;
        for t in 0..trials {
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(crate::seeding::derive(5, t));
            let x = cb.codeword(0).unwrap();
            let out = transmit(&x, &params, &mut rng).unwrap();
            if decode_noisy(&cb, &out, p, eps_prime).unwrap().message == Some(0) {
                recovered += 1;
            }
        }
        assert!(recovered as f64 / trials as f64 >= 0.95, "recovered {recovered}/{trials}");
    }

    #[test]
    fn decode_is_order_blind() {
        let cb = RandomCodebook::new(16, 0.25, 11).unwrap();
        let x = cb.codeword(2).unwrap();
        let params = ChannelParams {
            n: 16,
            model: FragmentLengthModel::Fixed { mean_len: 8.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        let out = transmit(&x, &params, &mut rng).unwrap();
        let mut reversed: Vec<Fragment> = out.fragments().to_vec();
        reversed.reverse();
        let again = TornOutput::new(16, reversed);
        assert_eq!(decode_noiseless(&cb, &out).unwrap(), decode_noiseless(&cb, &again).unwrap());
    }
}
