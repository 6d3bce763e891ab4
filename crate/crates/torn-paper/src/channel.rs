//! The physical channel: bit flips, tearing, fragment loss, shuffling.
//!
//! A transmission is the composition
//!
//! ```text
//! input -> BSC(p) -> tear into i.i.d.-length fragments -> delete each
//! fragment independently -> output the survivors as an unordered multiset
//! ```
//!
//! Noise is applied before tearing, so every fragment carries the noisy bits
//! of its interval. The deletion step is supported together with noise even
//! though the two are analyzed separately; the composition order is fixed
//! here as noise -> tear -> delete.
//!
//! [`TornOutput`] stores its fragments in a canonical order (length, then
//! bits) so multiset equality and hashing are cheap; consumers must not read
//! meaning into the order.

use std::fmt;

use rand::Rng;

use crate::distributions::{DeletionPolicy, FragmentLengthModel};
use crate::error::{Error, Result};

/// One contiguous piece of the (possibly noisy) input string.
///
/// Bits are stored one byte per bit, each 0 or 1; fragments are never empty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fragment {
    bits: Vec<u8>,
}

impl Fragment {
    pub fn new(bits: Vec<u8>) -> Self {
        debug_assert!(!bits.is_empty(), "fragments have length >= 1");
        debug_assert!(bits.iter().all(|&b| b <= 1));
        Fragment { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }
}

impl PartialOrd for Fragment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fragment {
    /// Canonical order: by length, then lexicographically by bits.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.bits.cmp(&other.bits))
    }
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_bits(&self.bits))
    }
}

/// Renders bits as an ASCII 0/1 string.
pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

/// Parses an ASCII 0/1 string into bits.
pub fn parse_bits(s: &str) -> Result<Vec<u8>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(0u8),
            '1' => Ok(1u8),
            other => Err(Error::parameter(format!("invalid bit character {other:?}"))),
        })
        .collect()
}

/// Draws `len` Bernoulli(1/2) bits.
pub fn random_bits<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<u8> {
    (0..len).map(|_| u8::from(rng.random::<bool>())).collect()
}

/// Channel parameters: block length, tearing model, loss policy, noise level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub n: usize,
    pub model: FragmentLengthModel,
    pub policy: DeletionPolicy,
    /// BSC crossover probability, in `[0, 0.5)`.
    pub p: f64,
}

impl ChannelParams {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::parameter(format!("block length must be >= 2, got {}", self.n)));
        }
        if !(0.0..0.5).contains(&self.p) {
            return Err(Error::parameter(format!(
                "crossover probability must lie in [0, 0.5), got {}",
                self.p
            )));
        }
        self.model.validate()?;
        self.policy.validate()
    }
}

/// Record of one tearing: every fragment length in order, and whether the
/// fragment survived the deletion step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TearTrace {
    pub lengths: Vec<usize>,
    pub kept: Vec<bool>,
}

impl TearTrace {
    /// Coverage statistic `(1/n) sum N_i 1{kept, N_i >= theta log2 n}`.
    pub fn coverage_stat(&self, n: usize, theta: f64) -> f64 {
        let cutoff = theta * (n as f64).log2();
        self.lengths
            .iter()
            .zip(&self.kept)
            .filter(|&(&len, &kept)| kept && len as f64 >= cutoff)
            .map(|(&len, _)| len as f64)
            .sum::<f64>()
            / n as f64
    }

    /// Alignment-count statistic `(log2 n / n) sum 1{kept, N_i >= theta log2 n}`.
    pub fn alignment_stat(&self, n: usize, theta: f64) -> f64 {
        let log_n = (n as f64).log2();
        let cutoff = theta * log_n;
        let count = self
            .lengths
            .iter()
            .zip(&self.kept)
            .filter(|&(&len, &kept)| kept && len as f64 >= cutoff)
            .count();
        log_n / n as f64 * count as f64
    }
}

/// The channel output: an unordered multiset of surviving fragments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TornOutput {
    n: usize,
    fragments: Vec<Fragment>,
}

impl TornOutput {
    /// Builds an output from fragments in any order; storage is canonical.
    pub fn new(n: usize, mut fragments: Vec<Fragment>) -> Self {
        fragments.sort_unstable();
        TornOutput { n, fragments }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Fragments in canonical order. The order carries no channel meaning.
    pub fn fragments(&self) -> &[Fragment] {
        &self.fragments
    }

    pub fn count(&self) -> usize {
        self.fragments.len()
    }

    /// Total number of surviving bits.
    pub fn total_len(&self) -> usize {
        self.fragments.iter().map(Fragment::len).sum()
    }

    /// Text form: header `n=<n> count=<k>`, then one bit string per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("n={} count={}\n", self.n, self.fragments.len());
        for frag in &self.fragments {
            out.push_str(&format_bits(frag.bits()));
            out.push('\n');
        }
        out
    }

    /// Parses the text form produced by [`TornOutput::to_text`].
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::parameter("empty torn-output text".to_string()))?;
        let mut n = None;
        let mut count = None;
        for field in header.split_whitespace() {
            if let Some(v) = field.strip_prefix("n=") {
                n = v.parse::<usize>().ok();
            } else if let Some(v) = field.strip_prefix("count=") {
                count = v.parse::<usize>().ok();
            }
        }
        let (n, count) = match (n, count) {
            (Some(n), Some(c)) => (n, c),
            _ => {
                return Err(Error::parameter(format!(
                    "malformed torn-output header: {header:?}"
                )));
            }
        };
        let mut fragments = Vec::with_capacity(count);
        for line in lines {
            if line.is_empty() {
                continue;
            }
            fragments.push(Fragment::new(parse_bits(line)?));
        }
        if fragments.len() != count {
            return Err(Error::parameter(format!(
                "torn-output header promised {count} fragments, found {}",
                fragments.len()
            )));
        }
        Ok(TornOutput::new(n, fragments))
    }
}

/// Flips each bit independently with probability `p`.
pub fn apply_bsc<R: Rng + ?Sized>(x: &[u8], p: f64, rng: &mut R) -> Vec<u8> {
    assert!((0.0..0.5).contains(&p), "crossover probability {p} outside [0, 0.5)");
    x.iter().map(|&b| if rng.random_bool(p) { b ^ 1 } else { b }).collect()
}

/// Samples i.i.d. fragment lengths until they cover `n` bits, truncating the
/// final draw so the lengths sum exactly to `n`. Zero-length draws (possible
/// under the Uniform model) are skipped.
pub fn sample_tear_lengths<R: Rng + ?Sized>(
    n: usize,
    model: &FragmentLengthModel,
    rng: &mut R,
) -> Vec<usize> {
    debug_assert!(n >= 1);
    let mut lengths = Vec::with_capacity(n / model.mean_len(n as u64).max(1.0) as usize + 1);
    let mut covered = 0usize;
    while covered < n {
        let drawn = model.sample_length(n as u64, rng) as usize;
        if drawn == 0 {
            continue;
        }
        let take = drawn.min(n - covered);
        lengths.push(take);
        covered += take;
    }
    lengths
}

/// Tears `x` into fragments; their in-order concatenation reconstructs `x`.
pub fn tear<R: Rng + ?Sized>(
    x: &[u8],
    model: &FragmentLengthModel,
    rng: &mut R,
) -> (Vec<Fragment>, TearTrace) {
    let lengths = sample_tear_lengths(x.len(), model, rng);
    let mut fragments = Vec::with_capacity(lengths.len());
    let mut pos = 0usize;
    for &len in &lengths {
        fragments.push(Fragment::new(x[pos..pos + len].to_vec()));
        pos += len;
    }
    let kept = vec![true; lengths.len()];
    (fragments, TearTrace { lengths, kept })
}

/// Deletes each fragment independently with probability `d(len)`.
///
/// Returns the survivors together with the per-fragment survival flags.
pub fn apply_deletions<R: Rng + ?Sized>(
    fragments: Vec<Fragment>,
    policy: &DeletionPolicy,
    n: usize,
    rng: &mut R,
) -> (Vec<Fragment>, Vec<bool>) {
    let kept: Vec<bool> = fragments
        .iter()
        .map(|f| !rng.random_bool(policy.deletion_prob(n as u64, f.len() as u64)))
        .collect();
    let survivors = fragments
        .into_iter()
        .zip(&kept)
        .filter_map(|(f, &keep)| keep.then_some(f))
        .collect();
    (survivors, kept)
}

/// Full channel: BSC, tear, delete, shuffle; also returns the tear trace.
///
/// The uniform shuffle is realized by the canonical multiset storage of
/// [`TornOutput`]; no observable behavior depends on fragment order.
pub fn transmit_traced<R: Rng + ?Sized>(
    x: &[u8],
    params: &ChannelParams,
    rng: &mut R,
) -> Result<(TornOutput, TearTrace)> {
    params.validate()?;
    if x.len() != params.n {
        return Err(Error::parameter(format!(
            "input length {} does not match block length {}",
            x.len(),
            params.n
        )));
    }
    let noisy = apply_bsc(x, params.p, rng);
    let (fragments, mut trace) = tear(&noisy, &params.model, rng);
    let (survivors, kept) = apply_deletions(fragments, &params.policy, params.n, rng);
    trace.kept = kept;
    Ok((TornOutput::new(params.n, survivors), trace))
}

/// Full channel, output only.
pub fn transmit<R: Rng + ?Sized>(
    x: &[u8],
    params: &ChannelParams,
    rng: &mut R,
) -> Result<TornOutput> {
    transmit_traced(x, params, rng).map(|(out, _)| out)
}
