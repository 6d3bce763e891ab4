//! Non-overlapping substring cover search.
//!
//! A fragment multiset covers a codeword when every fragment can be placed
//! on a distinct, pairwise-disjoint interval of the codeword and the placed
//! segment is accepted by a per-placement predicate: exact bit equality for
//! the noiseless decoder, a mismatch-rate band for the noisy one. The search
//! is exact backtracking: fragments longest first, candidate starts left to
//! right, with failed (depth, occupied-intervals) states memoized so
//! repeated identical sub-searches prune immediately.

use std::collections::HashSet;

use crate::channel::Fragment;
use crate::error::{Error, Result};

/// Mismatch-rate bands are relative to `max(p, TYPICALITY_FLOOR)` so the
/// band does not collapse to zero width at p = 0.
pub const TYPICALITY_FLOOR: f64 = 0.01;

/// A disjoint placement of every fragment onto a codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alignment {
    /// `(fragment index, start position)` pairs, one per input fragment.
    pub placements: Vec<(usize, usize)>,
    /// Total number of codeword positions covered.
    pub covered: usize,
}

/// Accepts a `(codeword segment, fragment)` pair iff the empirical mismatch
/// fraction lies within `eps_prime * max(p, 0.01)` of `p`.
///
/// For equal-length Bernoulli(1/2)/BSC pairs the mismatch rate is the
/// sufficient statistic of joint typicality, so this band test stands in for
/// the full joint-type comparison.
pub fn typicality_check(seg_x: &[u8], seg_y: &[u8], p: f64, eps_prime: f64) -> Result<bool> {
    if seg_x.len() != seg_y.len() || seg_x.is_empty() {
        return Err(Error::parameter(format!(
            "typicality check needs equal nonzero lengths, got {} and {}",
            seg_x.len(),
            seg_y.len()
        )));
    }
    if eps_prime < 0.0 {
        return Err(Error::parameter(format!(
            "typicality slack must be >= 0, got {eps_prime}"
        )));
    }
    Ok(mismatch_within_band(seg_x, seg_y, p, eps_prime))
}

fn mismatch_within_band(seg_x: &[u8], seg_y: &[u8], p: f64, eps_prime: f64) -> bool {
    let mismatches = seg_x.iter().zip(seg_y).filter(|(a, b)| a != b).count();
    let rate = mismatches as f64 / seg_x.len() as f64;
    (rate - p).abs() <= eps_prime * p.max(TYPICALITY_FLOOR)
}

/// Places all fragments as disjoint exact substrings of `codeword`, if
/// possible. An empty fragment set is vacuously covered.
pub fn cover_exact(codeword: &[u8], fragments: &[Fragment]) -> Option<Alignment> {
    cover_search(codeword, fragments, |segment, frag| segment == frag.bits())
}

/// Like [`cover_exact`], but a placement is admissible when the aligned pair
/// passes the typicality band for `BSC(p)` with slack `eps_prime`.
///
/// Callers guard the noise domain (`p < 0.5`) upstream.
pub fn cover_typical(
    codeword: &[u8],
    fragments: &[Fragment],
    p: f64,
    eps_prime: f64,
) -> Option<Alignment> {
    debug_assert!((0.0..0.5).contains(&p));
    debug_assert!(eps_prime >= 0.0);
    cover_search(codeword, fragments, |segment, frag| {
        mismatch_within_band(segment, frag.bits(), p, eps_prime)
    })
}

fn cover_search<F>(codeword: &[u8], fragments: &[Fragment], accepts: F) -> Option<Alignment>
where
    F: Fn(&[u8], &Fragment) -> bool,
{
    let n = codeword.len();
    let total: usize = fragments.iter().map(Fragment::len).sum();
    if total > n {
        return None;
    }
    if fragments.is_empty() {
        return Some(Alignment { placements: Vec::new(), covered: 0 });
    }

    // Longest first; ties broken by bits so identical fragments are adjacent
    // and can be deduplicated by forcing strictly increasing starts.
    let mut order: Vec<usize> = (0..fragments.len()).collect();
    order.sort_unstable_by(|&i, &j| {
        fragments[j]
            .len()
            .cmp(&fragments[i].len())
            .then_with(|| fragments[i].bits().cmp(fragments[j].bits()))
            .then_with(|| i.cmp(&j))
    });

    // Candidate start positions for each fragment in search order.
    let starts: Vec<Vec<usize>> = order
        .iter()
        .map(|&idx| {
            let frag = &fragments[idx];
            if frag.len() > n {
                return Vec::new();
            }
            (0..=n - frag.len())
                .filter(|&s| accepts(&codeword[s..s + frag.len()], frag))
                .collect()
        })
        .collect();
    if starts.iter().any(Vec::is_empty) {
        return None;
    }

    let mut search = Search {
        fragments,
        order: &order,
        starts: &starts,
        occupied: Vec::with_capacity(fragments.len()),
        chosen: Vec::with_capacity(fragments.len()),
        failed: HashSet::new(),
    };
    if !search.descend(0) {
        return None;
    }
    let mut placements: Vec<(usize, usize)> =
        order.iter().copied().zip(search.chosen.iter().copied()).collect();
    placements.sort_unstable();
    Some(Alignment { placements, covered: total })
}

/// (depth, min_start, occupied intervals) of an exhausted subtree.
type FailedState = (usize, usize, Vec<(usize, usize)>);

struct Search<'a> {
    fragments: &'a [Fragment],
    order: &'a [usize],
    starts: &'a [Vec<usize>],
    /// Sorted disjoint half-open intervals currently occupied.
    occupied: Vec<(usize, usize)>,
    /// Start chosen at each depth so far.
    chosen: Vec<usize>,
    /// Memoized failed states; see the key construction in `descend`.
    failed: HashSet<FailedState>,
}

impl Search<'_> {
    fn descend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let frag = &self.fragments[self.order[depth]];
        let len = frag.len();
        // Identical fragment as the previous depth: only strictly later
        // starts, since any solution can order equal fragments that way.
        let min_start = if depth > 0 {
            let prev = &self.fragments[self.order[depth - 1]];
            if prev.bits() == frag.bits() { self.chosen[depth - 1] + 1 } else { 0 }
        } else {
            0
        };
        // The continuation is a pure function of (depth, min_start, occupied),
        // so that triple is the memoization key.
        let key = (depth, min_start, self.occupied.clone());
        if self.failed.contains(&key) {
            return false;
        }
        for &start in self.starts[depth].iter().filter(|&&s| s >= min_start) {
            if !self.is_free(start, start + len) {
                continue;
            }
            let slot = self.insert_interval(start, start + len);
            self.chosen.push(start);
            if self.descend(depth + 1) {
                return true;
            }
            self.chosen.pop();
            self.occupied.remove(slot);
        }
        self.failed.insert(key);
        false
    }

    fn is_free(&self, lo: usize, hi: usize) -> bool {
        // occupied is sorted and short (K <= ~12): linear scan.
        self.occupied.iter().all(|&(a, b)| hi <= a || b <= lo)
    }

    fn insert_interval(&mut self, lo: usize, hi: usize) -> usize {
        let slot = self.occupied.partition_point(|&(a, _)| a < lo);
        self.occupied.insert(slot, (lo, hi));
        slot
    }
}
