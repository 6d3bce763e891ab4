//! Monte Carlo harness: decode error rates, concentration checks, sweeps.
//!
//! Trials are independent and indexed; trial `t` owns the stream seeded by
//! `seeding::derive(seed, t)`, so any report is bit-reproducible from
//! `(params, seed)` no matter how trials are scheduled. Per-trial results
//! are collected in trial order and reduced sequentially, which keeps
//! floating-point aggregation independent of the worker count. The worker
//! pool size is capped by the `TPL_THREADS` environment variable.

use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::capacity::{self, FiniteFa};
use crate::channel::{ChannelParams, TearTrace, random_bits, sample_tear_lengths, transmit_traced};
use crate::codec::{IndexedCodeLayout, RandomCodebook, decode_noiseless, decode_noisy};
use crate::distributions::FragmentLengthModel;
use crate::error::{Error, Result};
use crate::seeding;

/// Worker pool shared by all experiment entry points.
fn pool() -> &'static rayon::ThreadPool {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(threads) = std::env::var("TPL_THREADS")
            .ok()
            .and_then(|v| v.parse::<usize>().ok())
            .filter(|&k| k >= 1)
        {
            builder = builder.num_threads(threads);
        }
        builder.build().expect("worker pool construction cannot fail")
    })
}

/// Maps seeded trials in index order on the shared pool.
fn run_trials<T, F>(trials: u64, seed: u64, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync,
{
    pool().install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seeding::derive(seed, t));
                body(&mut rng)
            })
            .collect()
    })
}

/// Sample mean with its standard error (sample stdev / sqrt(trials)).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub stderr: f64,
}

impl Summary {
    fn from_samples(samples: &[f64]) -> Summary {
        let n = samples.len() as f64;
        if samples.is_empty() {
            return Summary { mean: 0.0, stderr: 0.0 };
        }
        let mean = samples.iter().sum::<f64>() / n;
        if samples.len() < 2 {
            return Summary { mean, stderr: 0.0 };
        }
        let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
        Summary { mean, stderr: (var / n).sqrt() }
    }
}

/// Aggregated outcome of a batch of trials.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentReport {
    pub trials: u64,
    /// Decoding errors, or band violations for concentration checks.
    pub errors: u64,
    pub error_rate: f64,
    /// Per-trial coverage statistic `(1/n) sum N_i 1{kept, N_i >= theta log2 n}`.
    #[serde(rename = "empirical_F")]
    pub empirical_f: Summary,
    /// Per-trial alignment count `(log2 n / n) sum 1{kept, N_i >= theta log2 n}`.
    #[serde(rename = "empirical_A_count")]
    pub empirical_a_count: Summary,
    /// Fraction of trials outside the stated concentration band, when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deviation_freq: Option<f64>,
    /// The analytic center of the band (F_n or A_n), when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<f64>,
}

/// One row of the inner/outer bound sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub inv_alpha: f64,
    pub p: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub gap: f64,
}

/// Which coding scheme an error-rate experiment exercises.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CodecSpec {
    /// Index-prefixed constructive code over fragments of `frag_len` bits.
    Indexed { frag_len: usize },
    /// Random codebook with substring-cover decoding.
    RandomNoiseless { rate: f64, codebook_seed: u64 },
    /// Random codebook with typical-cover decoding.
    RandomNoisy { rate: f64, codebook_seed: u64, eps_prime: f64 },
}

struct TrialStat {
    error: bool,
    coverage: f64,
    alignment: f64,
}

fn trial_stat(error: bool, trace: &TearTrace, params: &ChannelParams, theta: f64) -> TrialStat {
    TrialStat {
        error,
        coverage: trace.coverage_stat(params.n, theta),
        alignment: trace.alignment_stat(params.n, theta),
    }
}

fn reduce_error_trials(trials: u64, stats: Vec<TrialStat>) -> ExperimentReport {
    let errors = stats.iter().filter(|s| s.error).count() as u64;
    let coverage: Vec<f64> = stats.iter().map(|s| s.coverage).collect();
    let alignment: Vec<f64> = stats.iter().map(|s| s.alignment).collect();
    ExperimentReport {
        trials,
        errors,
        error_rate: errors as f64 / trials as f64,
        empirical_f: Summary::from_samples(&coverage),
        empirical_a_count: Summary::from_samples(&alignment),
        deviation_freq: None,
        reference: None,
    }
}

/// A codec spec resolved into ready-to-run state.
enum PreparedCodec {
    Indexed(IndexedCodeLayout),
    Noiseless(RandomCodebook),
    Noisy(RandomCodebook, f64),
}

impl PreparedCodec {
    fn build(params: &ChannelParams, codec: &CodecSpec) -> Result<(Self, f64)> {
        // Statistics are recorded at the decoder's own discard threshold.
        match *codec {
            CodecSpec::Indexed { frag_len } => {
                Ok((PreparedCodec::Indexed(IndexedCodeLayout::new(params.n, frag_len)?), 0.0))
            }
            CodecSpec::RandomNoiseless { rate, codebook_seed } => Ok((
                PreparedCodec::Noiseless(RandomCodebook::new(params.n, rate, codebook_seed)?),
                1.0,
            )),
            CodecSpec::RandomNoisy { rate, codebook_seed, eps_prime } => {
                if eps_prime < 0.0 {
                    return Err(Error::parameter(format!(
                        "typicality slack must be >= 0, got {eps_prime}"
                    )));
                }
                Ok((
                    PreparedCodec::Noisy(
                        RandomCodebook::new(params.n, rate, codebook_seed)?,
                        eps_prime,
                    ),
                    1.0 / (1.0 - capacity::binary_entropy(params.p)),
                ))
            }
        }
    }

    /// One full encode -> transmit -> decode round.
    fn trial(
        &self,
        params: &ChannelParams,
        theta: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<(TrialStat, crate::channel::TornOutput)> {
        match self {
            PreparedCodec::Indexed(layout) => {
                let message = random_bits(layout.message_bits(), rng);
                let x = layout.encode(&message)?;
                let (out, trace) = transmit_traced(&x, params, rng)?;
                let error = layout.decode(&out).ok().as_deref() != Some(&message[..]);
                Ok((trial_stat(error, &trace, params, theta), out))
            }
            PreparedCodec::Noiseless(codebook) => {
                let message = rng.random_range(0..codebook.len());
                let x = codebook.codeword(message)?;
                let (out, trace) = transmit_traced(&x, params, rng)?;
                let report = decode_noiseless(codebook, &out)?;
                Ok((trial_stat(report.message != Some(message), &trace, params, theta), out))
            }
            PreparedCodec::Noisy(codebook, eps_prime) => {
                let message = rng.random_range(0..codebook.len());
                let x = codebook.codeword(message)?;
                let (out, trace) = transmit_traced(&x, params, rng)?;
                let report = decode_noisy(codebook, &out, params.p, *eps_prime)?;
                Ok((trial_stat(report.message != Some(message), &trace, params, theta), out))
            }
        }
    }
}

/// Runs encode -> transmit -> decode over seeded trials and reports the
/// empirical error rate. A trial errs when the decoder fails or returns a
/// message different from the one drawn.
pub fn run_error_rate(
    params: &ChannelParams,
    codec: &CodecSpec,
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    params.validate()?;
    if trials == 0 {
        return Err(Error::parameter("at least one trial required".to_string()));
    }
    let (prepared, theta) = PreparedCodec::build(params, codec)?;
    let stats: Vec<TrialStat> =
        run_trials(trials, seed, |rng| prepared.trial(params, theta, rng).map(|(s, _)| s))?;
    Ok(reduce_error_trials(trials, stats))
}

/// Like [`run_error_rate`], but additionally hands every trial's channel
/// output to `sink` (in trial order). Runs sequentially; the per-trial seeds
/// make the statistics identical to the parallel path.
pub fn run_error_rate_dumping(
    params: &ChannelParams,
    codec: &CodecSpec,
    trials: u64,
    seed: u64,
    sink: &mut dyn FnMut(u64, &crate::channel::TornOutput) -> Result<()>,
) -> Result<ExperimentReport> {
    params.validate()?;
    if trials == 0 {
        return Err(Error::parameter("at least one trial required".to_string()));
    }
    let (prepared, theta) = PreparedCodec::build(params, codec)?;
    let mut stats = Vec::with_capacity(trials as usize);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seeding::derive(seed, t));
        let (stat, out) = prepared.trial(params, theta, &mut rng)?;
        sink(t, &out)?;
        stats.push(stat);
    }
    Ok(reduce_error_trials(trials, stats))
}

/// Samples a tear + deletion pass without materializing any bits; the
/// concentration statistics depend only on lengths and survival flags.
fn sample_trace(params: &ChannelParams, rng: &mut ChaCha8Rng) -> TearTrace {
    let lengths = sample_tear_lengths(params.n, &params.model, rng);
    let kept: Vec<bool> = lengths
        .iter()
        .map(|&len| !rng.random_bool(params.policy.deletion_prob(params.n as u64, len as u64)))
        .collect();
    TearTrace { lengths, kept }
}

fn concentration_report(
    params: &ChannelParams,
    trials: u64,
    reference: f64,
    band: f64,
    theta: f64,
    seed: u64,
    use_coverage: bool,
) -> Result<ExperimentReport> {
    let traces: Vec<TearTrace> =
        run_trials(trials, seed, |rng| Ok(sample_trace(params, rng)))?;
    let coverage: Vec<f64> = traces.iter().map(|t| t.coverage_stat(params.n, theta)).collect();
    let alignment: Vec<f64> = traces.iter().map(|t| t.alignment_stat(params.n, theta)).collect();
    let watched = if use_coverage { &coverage } else { &alignment };
    let errors = watched.iter().filter(|&&x| (x - reference).abs() > band).count() as u64;
    Ok(ExperimentReport {
        trials,
        errors,
        error_rate: errors as f64 / trials as f64,
        empirical_f: Summary::from_samples(&coverage),
        empirical_a_count: Summary::from_samples(&alignment),
        deviation_freq: Some(errors as f64 / trials as f64),
        reference: Some(reference),
    })
}

/// Empirical check of the coverage concentration: the per-trial statistic
/// must stay within `eps * F_n` of the exact finite-n expectation `F_n`.
pub fn verify_coverage_concentration(
    params: &ChannelParams,
    theta: f64,
    trials: u64,
    eps: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    params.validate()?;
    check_concentration_args(trials, eps)?;
    let fa = capacity::finite_n_fa(&params.model, &params.policy, params.n as u64, theta)?;
    concentration_report(params, trials, fa.f_n, eps * fa.f_n, theta, seed, true)
}

/// Empirical check of the alignment-count concentration against `A_n`.
pub fn verify_alignment_concentration(
    params: &ChannelParams,
    theta: f64,
    trials: u64,
    eps: f64,
    seed: u64,
) -> Result<ExperimentReport> {
    params.validate()?;
    check_concentration_args(trials, eps)?;
    let fa = capacity::finite_n_fa(&params.model, &params.policy, params.n as u64, theta)?;
    concentration_report(params, trials, fa.a_n, eps * fa.a_n, theta, seed, false)
}

fn check_concentration_args(trials: u64, eps: f64) -> Result<()> {
    if trials < 100 {
        return Err(Error::parameter(format!(
            "concentration checks need at least 100 trials, got {trials}"
        )));
    }
    if !eps.is_finite() || eps <= 0.0 {
        return Err(Error::parameter(format!("band width eps must be positive, got {eps}")));
    }
    Ok(())
}

/// Per-bucket concentration report for the parallel-channel decomposition.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BucketReport {
    /// Bucket index `k`; lengths in `[(k-1)/L log2 n, k/L log2 n)`.
    pub k: u32,
    /// True for the overflow bucket holding lengths `>= J/L log2 n`.
    pub overflow: bool,
    /// Analytic center `n q_k e_k / mean_len` by exact pmf summation.
    pub expected_count: f64,
    /// Band half-width `eps_n * n / mean_len` with `eps_n = 1 / log2 n`.
    pub band: f64,
    pub mean_count: f64,
    pub stderr: f64,
    pub deviation_freq: f64,
}

/// Counts surviving fragments per length bucket and checks each count
/// against its analytic center, using half-open buckets
/// `[(k-1)/L log2 n, k/L log2 n)` for `k = 1..=num_buckets` plus one
/// overflow bucket for everything at or above `num_buckets/L log2 n`.
pub fn verify_bucket_concentration(
    params: &ChannelParams,
    granularity: u32,
    num_buckets: u32,
    trials: u64,
    seed: u64,
) -> Result<Vec<BucketReport>> {
    params.validate()?;
    if granularity == 0 || num_buckets == 0 {
        return Err(Error::parameter(
            "bucket granularity L and bucket count J must be >= 1".to_string(),
        ));
    }
    if trials == 0 {
        return Err(Error::parameter("at least one trial required".to_string()));
    }
    let n = params.n;
    let log_n = (n as f64).log2();
    let l = granularity as f64;
    let j = num_buckets as usize;
    let mean_len = params.model.mean_len(n as u64);
    // The converse's choice eps_n = 1/log2(n).
    let band = n as f64 / mean_len / log_n;

    let counts: Vec<Vec<u32>> = run_trials(trials, seed, |rng| {
        let trace = sample_trace(params, rng);
        let mut buckets = vec![0u32; j + 1];
        for (&len, &kept) in trace.lengths.iter().zip(&trace.kept) {
            if !kept {
                continue;
            }
            let k = (len as f64 * l / log_n).floor() as usize; // zero-based
            buckets[k.min(j)] += 1;
        }
        Ok(buckets)
    })?;

    let mut reports = Vec::with_capacity(j + 1);
    for bucket in 0..=j {
        let overflow = bucket == j;
        let lo = (bucket as f64) / l * log_n;
        let hi = ((bucket + 1) as f64) / l * log_n;
        let expected = n as f64 / mean_len
            * surviving_mass(params, lo, if overflow { None } else { Some(hi) })?;
        let samples: Vec<f64> = counts.iter().map(|c| c[bucket] as f64).collect();
        let deviations =
            samples.iter().filter(|&&c| (c - expected).abs() > band).count() as u64;
        reports.push(BucketReport {
            k: bucket as u32 + 1,
            overflow,
            expected_count: expected,
            band,
            mean_count: Summary::from_samples(&samples).mean,
            stderr: Summary::from_samples(&samples).stderr,
            deviation_freq: deviations as f64 / trials as f64,
        });
    }
    Ok(reports)
}

/// Sum of `pmf(len) * (1 - d(len))` over integer lengths in `[lo, hi)`,
/// or `[lo, infinity)` with analytic truncation when `hi` is `None`.
/// Zero-length draws never become fragments, so mass at 0 is excluded.
fn surviving_mass(params: &ChannelParams, lo: f64, hi: Option<f64>) -> Result<f64> {
    let n = params.n as u64;
    let first = (lo.ceil() as u64).max(1);
    let last = match hi {
        Some(h) => {
            let edge = h.ceil() as u64;
            if edge == 0 {
                return Ok(0.0);
            }
            edge - 1
        }
        None => match params.model.support_max(n) {
            Some(max) => max,
            None => geometric_mass_truncation(&params.model, first)?,
        },
    };
    let mut acc = 0.0;
    for len in first..=last {
        acc += params.model.pmf(n, len)
            * (1.0 - params.policy.deletion_prob(n, len));
    }
    Ok(acc)
}

/// Truncation point with geometric tail mass below `FINITE_N_TAIL`.
fn geometric_mass_truncation(model: &FragmentLengthModel, lo: u64) -> Result<u64> {
    let FragmentLengthModel::Geometric { mean_len } = *model else {
        return Err(Error::numeric("truncation requested for a bounded support"));
    };
    let q = 1.0 - 1.0 / mean_len;
    if q <= 0.0 {
        return Ok(lo.max(1));
    }
    let mut hi = (lo as f64).max(mean_len * 32.0);
    while q.powf(hi) >= capacity::FINITE_N_TAIL {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::numeric("pmf truncation bound unreachable".to_string()));
        }
    }
    Ok(hi as u64)
}

/// Computes `(1/alpha, p, r_in, r_out, gap)` rows over the given grids,
/// sorted by `(p, 1/alpha)`. The model must admit a density.
pub fn sweep_bounds(
    p_list: &[f64],
    inv_alpha_grid: &[f64],
    model: &FragmentLengthModel,
) -> Result<Vec<SweepRow>> {
    if p_list.is_empty() || inv_alpha_grid.is_empty() {
        return Err(Error::parameter("sweep grids must be nonempty".to_string()));
    }
    if !model.has_density() {
        return Err(Error::parameter(
            "bound sweeps need a model with an asymptotic density".to_string(),
        ));
    }
    let mut ps = p_list.to_vec();
    ps.sort_by(f64::total_cmp);
    let mut invs = inv_alpha_grid.to_vec();
    invs.sort_by(f64::total_cmp);

    let mut rows = Vec::with_capacity(ps.len() * invs.len());
    for &p in &ps {
        for &inv_alpha in &invs {
            if !(inv_alpha.is_finite() && inv_alpha > 0.0) {
                return Err(Error::parameter(format!(
                    "1/alpha grid points must be positive, got {inv_alpha}"
                )));
            }
            let bounds = capacity::noisy_bounds(model, p, 1.0 / inv_alpha)?;
            rows.push(SweepRow {
                inv_alpha,
                p,
                r_in: bounds.r_in,
                r_out: bounds.r_out,
                gap: bounds.gap,
            });
        }
    }
    Ok(rows)
}

/// Renders sweep rows as CSV with the canonical header.
pub fn sweep_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("inv_alpha,p,r_in,r_out,gap\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.inv_alpha, row.p, row.r_in, row.r_out, row.gap
        ));
    }
    out
}

/// Exact finite-n reference used by the concentration commands.
pub fn finite_reference(params: &ChannelParams, theta: f64) -> Result<FiniteFa> {
    capacity::finite_n_fa(&params.model, &params.policy, params.n as u64, theta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DeletionPolicy;

    fn geometric_params(n: usize, mean_len: f64) -> ChannelParams {
        ChannelParams {
            n,
            model: FragmentLengthModel::Geometric { mean_len },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        }
    }

    #[test]
    fn indexed_code_never_errs_on_its_own_channel() {
        let params = ChannelParams {
            n: 1024,
            model: FragmentLengthModel::Fixed { mean_len: 64.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let report =
            run_error_rate(&params, &CodecSpec::Indexed { frag_len: 64 }, 100, 7).unwrap();
        assert_eq!(report.errors, 0);
        assert_eq!(report.error_rate, 0.0);
    }

    #[test]
    fn error_rate_reports_are_reproducible() {
        let params = ChannelParams {
            n: 16,
            model: FragmentLengthModel::Fixed { mean_len: 8.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let spec = CodecSpec::RandomNoiseless { rate: 0.125, codebook_seed: 3 };
        let a = run_error_rate(&params, &spec, 500, 5).unwrap();
        let b = run_error_rate(&params, &spec, 500, 5).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn rate_separation_noiseless() {
        // Monte Carlo monotonicity in the rate: far below capacity the
        // cover decoder almost never confuses codewords; far above it the
        // competing-codeword union is dense.
        let params = ChannelParams {
            n: 16,
            model: FragmentLengthModel::Fixed { mean_len: 8.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let low = run_error_rate(
            &params,
            &CodecSpec::RandomNoiseless { rate: 0.25, codebook_seed: 3 },
            200,
            5,
        )
        .unwrap();
        let high = run_error_rate(
            &params,
            &CodecSpec::RandomNoiseless { rate: 0.75, codebook_seed: 3 },
            200,
            5,
        )
        .unwrap();
        assert!(
            low.error_rate < high.error_rate,
            "low-rate {} vs high-rate {}",
            low.error_rate,
            high.error_rate
        );
    }

    #[test]
    fn coverage_concentration_small_scale() {
        let params = geometric_params(1 << 12, 12.0);
        let report = verify_coverage_concentration(&params, 1.0, 200, 0.2, 11).unwrap();
        assert!(report.deviation_freq.unwrap() <= 0.05, "{report:?}");
        // Monte Carlo mean within 3 standard errors of the exact F_n.
        let f_n = report.reference.unwrap();
        assert!(
            (report.empirical_f.mean - f_n).abs() <= 3.0 * report.empirical_f.stderr,
            "mean {} vs F_n {f_n} (stderr {})",
            report.empirical_f.mean,
            report.empirical_f.stderr
        );
    }

    #[test]
    fn alignment_concentration_small_scale() {
        let params = geometric_params(1 << 12, 12.0);
        let report = verify_alignment_concentration(&params, 1.0, 200, 0.2, 13).unwrap();
        assert!(report.deviation_freq.unwrap() <= 0.05, "{report:?}");
        let a_n = report.reference.unwrap();
        assert!(
            (report.empirical_a_count.mean - a_n).abs() <= 3.0 * report.empirical_a_count.stderr
        );
    }

    #[test]
    fn fixed_model_concentrates_exactly() {
        // Fixed lengths that divide n give the same deterministic statistic
        // every trial, so the deviation frequency is exactly zero.
        let params = ChannelParams {
            n: 1024,
            model: FragmentLengthModel::Fixed { mean_len: 64.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let report = verify_coverage_concentration(&params, 1.0, 100, 0.1, 1).unwrap();
        assert_eq!(report.deviation_freq, Some(0.0));
        assert_eq!(report.empirical_f.mean, 1.0);
        let report = verify_alignment_concentration(&params, 1.0, 100, 0.1, 1).unwrap();
        assert_eq!(report.deviation_freq, Some(0.0));
        assert!((report.empirical_a_count.mean - 10.0 / 64.0).abs() < 1e-12);
    }

    #[test]
    fn full_deletion_gives_zero_statistics() {
        let params = ChannelParams {
            n: 4096,
            model: FragmentLengthModel::Geometric { mean_len: 12.0 },
            policy: DeletionPolicy::Constant { eps: 1.0 },
            p: 0.0,
        };
        let report = verify_coverage_concentration(&params, 1.0, 100, 0.5, 2);
        // F_n = 0 makes the relative band empty; every trial statistic is
        // also exactly 0, so no deviations are recorded.
        let report = report.unwrap();
        assert_eq!(report.empirical_f.mean, 0.0);
        assert_eq!(report.deviation_freq, Some(0.0));
    }

    #[test]
    fn bucket_counts_fixed_model() {
        // Fixed 64 | 1024: all mass lands in bucket ceil(64/10) = 7 at
        // L = 1, with exactly 16 fragments per trial.
        let params = ChannelParams {
            n: 1024,
            model: FragmentLengthModel::Fixed { mean_len: 64.0 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let reports = verify_bucket_concentration(&params, 1, 8, 50, 3).unwrap();
        for report in &reports {
            if report.k == 7 {
                assert_eq!(report.mean_count, 16.0);
                assert!((report.expected_count - 16.0).abs() < 1e-9);
                assert_eq!(report.deviation_freq, 0.0);
            } else {
                assert_eq!(report.mean_count, 0.0, "bucket {}", report.k);
            }
        }
    }

    #[test]
    fn bucket_means_halve_under_half_deletion() {
        let full = geometric_params(1 << 12, 12.0);
        let half = ChannelParams {
            policy: DeletionPolicy::Constant { eps: 0.5 },
            ..full
        };
        let a = verify_bucket_concentration(&full, 2, 6, 300, 9).unwrap();
        let b = verify_bucket_concentration(&half, 2, 6, 300, 9).unwrap();
        for (fa, fb) in a.iter().zip(&b) {
            assert!((fb.expected_count - fa.expected_count / 2.0).abs() < 1e-9);
            if fa.expected_count > 20.0 {
                let ratio = fb.mean_count / fa.mean_count;
                assert!((ratio - 0.5).abs() < 0.1, "bucket {} ratio {ratio}", fa.k);
            }
        }
    }

    #[test]
    fn sweep_has_expected_shape() {
        let model = FragmentLengthModel::Geometric { mean_len: 16.0 };
        let rows = sweep_bounds(
            &[0.02, 0.01],
            &(1..=20).map(f64::from).collect::<Vec<_>>(),
            &model,
        )
        .unwrap();
        assert_eq!(rows.len(), 40);
        // Sorted by (p, inv_alpha).
        assert!(rows.windows(2).all(|w| {
            (w[0].p, w[0].inv_alpha) < (w[1].p, w[1].inv_alpha)
        }));
        // Bounds bracket: gap >= 0 up to numerical slack.
        assert!(rows.iter().all(|r| r.gap >= -1e-9));
        let csv = sweep_to_csv(&rows);
        assert!(csv.starts_with("inv_alpha,p,r_in,r_out,gap\n"));
        assert_eq!(csv.lines().count(), 41);
    }

    #[test]
    fn sweep_rejects_fixed_model() {
        let model = FragmentLengthModel::Fixed { mean_len: 16.0 };
        assert!(sweep_bounds(&[0.01], &[1.0], &model).is_err());
    }

    #[test]
    fn deviation_freq_non_increasing_in_n() {
        // Convergence trend over n in {2^12, 2^14, 2^16} at fixed eps = 0.1
        // for both statistics, allowing one inversion within two standard
        // errors of the frequency.
        let trials = 300u64;
        let check_trend = |freqs: &[f64], label: &str| {
            let mut inversions = 0;
            for pair in freqs.windows(2) {
                if pair[1] > pair[0] {
                    inversions += 1;
                    let f = pair[1].max(1.0 / trials as f64);
                    let se = (f * (1.0 - f) / trials as f64).sqrt();
                    assert!(
                        pair[1] - pair[0] <= 2.0 * se,
                        "{label}: inversion beyond 2 stderr: {freqs:?}"
                    );
                }
            }
            assert!(inversions <= 1, "{label}: frequencies not settling: {freqs:?}");
        };
        let mut coverage = Vec::new();
        let mut alignment = Vec::new();
        for exp in [12u32, 14, 16] {
            let params = geometric_params(1 << exp, exp as f64);
            coverage.push(
                verify_coverage_concentration(&params, 1.0, trials, 0.1, 16)
                    .unwrap()
                    .deviation_freq
                    .unwrap(),
            );
            alignment.push(
                verify_alignment_concentration(&params, 1.0, trials, 0.1, 17)
                    .unwrap()
                    .deviation_freq
                    .unwrap(),
            );
        }
        check_trend(&coverage, "coverage");
        check_trend(&alignment, "alignment");
    }
}
