//! Coverage fraction, alignment cost, capacity, and the noisy-channel bounds.
//!
//! Everything here is an `F - A` expression. `F{theta}` is the limiting
//! fraction of input bits covered by surviving fragments of rescaled length
//! at least `theta` (in multiples of `log2 n`); `A{theta}` is the limiting
//! per-bit cost of spending `log2 n` index bits on each such fragment.
//! The noiseless capacity is `F{1} - A{1}`; the noisy bounds use the same
//! shape with different discard thresholds:
//!
//! * inner:  `(1 - H(p)) F{1/(1-H(p))} - A{1/(1-H(p))}`
//! * outer:  `(1 - H(p)) F{1} - A{2/(1-H(2p))}`
//!
//! Density models (Geometric, Uniform) are integrated by adaptive Simpson
//! quadrature with an analytic tail truncation; the Fixed model is evaluated
//! directly as a point mass. Wherever a closed form exists the quadrature
//! value is cross-checked against it and a disagreement is an error, not a
//! warning.

use serde::Serialize;

use crate::distributions::{AsymptoticDensity, DeletionPolicy, FragmentLengthModel};
use crate::error::{Error, Result};
use crate::quadrature;

/// Absolute quadrature tolerance for the capacity integrals.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// The truncated upper tail of every integral is kept below this bound.
pub const TAIL_BOUND: f64 = 1e-12;

/// Maximum tolerated gap between quadrature and a matching closed form.
pub const CLOSED_FORM_TOL: f64 = 1e-6;

/// Relative pmf tail allowed when truncating finite-n expectations.
pub const FINITE_N_TAIL: f64 = 1e-12;

/// Binary entropy in bits, with the convention `0 log 0 = 0`.
pub fn binary_entropy(q: f64) -> f64 {
    assert!((0.0..=1.0).contains(&q), "entropy argument {q} outside [0, 1]");
    let term = |x: f64| if x == 0.0 { 0.0 } else { -x * x.log2() };
    term(q) + term(1.0 - q)
}

/// How a reported value was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
    FiniteN,
}

/// Capacity (or bound) value together with its F/A decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    #[serde(rename = "F")]
    pub coverage: f64,
    #[serde(rename = "A")]
    pub alignment: f64,
    pub value: f64,
    pub theta: f64,
    pub method: Method,
    /// Matching closed form, when one applies to this model/policy pair.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<f64>,
    /// |value - closed_form|, for provenance in machine-read output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form_gap: Option<f64>,
    pub params: ReportParams,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportParams {
    pub model: FragmentLengthModel,
    pub deletion: DeletionPolicy,
    pub alpha: f64,
}

/// Inner and outer bounds on the noisy torn-paper capacity.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct NoisyBounds {
    pub p: f64,
    pub alpha: f64,
    pub r_in: f64,
    pub r_out: f64,
    pub gap: f64,
    /// Discard threshold of the inner bound, `1/(1-H(p))`.
    pub theta_in: f64,
    /// Coverage threshold of the outer bound (always 1).
    pub theta_out_f: f64,
    /// Alignment threshold of the outer bound, `2/(1-H(2p))`.
    pub theta_out_a: f64,
}

/// Exact finite-n coverage and alignment expectations.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FiniteFa {
    pub f_n: f64,
    pub a_n: f64,
}

/// Resolves the alignment parameter actually used for a model.
///
/// The Uniform model pins `alpha = 2/gamma` through its mean; for the other
/// families the caller-supplied value is authoritative.
pub fn effective_alpha(model: &FragmentLengthModel, alpha: f64) -> Result<f64> {
    model.validate()?;
    let a = model.natural_alpha().unwrap_or(alpha);
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::parameter(format!("alpha must be positive, got {a}")));
    }
    Ok(a)
}

fn check_theta(theta: f64) -> Result<()> {
    if !theta.is_finite() || theta < 0.0 {
        return Err(Error::parameter(format!(
            "discard threshold theta must be >= 0, got {theta}"
        )));
    }
    Ok(())
}

/// Picks an upper truncation point `b >= lo` such that the tail of the
/// coverage integrand beyond `b` is below [`TAIL_BOUND`].
///
/// For the exponential density, `alpha * int_b^inf beta h(beta) dbeta
/// = (1 + alpha b) e^{-alpha b}`, which also dominates the alignment tail.
fn exponential_truncation(alpha: f64, lo: f64) -> Result<f64> {
    let tail = |b: f64| (1.0 + alpha * b) * (-alpha * b).exp();
    let mut b = (34.0 / alpha).max(lo + 1.0);
    while tail(b) >= TAIL_BOUND {
        b *= 1.5;
        if !b.is_finite() {
            return Err(Error::numeric(
                "could not find a truncation point with negligible tail".to_string(),
            ));
        }
    }
    Ok(b)
}

/// Integrates `alpha * int_theta^inf w(beta) (1 - d_hat(beta)) h(beta) dbeta`
/// with `w(beta) = beta` for coverage and `w = 1` for alignment.
fn density_functional(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    alpha: f64,
    theta: f64,
    weight_by_beta: bool,
) -> Result<f64> {
    let dens = AsymptoticDensity::new(model, alpha)?;
    let upper = match dens.support_cap() {
        Some(cap) => cap,
        None => exponential_truncation(alpha, theta)?,
    };
    if upper <= theta {
        return Ok(0.0);
    }
    let integrand = |beta: f64| {
        let w = if weight_by_beta { beta } else { 1.0 };
        w * (1.0 - policy.d_hat(beta)) * dens.eval(beta)
    };
    let integral = quadrature::integrate(integrand, theta, upper, QUADRATURE_TOL)?;
    Ok(alpha * integral)
}

/// Point-mass evaluation for the Fixed model: the single rescaled length is
/// `beta_0 = 1/alpha`, kept iff `beta_0 >= theta`.
fn fixed_functional(policy: &DeletionPolicy, alpha: f64, theta: f64, weight_by_beta: bool) -> f64 {
    let beta0 = 1.0 / alpha;
    if beta0 < theta {
        return 0.0;
    }
    let survive = 1.0 - policy.d_hat(beta0);
    if weight_by_beta {
        // alpha * beta0 * survive = survive
        survive
    } else {
        alpha * survive
    }
}

/// Coverage fraction `F_d{theta log2 n}` in the limit.
pub fn coverage_fraction(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    alpha: f64,
    theta: f64,
) -> Result<f64> {
    policy.validate()?;
    check_theta(theta)?;
    let alpha = effective_alpha(model, alpha)?;
    if model.has_density() {
        density_functional(model, policy, alpha, theta, true)
    } else {
        Ok(fixed_functional(policy, alpha, theta, true))
    }
}

/// Alignment cost `A_d{theta log2 n}` in the limit.
pub fn alignment_cost(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    alpha: f64,
    theta: f64,
) -> Result<f64> {
    policy.validate()?;
    check_theta(theta)?;
    let alpha = effective_alpha(model, alpha)?;
    if model.has_density() {
        density_functional(model, policy, alpha, theta, false)
    } else {
        Ok(fixed_functional(policy, alpha, theta, false))
    }
}

/// The closed-form capacity for the five tabulated model/policy pairs.
///
/// Returns `None` when no tabulated form applies (for example exp-length
/// deletion of uniform fragments, or the fixed model with `alpha > 1`,
/// whose table row assumes fragments of at least `log2 n` bits).
pub fn closed_form_capacity(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    alpha: f64,
) -> Option<f64> {
    match (model, policy) {
        (FragmentLengthModel::Geometric { .. }, DeletionPolicy::Zero) => Some((-alpha).exp()),
        (FragmentLengthModel::Geometric { .. }, DeletionPolicy::Constant { eps }) => {
            Some((1.0 - eps) * (-alpha).exp())
        }
        (FragmentLengthModel::Geometric { .. }, DeletionPolicy::ExpLength { gamma }) => {
            let ratio = alpha * alpha * (-gamma).exp() / ((alpha + gamma) * (alpha + gamma));
            Some((-alpha).exp() * (1.0 - ratio))
        }
        (FragmentLengthModel::Uniform { gamma }, DeletionPolicy::Zero) if *gamma >= 1.0 => {
            Some(((gamma - 1.0) / gamma).powi(2))
        }
        (FragmentLengthModel::Fixed { .. }, DeletionPolicy::Zero) if alpha <= 1.0 => {
            Some(1.0 - alpha)
        }
        _ => None,
    }
}

/// Noiseless capacity `F{1} - A{1}`, cross-checked against the matching
/// closed form when one exists.
pub fn capacity_noiseless(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    alpha: f64,
) -> Result<CapacityReport> {
    let alpha = effective_alpha(model, alpha)?;
    let coverage = coverage_fraction(model, policy, alpha, 1.0)?;
    let alignment = alignment_cost(model, policy, alpha, 1.0)?;
    let value = coverage - alignment;
    let method = if model.has_density() {
        Method::Quadrature
    } else {
        Method::ClosedForm
    };
    let closed_form = closed_form_capacity(model, policy, alpha);
    let closed_form_gap = closed_form.map(|cf| (value - cf).abs());
    if let Some(gap) = closed_form_gap
        && gap > CLOSED_FORM_TOL
    {
        return Err(Error::numeric(format!(
            "quadrature value {value:.12} disagrees with closed form \
             {:.12} by {gap:.3e} (tolerance {CLOSED_FORM_TOL:.0e})",
            closed_form.unwrap(),
        )));
    }
    Ok(CapacityReport {
        coverage,
        alignment,
        value,
        theta: 1.0,
        method,
        closed_form,
        closed_form_gap,
        params: ReportParams {
            model: *model,
            deletion: *policy,
            alpha,
        },
    })
}

fn check_crossover(p: f64) -> Result<()> {
    if !(0.0..0.5).contains(&p) {
        return Err(Error::parameter(format!(
            "BSC crossover probability must lie in [0, 0.5), got {p}"
        )));
    }
    Ok(())
}

/// Inner-bound discard threshold `1/(1-H(p))`.
pub fn inner_threshold(p: f64) -> Result<f64> {
    check_crossover(p)?;
    Ok(1.0 / (1.0 - binary_entropy(p)))
}

/// Outer-bound alignment threshold `2/(1-H(2p))`.
///
/// Defined only for `p < 0.25`: at `2p = 1/2` the denominator `1 - H(2p)`
/// reaches 0 and the threshold diverges.
pub fn outer_threshold(p: f64) -> Result<f64> {
    check_crossover(p)?;
    if p >= 0.25 {
        return Err(Error::parameter(format!(
            "outer bound undefined for p = {p}: the alignment threshold \
             2/(1 - H(2p)) requires 2p < 1/2, and 1 - H(2p) <= 0 at the boundary"
        )));
    }
    Ok(2.0 / (1.0 - binary_entropy(2.0 * p)))
}

/// Achievable-rate bound `(1-H(p)) F{theta_1} - A{theta_1}`, clamped at 0.
///
/// The noisy model has no fragment deletions, so the Zero policy is implied.
pub fn noisy_inner_bound(model: &FragmentLengthModel, p: f64, alpha: f64) -> Result<f64> {
    let theta = inner_threshold(p)?;
    let c_bsc = 1.0 - binary_entropy(p);
    let f = coverage_fraction(model, &DeletionPolicy::Zero, alpha, theta)?;
    let a = alignment_cost(model, &DeletionPolicy::Zero, alpha, theta)?;
    Ok((c_bsc * f - a).max(0.0))
}

/// Converse bound `(1-H(p)) F{1} - A{2/(1-H(2p))}`, clamped at 0.
pub fn noisy_outer_bound(model: &FragmentLengthModel, p: f64, alpha: f64) -> Result<f64> {
    let theta_a = outer_threshold(p)?;
    let c_bsc = 1.0 - binary_entropy(p);
    let f = coverage_fraction(model, &DeletionPolicy::Zero, alpha, 1.0)?;
    let a = alignment_cost(model, &DeletionPolicy::Zero, alpha, theta_a)?;
    Ok((c_bsc * f - a).max(0.0))
}

/// Both noisy bounds with their thresholds.
pub fn noisy_bounds(model: &FragmentLengthModel, p: f64, alpha: f64) -> Result<NoisyBounds> {
    let alpha = effective_alpha(model, alpha)?;
    let r_in = noisy_inner_bound(model, p, alpha)?;
    let r_out = noisy_outer_bound(model, p, alpha)?;
    Ok(NoisyBounds {
        p,
        alpha,
        r_in,
        r_out,
        gap: r_out - r_in,
        theta_in: inner_threshold(p)?,
        theta_out_f: 1.0,
        theta_out_a: outer_threshold(p)?,
    })
}

/// Exact pre-limit expectations at block length `n`:
/// `F_n = E[N (1 - d(N)) 1{N >= theta log2 n}] / mean_len` and
/// `A_n = (log2 n / mean_len) E[(1 - d(N)) 1{N >= theta log2 n}]`,
/// computed by direct summation over the pmf.
pub fn finite_n_fa(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    n: u64,
    theta: f64,
) -> Result<FiniteFa> {
    model.validate()?;
    policy.validate()?;
    check_theta(theta)?;
    if n < 2 {
        return Err(Error::parameter(format!("block length must be >= 2, got {n}")));
    }
    let log_n = (n as f64).log2();
    let cutoff = theta * log_n;
    let lo = cutoff.ceil().max(0.0) as u64;
    let mean = model.mean_len(n);

    let (sum_weighted, sum_survive) = match model.support_max(n) {
        Some(max) => pmf_sums(model, policy, n, lo, max),
        None => {
            let hi = geometric_truncation(model, lo)?;
            pmf_sums(model, policy, n, lo, hi)
        }
    };
    Ok(FiniteFa {
        f_n: sum_weighted / mean,
        a_n: log_n / mean * sum_survive,
    })
}

/// Sums `len * pmf * (1-d)` and `pmf * (1-d)` over `lo..=hi`.
fn pmf_sums(
    model: &FragmentLengthModel,
    policy: &DeletionPolicy,
    n: u64,
    lo: u64,
    hi: u64,
) -> (f64, f64) {
    let mut weighted = 0.0;
    let mut survive = 0.0;
    for len in lo..=hi {
        let mass = model.pmf(n, len);
        if mass == 0.0 {
            continue;
        }
        let keep = mass * (1.0 - policy.deletion_prob(n, len));
        weighted += len as f64 * keep;
        survive += keep;
    }
    (weighted, survive)
}

/// Smallest `hi >= lo` with geometric tail `E[N 1{N > hi}] / mean` below
/// [`FINITE_N_TAIL`]; the tail is `q^hi (hi + mean)` in closed form.
fn geometric_truncation(model: &FragmentLengthModel, lo: u64) -> Result<u64> {
    let FragmentLengthModel::Geometric { mean_len } = *model else {
        return Err(Error::numeric("truncation requested for a bounded support"));
    };
    let q = 1.0 - 1.0 / mean_len;
    if q <= 0.0 {
        return Ok(lo.max(1));
    }
    let tail = |m: f64| q.powf(m) * (m + mean_len) / mean_len;
    let mut hi = (lo as f64).max(mean_len * 32.0);
    while tail(hi) >= FINITE_N_TAIL {
        hi *= 2.0;
        if hi > 1e9 {
            return Err(Error::numeric(format!(
                "pmf truncation bound unreachable: tail {:.3e} at len {hi:.0}",
                tail(hi)
            )));
        }
    }
    Ok(hi as u64)
}
