//! Fragment-length models and deletion policies.
//!
//! A tear breaks a length-n input into fragments whose lengths are drawn
//! i.i.d. from a [`FragmentLengthModel`]; each fragment then survives or is
//! deleted according to a [`DeletionPolicy`] that may depend on its length.
//! Both objects exist in two regimes:
//!
//! * finite n — sampling and exact probability mass, used by the channel
//!   simulator and by the exact finite-n coverage/alignment expectations;
//! * the limit — the rescaled length density `h(beta)` with
//!   `beta = len / log2(n)`, and the limiting deletion profile `d_hat(beta)`,
//!   which drive the closed-form and quadrature capacity expressions.
//!
//! All logarithms in this crate are base 2: lengths are measured in bits and
//! rates in bits per input symbol. The alignment parameter `alpha` is the
//! limit of `log2(n) / mean_fragment_length`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution of the i.i.d. fragment lengths.
///
/// * `Geometric` has support {1, 2, ...} with success probability
///   `1 / mean_len`, so the mean is exactly `mean_len`.
/// * `Uniform` is discrete uniform on {0, 1, ..., ceil(gamma * log2 n)};
///   zero-length draws are skipped during tearing. Its mean pins the
///   alignment parameter to `alpha = 2 / gamma`.
/// * `Fixed` always yields `round(mean_len)` (the shuffling-channel special
///   case).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FragmentLengthModel {
    Geometric { mean_len: f64 },
    Uniform { gamma: f64 },
    Fixed { mean_len: f64 },
}

impl FragmentLengthModel {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FragmentLengthModel::Geometric { mean_len } => {
                if !mean_len.is_finite() || mean_len < 1.0 {
                    return Err(Error::parameter(format!(
                        "geometric mean_len must be >= 1 (success probability 1/mean_len), got {mean_len}"
                    )));
                }
            }
            FragmentLengthModel::Uniform { gamma } => {
                if !gamma.is_finite() || gamma <= 0.0 {
                    return Err(Error::parameter(format!(
                        "uniform gamma must be positive, got {gamma}"
                    )));
                }
            }
            FragmentLengthModel::Fixed { mean_len } => {
                if !mean_len.is_finite() || mean_len.round() < 1.0 {
                    return Err(Error::parameter(format!(
                        "fixed mean_len must round to a length >= 1, got {mean_len}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Upper edge of the Uniform support for block length `n`.
    fn uniform_max(gamma: f64, n: u64) -> u64 {
        (gamma * (n as f64).log2()).ceil() as u64
    }

    /// Draws one fragment length for block length `n`.
    ///
    /// Geometric draws are >= 1; Uniform draws may be 0 (the tearing step
    /// skips them); Fixed draws are always `round(mean_len)`. Callers
    /// validate the model once at the channel boundary.
    pub fn sample_length<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> u64 {
        debug_assert!(n >= 2);
        debug_assert!(self.validate().is_ok(), "sampling from an invalid model");
        match *self {
            FragmentLengthModel::Geometric { mean_len } => {
                let p = 1.0 / mean_len;
                if p >= 1.0 {
                    return 1;
                }
                // Inversion: ceil(ln(1-u) / ln(1-p)) has the geometric law on {1, 2, ...}.
                let u: f64 = rng.random();
                let k = ((1.0 - u).ln() / (1.0 - p).ln()).ceil();
                if k < 1.0 { 1 } else { k as u64 }
            }
            FragmentLengthModel::Uniform { gamma } => {
                let m = Self::uniform_max(gamma, n);
                rng.random_range(0..=m)
            }
            FragmentLengthModel::Fixed { mean_len } => mean_len.round() as u64,
        }
    }

    /// Probability mass at `len` for block length `n`.
    pub fn pmf(&self, n: u64, len: u64) -> f64 {
        match *self {
            FragmentLengthModel::Geometric { mean_len } => {
                if len == 0 {
                    return 0.0;
                }
                let p = 1.0 / mean_len;
                p * (1.0 - p).powf((len - 1) as f64)
            }
            FragmentLengthModel::Uniform { gamma } => {
                let m = Self::uniform_max(gamma, n);
                if len <= m { 1.0 / (m + 1) as f64 } else { 0.0 }
            }
            FragmentLengthModel::Fixed { mean_len } => {
                if len == mean_len.round() as u64 { 1.0 } else { 0.0 }
            }
        }
    }

    /// Exact mean fragment length at block length `n`.
    pub fn mean_len(&self, n: u64) -> f64 {
        match *self {
            FragmentLengthModel::Geometric { mean_len } => mean_len,
            FragmentLengthModel::Uniform { gamma } => Self::uniform_max(gamma, n) as f64 / 2.0,
            FragmentLengthModel::Fixed { mean_len } => mean_len.round(),
        }
    }

    /// Largest support point at block length `n`, if the support is bounded.
    pub fn support_max(&self, n: u64) -> Option<u64> {
        match *self {
            FragmentLengthModel::Geometric { .. } => None,
            FragmentLengthModel::Uniform { gamma } => Some(Self::uniform_max(gamma, n)),
            FragmentLengthModel::Fixed { mean_len } => Some(mean_len.round() as u64),
        }
    }

    /// Whether the rescaled length density `h(beta)` exists for this family.
    pub fn has_density(&self) -> bool {
        !matches!(self, FragmentLengthModel::Fixed { .. })
    }

    /// The alignment parameter the model itself pins down, if any.
    ///
    /// Uniform on {0..ceil(gamma log2 n)} has mean ~ gamma log2(n) / 2, so
    /// `alpha = 2 / gamma` regardless of any externally supplied value.
    pub fn natural_alpha(&self) -> Option<f64> {
        match *self {
            FragmentLengthModel::Uniform { gamma } => Some(2.0 / gamma),
            _ => None,
        }
    }

    /// Rescaled asymptotic density `h(beta)` evaluated pointwise.
    ///
    /// Fails with `DensityUndefined` for the Fixed model, whose length
    /// distribution degenerates to a point mass; callers must use the
    /// finite expectation forms directly in that case.
    pub fn h_beta(&self, alpha: f64, beta: f64) -> Result<f64> {
        AsymptoticDensity::new(self, alpha).map(|d| d.eval(beta))
    }
}

/// Length-dependent fragment deletion probability.
///
/// `ExpLength` deletes a fragment of length `len` with probability
/// `exp(-gamma * len / log2 n)`, so long fragments survive and short ones
/// vanish; its limit profile is `d_hat(beta) = exp(-gamma * beta)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DeletionPolicy {
    Zero,
    Constant {
        eps: f64,
    },
    #[serde(rename = "exp")]
    ExpLength {
        gamma: f64,
    },
}

impl DeletionPolicy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DeletionPolicy::Zero => Ok(()),
            DeletionPolicy::Constant { eps } => {
                if !(0.0..=1.0).contains(&eps) {
                    Err(Error::parameter(format!(
                        "constant deletion probability must lie in [0, 1], got {eps}"
                    )))
                } else {
                    Ok(())
                }
            }
            DeletionPolicy::ExpLength { gamma } => {
                if !gamma.is_finite() || gamma <= 0.0 {
                    Err(Error::parameter(format!(
                        "exp-length deletion gamma must be positive, got {gamma}"
                    )))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Deletion probability of a fragment of length `len` at block length `n`.
    pub fn deletion_prob(&self, n: u64, len: u64) -> f64 {
        match *self {
            DeletionPolicy::Zero => 0.0,
            DeletionPolicy::Constant { eps } => eps,
            DeletionPolicy::ExpLength { gamma } => {
                (-gamma * len as f64 / (n as f64).log2()).exp()
            }
        }
    }

    /// Limiting deletion profile `d_hat(beta) = lim d(beta log2 n)`.
    pub fn d_hat(&self, beta: f64) -> f64 {
        debug_assert!(beta >= 0.0);
        match *self {
            DeletionPolicy::Zero => 0.0,
            DeletionPolicy::Constant { eps } => eps,
            DeletionPolicy::ExpLength { gamma } => (-gamma * beta).exp(),
        }
    }
}

/// The rescaled asymptotic fragment-length density.
///
/// For the Geometric family this is `alpha * exp(-alpha * beta)`; for the
/// Uniform family it is flat at `1/gamma` on `[0, gamma]`. Construction
/// fails for the Fixed family, where the density does not exist.
#[derive(Debug, Clone, Copy)]
pub struct AsymptoticDensity {
    shape: DensityShape,
}

#[derive(Debug, Clone, Copy)]
enum DensityShape {
    Exponential { alpha: f64 },
    Flat { gamma: f64 },
}

impl AsymptoticDensity {
    pub fn new(model: &FragmentLengthModel, alpha: f64) -> Result<Self> {
        model.validate()?;
        match *model {
            FragmentLengthModel::Geometric { .. } => {
                if !alpha.is_finite() || alpha <= 0.0 {
                    return Err(Error::parameter(format!(
                        "alpha must be positive, got {alpha}"
                    )));
                }
                Ok(AsymptoticDensity {
                    shape: DensityShape::Exponential { alpha },
                })
            }
            FragmentLengthModel::Uniform { gamma } => Ok(AsymptoticDensity {
                shape: DensityShape::Flat { gamma },
            }),
            FragmentLengthModel::Fixed { .. } => Err(Error::DensityUndefined(
                "h(beta) does not exist for the fixed-length model; \
                 evaluate the finite forms directly"
                    .to_string(),
            )),
        }
    }

    /// Density value at `beta >= 0`.
    pub fn eval(&self, beta: f64) -> f64 {
        debug_assert!(beta >= 0.0);
        match self.shape {
            DensityShape::Exponential { alpha } => alpha * (-alpha * beta).exp(),
            DensityShape::Flat { gamma } => {
                if beta <= gamma {
                    1.0 / gamma
                } else {
                    0.0
                }
            }
        }
    }

    /// Upper edge of the support when it is compact.
    pub fn support_cap(&self) -> Option<f64> {
        match self.shape {
            DensityShape::Exponential { .. } => None,
            DensityShape::Flat { gamma } => Some(gamma),
        }
    }
}

/// JSON configuration object pairing a length model with a deletion policy.
///
/// Wire shape:
/// `{"fragment": {"kind": "geometric", "mean_len": 20.0},
///   "deletion": {"kind": "exp", "gamma": 1.0}}`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub fragment: FragmentLengthModel,
    pub deletion: DeletionPolicy,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const E_INV: f64 = 0.36787944117144233;

    #[test]
    fn fixed_sampling_is_deterministic() {
        let model = FragmentLengthModel::Fixed { mean_len: 64.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..32 {
            assert_eq!(model.sample_length(1024, &mut rng), 64);
        }
    }

    #[test]
    fn geometric_sample_mean_matches_law_of_large_numbers() {
        // Oracle: E[N1] = mean_len; 1e6 draws keep the sample mean within
        // [19.9, 20.1] with enormous probability (sd of the mean ~ 0.02).
        let model = FragmentLengthModel::Geometric { mean_len: 20.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let trials = 1_000_000u64;
        let sum: u64 = (0..trials).map(|_| model.sample_length(1024, &mut rng)).sum();
        let mean = sum as f64 / trials as f64;
        assert!((19.9..=20.1).contains(&mean), "sample mean {mean}");
    }

    #[test]
    fn uniform_samples_stay_in_support() {
        let model = FragmentLengthModel::Uniform { gamma: 2.0 };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut saw_zero = false;
        for _ in 0..20_000 {
            let len = model.sample_length(1024, &mut rng);
            assert!(len <= 20);
            saw_zero |= len == 0;
        }
        assert!(saw_zero, "support includes 0");
    }

    #[test]
    fn pmf_point_values() {
        let geo = FragmentLengthModel::Geometric { mean_len: 2.0 };
        assert!((geo.pmf(1024, 1) - 0.5).abs() < 1e-15);

        let fixed = FragmentLengthModel::Fixed { mean_len: 64.0 };
        assert_eq!(fixed.pmf(1024, 64), 1.0);
        assert_eq!(fixed.pmf(1024, 63), 0.0);

        let uni = FragmentLengthModel::Uniform { gamma: 1.0 };
        assert!((uni.pmf(1024, 5) - 1.0 / 11.0).abs() < 1e-15);
        assert_eq!(uni.pmf(1024, 11), 0.0);
    }

    #[test]
    fn pmf_sums_to_one() {
        let geo = FragmentLengthModel::Geometric { mean_len: 7.5 };
        let sum: f64 = (1..=4000).map(|k| geo.pmf(1 << 14, k)).sum();
        assert!((sum - 1.0).abs() < 1e-12, "geometric pmf sum {sum}");

        let uni = FragmentLengthModel::Uniform { gamma: 2.0 };
        let sum: f64 = (0..=20).map(|k| uni.pmf(1024, k)).sum();
        assert!((sum - 1.0).abs() < 1e-12, "uniform pmf sum {sum}");
    }

    #[test]
    fn h_beta_matches_closed_forms() {
        let geo = FragmentLengthModel::Geometric { mean_len: 20.0 };
        assert!((geo.h_beta(1.0, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((geo.h_beta(1.0, 1.0).unwrap() - E_INV).abs() < 1e-9);

        let uni = FragmentLengthModel::Uniform { gamma: 2.0 };
        assert!((uni.h_beta(1.0, 1.5).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(uni.h_beta(1.0, 2.5).unwrap(), 0.0);

        let fixed = FragmentLengthModel::Fixed { mean_len: 64.0 };
        assert!(matches!(
            fixed.h_beta(1.0, 1.0),
            Err(Error::DensityUndefined(_))
        ));
    }

    #[test]
    fn d_hat_point_values() {
        assert_eq!(DeletionPolicy::Zero.d_hat(3.0), 0.0);
        assert_eq!(DeletionPolicy::Constant { eps: 0.1 }.d_hat(3.0), 0.1);
        let exp = DeletionPolicy::ExpLength { gamma: 1.0 };
        assert!((exp.d_hat(1.0) - E_INV).abs() < 1e-12);
    }

    #[test]
    fn density_integrates_to_one() {
        // Truncation point chosen so the exponential tail is below 1e-10.
        for alpha in [0.25, 0.5, 1.0, 2.0, 4.0] {
            let geo = FragmentLengthModel::Geometric { mean_len: 20.0 };
            let dens = AsymptoticDensity::new(&geo, alpha).unwrap();
            let cap = 30.0 / alpha;
            let mass = quadrature::integrate(|b| dens.eval(b), 0.0, cap, 1e-10).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "alpha={alpha} mass={mass}");
        }
        for gamma in [1.0, 2.0, 3.5] {
            let uni = FragmentLengthModel::Uniform { gamma };
            let dens = AsymptoticDensity::new(&uni, 1.0).unwrap();
            let mass = quadrature::integrate(|b| dens.eval(b), 0.0, gamma, 1e-10).unwrap();
            assert!((mass - 1.0).abs() < 1e-8, "gamma={gamma} mass={mass}");
        }
    }

    #[test]
    fn finite_n_pmf_converges_to_density() {
        // Rescaled mass pmf(ceil(beta log2 n)) * log2(n) approaches
        // h(beta) = alpha e^{-alpha beta}, with a monotone shrinking gap
        // along n in {2^10, 2^14, 2^18} at alpha = 1.
        let alpha = 1.0;
        for beta in [0.5, 1.0, 2.0] {
            let mut last_gap = f64::INFINITY;
            for exp in [10u32, 14, 18] {
                let n = 1u64 << exp;
                let log_n = exp as f64;
                let model = FragmentLengthModel::Geometric { mean_len: log_n / alpha };
                let len = (beta * log_n).ceil() as u64;
                let rescaled = model.pmf(n, len) * log_n;
                let h = model.h_beta(alpha, beta).unwrap();
                let gap = (rescaled - h).abs();
                assert!(gap < last_gap, "beta={beta} n=2^{exp}: gap {gap} vs {last_gap}");
                last_gap = gap;
            }
        }
    }

    #[test]
    fn finite_n_deletion_converges_to_d_hat() {
        let policy = DeletionPolicy::ExpLength { gamma: 1.0 };
        for beta in [0.5, 1.0, 2.0] {
            let mut last_gap = f64::INFINITY;
            for exp in [10u32, 14, 18] {
                let n = 1u64 << exp;
                let len = (beta * exp as f64).ceil() as u64;
                let gap = (policy.deletion_prob(n, len) - policy.d_hat(beta)).abs();
                assert!(gap <= last_gap, "beta={beta} n=2^{exp}");
                last_gap = gap;
            }
        }
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = ChannelConfig {
            fragment: FragmentLengthModel::Geometric { mean_len: 20.0 },
            deletion: DeletionPolicy::ExpLength { gamma: 1.0 },
        };
        let json = serde_json::to_string(&cfg).unwrap();
        assert!(json.contains("\"kind\":\"geometric\""));
        assert!(json.contains("\"kind\":\"exp\""));
        let back: ChannelConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(cfg, back);

        let parsed: ChannelConfig = serde_json::from_str(
            r#"{"fragment":{"kind":"uniform","gamma":2.0},"deletion":{"kind":"zero"}}"#,
        )
        .unwrap();
        assert_eq!(parsed.fragment, FragmentLengthModel::Uniform { gamma: 2.0 });
        assert_eq!(parsed.deletion, DeletionPolicy::Zero);
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(FragmentLengthModel::Geometric { mean_len: 0.0 }.validate().is_err());
        assert!(FragmentLengthModel::Uniform { gamma: -1.0 }.validate().is_err());
        assert!(FragmentLengthModel::Fixed { mean_len: 0.2 }.validate().is_err());
        assert!(DeletionPolicy::Constant { eps: 1.5 }.validate().is_err());
        assert!(DeletionPolicy::ExpLength { gamma: 0.0 }.validate().is_err());
    }
}
