//! Torn-paper channel: simulation, capacity, and desk-scale coding schemes.
//!
//! The torn-paper channel breaks a length-n binary codeword into fragments
//! of random i.i.d. lengths, optionally deletes each fragment with a
//! length-dependent probability, optionally flips bits first (BSC noise),
//! and hands the decoder the surviving fragments as an unordered multiset.
//! This crate implements:
//!
//! * the channel itself ([`channel`]), with reproducible seeded streams;
//! * fragment-length models and deletion policies, both at finite n and in
//!   the rescaled limit ([`distributions`]);
//! * the capacity as a coverage-minus-alignment expression, in closed form
//!   and by adaptive quadrature, plus inner/outer bounds under BSC noise
//!   ([`capacity`]);
//! * encoders and decoders: random codebooks with exact or typical cover
//!   search, and the index-prefixed constructive code ([`codec`]);
//! * a Monte Carlo harness for error rates, concentration checks, and
//!   bound sweeps ([`experiments`]).
//!
//! # Quick start
//!
//! ```
//! use torn_paper::capacity::{capacity_noiseless, coverage_fraction, alignment_cost};
//! use torn_paper::distributions::{DeletionPolicy, FragmentLengthModel};
//!
//! let model = FragmentLengthModel::Geometric { mean_len: 16.0 };
//! let report = capacity_noiseless(&model, &DeletionPolicy::Zero, 1.0).unwrap();
//! // Geometric tearing at alpha = 1 has capacity e^{-1}.
//! assert!((report.value - (-1.0f64).exp()).abs() < 1e-8);
//!
//! // The capacity decomposes as coverage minus alignment cost.
//! let f = coverage_fraction(&model, &DeletionPolicy::Zero, 1.0, 1.0).unwrap();
//! let a = alignment_cost(&model, &DeletionPolicy::Zero, 1.0, 1.0).unwrap();
//! assert!((report.value - (f - a)).abs() < 1e-12);
//! ```
//!
//! The `examples/` directory has one runnable program per capability; the
//! thin `tpc` binary exposes the same functionality as subcommands.

#![forbid(unsafe_code)]

pub mod capacity;
pub mod channel;
pub mod cli;
pub mod codec;
pub mod distributions;
pub mod error;
pub mod experiments;
pub mod quadrature;
pub mod seeding;

pub use capacity::{
    CapacityReport, FiniteFa, NoisyBounds, alignment_cost, binary_entropy, capacity_noiseless,
    coverage_fraction, finite_n_fa, noisy_bounds, noisy_inner_bound, noisy_outer_bound,
};
pub use channel::{ChannelParams, Fragment, TearTrace, TornOutput, transmit, transmit_traced};
pub use codec::{
    Alignment, Codebook, DecodeReport, IndexedCodeLayout, RandomCodebook, cover_exact,
    cover_typical, decode_noiseless, decode_noisy, typicality_check,
};
pub use distributions::{AsymptoticDensity, ChannelConfig, DeletionPolicy, FragmentLengthModel};
pub use error::{Error, Result};
pub use experiments::{
    BucketReport, CodecSpec, ExperimentReport, SweepRow, run_error_rate, sweep_bounds,
    verify_alignment_concentration, verify_bucket_concentration, verify_coverage_concentration,
};
