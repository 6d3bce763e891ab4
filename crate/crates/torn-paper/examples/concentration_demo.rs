//! Empirical concentration of the coverage, alignment, and per-bucket
//! fragment statistics around their exact finite-n expectations.
//!
//! Run: `cargo run --release --example concentration_demo`

use torn_paper::channel::ChannelParams;
use torn_paper::distributions::{DeletionPolicy, FragmentLengthModel};
use torn_paper::experiments::{
    verify_alignment_concentration, verify_bucket_concentration, verify_coverage_concentration,
};

fn main() {
    let trials = 300;
    let eps = 0.1;
    println!("geometric tearing at alpha = 1, zero deletions, {trials} trials,");
    println!("relative band eps = {eps}; deviation frequency should fall with n");
    println!();
    println!("{:>8} {:>14} {:>10} {:>14} {:>10}", "n", "coverage mean", "dev freq", "align mean", "dev freq");
    for exp in [12u32, 14, 16] {
        let n = 1usize << exp;
        let params = ChannelParams {
            n,
            model: FragmentLengthModel::Geometric { mean_len: exp as f64 },
            policy: DeletionPolicy::Zero,
            p: 0.0,
        };
        let cov = verify_coverage_concentration(&params, 1.0, trials, eps, 17).unwrap();
        let ali = verify_alignment_concentration(&params, 1.0, trials, eps, 18).unwrap();
        println!(
            "{:>8} {:>14.5} {:>10.3} {:>14.5} {:>10.3}",
            format!("2^{exp}"),
            cov.empirical_f.mean,
            cov.deviation_freq.unwrap(),
            ali.empirical_a_count.mean,
            ali.deviation_freq.unwrap(),
        );
    }

    println!();
    println!("per-bucket counts at n = 2^16, bucket width log2(n)/2:");
    let n = 1usize << 16;
    let params = ChannelParams {
        n,
        model: FragmentLengthModel::Geometric { mean_len: 16.0 },
        policy: DeletionPolicy::Zero,
        p: 0.0,
    };
    let buckets = verify_bucket_concentration(&params, 2, 8, trials, 19).unwrap();
    println!("{:>4} {:>12} {:>12} {:>8} {:>10}", "k", "expected", "mean", "band", "dev freq");
    for b in &buckets {
        let label = if b.overflow { format!("{}+", b.k) } else { b.k.to_string() };
        println!(
            "{label:>4} {:>12.2} {:>12.2} {:>8.1} {:>10.3}",
            b.expected_count, b.mean_count, b.band, b.deviation_freq
        );
    }
}
