//! Inner and outer bounds for the BSC-noisy channel, including the
//! long-fragment regime where they pin the capacity exactly.
//!
//! Run: `cargo run --release --example noisy_bounds`

use torn_paper::capacity::{binary_entropy, noisy_bounds, outer_threshold};
use torn_paper::distributions::FragmentLengthModel;

fn main() {
    let geometric = FragmentLengthModel::Geometric { mean_len: 16.0 };
    println!("geometric fragments, p = 0.02:");
    println!("{:>10} {:>10} {:>10} {:>10}", "1/alpha", "r_in", "r_out", "gap");
    for inv_alpha in [1.0, 2.0, 5.0, 10.0, 20.0, 50.0] {
        let b = noisy_bounds(&geometric, 0.02, 1.0 / inv_alpha).unwrap();
        println!("{inv_alpha:>10.1} {:>10.6} {:>10.6} {:>10.6}", b.r_in, b.r_out, b.gap);
    }
    println!("1 - H(0.02) = {:.6} (the p-only ceiling)", 1.0 - binary_entropy(0.02));

    println!();
    let p = 0.01;
    let alpha = 0.2;
    let fixed = FragmentLengthModel::Fixed { mean_len: 64.0 };
    let b = noisy_bounds(&fixed, p, alpha).unwrap();
    println!("fixed fragments, p = {p}, alpha = {alpha}:");
    println!("  every fragment is 1/alpha = {} log2(n) bits long,", 1.0 / alpha);
    println!(
        "  above the outer threshold 2/(1-H(2p)) = {:.4} log2(n),",
        outer_threshold(p).unwrap()
    );
    println!("  so the bounds coincide and give the capacity:");
    println!("  r_in = {:.9}", b.r_in);
    println!("  r_out = {:.9}", b.r_out);
    println!("  1 - H(p) - alpha = {:.9}", 1.0 - binary_entropy(p) - alpha);
}
