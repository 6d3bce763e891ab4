//! The coverage/alignment decomposition as a function of the discard
//! threshold theta, and how the finite-n expectations approach it.
//!
//! Run: `cargo run --release --example coverage_alignment`

use torn_paper::capacity::{alignment_cost, coverage_fraction, finite_n_fa};
use torn_paper::distributions::{DeletionPolicy, FragmentLengthModel};

fn main() {
    let model = FragmentLengthModel::Geometric { mean_len: 16.0 };
    let policy = DeletionPolicy::Zero;
    let alpha = 1.0;

    println!("geometric tearing, alpha = 1, no deletions");
    println!("{:>7} {:>12} {:>12} {:>12}", "theta", "F{theta}", "A{theta}", "F - A");
    for theta in [0.0, 0.5, 1.0, 1.5, 2.0, 3.0] {
        let f = coverage_fraction(&model, &policy, alpha, theta).unwrap();
        let a = alignment_cost(&model, &policy, alpha, theta).unwrap();
        println!("{theta:>7.2} {f:>12.6} {a:>12.6} {:>12.6}", f - a);
    }
    println!();
    println!("the capacity threshold is theta = 1: discarding fragments shorter");
    println!("than log2(n) bits costs nothing, F{{1}} - A{{1}} = e^-1 = 0.367879");

    println!();
    println!("finite-n expectations at theta = 1 (exact pmf summation):");
    println!("{:>8} {:>12} {:>12}", "n", "F_n", "A_n");
    for exp in [10u32, 12, 14, 16, 18] {
        let n = 1u64 << exp;
        let finite_model = FragmentLengthModel::Geometric { mean_len: exp as f64 / alpha };
        let fa = finite_n_fa(&finite_model, &policy, n, 1.0).unwrap();
        println!("{:>8} {:>12.6} {:>12.6}", format!("2^{exp}"), fa.f_n, fa.a_n);
    }
    println!("limits: F = 2e^-1 = 0.735759, A = e^-1 = 0.367879");
}
