//! Reproduces the tabulated capacity expressions for every model/policy
//! pair with a closed form, comparing the quadrature route against it.
//!
//! Run: `cargo run --release --example capacity_table`

use torn_paper::capacity::capacity_noiseless;
use torn_paper::distributions::{DeletionPolicy, FragmentLengthModel};

fn main() {
    println!(
        "{:<34} {:>8} {:>12} {:>12} {:>10}",
        "model / deletion", "alpha", "quadrature", "closed form", "|diff|"
    );
    println!("{}", "-".repeat(80));

    let geometric = FragmentLengthModel::Geometric { mean_len: 16.0 };
    let rows: Vec<(String, FragmentLengthModel, DeletionPolicy, f64)> = vec![
        ("geometric / zero".into(), geometric, DeletionPolicy::Zero, 1.0),
        ("geometric / constant eps=0.1".into(), geometric, DeletionPolicy::Constant { eps: 0.1 }, 1.0),
        ("geometric / exp gamma=1".into(), geometric, DeletionPolicy::ExpLength { gamma: 1.0 }, 1.0),
        (
            "uniform gamma=2 / zero".into(),
            FragmentLengthModel::Uniform { gamma: 2.0 },
            DeletionPolicy::Zero,
            1.0, // pinned to 2/gamma internally
        ),
        (
            "fixed / zero".into(),
            FragmentLengthModel::Fixed { mean_len: 64.0 },
            DeletionPolicy::Zero,
            0.3,
        ),
    ];

    for (label, model, policy, alpha) in rows {
        let report = capacity_noiseless(&model, &policy, alpha).expect("tabulated row");
        let closed = report.closed_form.expect("tabulated row has a closed form");
        println!(
            "{label:<34} {:>8.3} {:>12.8} {:>12.8} {:>10.2e}",
            report.params.alpha,
            report.value,
            closed,
            report.closed_form_gap.unwrap_or(0.0),
        );
    }

    println!();
    println!("alpha sweep, geometric tearing without deletions (capacity e^-alpha):");
    for alpha in [0.25, 0.5, 1.0, 2.0] {
        let report = capacity_noiseless(&geometric, &DeletionPolicy::Zero, alpha).unwrap();
        println!(
            "  alpha = {alpha:<5} F = {:.6}  A = {:.6}  C = F - A = {:.6}",
            report.coverage, report.alignment, report.value
        );
    }
}
