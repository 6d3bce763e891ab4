//! Emits the bound-comparison sweep as CSV: inner and outer bounds for
//! geometric fragments over a (p, 1/alpha) grid. Pipe the output into a
//! plotting tool to see the gap close as 1/alpha grows.
//!
//! Run: `cargo run --release --example bounds_sweep > sweep.csv`

use torn_paper::distributions::FragmentLengthModel;
use torn_paper::experiments::{sweep_bounds, sweep_to_csv};

fn main() {
    let model = FragmentLengthModel::Geometric { mean_len: 16.0 };
    let inv_alpha: Vec<f64> = (1..=20).map(f64::from).collect();
    let rows = sweep_bounds(&[0.01, 0.02, 0.05], &inv_alpha, &model).expect("valid grid");
    print!("{}", sweep_to_csv(&rows));
}
