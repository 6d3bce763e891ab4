//! One pass through the physical channel, showing the tear trace, the
//! deletion flags, and the text dump format of the unordered output.
//!
//! Run: `cargo run --release --example channel_demo`

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torn_paper::channel::{ChannelParams, format_bits, random_bits, transmit_traced};
use torn_paper::distributions::{DeletionPolicy, FragmentLengthModel};

fn main() {
    let n = 64;
    let params = ChannelParams {
        n,
        model: FragmentLengthModel::Geometric { mean_len: 8.0 },
        policy: DeletionPolicy::Constant { eps: 0.2 },
        p: 0.05,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let x = random_bits(n, &mut rng);
    println!("input ({n} bits):  {}", format_bits(&x));

    let (output, trace) = transmit_traced(&x, &params, &mut rng).unwrap();
    println!();
    println!("tear lengths: {:?}", trace.lengths);
    println!("kept flags:   {:?}", trace.kept.iter().map(|&k| u8::from(k)).collect::<Vec<_>>());
    println!(
        "surviving bits: {} of {n} ({} of {} fragments)",
        output.total_len(),
        output.count(),
        trace.lengths.len()
    );

    println!();
    println!("unordered output in dump format:");
    print!("{}", output.to_text());

    println!();
    println!(
        "coverage statistic at theta = 1: {:.4}",
        trace.coverage_stat(n, 1.0)
    );
    println!(
        "alignment statistic at theta = 1: {:.4}",
        trace.alignment_stat(n, 1.0)
    );
}
