//! Differential entropy of a standard normal from Nested Sampling depths.
//!
//! ```text
//! cargo run --release --example gaussian_entropy -- 200
//! ```

use nestdepth::estimator::{aggregate, differential_entropy};
use nestdepth::model::Model;
use nestdepth::models::GaussianToy;
use nestdepth::runner::collect_reps;
use nestdepth::sampler::DescentConfig;

fn main() {
    let reps: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);

    let model = GaussianToy::default();
    let config = DescentConfig { tolerance: 1e-3, ..Default::default() };
    let records = collect_reps(&model, &config, 1, reps, threads).expect("descents");

    // the same records read at coarser tolerances
    for tol in [1e-1, 1e-2, 1e-3] {
        let depth = aggregate(&records, tol).unwrap();
        let h = differential_entropy(&depth, model.geometry(), tol).unwrap();
        println!("r = {tol:<6} depth {:7.3} ± {:.3}  H = {:.3} ± {:.3}", depth.mean, depth.std_error, h.value, h.std_error);
    }
    println!("exact   H = {:.5}", GaussianToy::true_entropy());
}
