//! Entropy of a 100-point dataset drawn from a Normal with unknown mean.
//!
//! About 700 nats deep, so each rep takes several seconds; the argument sets
//! the number of reps (default 8).
//!
//! ```text
//! cargo run --release --example normal_mean_entropy -- 100
//! ```

use nestdepth::estimator::{aggregate, differential_entropy};
use nestdepth::model::Model;
use nestdepth::models::{normal_mean_true_entropy, NormalMeanModel};
use nestdepth::runner::run_reps;
use nestdepth::sampler::DescentConfig;

fn main() {
    let reps: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);

    let model = NormalMeanModel::default();
    let tol = 1e-3 * (model.n as f64).sqrt();
    let config = DescentConfig { mcmc_steps: 2000, tolerance: tol, depth_cap: 2000.0, ..Default::default() };

    let mut records = Vec::new();
    run_reps(&model, &config, 0, reps, threads, |r| {
        eprintln!("rep {:3}: depth {:.2}", r.rep_id, r.depth());
        records.push(r);
        Ok::<(), std::convert::Infallible>(())
    })
    .expect("descents");

    let depth = aggregate(&records, tol).unwrap();
    let h = differential_entropy(&depth, model.geometry(), tol).unwrap();
    println!("depth {:.2} ± {:.2}", depth.mean, depth.std_error);
    println!("H(x) = {:.3} ± {:.3}  (log-volume {:.3})", h.value, h.std_error, h.log_volume);
    println!("exact  {:.3}", normal_mean_true_entropy(&model));
}
