//! The depth counter behaves like a Poisson process with rate N.
//!
//! With exact constrained draws on a uniform variable, the number of
//! iterations needed to shrink onto an interval of probability P is Poisson
//! with mean `N ln(1/P)`.

use nestdepth::models::UniformToy;
use nestdepth::sampler::{depth_std_error_theoretical, run_descent, DescentConfig};
use nestdepth::seeding::{rep_rng, Purpose};

fn main() {
    let model = UniformToy::perfect();
    let (x_ref, r) = (0.3, 0.05);
    let n = 10;
    let config = DescentConfig { n_particles: n, tolerance: r, ..Default::default() };

    let counts: Vec<f64> = (0..2000)
        .map(|rep| {
            let record = run_descent(&model, &x_ref, &config, rep, &mut rep_rng(7, rep, Purpose::Descent)).unwrap();
            record.iterations() as f64
        })
        .collect();
    let len = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / len;
    let var = counts.iter().map(|k| (k - mean).powi(2)).sum::<f64>() / (len - 1.0);

    let truth = -(model.interval_probability(x_ref, r)).ln();
    println!("iterations: mean {mean:.3}, variance {var:.3}, expected both {:.3}", n as f64 * truth);
    println!("depth: {:.4} vs -ln P = {truth:.4}", mean / n as f64);
    println!(
        "single-descent sd: {:.4} vs sqrt(depth/N) = {:.4}",
        var.sqrt() / n as f64,
        depth_std_error_theoretical(truth, n)
    );
}
