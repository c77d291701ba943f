//! Entropy of "what is x to within r?" for discrete and continuous x, and
//! the same quantity estimated by descents with a one-sided distance.

use nestdepth::model::Model;
use nestdepth::models::GaussianToy;
use nestdepth::precisional::{
    precisional_entropy_continuous, precisional_entropy_discrete, precisional_entropy_via_sampler, Cdf1D, DiscretePmf,
};
use nestdepth::runner::collect_reps;
use nestdepth::sampler::DescentConfig;

fn main() {
    let die = DiscretePmf::uniform(6).unwrap();
    for width in 1..=6 {
        println!("fair die, window {width}: {:.4} nats", precisional_entropy_discrete(&die, width).unwrap());
    }

    let uniform = Cdf1D::uniform(0.0, 1.0).unwrap();
    let normal = Cdf1D::normal(0.0, 1.0).unwrap();
    for r in [0.5, 0.1, 0.01] {
        let u = precisional_entropy_continuous(&uniform, r).unwrap();
        let n = precisional_entropy_continuous(&normal, r).unwrap();
        println!("r = {r:<4}: uniform {:.6}, normal {:.6} (right-window form {:.6})", u.value, n.value, n.right_variant);
    }

    let r = 0.5;
    let model = GaussianToy::one_sided();
    let config = DescentConfig { tolerance: r, ..Default::default() };
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let records = collect_reps(&model, &config, 4, 400, threads).unwrap();
    let estimate = precisional_entropy_via_sampler(&records, r, model.geometry()).unwrap();
    let exact = precisional_entropy_continuous(&normal, r).unwrap();
    println!("normal, r = {r}: sampler {:.4} ± {:.4}, quadrature {:.6}", estimate.value, estimate.std_error, exact.value);
}
