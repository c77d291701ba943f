//! Which observing schedule tells us more about a sinusoid's period?
//!
//! Runs conditional-entropy descents (data clamped, particles exploring the
//! posterior) for evenly spaced and front-loaded schedules. Since log10 of
//! the period is uniform on an interval of length one, `I(tau; Y) = -H(tau | Y)`.

use nestdepth::estimator::conditional_entropy;
use nestdepth::model::{Mode, Model};
use nestdepth::models::{Schedule, SinusoidModel};
use nestdepth::runner::collect_reps;
use nestdepth::sampler::DescentConfig;

fn main() {
    let reps: u64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(50);
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let tol = 1e-5;
    let config = DescentConfig { tolerance: tol, mode: Mode::ConditionalEntropy, ..Default::default() };

    for schedule in [Schedule::Even, Schedule::Uneven] {
        let model = SinusoidModel::new(schedule);
        let records = collect_reps(&model, &config, 3, reps, threads).expect("descents");
        let h = conditional_entropy(&records, tol, model.geometry()).unwrap();
        println!("{schedule:?}: H(tau | Y) = {:.3} ± {:.3}, I(tau; Y) = {:.3} nats", h.value, h.std_error, -h.value);
    }
}
