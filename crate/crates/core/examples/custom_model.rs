//! Plugging in a model: mutual information between the two coordinates of a
//! correlated bivariate normal, where `I = -ln(1 - rho^2) / 2`.

use nestdepth::estimator::{mutual_information_paired, DepthSeries};
use nestdepth::model::{Geometry, Mode, Model};
use nestdepth::models::heavy_tailed_step;
use nestdepth::runner::collect_reps;
use nestdepth::sampler::DescentConfig;
use rand::Rng;
use rand_distr::StandardNormal;

const RHO: f64 = 0.9;

/// `(x, y)` with unit variances and correlation `RHO`. `axis` picks the
/// coordinate the distance is measured on; `None` uses both.
struct Bivariate {
    axis: Option<usize>,
}

impl Model for Bivariate {
    type Particle = [f64; 2];

    fn name(&self) -> &str {
        "bivariate-normal"
    }

    fn geometry(&self) -> Geometry {
        match self.axis {
            Some(_) => Geometry::interval(1),
            None => Geometry::l2(2),
        }
    }

    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> [f64; 2] {
        let (a, b): (f64, f64) = (rng.sample(StandardNormal), rng.sample(StandardNormal));
        [a, RHO * a + (1.0 - RHO * RHO).sqrt() * b]
    }

    fn explore<R: Rng + ?Sized>(&self, p: &[f64; 2], rng: &mut R, _: Mode, _: &[f64; 2]) -> ([f64; 2], f64) {
        let log_density = |q: &[f64; 2]| -(q[0] * q[0] - 2.0 * RHO * q[0] * q[1] + q[1] * q[1]) / (2.0 * (1.0 - RHO * RHO));
        let mut q = *p;
        q[rng.gen_range(0..2)] += heavy_tailed_step(rng);
        (q, log_density(&q) - log_density(p))
    }

    fn distance(&self, p: &[f64; 2], r: &[f64; 2]) -> f64 {
        match self.axis {
            Some(i) => (p[i] - r[i]).abs(),
            None => (p[0] - r[0]).hypot(p[1] - r[1]),
        }
    }

    fn summary(&self, p: &[f64; 2]) -> Vec<f64> {
        p.to_vec()
    }
}

fn main() {
    let tol = 1e-2;
    let config = DescentConfig { tolerance: tol, mcmc_steps: 500, ..Default::default() };
    let threads = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    let run = |axis| collect_reps(&Bivariate { axis }, &config, 9, 300, threads).unwrap();
    let (rx, ry, rxy) = (run(Some(0)), run(Some(1)), run(None));

    let series = |records, geometry| DepthSeries { records, tolerance: tol, geometry };
    let mi = mutual_information_paired(
        series(&rx, Geometry::interval(1)),
        series(&ry, Geometry::interval(1)),
        series(&rxy, Geometry::l2(2)),
    )
    .unwrap();
    println!("I(x; y) = {:.3} ± {:.3}, exact {:.3}", mi.value, mi.std_error, -0.5 * (1.0 - RHO * RHO).ln());
}
