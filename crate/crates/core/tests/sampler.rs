use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use nestdepth::model::{Mode, Model};
use nestdepth::models::{GaussianToy, UniformToy};
use nestdepth::sampler::{depth_at, run_descent, DepthRecord, DescentConfig, Termination};
use nestdepth::seeding::{rep_rng, Purpose};

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (mean, xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0))
}

fn descents<M: Model>(model: &M, reference: &M::Particle, config: &DescentConfig, reps: u64, seed: u64) -> Vec<DepthRecord> {
    (0..reps)
        .map(|rep| run_descent(model, reference, config, rep, &mut rep_rng(seed, rep, Purpose::Descent)).unwrap())
        .collect()
}

#[test]
fn gaussian_perfect_depth_is_unbiased_and_poisson() {
    let (x_ref, r) = (1.0, 0.2);
    let normal = Normal::new(0.0, 1.0).unwrap();
    let expected = -(normal.cdf(x_ref + r) - normal.cdf(x_ref - r)).ln();

    let config = DescentConfig { n_particles: 5, tolerance: r, ..Default::default() };
    let records = descents(&GaussianToy::perfect(), &x_ref, &config, 3000, 21);
    let depths: Vec<f64> = records.iter().map(|r| r.depth()).collect();
    let (mean, var) = mean_var(&depths);
    let z = (mean - expected) / (var / depths.len() as f64).sqrt();
    assert!(z.abs() < 4.0, "mean depth {mean} vs {expected}");

    // Poisson counts: mean and variance both N * expected
    let counts: Vec<f64> = records.iter().map(|r| r.iterations() as f64).collect();
    let (k_mean, k_var) = mean_var(&counts);
    let lambda = 5.0 * expected;
    let n = counts.len() as f64;
    assert!(((k_mean - lambda) / (lambda / n).sqrt()).abs() < 4.0);
    // Var of a Poisson sample variance is about (lambda + 2 lambda^2) / n
    assert!(((k_var - lambda) / ((lambda + 2.0 * lambda * lambda) / n).sqrt()).abs() < 4.0);
}

#[test]
fn mcmc_depth_matches_perfect_depth_on_uniform_toy() {
    // near the edge, where the constrained region is one-sided
    let (x_ref, r): (f64, f64) = (0.0005, 0.001);
    let expected = -(x_ref + r).ln();
    let config = DescentConfig { tolerance: r, mcmc_steps: 200, ..Default::default() };
    let depths: Vec<f64> = descents(&UniformToy::default(), &x_ref, &config, 1000, 22).iter().map(|r| r.depth()).collect();
    let (mean, var) = mean_var(&depths);
    let z = (mean - expected) / (var / depths.len() as f64).sqrt();
    assert!(z.abs() < 4.0, "mean depth {mean} vs {expected} (z = {z:.2})");
}

#[test]
fn one_sided_plateau_compresses_at_the_poisson_rate() {
    // P(x in [x_ref - r, x_ref]) for x_ref = 0.5 and r = 0.1 is 0.1; half the
    // mass sits on the +inf plateau above the reference
    let model = UniformToy { distance: nestdepth::DistanceKind::OneSided, perfect: false };
    let config = DescentConfig { tolerance: 0.1, mcmc_steps: 100, ..Default::default() };
    let depths: Vec<f64> = descents(&model, &0.5, &config, 1500, 23).iter().map(|r| r.depth()).collect();
    let (mean, var) = mean_var(&depths);
    let expected = 10f64.ln();
    let z = (mean - expected) / (var / depths.len() as f64).sqrt();
    assert!(z.abs() < 4.0, "mean depth {mean} vs {expected} (z = {z:.2})");
}

#[test]
fn conditional_mode_requires_support() {
    let config = DescentConfig { mode: Mode::ConditionalEntropy, ..Default::default() };
    let err = run_descent(&UniformToy::default(), &0.5, &config, 0, &mut rep_rng(0, 0, Purpose::Descent));
    assert!(err.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn depth_at_is_nonincreasing_in_tolerance(
        mut discarded in prop::collection::vec(0.0f64..10.0, 0..50),
        n in 1usize..20,
        t1 in 0.0f64..10.0,
        t2 in 0.0f64..10.0,
    ) {
        discarded.sort_by(|a, b| b.total_cmp(a));
        let record = DepthRecord {
            rep_id: 0,
            discarded,
            n_particles: n,
            run_tolerance: 0.0,
            mode: Mode::Entropy,
            terminated_by: Termination::ToleranceReached,
        };
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        prop_assert!(depth_at(&record, lo).unwrap() >= depth_at(&record, hi).unwrap());
    }

    #[test]
    fn descents_never_accept_a_worse_level(
        seed in any::<u64>(),
        n in 1usize..6,
        steps in 1usize..30,
        tol in 1e-3f64..0.5,
        x_ref in -2.0f64..2.0,
    ) {
        let config = DescentConfig { n_particles: n, mcmc_steps: steps, tolerance: tol, ..Default::default() };
        let record = run_descent(&GaussianToy::default(), &x_ref, &config, 0, &mut rep_rng(seed, 0, Purpose::Descent)).unwrap();
        prop_assert!(record.discarded.windows(2).all(|w| w[1] <= w[0]));
        prop_assert!(record.discarded.iter().all(|&d| d > tol));
        prop_assert_eq!(depth_at(&record, tol).unwrap(), record.discarded.len() as f64 / n as f64);
    }
}
