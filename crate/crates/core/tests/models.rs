//! Kernel correctness for every builtin model.
//!
//! Detailed balance: chains started from direct draws and moved with
//! unconstrained Metropolis steps must still be distributed as direct draws.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nestdepth::model::{metropolis_step, Mode, Model};
use nestdepth::models::{
    GaussianToy, NormalMeanModel, ParetoModel, ParetoParticle, ParetoTarget, Schedule, SinusoidModel, UniformToy,
};

struct Stats {
    n: f64,
    mean: f64,
    var: f64,
}

fn stats(xs: &[f64]) -> Stats {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Stats { n, mean, var }
}

/// Two-sample z for the difference of means.
fn z_means(a: &Stats, b: &Stats) -> f64 {
    (a.mean - b.mean) / (a.var / a.n + b.var / b.n).sqrt()
}

/// Two-sample z for the fraction of `a` below `threshold` against `p`
/// estimated from `b`.
fn z_fraction_below(a: &[f64], b: &[f64], threshold: f64) -> f64 {
    let fa = a.iter().filter(|&&x| x < threshold).count() as f64 / a.len() as f64;
    let fb = b.iter().filter(|&&x| x < threshold).count() as f64 / b.len() as f64;
    let p = 0.5 * (fa + fb);
    let se = (p * (1.0 - p) * (1.0 / a.len() as f64 + 1.0 / b.len() as f64)).sqrt();
    if se == 0.0 {
        0.0
    } else {
        (fa - fb) / se
    }
}

fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

/// Runs `chains` chains of `steps` unconstrained steps from direct draws
/// and compares each summary coordinate with fresh direct draws: means, and
/// the fractions below the direct-draw quartiles. Returns the acceptance rate.
fn detailed_balance<M: Model>(model: &M, mode: Mode, chains: usize, steps: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moved = Vec::new();
    let mut direct = Vec::new();
    let mut accepted = 0usize;
    for _ in 0..chains {
        let start = model.draw_reference(&mut rng);
        let mut p = start.clone();
        for _ in 0..steps {
            let (next, ok) = metropolis_step(model, &p, &mut rng, mode, &start);
            accepted += ok as usize;
            p = next;
        }
        moved.push(model.summary(&p));
        direct.push(model.summary(&model.draw_reference(&mut rng)));
    }
    for c in 0..moved[0].len() {
        let a: Vec<f64> = moved.iter().map(|s| s[c]).collect();
        let b: Vec<f64> = direct.iter().map(|s| s[c]).collect();
        let z = z_means(&stats(&a), &stats(&b));
        assert!(z.abs() < 4.0, "{} coordinate {c}: mean z = {z:.2}", model.name());
        for q in [0.25, 0.5, 0.75] {
            let z = z_fraction_below(&a, &b, quantile(&b, q));
            assert!(z.abs() < 4.0, "{} coordinate {c}: quantile {q} z = {z:.2}", model.name());
        }
    }
    accepted as f64 / (chains * steps) as f64
}

#[test]
fn uniform_toy_detailed_balance() {
    let rate = detailed_balance(&UniformToy::default(), Mode::Entropy, 4000, 50, 1);
    assert!(rate > 0.05);
}

#[test]
fn gaussian_toy_detailed_balance() {
    let rate = detailed_balance(&GaussianToy::default(), Mode::Entropy, 4000, 50, 2);
    assert!(rate > 0.05);
}

#[test]
fn normal_mean_detailed_balance() {
    let rate = detailed_balance(&NormalMeanModel::default(), Mode::Entropy, 2000, 200, 3);
    assert!(rate > 0.05);
}

#[test]
fn sinusoid_prior_detailed_balance() {
    for (schedule, seed) in [(Schedule::Even, 4), (Schedule::Uneven, 5)] {
        let rate = detailed_balance(&SinusoidModel::new(schedule), Mode::Entropy, 2000, 200, seed);
        assert!(rate > 0.05);
    }
}

/// Posterior chains averaged over datasets drawn from the joint prior are
/// distributed as the prior.
#[test]
fn sinusoid_posterior_kernel_preserves_prior_on_average() {
    let model = SinusoidModel::new(Schedule::Even);
    let rate = detailed_balance(&model, Mode::ConditionalEntropy, 2000, 200, 6);
    assert!(rate > 0.01);
}

#[test]
fn pareto_detailed_balance() {
    let rate = detailed_balance(&ParetoModel::new(ParetoTarget::Joint), Mode::Entropy, 3000, 200, 7);
    assert!(rate > 0.05);
}

#[test]
fn normal_mean_sum_variance() {
    // sum x = 100 mu + sum(noise): variance 100^2 * 10^2 + 100 = 1000100
    let model = NormalMeanModel::default();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let sums: Vec<f64> = (0..100_000).map(|_| model.draw_reference(&mut rng).x.iter().sum()).collect();
    let s = stats(&sums);
    let expected = 1_000_100.0;
    // Var of a sample variance of Gaussian data is 2 sigma^4 / (n - 1)
    let se = expected * (2.0 / (s.n - 1.0)).sqrt();
    assert!(((s.var - expected) / se).abs() < 4.0, "var {}", s.var);
    assert!((s.mean / (expected / s.n).sqrt()).abs() < 4.0);
}

#[test]
fn pareto_trimmed_log_total_matches_forward_draws() {
    let model = ParetoModel::new(ParetoTarget::FirstHalf);
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let forward: Vec<f64> = (0..1_000_000).map(|_| model.draw_reference(&mut rng).ln_y_tot()).collect();
    let (lo, hi) = (quantile(&forward, 0.01), quantile(&forward, 0.99));
    let trim = |xs: &[f64]| xs.iter().map(|x| x.clamp(lo, hi)).collect::<Vec<_>>();

    let mut chained = Vec::new();
    for _ in 0..3000 {
        let mut p: ParetoParticle = model.draw_reference(&mut rng);
        let start = p.clone();
        for _ in 0..300 {
            p = metropolis_step(&model, &p, &mut rng, Mode::Entropy, &start).0;
            assert!(p.x.iter().all(|&x| x > 1.0));
        }
        chained.push(p.ln_y_tot());
    }
    let (a, b) = (stats(&trim(&chained)), stats(&trim(&forward)));
    let z_mean = z_means(&a, &b);
    // variance of a sample variance, estimated from the fourth central moment
    let trimmed = trim(&chained);
    let m4 = trimmed.iter().map(|x| (x - a.mean).powi(4)).sum::<f64>() / a.n;
    let se_var = ((m4 - a.var * a.var) / a.n).sqrt();
    let z_var = (a.var - b.var) / se_var;
    assert!(z_mean.abs() < 4.0, "trimmed mean z = {z_mean:.2}");
    assert!(z_var.abs() < 4.0, "trimmed variance z = {z_var:.2}");
}

/// Posterior mean of tau for one dataset by direct quadrature.
///
/// For fixed tau the signal is linear in `(a, b) = (A cos phi, A sin phi)`,
/// so the likelihood is Gaussian in `(a, b)`. Each tau slice integrates the
/// prior against that Gaussian on a whitened grid.
fn grid_posterior_tau_mean(times: &[f64], y: &[f64], noise_sd: f64, ln_a_sd: f64) -> f64 {
    let n_tau = 100_000;
    let mut log_w = Vec::with_capacity(n_tau);
    let mut taus = Vec::with_capacity(n_tau);
    for k in 0..n_tau {
        let tau = -1.0 + (k as f64 + 0.5) / n_tau as f64;
        let omega = 2.0 * PI / 10f64.powf(tau);
        let (mut sss, mut ssc, mut scc, mut sys, mut syc, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
        for (&t, &yi) in times.iter().zip(y) {
            let (s, c) = (omega * t).sin_cos();
            sss += s * s;
            ssc += s * c;
            scc += c * c;
            sys += yi * s;
            syc += yi * c;
            syy += yi * yi;
        }
        let det = sss * scc - ssc * ssc;
        let a_hat = (scc * sys - ssc * syc) / det;
        let b_hat = (sss * syc - ssc * sys) / det;
        let rss = syy - a_hat * sys - b_hat * syc;
        // covariance noise_sd^2 M^-1 and its Cholesky factor
        let (caa, cab, cbb) = (scc / det * noise_sd.powi(2), -ssc / det * noise_sd.powi(2), sss / det * noise_sd.powi(2));
        let l11 = caa.sqrt();
        let l21 = cab / l11;
        let l22 = (cbb - l21 * l21).sqrt();

        let m = 24;
        let h = 12.0 / m as f64;
        let mut integral = 0.0;
        for i in 0..=m {
            for j in 0..=m {
                let (z1, z2) = (-6.0 + i as f64 * h, -6.0 + j as f64 * h);
                let a = a_hat + l11 * z1;
                let b = b_hat + l21 * z1 + l22 * z2;
                let amp2 = a * a + b * b;
                let ln_amp = 0.5 * amp2.ln();
                // prior density in (a, b): N(ln A; 0, sd) / (2 pi A^2)
                let prior = (-0.5 * (ln_amp / ln_a_sd).powi(2)).exp() / (ln_a_sd * (2.0 * PI).sqrt()) / (2.0 * PI * amp2);
                integral += (-0.5 * (z1 * z1 + z2 * z2)).exp() * prior;
            }
        }
        let log_evidence = -rss / (2.0 * noise_sd.powi(2)) + (l11 * l22 * integral * h * h).ln();
        taus.push(tau);
        log_w.push(log_evidence);
    }
    let max = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (mut num, mut den) = (0.0, 0.0);
    for (tau, lw) in taus.iter().zip(&log_w) {
        let w = (lw - max).exp();
        num += tau * w;
        den += w;
    }
    num / den
}

#[test]
fn sinusoid_posterior_tau_matches_grid_quadrature() {
    let model = SinusoidModel::new(Schedule::Even);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let reference = model.particle(0.0, -0.4, 1.0, {
        let noise = rand_distr::Normal::new(0.0, 0.1).unwrap();
        model.times().iter().map(|&t| (2.0 * PI * t / 10f64.powf(-0.4) + 1.0).sin() + rng.sample(noise)).collect()
    });
    let oracle = grid_posterior_tau_mean(model.times(), &reference.y, 0.1, 0.1);

    let taus: Vec<f64> = (0..200)
        .map(|_| {
            let mut p = reference.clone();
            for _ in 0..3000 {
                p = metropolis_step(&model, &p, &mut rng, Mode::ConditionalEntropy, &reference).0;
            }
            assert_eq!(p.y, reference.y);
            p.tau
        })
        .collect();
    let s = stats(&taus);
    let z = (s.mean - oracle) / (s.var / s.n).sqrt();
    assert!(z.abs() < 4.0, "chain mean {} vs grid {oracle} (z = {z:.2})", s.mean);
    assert!((oracle - (-0.4)).abs() < 0.01, "high-SNR posterior should sit near the truth");
}
