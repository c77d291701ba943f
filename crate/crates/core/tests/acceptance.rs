//! Acceptance criteria. Each test prints one `PASS`/`FAIL` line.
//!
//! Criteria 5, 6 and 7 are slow and ignored by default:
//!
//! ```text
//! cargo test --release -p nestdepth --test acceptance -- --ignored --nocapture
//! ```

use std::f64::consts::{E, LN_10, PI};

use nestdepth::estimator::{self, aggregate, ball_log_volume, differential_entropy, DepthSeries};
use nestdepth::model::{Geometry, Metric, Mode, Model};
use nestdepth::models::{GaussianToy, NormalMeanModel, ParetoModel, ParetoTarget, Schedule, SinusoidModel, UniformToy};
use nestdepth::precisional::{precisional_entropy_continuous, precisional_entropy_via_sampler, Cdf1D};
use nestdepth::records;
use nestdepth::runner::{collect_reps, run_reps};
use nestdepth::sampler::{depth_at, depth_std_error_theoretical, run_descent, DepthRecord, DescentConfig};
use nestdepth::seeding::{rep_rng, Purpose};

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn report(id: u32, what: &str, pass: bool, detail: String) {
    println!("{} C{id:<2} {what}: {detail}", if pass { "PASS" } else { "FAIL" });
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// `|estimate - target| <= k * se`, printed as a z-score.
fn within(estimate: f64, se: f64, target: f64, k: f64) -> (bool, String) {
    let z = (estimate - target) / se;
    (z.abs() <= k, format!("{estimate:.4} ± {se:.4} vs {target} (z = {z:+.2}, limit {k})"))
}

#[test]
fn c01_ball_log_volume() {
    let l2 = ball_log_volume(Geometry::l2(100), 0.01).unwrap();
    // independent: (n/2) ln(pi r^2) - ln((n/2)!) with 50! summed directly
    let ln_50_fact: f64 = (1..=50).map(|k| (k as f64).ln()).sum();
    let oracle = 50.0 * (PI * 1e-4).ln() - ln_50_fact;
    let interval = ball_log_volume(Geometry::interval(1), 1e-5).unwrap();
    let pass = (l2 - (-551.76)).abs() <= 0.01 && (interval - (-10.820)).abs() <= 0.001 && (l2 - oracle).abs() < 1e-9;
    report(1, "ball log-volume", pass, format!("l2(100, 0.01) = {l2:.4}, interval(1, 1e-5) = {interval:.4}"));
    assert!(pass);
}

#[test]
fn c02_gaussian_toy_entropy() {
    let model = GaussianToy::default();
    let config = DescentConfig { n_particles: 10, mcmc_steps: 1000, tolerance: 1e-3, ..Default::default() };
    let records = collect_reps(&model, &config, 2, 200, threads()).unwrap();
    let depth = aggregate(&records, 1e-3).unwrap();
    let h = differential_entropy(&depth, model.geometry(), 1e-3).unwrap();
    let target = 0.5 * (2.0 * PI * E).ln();
    let (pass, detail) = within(h.value, h.std_error, target, 3.0);
    report(2, "analytic 1-D entropy (Gaussian, MCMC)", pass, detail);
    assert!(pass);
}

/// 2000 perfect descents toward x_ref = 0.3 with r = 0.05, where
/// P(|x - 0.3| < 0.05) = 0.1 exactly.
fn perfect_uniform_descents() -> Vec<DepthRecord> {
    let model = UniformToy::perfect();
    let config = DescentConfig { n_particles: 10, tolerance: 0.05, ..Default::default() };
    (0..2000)
        .map(|rep| run_descent(&model, &0.3, &config, rep, &mut rep_rng(3, rep, Purpose::Descent)).unwrap())
        .collect()
}

#[test]
fn c03_unbiased_poisson_depth() {
    let records = perfect_uniform_descents();
    let depths: Vec<f64> = records.iter().map(|r| r.depth()).collect();
    let (mean, var) = mean_var(&depths);
    let se = (var / depths.len() as f64).sqrt();
    let (mean_ok, detail) = within(mean, se, LN_10, 4.0);

    let counts: Vec<f64> = records.iter().map(|r| r.iterations() as f64).collect();
    let (k_mean, k_var) = mean_var(&counts);
    let dispersion = k_var / k_mean;
    let disp_ok = (0.85..=1.15).contains(&dispersion);
    report(3, "unbiased depth (uniform, perfect)", mean_ok && disp_ok, format!("{detail}; var/mean of k = {dispersion:.3}"));
    assert!(mean_ok && disp_ok);
}

#[test]
fn c04_theoretical_error_bar() {
    let records = perfect_uniform_descents();
    let depths: Vec<f64> = records.iter().map(|r| r.depth()).collect();
    let (mean, var) = mean_var(&depths);
    let empirical = var.sqrt();
    let theory = depth_std_error_theoretical(mean, 10);
    let rel = (empirical - theory).abs() / theory;
    let pass = rel <= 0.15;
    report(4, "single-descent error bar", pass, format!("empirical {empirical:.4} vs sqrt(depth/N) {theory:.4} ({:.1}%)", 100.0 * rel));
    assert!(pass);
}

#[test]
#[ignore = "slow: Normal-mean example, tens of minutes"]
fn c05_normal_mean_entropy() {
    let model = NormalMeanModel::default();
    let tol = 1e-3 * 100f64.sqrt();
    let config = DescentConfig { n_particles: 10, mcmc_steps: 2000, tolerance: tol, depth_cap: 2000.0, ..Default::default() };
    let records = collect_reps(&model, &config, 5, 100, threads()).unwrap();
    let depth = aggregate(&records, tol).unwrap();
    let h = differential_entropy(&depth, model.geometry(), tol).unwrap();
    let (pass, detail) = within(h.value, h.std_error, 146.499, 3.0);
    report(5, "Normal-mean H(x)", pass, detail);
    assert!(pass);
}

#[test]
#[ignore = "slow: sinusoid conditional entropies"]
fn c06_sinusoid_information() {
    let tol = 1e-5;
    let mut all = true;
    for (schedule, target) in [(Schedule::Even, 5.441), (Schedule::Uneven, 5.398)] {
        let model = SinusoidModel::new(schedule);
        let config = DescentConfig { tolerance: tol, mode: Mode::ConditionalEntropy, ..Default::default() };
        let records = collect_reps(&model, &config, 6, 100, threads()).unwrap();
        let h = estimator::conditional_entropy(&records, tol, model.geometry()).unwrap();
        // log10 period is uniform on an interval of length 1, so H(tau) = 0
        let (pass, detail) = within(-h.value, h.std_error, target, 3.0);
        report(6, &format!("sinusoid I(tau; Y), {schedule:?}"), pass, detail);
        all &= pass;
    }
    assert!(all);
}

#[test]
#[ignore = "slow: Pareto depths"]
fn c07_pareto_depths() {
    let tol = 1e-3;
    let reps = 200;
    let config = DescentConfig { tolerance: tol, ..Default::default() };
    let run = |target| collect_reps(&ParetoModel::new(target), &config, 7, reps, threads()).unwrap();
    let (ry, rz, ryz) = (run(ParetoTarget::FirstHalf), run(ParetoTarget::SecondHalf), run(ParetoTarget::Joint));

    let dy = aggregate(&ry, tol).unwrap();
    let dyz = aggregate(&ryz, tol).unwrap();
    let (pass_y, detail_y) = within(dy.mean, dy.std_error, 8.851, 3.0);
    report(7, "Pareto marginal depth", pass_y, detail_y);
    let (pass_yz, detail_yz) = within(dyz.mean, dyz.std_error, 16.03, 3.0);
    report(7, "Pareto joint depth", pass_yz, detail_yz);

    fn series(records: &[DepthRecord], geometry: Geometry) -> DepthSeries<'_> {
        DepthSeries { records, tolerance: 1e-3, geometry }
    }
    let (gy, gyz) = (Geometry::interval(1), Geometry::l2(2));
    let paired =
        estimator::mutual_information_paired(series(&ry, gy), series(&rz, gy), series(&ryz, gyz)).unwrap();
    let (hy, hz, hyz) = (
        series(&ry, gy).entropy().unwrap(),
        series(&rz, gy).entropy().unwrap(),
        series(&ryz, gyz).entropy().unwrap(),
    );
    let combined = hy.value + hz.value - hyz.value;
    let pass_mi = (paired.value - combined).abs() <= 1e-9 * combined.abs().max(1.0);
    report(
        7,
        "Pareto paired MI consistency",
        pass_mi,
        format!("paired {:.6} ± {:.4}, Hy + Hz - Hyz = {combined:.6}", paired.value, paired.std_error),
    );
    assert!(pass_y && pass_yz && pass_mi);
}

#[test]
fn c08_precisional_equivalence() {
    let r = 0.5;
    let exact = precisional_entropy_continuous(&Cdf1D::normal(0.0, 1.0).unwrap(), r).unwrap();
    let variants_ok = (exact.value - exact.right_variant).abs() <= 1e-6;

    let model = GaussianToy::one_sided();
    assert_eq!(model.geometry().metric(), Metric::OneSided);
    let config = DescentConfig { tolerance: r, ..Default::default() };
    let records = collect_reps(&model, &config, 8, 400, threads()).unwrap();
    let via = precisional_entropy_via_sampler(&records, r, model.geometry()).unwrap();
    let (sampler_ok, detail) = within(via.value, via.std_error, exact.value, 3.0);
    report(
        8,
        "precisional equivalence (Normal, r = 0.5)",
        variants_ok && sampler_ok,
        format!("H = {:.8}, H' = {:.8}; sampler {detail}", exact.value, exact.right_variant),
    );
    assert!(variants_ok && sampler_ok);
}

#[test]
fn c09_precisional_uniform_closed_form() {
    let h = precisional_entropy_continuous(&Cdf1D::uniform(0.0, 1.0).unwrap(), 0.1).unwrap();
    let pass = (h.value - 1.40259).abs() <= 1e-4;
    report(9, "precisional closed form (Uniform, r = 0.1)", pass, format!("{:.6} vs 1.40259", h.value));
    assert!(pass);
}

fn record_body(model: &ParetoModel, config: &DescentConfig, threads: usize) -> (Vec<u8>, Vec<DepthRecord>) {
    let mut body = Vec::new();
    let mut kept = Vec::new();
    run_reps(model, config, 10, 12, threads, |r| {
        records::write_record(&mut body, &r)?;
        kept.push(r);
        Ok::<(), std::io::Error>(())
    })
    .unwrap();
    (body, kept)
}

#[test]
fn c10_determinism_and_postprocess() {
    let model = ParetoModel::new(ParetoTarget::FirstHalf);
    let config = DescentConfig { mcmc_steps: 200, tolerance: 1e-2, ..Default::default() };
    let (reference, live) = record_body(&model, &config, 1);
    let identical = [2, 3, 5].into_iter().all(|t| record_body(&model, &config, t).0 == reference);

    let mut consistent = true;
    for r in &live {
        let k_over_n = r.discarded.len() as f64 / r.n_particles as f64;
        consistent &= depth_at(r, config.tolerance).unwrap() == k_over_n;
    }
    report(10, "determinism and depth_at", identical && consistent, format!("bodies identical across 1/2/3/5 threads: {identical}; depth_at == k/N: {consistent}"));
    assert!(identical && consistent);
}
