//! Prior over datasets for the Normal-mean problem.
//!
//! `mu ~ Normal(0, prior_sd^2)`, `x_i | mu ~ Normal(mu, noise_sd^2)`. The
//! particle carries both; the distance looks only at the data, so `mu` is a
//! latent variable that lets the sampler move through the marginal `p(x)`.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{heavy_tailed_step, normal_log_density, random_subset};
use crate::model::{Geometry, Mode, Model};

#[derive(Debug, Clone, PartialEq)]
pub struct NormalMeanParticle {
    pub mu: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub struct NormalMeanModel {
    pub n: usize,
    pub prior_sd: f64,
    pub noise_sd: f64,
}

impl Default for NormalMeanModel {
    fn default() -> Self {
        Self { n: 100, prior_sd: 10.0, noise_sd: 1.0 }
    }
}

/// Proposal kinds, picked uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Move {
    /// Move `mu` with the data fixed.
    Mean,
    /// Move `mu` and shift every data point by the same amount.
    Shift,
    /// Resample a subset of the data from `p(x | mu)`.
    Resample,
    /// Nudge one data point.
    Single,
}

impl NormalMeanModel {
    pub fn new(n: usize, prior_sd: f64, noise_sd: f64) -> Self {
        Self { n, prior_sd, noise_sd }
    }

    fn data_log_likelihood(&self, x: &[f64], mu: f64) -> f64 {
        x.iter().map(|&xi| normal_log_density(xi, mu, self.noise_sd)).sum()
    }

    pub(crate) fn propose<R: Rng + ?Sized>(
        &self,
        p: &NormalMeanParticle,
        kind: Move,
        rng: &mut R,
    ) -> (NormalMeanParticle, f64) {
        let mut q = p.clone();
        let log_ratio = match kind {
            Move::Mean => {
                q.mu += self.prior_sd * heavy_tailed_step(rng);
                normal_log_density(q.mu, 0.0, self.prior_sd) - normal_log_density(p.mu, 0.0, self.prior_sd)
                    + self.data_log_likelihood(&q.x, q.mu)
                    - self.data_log_likelihood(&p.x, p.mu)
            }
            Move::Shift => {
                let delta = self.prior_sd * heavy_tailed_step(rng);
                q.mu += delta;
                q.x.iter_mut().for_each(|xi| *xi += delta);
                normal_log_density(q.mu, 0.0, self.prior_sd) - normal_log_density(p.mu, 0.0, self.prior_sd)
            }
            Move::Resample => {
                let noise = Normal::new(q.mu, self.noise_sd).expect("positive noise sd");
                for i in random_subset(rng, self.n) {
                    q.x[i] = noise.sample(rng);
                }
                0.0
            }
            Move::Single => {
                let i = rng.gen_range(0..self.n);
                q.x[i] += self.noise_sd * heavy_tailed_step(rng);
                normal_log_density(q.x[i], q.mu, self.noise_sd) - normal_log_density(p.x[i], p.mu, self.noise_sd)
            }
        };
        (q, log_ratio)
    }
}

impl Model for NormalMeanModel {
    type Particle = NormalMeanParticle;

    fn name(&self) -> &str {
        "normal-mean"
    }

    fn geometry(&self) -> Geometry {
        Geometry::l2(self.n)
    }

    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> NormalMeanParticle {
        let mu = Normal::new(0.0, self.prior_sd).expect("positive prior sd").sample(rng);
        let noise = Normal::new(mu, self.noise_sd).expect("positive noise sd");
        let x = (0..self.n).map(|_| noise.sample(rng)).collect();
        NormalMeanParticle { mu, x }
    }

    fn explore<R: Rng + ?Sized>(
        &self,
        p: &NormalMeanParticle,
        rng: &mut R,
        _: Mode,
        _: &NormalMeanParticle,
    ) -> (NormalMeanParticle, f64) {
        let kind = match rng.gen_range(0..4) {
            0 => Move::Mean,
            1 => Move::Shift,
            2 => Move::Resample,
            _ => Move::Single,
        };
        self.propose(p, kind, rng)
    }

    fn distance(&self, p: &NormalMeanParticle, reference: &NormalMeanParticle) -> f64 {
        p.x.iter()
            .zip(&reference.x)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    fn summary(&self, p: &NormalMeanParticle) -> Vec<f64> {
        let mean = p.x.iter().sum::<f64>() / self.n as f64;
        vec![p.mu, mean]
    }
}

/// Closed-form differential entropy of the data's marginal distribution,
/// `H(x) = H(x | mu) + I(mu; x)`.
///
/// Given `mu` the data are iid, so `H(x | mu) = n/2 ln(2 pi e noise_sd^2)`.
/// The posterior of `mu` is Gaussian with variance
/// `1 / (1/prior_sd^2 + n/noise_sd^2)` whatever the data, so
/// `I(mu; x) = 1/2 ln(prior variance / posterior variance)`.
pub fn normal_mean_true_entropy(model: &NormalMeanModel) -> f64 {
    let n = model.n as f64;
    let noise_var = model.noise_sd * model.noise_sd;
    let prior_var = model.prior_sd * model.prior_sd;
    let conditional = 0.5 * n * (2.0 * std::f64::consts::PI * std::f64::consts::E * noise_var).ln();
    if prior_var == 0.0 {
        return conditional;
    }
    let posterior_var = 1.0 / (1.0 / prior_var + n / noise_var);
    conditional + 0.5 * (prior_var / posterior_var).ln()
}
