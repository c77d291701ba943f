//! Noisy sinusoid observed on a fixed schedule.
//!
//! `ln A ~ N(0, 0.1^2)`, `tau = log10 T ~ U(-1, 0)`, `phi ~ U(0, 2 pi)` and
//! `Y_i ~ N(A sin(2 pi t_i / T + phi), 0.1^2)`. The distance is on `tau` only,
//! so amplitude and phase are nuisance parameters. In conditional mode the
//! data are clamped to the reference's and the particles explore the
//! posterior of `(A, tau, phi)`.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{heavy_tailed_step, normal_log_density, random_subset};
use crate::model::{DistanceKind, Geometry, Mode, Model};

const N_OBS: usize = 101;
const LN_A_SD: f64 = 0.1;
const NOISE_SD: f64 = 0.1;
const TAU_MIN: f64 = -1.0;
const TAU_MAX: f64 = 0.0;

/// Observation times.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schedule {
    /// `t_i = (i - 1) / (n - 1)`: 0 to 1 inclusive.
    Even,
    /// `t_i = ((i - 1/2) / n)^3`: dense early, sparse late.
    Uneven,
}

impl Schedule {
    pub fn times(self, n: usize) -> Vec<f64> {
        let nf = n as f64;
        (1..=n)
            .map(|i| {
                let i = i as f64;
                match self {
                    Schedule::Even => (i - 1.0) / (nf - 1.0),
                    Schedule::Uneven => ((i - 0.5) / nf).powi(3),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SinusoidParticle {
    pub ln_a: f64,
    pub tau: f64,
    pub phi: f64,
    pub y: Vec<f64>,
    /// `ln p(y | A, tau, phi)`, kept in sync with the fields above.
    log_likelihood: f64,
}

impl SinusoidParticle {
    pub fn log_likelihood(&self) -> f64 {
        self.log_likelihood
    }
}

#[derive(Debug, Clone)]
pub struct SinusoidModel {
    schedule: Schedule,
    times: Vec<f64>,
    pub distance: DistanceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Param {
    LnA,
    Tau,
    Phi,
}

impl SinusoidModel {
    pub fn new(schedule: Schedule) -> Self {
        Self { schedule, times: schedule.times(N_OBS), distance: DistanceKind::TwoSided }
    }

    pub fn with_distance(mut self, distance: DistanceKind) -> Self {
        self.distance = distance;
        self
    }

    pub fn schedule(&self) -> Schedule {
        self.schedule
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn signal(&self, ln_a: f64, tau: f64, phi: f64, t: f64) -> f64 {
        let period = 10f64.powf(tau);
        ln_a.exp() * (2.0 * PI * t / period + phi).sin()
    }

    pub fn log_likelihood(&self, ln_a: f64, tau: f64, phi: f64, y: &[f64]) -> f64 {
        self.times
            .iter()
            .zip(y)
            .map(|(&t, &yi)| normal_log_density(yi, self.signal(ln_a, tau, phi, t), NOISE_SD))
            .sum()
    }

    /// Log prior density of `(ln A, tau, phi)`; `-inf` outside the support.
    pub fn log_prior(&self, ln_a: f64, tau: f64, phi: f64) -> f64 {
        if !(TAU_MIN..=TAU_MAX).contains(&tau) || !(0.0..2.0 * PI).contains(&phi) {
            return f64::NEG_INFINITY;
        }
        normal_log_density(ln_a, 0.0, LN_A_SD) - (2.0 * PI).ln()
    }

    /// Builds a particle from parameters and data, filling the cached likelihood.
    pub fn particle(&self, ln_a: f64, tau: f64, phi: f64, y: Vec<f64>) -> SinusoidParticle {
        let log_likelihood = self.log_likelihood(ln_a, tau, phi, &y);
        SinusoidParticle { ln_a, tau, phi, y, log_likelihood }
    }

    fn simulate<R: Rng + ?Sized>(&self, ln_a: f64, tau: f64, phi: f64, rng: &mut R) -> Vec<f64> {
        let noise = Normal::new(0.0, NOISE_SD).expect("positive noise");
        self.times
            .iter()
            .map(|&t| self.signal(ln_a, tau, phi, t) + noise.sample(rng))
            .collect()
    }

    /// Moves one parameter by `step` (in units of that parameter's scale) with
    /// the data held fixed. Returns the proposal and its log acceptance ratio
    /// against prior times likelihood.
    pub(crate) fn move_parameter(&self, p: &SinusoidParticle, which: Param, step: f64) -> (SinusoidParticle, f64) {
        let (mut ln_a, mut tau, mut phi) = (p.ln_a, p.tau, p.phi);
        match which {
            Param::LnA => ln_a += LN_A_SD * step,
            Param::Tau => tau += (TAU_MAX - TAU_MIN) * step,
            Param::Phi => phi = (phi + 2.0 * PI * step).rem_euclid(2.0 * PI),
        }
        let log_prior = self.log_prior(ln_a, tau, phi);
        if log_prior == f64::NEG_INFINITY {
            return (p.clone(), f64::NEG_INFINITY);
        }
        if step == 0.0 {
            return (p.clone(), 0.0);
        }
        let q = self.particle(ln_a, tau, phi, p.y.clone());
        let log_ratio = log_prior - self.log_prior(p.ln_a, p.tau, p.phi) + q.log_likelihood - p.log_likelihood;
        (q, log_ratio)
    }

    fn random_parameter_move<R: Rng + ?Sized>(&self, p: &SinusoidParticle, rng: &mut R) -> (SinusoidParticle, f64) {
        let which = match rng.gen_range(0..3) {
            0 => Param::LnA,
            1 => Param::Tau,
            _ => Param::Phi,
        };
        self.move_parameter(p, which, heavy_tailed_step(rng))
    }
}

impl Model for SinusoidModel {
    type Particle = SinusoidParticle;

    fn name(&self) -> &str {
        match self.schedule {
            Schedule::Even => "sinusoid-even",
            Schedule::Uneven => "sinusoid-uneven",
        }
    }

    fn geometry(&self) -> Geometry {
        self.distance.scalar_geometry()
    }

    fn supports(&self, _: Mode) -> bool {
        true
    }

    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> SinusoidParticle {
        let ln_a = LN_A_SD * rng.sample::<f64, _>(rand_distr::StandardNormal);
        let tau = rng.gen_range(TAU_MIN..TAU_MAX);
        let phi = rng.gen_range(0.0..2.0 * PI);
        let y = self.simulate(ln_a, tau, phi, rng);
        self.particle(ln_a, tau, phi, y)
    }

    fn explore<R: Rng + ?Sized>(
        &self,
        p: &SinusoidParticle,
        rng: &mut R,
        mode: Mode,
        _: &SinusoidParticle,
    ) -> (SinusoidParticle, f64) {
        match mode {
            // data stay clamped: p.y is the reference's data throughout
            Mode::ConditionalEntropy => self.random_parameter_move(p, rng),
            Mode::Entropy => {
                if rng.gen_bool(0.5) {
                    self.random_parameter_move(p, rng)
                } else {
                    let mut y = p.y.clone();
                    let noise = Normal::new(0.0, NOISE_SD).expect("positive noise");
                    for i in random_subset(rng, N_OBS) {
                        y[i] = self.signal(p.ln_a, p.tau, p.phi, self.times[i]) + noise.sample(rng);
                    }
                    (self.particle(p.ln_a, p.tau, p.phi, y), 0.0)
                }
            }
        }
    }

    fn distance(&self, p: &SinusoidParticle, reference: &SinusoidParticle) -> f64 {
        self.distance.measure(p.tau, reference.tau)
    }

    fn summary(&self, p: &SinusoidParticle) -> Vec<f64> {
        vec![p.ln_a.exp(), p.tau, p.phi]
    }
}
