//! One-dimensional oracle models.
//!
//! Both toys have closed-form interval probabilities and can optionally
//! replace MCMC with an exact draw from the constrained distribution, which
//! makes the depth count exactly Poisson.

use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{ContinuousCDF, Normal};

use super::heavy_tailed_step;
use crate::model::{DistanceKind, Geometry, Mode, Model};

/// `Uniform[0, 1]` scalar.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformToy {
    pub distance: DistanceKind,
    /// Replace MCMC with exact constrained draws (two-sided distance only).
    pub perfect: bool,
}

impl UniformToy {
    pub fn perfect() -> Self {
        Self { perfect: true, ..Self::default() }
    }

    /// `P(distance(x, x_ref) < r)` for `x ~ Uniform[0, 1]`.
    pub fn interval_probability(&self, x_ref: f64, r: f64) -> f64 {
        match self.distance {
            DistanceKind::TwoSided => (x_ref + r).min(1.0) - (x_ref - r).max(0.0),
            DistanceKind::OneSided => x_ref.clamp(0.0, 1.0) - (x_ref - r).clamp(0.0, 1.0),
        }
    }
}

impl Model for UniformToy {
    type Particle = f64;

    fn name(&self) -> &str {
        "uniform-toy"
    }

    fn geometry(&self) -> Geometry {
        self.distance.scalar_geometry()
    }

    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.gen()
    }

    fn explore<R: Rng + ?Sized>(&self, x: &f64, rng: &mut R, _: Mode, _: &f64) -> (f64, f64) {
        let proposal = x + heavy_tailed_step(rng);
        let log_ratio = if (0.0..=1.0).contains(&proposal) { 0.0 } else { f64::NEG_INFINITY };
        (proposal, log_ratio)
    }

    fn distance(&self, x: &f64, x_ref: &f64) -> f64 {
        self.distance.measure(*x, *x_ref)
    }

    fn summary(&self, x: &f64) -> Vec<f64> {
        vec![*x]
    }

    fn constrained_draw<R: Rng + ?Sized>(&self, x_ref: &f64, max_distance: f64, rng: &mut R) -> Option<f64> {
        if !self.perfect || self.distance != DistanceKind::TwoSided {
            return None;
        }
        let lo = (x_ref - max_distance).max(0.0);
        let hi = (x_ref + max_distance).min(1.0);
        Some(lo + (hi - lo) * rng.gen::<f64>())
    }
}

/// `Normal(0, 1)` scalar.
#[derive(Debug, Clone, Copy, Default)]
pub struct GaussianToy {
    pub distance: DistanceKind,
    /// Replace MCMC with exact constrained draws (two-sided distance only).
    pub perfect: bool,
}

impl GaussianToy {
    pub fn perfect() -> Self {
        Self { perfect: true, ..Self::default() }
    }

    pub fn one_sided() -> Self {
        Self { distance: DistanceKind::OneSided, ..Self::default() }
    }

    fn std_normal() -> Normal {
        Normal::new(0.0, 1.0).expect("unit normal")
    }

    /// `P(distance(x, x_ref) < r)` for `x ~ Normal(0, 1)`.
    pub fn interval_probability(&self, x_ref: f64, r: f64) -> f64 {
        let n = Self::std_normal();
        match self.distance {
            DistanceKind::TwoSided => n.cdf(x_ref + r) - n.cdf(x_ref - r),
            DistanceKind::OneSided => n.cdf(x_ref) - n.cdf(x_ref - r),
        }
    }

    /// Differential entropy of the standard normal, `ln(2 pi e) / 2`.
    pub fn true_entropy() -> f64 {
        0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln()
    }
}

impl Model for GaussianToy {
    type Particle = f64;

    fn name(&self) -> &str {
        "gaussian-toy"
    }

    fn geometry(&self) -> Geometry {
        self.distance.scalar_geometry()
    }

    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        rng.sample(StandardNormal)
    }

    fn explore<R: Rng + ?Sized>(&self, x: &f64, rng: &mut R, _: Mode, _: &f64) -> (f64, f64) {
        let proposal = x + heavy_tailed_step(rng);
        (proposal, -0.5 * (proposal * proposal - x * x))
    }

    fn distance(&self, x: &f64, x_ref: &f64) -> f64 {
        self.distance.measure(*x, *x_ref)
    }

    fn summary(&self, x: &f64) -> Vec<f64> {
        vec![*x]
    }

    fn constrained_draw<R: Rng + ?Sized>(&self, x_ref: &f64, max_distance: f64, rng: &mut R) -> Option<f64> {
        if !self.perfect || self.distance != DistanceKind::TwoSided {
            return None;
        }
        // inverse-CDF draw restricted to (x_ref - d, x_ref + d)
        let n = Self::std_normal();
        let lo = n.cdf(x_ref - max_distance);
        let hi = n.cdf(x_ref + max_distance);
        let u = lo + (hi - lo) * rng.gen::<f64>();
        let x = n.inverse_cdf(u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON));
        Some(x.clamp(x_ref - max_distance, x_ref + max_distance))
    }
}
