//! Pareto data with an unknown slope.
//!
//! `ln alpha ~ N(0, 1)` and `p(x | alpha) = prod alpha / x_i^(alpha + 1)` for
//! `x_i > 1`. The quantities of interest are the log totals of the two halves
//! of the data, `ln y_tot` and `ln z_tot`.

use rand::Rng;
use rand_distr::StandardNormal;

use super::{heavy_tailed_step, normal_log_density, random_subset};
use crate::model::{DistanceKind, Geometry, Mode, Model};

const N_DATA: usize = 100;
const HALF: usize = N_DATA / 2;

/// Which log total(s) the distance is measured on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParetoTarget {
    /// `ln y_tot`, the first half.
    FirstHalf,
    /// `ln z_tot`, the second half.
    SecondHalf,
    /// Euclidean distance on `(ln y_tot, ln z_tot)`.
    Joint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParetoParticle {
    pub alpha: f64,
    pub x: Vec<f64>,
}

impl ParetoParticle {
    pub fn ln_y_tot(&self) -> f64 {
        self.x[..HALF].iter().sum::<f64>().ln()
    }

    pub fn ln_z_tot(&self) -> f64 {
        self.x[HALF..].iter().sum::<f64>().ln()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct ParetoModel {
    pub target: ParetoTarget,
    pub distance: DistanceKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Move {
    /// New alpha, every x moved to the same quantile under the new alpha.
    Slope,
    /// Resample a subset of x from `Pareto(alpha)`.
    Resample,
    /// Nudge one `ln x_i`.
    Single,
}

fn pareto_draw<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    // inverse CDF; 1 - U is in (0, 1]
    (1.0 - rng.gen::<f64>()).powf(-1.0 / alpha)
}

fn pareto_log_density(x: f64, alpha: f64) -> f64 {
    alpha.ln() - (alpha + 1.0) * x.ln()
}

impl ParetoModel {
    pub fn new(target: ParetoTarget) -> Self {
        Self { target, distance: DistanceKind::TwoSided }
    }

    pub fn with_distance(mut self, distance: DistanceKind) -> Self {
        self.distance = distance;
        self
    }

    pub fn log_joint(&self, p: &ParetoParticle) -> f64 {
        // density of (ln alpha, x)
        normal_log_density(p.alpha.ln(), 0.0, 1.0) + p.x.iter().map(|&x| pareto_log_density(x, p.alpha)).sum::<f64>()
    }

    /// Quantile-preserving slope change. The acceptance ratio is computed in
    /// full (target ratio plus log-Jacobian of the map on x) even though it
    /// reduces to the prior ratio on `ln alpha`.
    pub(crate) fn rescale(&self, p: &ParetoParticle, ln_alpha_step: f64) -> (ParetoParticle, f64) {
        let alpha_new = (p.alpha.ln() + ln_alpha_step).exp();
        let power = p.alpha / alpha_new;
        let x: Vec<f64> = p.x.iter().map(|&xi| xi.powf(power)).collect();
        if x.iter().any(|&xi| !(xi > 1.0) || !xi.is_finite()) {
            return (p.clone(), f64::NEG_INFINITY);
        }
        // d x' / d x = power * x^(power - 1)
        let log_jacobian: f64 = p.x.iter().map(|&xi| power.ln() + (power - 1.0) * xi.ln()).sum();
        let q = ParetoParticle { alpha: alpha_new, x };
        let log_ratio = self.log_joint(&q) - self.log_joint(p) + log_jacobian;
        (q, log_ratio)
    }

    pub(crate) fn propose<R: Rng + ?Sized>(&self, p: &ParetoParticle, kind: Move, rng: &mut R) -> (ParetoParticle, f64) {
        match kind {
            Move::Slope => self.rescale(p, heavy_tailed_step(rng)),
            Move::Resample => {
                let mut q = p.clone();
                for i in random_subset(rng, N_DATA) {
                    q.x[i] = pareto_draw(q.alpha, rng);
                }
                (q, 0.0)
            }
            Move::Single => {
                // random walk on ln x_i; the Jacobian of x = exp(u) adds (u' - u)
                let i = rng.gen_range(0..N_DATA);
                let u = p.x[i].ln();
                let u_new = u + heavy_tailed_step(rng);
                if !(u_new > 0.0) {
                    return (p.clone(), f64::NEG_INFINITY);
                }
                let mut q = p.clone();
                q.x[i] = u_new.exp();
                if !q.x[i].is_finite() || !(q.x[i] > 1.0) {
                    return (p.clone(), f64::NEG_INFINITY);
                }
                (q, -p.alpha * (u_new - u))
            }
        }
    }

    fn project(&self, p: &ParetoParticle) -> f64 {
        match self.target {
            ParetoTarget::FirstHalf => p.ln_y_tot(),
            ParetoTarget::SecondHalf => p.ln_z_tot(),
            ParetoTarget::Joint => unreachable!("joint target has no scalar projection"),
        }
    }
}

impl Model for ParetoModel {
    type Particle = ParetoParticle;

    fn name(&self) -> &str {
        match self.target {
            ParetoTarget::FirstHalf => "pareto-marginal",
            ParetoTarget::SecondHalf => "pareto-marginal-z",
            ParetoTarget::Joint => "pareto-joint",
        }
    }

    fn geometry(&self) -> Geometry {
        match self.target {
            ParetoTarget::Joint => Geometry::l2(2),
            _ => self.distance.scalar_geometry(),
        }
    }

    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> ParetoParticle {
        let alpha = rng.sample::<f64, _>(StandardNormal).exp();
        let x = (0..N_DATA).map(|_| pareto_draw(alpha, rng)).collect();
        ParetoParticle { alpha, x }
    }

    fn explore<R: Rng + ?Sized>(&self, p: &ParetoParticle, rng: &mut R, _: Mode, _: &ParetoParticle) -> (ParetoParticle, f64) {
        let kind = match rng.gen_range(0..3) {
            0 => Move::Slope,
            1 => Move::Resample,
            _ => Move::Single,
        };
        self.propose(p, kind, rng)
    }

    fn distance(&self, p: &ParetoParticle, reference: &ParetoParticle) -> f64 {
        match self.target {
            ParetoTarget::Joint => {
                let dy = p.ln_y_tot() - reference.ln_y_tot();
                let dz = p.ln_z_tot() - reference.ln_z_tot();
                dy.hypot(dz)
            }
            _ => self.distance.measure(self.project(p), self.project(reference)),
        }
    }

    fn summary(&self, p: &ParetoParticle) -> Vec<f64> {
        vec![p.alpha, p.ln_y_tot(), p.ln_z_tot()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn slope_move_ratio_is_prior_ratio() {
        let m = ParetoModel::new(ParetoTarget::Joint);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let p = m.draw_reference(&mut rng);
            let step = 0.3 * rng.sample::<f64, _>(StandardNormal);
            let (q, lr) = m.rescale(&p, step);
            if lr == f64::NEG_INFINITY {
                continue;
            }
            let prior = normal_log_density(q.alpha.ln(), 0.0, 1.0) - normal_log_density(p.alpha.ln(), 0.0, 1.0);
            assert!((lr - prior).abs() < 1e-6 * (1.0 + prior.abs()), "{lr} vs {prior}");
        }
    }

    #[test]
    fn unchanged_slope_is_identity() {
        let m = ParetoModel::new(ParetoTarget::FirstHalf);
        let p = m.draw_reference(&mut ChaCha8Rng::seed_from_u64(2));
        let (q, lr) = m.rescale(&p, 0.0);
        assert_eq!(lr, 0.0);
        assert_eq!(q, p);
    }

    #[test]
    fn resample_has_zero_ratio_and_keeps_support() {
        let m = ParetoModel::new(ParetoTarget::FirstHalf);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut p = m.draw_reference(&mut rng);
        for _ in 0..2000 {
            let (q, lr) = m.propose(&p, Move::Resample, &mut rng);
            assert_eq!(lr, 0.0);
            p = q;
            assert!(p.x.iter().all(|&x| x > 1.0));
            p = crate::model::metropolis_step(&m, &p, &mut rng, Mode::Entropy, &p.clone()).0;
            assert!(p.x.iter().all(|&x| x > 1.0));
        }
    }

    #[test]
    fn distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let marg = ParetoModel::new(ParetoTarget::FirstHalf);
        let joint = ParetoModel::new(ParetoTarget::Joint);
        let a = marg.draw_reference(&mut rng);
        let b = marg.draw_reference(&mut rng);
        assert_eq!(marg.distance(&a, &a), 0.0);
        assert_eq!(marg.distance(&a, &b), (a.ln_y_tot() - b.ln_y_tot()).abs());
        assert!(joint.distance(&a, &b) >= marg.distance(&a, &b));
        assert_eq!(joint.distance(&a, &b), joint.distance(&b, &a));
        assert_eq!(joint.geometry(), Geometry::l2(2));
        assert_eq!(marg.geometry(), Geometry::interval(1));
    }
}
