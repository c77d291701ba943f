//! One Nested Sampling descent toward a reference particle.
//!
//! The model distribution plays the role of the prior and minus the distance
//! to the reference plays the role of the likelihood. Each iteration discards
//! the particle farthest from the reference, so the number of discards made
//! before every particle is within `r` is, divided by N, an unbiased estimate
//! of `-ln P(distance < r)`.

use std::cmp::Ordering;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::model::{self, Mode, Model, ModelError};

pub const DEFAULT_DEPTH_CAP: f64 = 200.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    pub n_particles: usize,
    pub mcmc_steps: usize,
    pub tolerance: f64,
    pub depth_cap: f64,
    pub mode: Mode,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            n_particles: 10,
            mcmc_steps: 1000,
            tolerance: 1e-3,
            depth_cap: DEFAULT_DEPTH_CAP,
            mode: Mode::Entropy,
        }
    }
}

impl DescentConfig {
    pub fn validate(&self) -> Result<(), SamplerError> {
        if self.n_particles == 0 {
            return Err(SamplerError::InvalidConfig("n_particles must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0) {
            return Err(SamplerError::InvalidConfig("tolerance must be >= 0".into()));
        }
        if !(self.depth_cap > 0.0) {
            return Err(SamplerError::InvalidConfig("depth cap must be > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Termination {
    ToleranceReached,
    DepthCapHit,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::ToleranceReached => "tolerance-reached",
            Termination::DepthCapHit => "depth-cap-hit",
        })
    }
}

impl std::str::FromStr for Termination {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tolerance-reached" => Ok(Termination::ToleranceReached),
            "depth-cap-hit" => Ok(Termination::DepthCapHit),
            other => Err(format!("unknown termination `{other}`")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplerError {
    #[error("invalid descent configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("tolerance {requested} is below the run tolerance {run}")]
    InsufficientResolution { requested: f64, run: f64 },
}

/// Trace of one descent: every discarded distance, in discard order.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthRecord {
    pub rep_id: u64,
    pub discarded: Vec<f64>,
    pub n_particles: usize,
    pub run_tolerance: f64,
    pub mode: Mode,
    pub terminated_by: Termination,
}

impl DepthRecord {
    pub fn iterations(&self) -> usize {
        self.discarded.len()
    }

    /// Depth at the run tolerance, `k / N` nats.
    pub fn depth(&self) -> f64 {
        self.iterations() as f64 / self.n_particles as f64
    }

    pub fn hit_cap(&self) -> bool {
        self.terminated_by == Termination::DepthCapHit
    }

    /// Depth at a coarser tolerance: the number of discards farther than
    /// `tol`, divided by N.
    pub fn depth_at(&self, tol: f64) -> Result<f64, SamplerError> {
        if !(tol >= self.run_tolerance) {
            return Err(SamplerError::InsufficientResolution {
                requested: tol,
                run: self.run_tolerance,
            });
        }
        // discarded is nonincreasing, so the matches form a prefix
        let count = self.discarded.partition_point(|&d| d > tol);
        Ok(count as f64 / self.n_particles as f64)
    }
}

/// Free-function form of [`DepthRecord::depth_at`].
pub fn depth_at(record: &DepthRecord, tol: f64) -> Result<f64, SamplerError> {
    record.depth_at(tol)
}

/// Standard deviation of a single depth estimate, `sqrt(depth / N)`.
pub fn depth_std_error_theoretical(depth: f64, n_particles: usize) -> f64 {
    (depth.max(0.0) / n_particles as f64).sqrt()
}

/// A live particle with its cached distance. The uniform `tiebreak` orders
/// particles at equal distance, so plateaus (such as the `+inf` side of a
/// one-sided distance) compress at the correct rate.
#[derive(Debug, Clone)]
struct Walker<P> {
    particle: P,
    distance: f64,
    tiebreak: f64,
}

fn level_cmp(a: (f64, f64), b: (f64, f64)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1))
}

fn wrap_unit(x: f64) -> f64 {
    x - x.floor()
}

/// Runs one descent toward `reference`.
///
/// Hitting the depth cap is not an error: the record comes back flagged
/// [`Termination::DepthCapHit`] and the caller decides what to do with it.
pub fn run_descent<M: Model, R: Rng + ?Sized>(
    model: &M,
    reference: &M::Particle,
    config: &DescentConfig,
    rep_id: u64,
    rng: &mut R,
) -> Result<DepthRecord, SamplerError> {
    config.validate()?;
    if !model.supports(config.mode) {
        return Err(ModelError::UnsupportedMode {
            model: model.name().to_string(),
            mode: config.mode,
        }
        .into());
    }
    let n = config.n_particles;
    let mut walkers = Vec::with_capacity(n);
    for _ in 0..n {
        let particle = model::draw_initial(model, rng, config.mode, reference, config.mcmc_steps)?;
        let distance = model.distance(&particle, reference);
        walkers.push(Walker { particle, distance, tiebreak: rng.gen() });
    }

    let mut discarded = Vec::new();
    let max_iterations = (config.depth_cap * n as f64).floor();
    let terminated_by = loop {
        let worst = worst_index(&walkers);
        let level = (walkers[worst].distance, walkers[worst].tiebreak);
        if !(level.0 > config.tolerance) {
            break Termination::ToleranceReached;
        }
        if discarded.len() as f64 + 1.0 > max_iterations {
            break Termination::DepthCapHit;
        }
        discarded.push(level.0);

        let replacement = match model.constrained_draw(reference, level.0, rng) {
            Some(particle) => {
                let distance = model.distance(&particle, reference);
                Walker { particle, distance, tiebreak: rng.gen() }
            }
            None => {
                let start = if n > 1 {
                    // uniform over the N - 1 survivors
                    let mut pick = rng.gen_range(0..n - 1);
                    if pick >= worst {
                        pick += 1;
                    }
                    walkers[pick].clone()
                } else {
                    walkers[worst].clone()
                };
                constrained_walk(model, start, level, config, reference, rng)
            }
        };
        walkers[worst] = replacement;
    };

    Ok(DepthRecord {
        rep_id,
        discarded,
        n_particles: n,
        run_tolerance: config.tolerance,
        mode: config.mode,
        terminated_by,
    })
}

fn worst_index<P>(walkers: &[Walker<P>]) -> usize {
    walkers
        .iter()
        .enumerate()
        .max_by(|a, b| level_cmp((a.1.distance, a.1.tiebreak), (b.1.distance, b.1.tiebreak)))
        .map(|(i, _)| i)
        .expect("at least one particle")
}

/// MCMC on the model restricted to levels strictly below `level`.
fn constrained_walk<M: Model, R: Rng + ?Sized>(
    model: &M,
    mut walker: Walker<M::Particle>,
    level: (f64, f64),
    config: &DescentConfig,
    reference: &M::Particle,
    rng: &mut R,
) -> Walker<M::Particle> {
    for _ in 0..config.mcmc_steps {
        let (proposal, log_ratio) = model.explore(&walker.particle, rng, config.mode, reference);
        let tiebreak = wrap_unit(walker.tiebreak + crate::models::heavy_tailed_step(rng));
        if !model::accept(log_ratio, rng) {
            continue;
        }
        let distance = model.distance(&proposal, reference);
        if level_cmp((distance, tiebreak), level) == Ordering::Less {
            walker = Walker { particle: proposal, distance, tiebreak };
        }
    }
    walker
}
