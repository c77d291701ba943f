//! The contract a target distribution implements so the sampler can draw,
//! perturb and measure particles without knowing what they contain.
//!
//! A model never decides whether a move is accepted. [`Model::explore`]
//! proposes a new particle together with the log Metropolis ratio for the
//! *unconstrained* target; the sampler applies the coin flip and the distance
//! constraint.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

/// How the distance to the reference is measured, which fixes the volume of
/// the region `distance < r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Euclidean ball of radius `r`.
    L2Ball,
    /// Product of intervals `[x - r, x + r]`, one per axis.
    IntervalPerAxis,
    /// Half-open interval on one side of the reference only.
    OneSided,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::L2Ball => "l2",
            Metric::IntervalPerAxis => "interval",
            Metric::OneSided => "one-sided",
        })
    }
}

/// Dimension and metric of the space the distance acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Geometry {
    dim: usize,
    metric: Metric,
}

impl Geometry {
    pub fn new(dim: usize, metric: Metric) -> Result<Self, ModelError> {
        if dim == 0 {
            return Err(ModelError::ZeroDimension);
        }
        Ok(Self { dim, metric })
    }

    pub fn l2(dim: usize) -> Self {
        Self::new(dim, Metric::L2Ball).expect("dimension must be positive")
    }

    pub fn interval(dim: usize) -> Self {
        Self::new(dim, Metric::IntervalPerAxis).expect("dimension must be positive")
    }

    pub fn one_sided() -> Self {
        Self { dim: 1, metric: Metric::OneSided }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.metric, self.dim)
    }
}

/// Parses `l2:100`, `interval:1` or `one-sided` (optionally `one-sided:1`).
impl FromStr for Geometry {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::BadGeometry(s.to_string());
        let (kind, dim) = match s.split_once(':') {
            Some((k, d)) => (k, Some(d.parse::<usize>().map_err(|_| bad())?)),
            None => (s, None),
        };
        match (kind, dim) {
            ("l2", Some(d)) => Geometry::new(d, Metric::L2Ball),
            ("interval", Some(d)) => Geometry::new(d, Metric::IntervalPerAxis),
            ("interval", None) => Geometry::new(1, Metric::IntervalPerAxis),
            ("one-sided", None | Some(1)) => Ok(Geometry::one_sided()),
            _ => Err(bad()),
        }
    }
}

/// What a descent estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Particles explore the model distribution itself.
    Entropy,
    /// Particles explore the posterior given the reference's data.
    ConditionalEntropy,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Entropy => "entropy",
            Mode::ConditionalEntropy => "conditional",
        })
    }
}

impl FromStr for Mode {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entropy" => Ok(Mode::Entropy),
            "conditional" | "conditional-entropy" => Ok(Mode::ConditionalEntropy),
            other => Err(ModelError::BadMode(other.to_string())),
        }
    }
}

/// Which side(s) of the reference count as "near" for scalar projections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DistanceKind {
    #[default]
    TwoSided,
    OneSided,
}

impl DistanceKind {
    pub fn measure(self, x: f64, x_ref: f64) -> f64 {
        match self {
            DistanceKind::TwoSided => (x - x_ref).abs(),
            DistanceKind::OneSided => crate::precisional::one_sided_distance(x, x_ref),
        }
    }

    /// Geometry of a one-dimensional projection measured this way.
    pub fn scalar_geometry(self) -> Geometry {
        match self {
            DistanceKind::TwoSided => Geometry::interval(1),
            DistanceKind::OneSided => Geometry::one_sided(),
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceKind::TwoSided => "two-sided",
            DistanceKind::OneSided => "one-sided",
        })
    }
}

impl FromStr for DistanceKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "two-sided" => Ok(DistanceKind::TwoSided),
            "one-sided" => Ok(DistanceKind::OneSided),
            other => Err(ModelError::BadDistance(other.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("model `{model}` does not support {mode} mode")]
    UnsupportedMode { model: String, mode: Mode },
    #[error("geometry dimension must be at least 1")]
    ZeroDimension,
    #[error("cannot parse geometry `{0}` (expected l2:<dim>, interval:<dim> or one-sided)")]
    BadGeometry(String),
    #[error("unknown mode `{0}` (expected entropy or conditional)")]
    BadMode(String),
    #[error("unknown distance kind `{0}` (expected two-sided or one-sided)")]
    BadDistance(String),
    #[error("model `{0}` has no one-sided distance")]
    NoOneSided(String),
}

/// A distribution the sampler can explore.
///
/// Implementations are immutable after construction. Particles are plain
/// values and every source of randomness is passed in explicitly.
pub trait Model: Send + Sync {
    type Particle: Clone + Send + Sync + fmt::Debug;

    fn name(&self) -> &str;

    fn geometry(&self) -> Geometry;

    fn supports(&self, mode: Mode) -> bool {
        mode == Mode::Entropy
    }

    /// An exact draw from the model's joint distribution.
    fn draw_reference<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Particle;

    /// Starting state of one initial particle.
    ///
    /// In entropy mode this is a fresh independent draw. In conditional mode it
    /// is the reference itself (its parameters are a perfect posterior sample
    /// for its data); [`draw_initial`] then runs the posterior kernel from it.
    fn initial_state<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        mode: Mode,
        reference: &Self::Particle,
    ) -> Result<Self::Particle, ModelError> {
        match mode {
            Mode::Entropy => Ok(self.draw_reference(rng)),
            Mode::ConditionalEntropy if self.supports(mode) => Ok(reference.clone()),
            Mode::ConditionalEntropy => Err(ModelError::UnsupportedMode {
                model: self.name().to_string(),
                mode,
            }),
        }
    }

    /// Proposes a move and returns it with the log acceptance ratio for the
    /// unconstrained target. Proposals leaving the support return `-inf`.
    fn explore<R: Rng + ?Sized>(
        &self,
        particle: &Self::Particle,
        rng: &mut R,
        mode: Mode,
        reference: &Self::Particle,
    ) -> (Self::Particle, f64);

    fn distance(&self, particle: &Self::Particle, reference: &Self::Particle) -> f64;

    /// Low-dimensional projection for logs and plots.
    fn summary(&self, particle: &Self::Particle) -> Vec<f64>;

    /// Exact draw from the model restricted to `distance < max_distance`, for
    /// models where that is available in closed form. `None` means the
    /// sampler must use MCMC.
    fn constrained_draw<R: Rng + ?Sized>(
        &self,
        _reference: &Self::Particle,
        _max_distance: f64,
        _rng: &mut R,
    ) -> Option<Self::Particle> {
        None
    }
}

/// One unconstrained Metropolis-Hastings step. Returns the new state and
/// whether the proposal was accepted.
pub fn metropolis_step<M: Model, R: Rng + ?Sized>(
    model: &M,
    particle: &M::Particle,
    rng: &mut R,
    mode: Mode,
    reference: &M::Particle,
) -> (M::Particle, bool) {
    let (proposal, log_ratio) = model.explore(particle, rng, mode, reference);
    if accept(log_ratio, rng) {
        (proposal, true)
    } else {
        (particle.clone(), false)
    }
}

/// Metropolis coin flip on a log ratio.
pub(crate) fn accept<R: Rng + ?Sized>(log_ratio: f64, rng: &mut R) -> bool {
    if log_ratio >= 0.0 {
        return true;
    }
    if !(log_ratio > f64::NEG_INFINITY) {
        return false;
    }
    rng.gen::<f64>().ln() < log_ratio
}

/// Draws one initial particle. Conditional mode starts at the reference and
/// runs `steps` posterior-kernel steps so the N initial particles are
/// independent chains.
pub fn draw_initial<M: Model, R: Rng + ?Sized>(
    model: &M,
    rng: &mut R,
    mode: Mode,
    reference: &M::Particle,
    steps: usize,
) -> Result<M::Particle, ModelError> {
    let mut particle = model.initial_state(rng, mode, reference)?;
    if mode == Mode::ConditionalEntropy {
        for _ in 0..steps {
            particle = metropolis_step(model, &particle, rng, mode, reference).0;
        }
    }
    Ok(particle)
}
