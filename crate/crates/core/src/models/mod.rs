//! Builtin target distributions.
//!
//! Three inference problems (a Normal-mean dataset prior, a sinusoid period
//! experiment and Pareto-distributed data) plus two one-dimensional toys whose
//! interval probabilities are known in closed form.

mod normal_mean;
mod pareto;
mod sinusoid;
mod toy;

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::model::{DistanceKind, Geometry, Mode, Model, ModelError};

pub use normal_mean::{normal_mean_true_entropy, NormalMeanModel, NormalMeanParticle};
pub use pareto::{ParetoModel, ParetoParticle, ParetoTarget};
pub use sinusoid::{Schedule, SinusoidModel, SinusoidParticle};
pub use toy::{GaussianToy, UniformToy};

/// Heavy-tailed step multiplier: `10^(1.5 - 6u) * z` with `u ~ U(0,1)` and
/// `z ~ N(0,1)`. Scales span six orders of magnitude so the same kernel works
/// early in a descent and deep inside a tiny constrained region.
pub fn heavy_tailed_step<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    let z: f64 = rng.sample(StandardNormal);
    10f64.powf(1.5 - 6.0 * u) * z
}

/// Random subset of `0..n` of size `ceil(n u^2)`, favouring small subsets.
pub(crate) fn random_subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    let u: f64 = rng.gen();
    let size = ((n as f64 * u * u).ceil() as usize).clamp(1, n);
    index::sample(rng, n, size).into_vec()
}

pub(crate) fn normal_log_density(x: f64, mean: f64, sd: f64) -> f64 {
    let z = (x - mean) / sd;
    -0.5 * z * z - sd.ln() - 0.5 * (2.0 * std::f64::consts::PI).ln()
}

/// Builtin models addressable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    NormalMean,
    SinusoidEven,
    SinusoidUneven,
    ParetoMarginal,
    ParetoMarginalZ,
    ParetoJoint,
    UniformToy,
    GaussianToy,
}

impl ModelKind {
    pub const ALL: [ModelKind; 8] = [
        ModelKind::NormalMean,
        ModelKind::SinusoidEven,
        ModelKind::SinusoidUneven,
        ModelKind::ParetoMarginal,
        ModelKind::ParetoMarginalZ,
        ModelKind::ParetoJoint,
        ModelKind::UniformToy,
        ModelKind::GaussianToy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::NormalMean => "normal-mean",
            ModelKind::SinusoidEven => "sinusoid-even",
            ModelKind::SinusoidUneven => "sinusoid-uneven",
            ModelKind::ParetoMarginal => "pareto-marginal",
            ModelKind::ParetoMarginalZ => "pareto-marginal-z",
            ModelKind::ParetoJoint => "pareto-joint",
            ModelKind::UniformToy => "uniform-toy",
            ModelKind::GaussianToy => "gaussian-toy",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelKind::NormalMean => "100 Normal(mu, 1) data points with a Normal(0, 10^2) prior on mu; distance on the data",
            ModelKind::SinusoidEven => "noisy sinusoid observed at 101 evenly spaced times; distance on log10 period",
            ModelKind::SinusoidUneven => "noisy sinusoid observed at 101 cubically spaced times; distance on log10 period",
            ModelKind::ParetoMarginal => "100 Pareto(alpha) values, lognormal alpha; distance on ln of the first-half total",
            ModelKind::ParetoMarginalZ => "as pareto-marginal, distance on ln of the second-half total",
            ModelKind::ParetoJoint => "as pareto-marginal, Euclidean distance on both ln totals",
            ModelKind::UniformToy => "Uniform[0, 1] scalar",
            ModelKind::GaussianToy => "Normal(0, 1) scalar",
        }
    }

    pub fn supports_one_sided(self) -> bool {
        !matches!(self, ModelKind::NormalMean | ModelKind::ParetoJoint)
    }

    /// Tolerance used when none is given.
    pub fn default_tolerance(self) -> f64 {
        match self {
            ModelKind::NormalMean => 1e-3 * 10.0,
            ModelKind::SinusoidEven | ModelKind::SinusoidUneven => 1e-5,
            _ => 1e-3,
        }
    }

    /// Depth cap used when none is given. The Normal-mean problem is about
    /// 700 nats deep at its default tolerance.
    pub fn default_depth_cap(self) -> f64 {
        match self {
            ModelKind::NormalMean => 2000.0,
            _ => crate::sampler::DEFAULT_DEPTH_CAP,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Generic operation over a concrete model, used to dispatch on [`ModelKind`].
pub trait ModelVisitor {
    type Output;
    fn visit<M: Model>(self, model: &M) -> Self::Output;
}

impl ModelKind {
    /// Builds the model with the given distance kind and hands it to `visitor`.
    pub fn with_model<V: ModelVisitor>(self, distance: DistanceKind, visitor: V) -> Result<V::Output, ModelError> {
        if distance == DistanceKind::OneSided && !self.supports_one_sided() {
            return Err(ModelError::NoOneSided(self.name().to_string()));
        }
        Ok(match self {
            ModelKind::NormalMean => visitor.visit(&NormalMeanModel::default()),
            ModelKind::SinusoidEven => visitor.visit(&SinusoidModel::new(Schedule::Even).with_distance(distance)),
            ModelKind::SinusoidUneven => visitor.visit(&SinusoidModel::new(Schedule::Uneven).with_distance(distance)),
            ModelKind::ParetoMarginal => visitor.visit(&ParetoModel::new(ParetoTarget::FirstHalf).with_distance(distance)),
            ModelKind::ParetoMarginalZ => visitor.visit(&ParetoModel::new(ParetoTarget::SecondHalf).with_distance(distance)),
            ModelKind::ParetoJoint => visitor.visit(&ParetoModel::new(ParetoTarget::Joint)),
            ModelKind::UniformToy => visitor.visit(&UniformToy { distance, perfect: false }),
            ModelKind::GaussianToy => visitor.visit(&GaussianToy { distance, perfect: false }),
        })
    }

    pub fn geometry(self, distance: DistanceKind) -> Result<Geometry, ModelError> {
        struct GetGeometry;
        impl ModelVisitor for GetGeometry {
            type Output = Geometry;
            fn visit<M: Model>(self, model: &M) -> Geometry {
                model.geometry()
            }
        }
        self.with_model(distance, GetGeometry)
    }

    pub fn supports(self, mode: Mode) -> bool {
        struct Supports(Mode);
        impl ModelVisitor for Supports {
            type Output = bool;
            fn visit<M: Model>(self, model: &M) -> bool {
                model.supports(self.0)
            }
        }
        self.with_model(DistanceKind::TwoSided, Supports(mode)).unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown model `{0}`")]
pub struct UnknownModel(pub String);

impl FromStr for ModelKind {
    type Err = UnknownModel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ModelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownModel(s.to_string()))
    }
}
