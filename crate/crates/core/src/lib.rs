//! # nestdepth
//!
//! Entropies, conditional entropies and mutual informations of distributions
//! that can only be sampled.
//!
//! Draw a reference particle from the distribution, then run Nested Sampling
//! with the distribution as the prior and minus the distance to the reference
//! as the likelihood. The number of iterations needed to bring every particle
//! within a tolerance `r`, divided by the number of particles N, is an
//! unbiased estimate of `-ln P(distance < r)` (the *depth*). Averaging depths
//! over references and adding the log-volume of the tolerance region gives a
//! differential entropy.
//!
//! | Module | Role |
//! |--------|------|
//! | [`model`] | the [`Model`](model::Model) trait every target implements |
//! | [`sampler`] | one descent toward a reference, producing a [`DepthRecord`](sampler::DepthRecord) |
//! | [`estimator`] | depths to entropies, conditional entropies and mutual informations |
//! | [`models`] | builtin targets: Normal-mean data, sinusoid period, Pareto totals, toys |
//! | [`precisional`] | entropies of "to within ±r" questions, discrete and continuous |
//! | [`runner`] / [`records`] | parallel repetitions and the plain-text record format |
//! | [`cli`] | the `nestdepth` command-line front end |
//!
//! ```no_run
//! use nestdepth::estimator::{aggregate, differential_entropy};
//! use nestdepth::model::Model;
//! use nestdepth::models::GaussianToy;
//! use nestdepth::runner::collect_reps;
//! use nestdepth::sampler::DescentConfig;
//!
//! let model = GaussianToy::default();
//! let config = DescentConfig { tolerance: 1e-3, ..Default::default() };
//! let records = collect_reps(&model, &config, 42, 200, 4).unwrap();
//! let depth = aggregate(&records, config.tolerance).unwrap();
//! let h = differential_entropy(&depth, model.geometry(), config.tolerance).unwrap();
//! println!("H = {:.3} ± {:.3} nats", h.value, h.std_error);
//! ```

pub mod cli;
pub mod estimator;
pub mod model;
pub mod models;
pub mod precisional;
pub mod quadrature;
pub mod records;
pub mod runner;
pub mod sampler;
pub mod seeding;

pub use estimator::{DepthEstimate, EntropyEstimate, MutualInformation};
pub use model::{DistanceKind, Geometry, Metric, Mode, Model};
pub use sampler::{DepthRecord, DescentConfig, Termination};
