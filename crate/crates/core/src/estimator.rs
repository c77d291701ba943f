//! Turning depth records into entropies and mutual informations.
//!
//! All quantities are in nats. Volume corrections live here rather than in
//! the models so one set of records can be re-read at several tolerances.

use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::model::{Geometry, Metric, Mode};
use crate::sampler::{DepthRecord, SamplerError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimatorError {
    #[error("need at least 2 records to estimate an error bar, got {0}")]
    TooFewRecords(usize),
    #[error("records hit the depth cap and would bias the estimate: rep ids {0:?}")]
    CapHit(Vec<u64>),
    #[error(transparent)]
    Resolution(#[from] SamplerError),
    #[error("radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("expected {expected} records, got {found}")]
    ModeMismatch { expected: Mode, found: Mode },
    #[error("paired record sets do not share the same rep ids")]
    Pairing,
}

/// Mean depth with its standard error over repetitions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthEstimate {
    pub mean: f64,
    /// Bessel-corrected sample standard deviation over `sqrt(reps)`.
    pub std_error: f64,
    pub reps: usize,
}

impl DepthEstimate {
    pub fn from_samples(samples: &[f64]) -> Result<Self, EstimatorError> {
        let (mean, std_error) = mean_and_std_error(samples)?;
        Ok(Self { mean, std_error, reps: samples.len() })
    }
}

fn mean_and_std_error(samples: &[f64]) -> Result<(f64, f64), EstimatorError> {
    let n = samples.len();
    if n < 2 {
        return Err(EstimatorError::TooFewRecords(n));
    }
    let nf = n as f64;
    let mean = samples.iter().sum::<f64>() / nf;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (nf - 1.0);
    Ok((mean, (var / nf).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyKind {
    Differential,
    Conditional,
    Precisional,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyEstimate {
    pub value: f64,
    pub std_error: f64,
    /// Additive correction applied to the mean depth: the log-volume of the
    /// tolerance region, or `-1` for precisional entropies.
    pub log_volume: f64,
    pub geometry: Geometry,
    pub kind: EntropyKind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualInformation {
    pub value: f64,
    pub std_error: f64,
}

fn per_record_depths(records: &[DepthRecord], tol: f64) -> Result<Vec<f64>, EstimatorError> {
    let capped: Vec<u64> = records.iter().filter(|r| r.hit_cap()).map(|r| r.rep_id).collect();
    if !capped.is_empty() {
        return Err(EstimatorError::CapHit(capped));
    }
    records.iter().map(|r| r.depth_at(tol).map_err(Into::into)).collect()
}

/// Mean and standard error of the depth at `tol` across records.
pub fn aggregate(records: &[DepthRecord], tol: f64) -> Result<DepthEstimate, EstimatorError> {
    if records.len() < 2 {
        return Err(EstimatorError::TooFewRecords(records.len()));
    }
    DepthEstimate::from_samples(&per_record_depths(records, tol)?)
}

/// Log-volume of the region within distance `r` of a point.
pub fn ball_log_volume(geometry: Geometry, r: f64) -> Result<f64, EstimatorError> {
    if !(r > 0.0) {
        return Err(EstimatorError::BadRadius(r));
    }
    let n = geometry.dim() as f64;
    Ok(match geometry.metric() {
        Metric::L2Ball => 0.5 * n * (std::f64::consts::PI * r * r).ln() - ln_gamma(0.5 * n + 1.0),
        Metric::IntervalPerAxis => n * (2.0 * r).ln(),
        Metric::OneSided => r.ln(),
    })
}

/// `H = <depth> + ln V(r)`.
pub fn differential_entropy(depth: &DepthEstimate, geometry: Geometry, r: f64) -> Result<EntropyEstimate, EstimatorError> {
    let log_volume = ball_log_volume(geometry, r)?;
    Ok(EntropyEstimate {
        value: depth.mean + log_volume,
        std_error: depth.std_error,
        log_volume,
        geometry,
        kind: EntropyKind::Differential,
    })
}

/// Expected posterior entropy from conditional-mode records. The arithmetic is
/// the same as [`differential_entropy`]; what differs is where the records
/// came from.
pub fn conditional_entropy(records: &[DepthRecord], tol: f64, geometry: Geometry) -> Result<EntropyEstimate, EstimatorError> {
    if let Some(r) = records.iter().find(|r| r.mode != Mode::ConditionalEntropy) {
        return Err(EstimatorError::ModeMismatch { expected: Mode::ConditionalEntropy, found: r.mode });
    }
    let depth = aggregate(records, tol)?;
    let mut estimate = differential_entropy(&depth, geometry, tol)?;
    estimate.kind = EntropyKind::Conditional;
    Ok(estimate)
}

/// `I(x; y) = H(x) + H(y) - H(x, y)` with errors added in quadrature, which
/// assumes the three estimates are independent.
pub fn mutual_information(h_x: &EntropyEstimate, h_y: &EntropyEstimate, h_xy: &EntropyEstimate) -> MutualInformation {
    MutualInformation {
        value: h_x.value + h_y.value - h_xy.value,
        std_error: (h_x.std_error.powi(2) + h_y.std_error.powi(2) + h_xy.std_error.powi(2)).sqrt(),
    }
}

/// Records for one entropy term together with how to read them.
#[derive(Debug, Clone, Copy)]
pub struct DepthSeries<'a> {
    pub records: &'a [DepthRecord],
    pub tolerance: f64,
    pub geometry: Geometry,
}

impl DepthSeries<'_> {
    fn sorted_depths(&self) -> Result<Vec<(u64, f64)>, EstimatorError> {
        let depths = per_record_depths(self.records, self.tolerance)?;
        let mut pairs: Vec<(u64, f64)> = self.records.iter().map(|r| r.rep_id).zip(depths).collect();
        pairs.sort_by_key(|&(id, _)| id);
        Ok(pairs)
    }

    pub fn entropy(&self) -> Result<EntropyEstimate, EstimatorError> {
        differential_entropy(&aggregate(self.records, self.tolerance)?, self.geometry, self.tolerance)
    }
}

/// Mutual information from records that share reference particles rep by rep.
///
/// Averaging the per-rep combination `d_x + d_y - d_xy` cancels the part of
/// the depth noise the three runs have in common.
pub fn mutual_information_paired(x: DepthSeries, y: DepthSeries, xy: DepthSeries) -> Result<MutualInformation, EstimatorError> {
    let (dx, dy, dxy) = (x.sorted_depths()?, y.sorted_depths()?, xy.sorted_depths()?);
    let ids = |v: &[(u64, f64)]| v.iter().map(|p| p.0).collect::<Vec<_>>();
    if ids(&dx) != ids(&dy) || ids(&dx) != ids(&dxy) {
        return Err(EstimatorError::Pairing);
    }
    let diffs: Vec<f64> = dx.iter().zip(&dy).zip(&dxy).map(|((a, b), c)| a.1 + b.1 - c.1).collect();
    let (mean, std_error) = mean_and_std_error(&diffs)?;
    let volume = ball_log_volume(x.geometry, x.tolerance)? + ball_log_volume(y.geometry, y.tolerance)?
        - ball_log_volume(xy.geometry, xy.tolerance)?;
    Ok(MutualInformation { value: mean + volume, std_error })
}
