//! Entropies of precisional questions: "what is x to within a tolerance?"
//!
//! The question is the union of all windows of a given width, and its entropy
//! sums `-P log P` over the windows while subtracting each overlap with the
//! previous window. For a continuous scalar with CDF `F` and density `f` this
//! becomes `-∫ (1 + ln[F(x) - F(x - r)]) f(x) dx`.

use statrs::distribution::{Continuous, ContinuousCDF, Normal};
use thiserror::Error;

use crate::estimator::{self, EntropyEstimate, EntropyKind, EstimatorError};
use crate::model::{Geometry, Metric};
use crate::quadrature::{self, QuadratureError};
use crate::sampler::DepthRecord;

/// Absolute tolerance of the continuous-case quadrature.
pub const QUADRATURE_TOL: f64 = 1e-8;
const MAX_INTERVALS: usize = 20_000;
/// Window probabilities below this contribute nothing (`0 log 0 = 0`).
const TINY_PROBABILITY: f64 = 1e-300;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PrecisionalError {
    #[error("probability mass function is empty")]
    EmptyPmf,
    #[error("invalid probability {0} (must be finite and nonnegative)")]
    BadProbability(f64),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalised(f64),
    #[error("window width {width} must be between 1 and the support size {support}")]
    BadWidth { width: usize, support: usize },
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("invalid CDF: {0}")]
    BadCdf(String),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
    #[error("left and right interval forms disagree: {left} vs {right}")]
    Inconsistent { left: f64, right: f64 },
    #[error("records were not produced with a one-sided distance (geometry {0})")]
    NotOneSided(Geometry),
    #[error(transparent)]
    Estimator(#[from] EstimatorError),
}

/// Finite distribution over ordered values.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretePmf {
    entries: Vec<(f64, f64)>,
}

impl DiscretePmf {
    pub fn new(entries: Vec<(f64, f64)>) -> Result<Self, PrecisionalError> {
        if entries.is_empty() {
            return Err(PrecisionalError::EmptyPmf);
        }
        if let Some(&(_, p)) = entries.iter().find(|(_, p)| !(p.is_finite() && *p >= 0.0)) {
            return Err(PrecisionalError::BadProbability(p));
        }
        let total: f64 = entries.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(PrecisionalError::NotNormalised(total));
        }
        Ok(Self { entries })
    }

    /// Equal probabilities on `1..=n`.
    pub fn uniform(n: usize) -> Result<Self, PrecisionalError> {
        Self::new((1..=n).map(|v| (v as f64, 1.0 / n as f64)).collect())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn probabilities(&self) -> impl Iterator<Item = f64> + '_ {
        self.entries.iter().map(|&(_, p)| p)
    }
}

fn h(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.ln()
    }
}

/// Entropy of "which window of `width` consecutive values holds x?", with
/// windows sliding one value at a time.
pub fn precisional_entropy_discrete(pmf: &DiscretePmf, width: usize) -> Result<f64, PrecisionalError> {
    let n = pmf.len();
    if width == 0 || width > n {
        return Err(PrecisionalError::BadWidth { width, support: n });
    }
    let probs: Vec<f64> = pmf.probabilities().collect();
    let window = |start: usize, len: usize| probs[start..start + len].iter().sum::<f64>();
    let mut total = h(window(0, width));
    for start in 1..=n - width {
        total += h(window(start, width)) - h(window(start, width - 1));
    }
    Ok(total)
}

type RealFn = Box<dyn Fn(f64) -> f64 + Send + Sync>;

/// A scalar distribution given by its CDF and density on `[lower, upper]`.
pub struct Cdf1D {
    cdf: RealFn,
    pdf: RealFn,
    lower: f64,
    upper: f64,
}

impl std::fmt::Debug for Cdf1D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cdf1D").field("lower", &self.lower).field("upper", &self.upper).finish()
    }
}

impl Cdf1D {
    /// Checks that F runs from 0 to 1, never decreases, and that f matches
    /// a central difference of F on a grid of probe points.
    pub fn new<F, G>(cdf: F, pdf: G, lower: f64, upper: f64) -> Result<Self, PrecisionalError>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        G: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(PrecisionalError::BadCdf(format!("support [{lower}, {upper}]")));
        }
        if cdf(lower).abs() > 1e-9 || (cdf(upper) - 1.0).abs() > 1e-9 {
            return Err(PrecisionalError::BadCdf("F must be 0 at the lower bound and 1 at the upper".into()));
        }
        let probes = 200;
        let width = upper - lower;
        let mut previous = cdf(lower);
        for i in 1..=probes {
            let x = lower + width * i as f64 / probes as f64;
            let fx = cdf(x);
            if fx < previous - 1e-15 {
                return Err(PrecisionalError::BadCdf(format!("F decreases near x = {x}")));
            }
            previous = fx;
            if i < probes {
                let step = width * 1e-6;
                let fd = (cdf(x + step) - cdf(x - step)) / (2.0 * step);
                let density = pdf(x);
                if !(density >= 0.0) || (fd - density).abs() > 1e-4 * (1.0 + density.abs()) {
                    return Err(PrecisionalError::BadCdf(format!("f({x}) = {density} but dF/dx ≈ {fd}")));
                }
            }
        }
        Ok(Self { cdf: Box::new(cdf), pdf: Box::new(pdf), lower, upper })
    }

    pub fn uniform(a: f64, b: f64) -> Result<Self, PrecisionalError> {
        let width = b - a;
        Self::new(
            move |x| ((x - a) / width).clamp(0.0, 1.0),
            move |x| if (a..=b).contains(&x) { 1.0 / width } else { 0.0 },
            a,
            b,
        )
    }

    /// Normal distribution, integrated over `mean ± 12 sd`.
    pub fn normal(mean: f64, sd: f64) -> Result<Self, PrecisionalError> {
        let dist = Normal::new(mean, sd).map_err(|e| PrecisionalError::BadCdf(e.to_string()))?;
        let d2 = dist;
        Self::new(move |x| dist.cdf(x), move |x| d2.pdf(x), mean - 12.0 * sd, mean + 12.0 * sd)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    pub fn pdf(&self, x: f64) -> f64 {
        (self.pdf)(x)
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }
}

/// Both interval orientations of the continuous precisional entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrecisionalEntropy {
    /// Window ending at x: `-∫ (1 + ln[F(x) - F(x - r)]) f(x) dx`.
    pub value: f64,
    /// Window starting at x: `-∫ (1 + ln[F(x + r) - F(x)]) f(x) dx`.
    pub right_variant: f64,
}

fn window_term(p: f64, density: f64) -> f64 {
    if density == 0.0 || p < TINY_PROBABILITY {
        0.0
    } else {
        -(1.0 + p.ln()) * density
    }
}

/// Continuous precisional entropy at tolerance `r`, evaluated by adaptive
/// quadrature in both orientations. The two must agree within the
/// quadrature tolerance.
pub fn precisional_entropy_continuous(cdf: &Cdf1D, r: f64) -> Result<PrecisionalEntropy, PrecisionalError> {
    if !(r > 0.0) {
        return Err(PrecisionalError::BadTolerance(r));
    }
    let (lo, hi) = cdf.support();
    let left = quadrature::integrate(
        |x| window_term(cdf.cdf(x) - cdf.cdf(x - r), cdf.pdf(x)),
        lo,
        hi,
        QUADRATURE_TOL,
        MAX_INTERVALS,
    )?;
    let right = quadrature::integrate(
        |x| window_term(cdf.cdf(x + r) - cdf.cdf(x), cdf.pdf(x)),
        lo,
        hi,
        QUADRATURE_TOL,
        MAX_INTERVALS,
    )?;
    if (left.value - right.value).abs() > 10.0 * QUADRATURE_TOL {
        return Err(PrecisionalError::Inconsistent { left: left.value, right: right.value });
    }
    Ok(PrecisionalEntropy { value: left.value, right_variant: right.value })
}

/// Distance that is finite only below the reference: `x_ref - x` when
/// `x <= x_ref`, otherwise `+inf`.
pub fn one_sided_distance(x: f64, x_ref: f64) -> f64 {
    let gap = x_ref - x;
    if gap >= 0.0 {
        gap
    } else {
        f64::INFINITY
    }
}

/// Precisional entropy from descents run with the one-sided distance.
///
/// Those descents estimate `E[-ln(F(x_ref) - F(x_ref - r))]`; subtracting the
/// `1` of the integrand gives the precisional entropy.
pub fn precisional_entropy_via_sampler(
    records: &[DepthRecord],
    tol: f64,
    geometry: Geometry,
) -> Result<EntropyEstimate, PrecisionalError> {
    if geometry.metric() != Metric::OneSided {
        return Err(PrecisionalError::NotOneSided(geometry));
    }
    let depth = estimator::aggregate(records, tol)?;
    Ok(EntropyEstimate {
        value: depth.mean - 1.0,
        std_error: depth.std_error,
        log_volume: -1.0,
        geometry,
        kind: EntropyKind::Precisional,
    })
}
