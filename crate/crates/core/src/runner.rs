//! Running many repetitions across worker threads.
//!
//! Each repetition draws its reference and runs its descent from its own
//! seeded streams, so the records are identical for any thread count.
//! Records reach the sink in rep-id order even when workers finish out of
//! order.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::mpsc;

use thiserror::Error;

use crate::model::{DistanceKind, Mode, Model};
use crate::models::ModelKind;
use crate::sampler::{run_descent, DepthRecord, DescentConfig, SamplerError};
use crate::seeding::{rep_rng, Purpose};

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: ModelKind,
    pub mode: Mode,
    pub distance: DistanceKind,
    pub n_particles: usize,
    pub mcmc_steps: usize,
    pub tolerance: f64,
    pub reps: u64,
    pub master_seed: u64,
    pub threads: usize,
    pub depth_cap: f64,
    pub output: String,
}

impl RunConfig {
    /// Desk-scale defaults for a model.
    pub fn new(model: ModelKind) -> Self {
        Self {
            model,
            mode: Mode::Entropy,
            distance: DistanceKind::TwoSided,
            n_particles: 10,
            mcmc_steps: 1000,
            tolerance: model.default_tolerance(),
            reps: 200,
            master_seed: 0,
            threads: 1,
            depth_cap: model.default_depth_cap(),
            output: "output.txt".to_string(),
        }
    }

    /// The settings used for the published examples: 1000 references,
    /// 10 particles, 10 000 MCMC steps per iteration.
    pub fn paper_scale(mut self) -> Self {
        self.n_particles = 10;
        self.mcmc_steps = 10_000;
        self.reps = 1000;
        self
    }

    pub fn descent(&self) -> DescentConfig {
        DescentConfig {
            n_particles: self.n_particles,
            mcmc_steps: self.mcmc_steps,
            tolerance: self.tolerance,
            depth_cap: self.depth_cap,
            mode: self.mode,
        }
    }
}

#[derive(Debug, Error)]
pub enum RunError<E: std::error::Error + 'static> {
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error("record sink failed: {0}")]
    Sink(#[source] E),
}

/// Draws the reference for `rep_id` and runs its descent.
pub fn run_rep<M: Model>(model: &M, config: &DescentConfig, master_seed: u64, rep_id: u64) -> Result<DepthRecord, SamplerError> {
    let reference = model.draw_reference(&mut rep_rng(master_seed, rep_id, Purpose::Reference));
    run_descent(model, &reference, config, rep_id, &mut rep_rng(master_seed, rep_id, Purpose::Descent))
}

/// Runs reps `0..reps` on `threads` workers and hands each finished record to
/// `sink` in rep-id order. Stops early on the first sampler or sink error.
pub fn run_reps<M, F, E>(
    model: &M,
    config: &DescentConfig,
    master_seed: u64,
    reps: u64,
    threads: usize,
    mut sink: F,
) -> Result<(), RunError<E>>
where
    M: Model,
    F: FnMut(DepthRecord) -> Result<(), E>,
    E: std::error::Error + 'static,
{
    config.validate()?;
    let threads = threads.max(1);
    let next = AtomicU64::new(0);
    let stop = AtomicBool::new(false);
    let (tx, rx) = mpsc::channel::<(u64, Result<DepthRecord, SamplerError>)>();

    std::thread::scope(|scope| {
        for _ in 0..threads {
            let tx = tx.clone();
            let (next, stop) = (&next, &stop);
            scope.spawn(move || loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let rep_id = next.fetch_add(1, Ordering::Relaxed);
                if rep_id >= reps {
                    break;
                }
                let result = run_rep(model, config, master_seed, rep_id);
                if tx.send((rep_id, result)).is_err() {
                    break;
                }
            });
        }
        drop(tx);

        let mut pending = BTreeMap::new();
        let mut expected = 0u64;
        for (rep_id, result) in rx {
            let record = match result {
                Ok(record) => record,
                Err(e) => {
                    stop.store(true, Ordering::Relaxed);
                    return Err(RunError::Sampler(e));
                }
            };
            pending.insert(rep_id, record);
            while let Some(record) = pending.remove(&expected) {
                if let Err(e) = sink(record) {
                    stop.store(true, Ordering::Relaxed);
                    return Err(RunError::Sink(e));
                }
                expected += 1;
            }
        }
        Ok(())
    })
}

/// Convenience wrapper collecting every record.
pub fn collect_reps<M: Model>(
    model: &M,
    config: &DescentConfig,
    master_seed: u64,
    reps: u64,
    threads: usize,
) -> Result<Vec<DepthRecord>, SamplerError> {
    let mut out = Vec::with_capacity(reps as usize);
    let result = run_reps(model, config, master_seed, reps, threads, |r| {
        out.push(r);
        Ok::<(), std::convert::Infallible>(())
    });
    match result {
        Ok(()) => Ok(out),
        Err(RunError::Sampler(e)) => Err(e),
        Err(RunError::Sink(never)) => match never {},
    }
}
