//! The `nestdepth` command line.
//!
//! ```text
//! nestdepth run --model gaussian-toy --tolerance 1e-3 --reps 200 --output gauss.txt
//! nestdepth postprocess gauss.txt --tolerance 1e-2
//! nestdepth pair --x y.txt --y z.txt --xy yz.txt
//! nestdepth models
//! ```
//!
//! Every `run` flag can also be set through a `NESTDEPTH_*` environment
//! variable (`NESTDEPTH_REPS`, `NESTDEPTH_SEED`, ...).
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 usage, 3 depth cap hit,
//! 4 tolerance finer than the run tolerance, 5 pairing mismatch.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::estimator::{self, DepthSeries, EntropyEstimate, EstimatorError};
use crate::model::{DistanceKind, Geometry, Metric, Mode, Model};
use crate::models::{ModelKind, ModelVisitor};
use crate::precisional;
use crate::records::{self, RecordFile, RecordsError};
use crate::runner::{self, RunConfig, RunError};
use crate::sampler::{DepthRecord, SamplerError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP_HIT: i32 = 3;
pub const EXIT_RESOLUTION: i32 = 4;
pub const EXIT_PAIRING: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "nestdepth", version, about = "Entropy and mutual information from Nested Sampling depths")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run repetitions and write their depth records.
    Run(RunArgs),
    /// Estimate depth and entropy from a record file.
    Postprocess(PostprocessArgs),
    /// Mutual information from marginal and joint record files that share references.
    Pair(PairArgs),
    /// List the builtin models.
    Models,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Nats,
    Bits,
}

impl Units {
    fn scale(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    #[arg(long, env = "NESTDEPTH_MODEL")]
    model: String,
    #[arg(long, env = "NESTDEPTH_MODE", default_value = "entropy", value_parser = parse_mode)]
    mode: Mode,
    #[arg(long, env = "NESTDEPTH_PARTICLES", value_parser = clap::value_parser!(u64).range(1..))]
    particles: Option<u64>,
    #[arg(long, env = "NESTDEPTH_MCMC_STEPS")]
    mcmc_steps: Option<usize>,
    /// Defaults to a per-model value (see `nestdepth models`).
    #[arg(long, env = "NESTDEPTH_TOLERANCE")]
    tolerance: Option<f64>,
    #[arg(long, env = "NESTDEPTH_REPS", value_parser = clap::value_parser!(u64).range(1..))]
    reps: Option<u64>,
    #[arg(long, env = "NESTDEPTH_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, env = "NESTDEPTH_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,
    /// Maximum depth in nats before a descent is abandoned.
    #[arg(long, env = "NESTDEPTH_DEPTH_CAP")]
    depth_cap: Option<f64>,
    #[arg(long, env = "NESTDEPTH_OUTPUT", default_value = "output.txt")]
    output: PathBuf,
    /// 1000 reps with 10 000 MCMC steps per iteration.
    #[arg(long, env = "NESTDEPTH_PAPER_SCALE")]
    paper_scale: bool,
    /// Distance kind for one-dimensional projections.
    #[arg(long, env = "NESTDEPTH_DISTANCE", default_value = "two-sided", value_parser = parse_distance)]
    distance: DistanceKind,
    #[arg(long, env = "NESTDEPTH_UNITS", value_enum, default_value_t = Units::Nats)]
    units: Units,
    /// Suppress per-rep progress lines.
    #[arg(long, short)]
    quiet: bool,
}

#[derive(Debug, clap::Args)]
struct PostprocessArgs {
    file: PathBuf,
    /// Tolerance to read the records at; defaults to the run tolerance.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Override the volume geometry, e.g. `l2:100`, `interval:1`, `one-sided`.
    #[arg(long, value_parser = parse_geometry)]
    geometry: Option<Geometry>,
    #[arg(long, value_enum, default_value_t = Units::Nats)]
    units: Units,
    /// Print a key=value block after the report.
    #[arg(long)]
    machine: bool,
    /// Write per-rep `rep_id, iterations, depth` as TSV (`-` for stdout).
    #[arg(long)]
    dump_depths: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct PairArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    #[arg(long)]
    xy: PathBuf,
    #[arg(long)]
    tol_x: Option<f64>,
    #[arg(long)]
    tol_y: Option<f64>,
    #[arg(long)]
    tol_xy: Option<f64>,
    #[arg(long, value_parser = parse_geometry)]
    geometry_x: Option<Geometry>,
    #[arg(long, value_parser = parse_geometry)]
    geometry_y: Option<Geometry>,
    #[arg(long, value_parser = parse_geometry)]
    geometry_xy: Option<Geometry>,
    #[arg(long, value_enum, default_value_t = Units::Nats)]
    units: Units,
    #[arg(long)]
    machine: bool,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: crate::model::ModelError| e.to_string())
}

fn parse_distance(s: &str) -> Result<DistanceKind, String> {
    s.parse().map_err(|e: crate::model::ModelError| e.to_string())
}

fn parse_geometry(s: &str) -> Result<Geometry, String> {
    s.parse().map_err(|e: crate::model::ModelError| e.to_string())
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    CapHit(String),
    #[error(transparent)]
    Resolution(SamplerError),
    #[error("{0}")]
    Pairing(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{path}: {source}")]
    Records { path: PathBuf, source: RecordsError },
    #[error(transparent)]
    Estimator(EstimatorError),
    #[error("{0}")]
    Other(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::CapHit(_) => EXIT_CAP_HIT,
            CliError::Resolution(_) => EXIT_RESOLUTION,
            CliError::Pairing(_) => EXIT_PAIRING,
            _ => EXIT_FAILURE,
        }
    }
}

impl From<EstimatorError> for CliError {
    fn from(e: EstimatorError) -> Self {
        match e {
            EstimatorError::Resolution(s @ SamplerError::InsufficientResolution { .. }) => CliError::Resolution(s),
            EstimatorError::CapHit(ids) => CliError::CapHit(format!("records hit the depth cap (rep ids {ids:?})")),
            EstimatorError::Pairing => CliError::Pairing("record files do not share rep ids".into()),
            other => CliError::Estimator(other),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{rendered}") } else { write!(out, "{rendered}") };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => run(args, out, err),
        Command::Postprocess(args) => postprocess(args, out),
        Command::Pair(args) => pair(args, out),
        Command::Models => list_models(out),
    }
}

fn list_models(out: &mut dyn Write) -> Result<(), CliError> {
    writeln!(out, "{:<18} {:<13} {:<10} {:<12} description", "name", "geometry", "tolerance", "conditional")?;
    for kind in ModelKind::ALL {
        let geometry = kind.geometry(DistanceKind::TwoSided).map_err(|e| CliError::Other(e.to_string()))?;
        writeln!(
            out,
            "{:<18} {:<13} {:<10} {:<12} {}",
            kind.name(),
            geometry.to_string(),
            kind.default_tolerance(),
            if kind.supports(Mode::ConditionalEntropy) { "yes" } else { "no" },
            kind.description()
        )?;
    }
    Ok(())
}

fn build_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    let model: ModelKind = args.model.parse().map_err(|e: crate::models::UnknownModel| CliError::Usage(e.to_string()))?;
    let mut config = RunConfig::new(model);
    if args.paper_scale {
        config = config.paper_scale();
    }
    config.mode = args.mode;
    config.distance = args.distance;
    if let Some(n) = args.particles {
        config.n_particles = n as usize;
    }
    if let Some(steps) = args.mcmc_steps {
        config.mcmc_steps = steps;
    }
    if let Some(tol) = args.tolerance {
        if !(tol > 0.0) {
            return Err(CliError::Usage(format!("tolerance must be positive, got {tol}")));
        }
        config.tolerance = tol;
    }
    if let Some(reps) = args.reps {
        config.reps = reps;
    }
    if let Some(cap) = args.depth_cap {
        if !(cap > 0.0) {
            return Err(CliError::Usage(format!("depth cap must be positive, got {cap}")));
        }
        config.depth_cap = cap;
    }
    config.master_seed = args.seed;
    config.threads = args
        .threads
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1));
    config.output = args.output.display().to_string();
    if !model.supports(config.mode) {
        return Err(CliError::Usage(format!("model `{model}` does not support {} mode", config.mode)));
    }
    if config.distance == DistanceKind::OneSided && !model.supports_one_sided() {
        return Err(CliError::Usage(format!("model `{model}` has no one-sided distance")));
    }
    Ok(config)
}

struct RunVisitor<'a> {
    config: &'a RunConfig,
    writer: &'a mut BufWriter<File>,
    err: &'a mut dyn Write,
    quiet: bool,
    units: Units,
}

struct RunSummary {
    capped: Vec<u64>,
}

impl ModelVisitor for RunVisitor<'_> {
    type Output = Result<RunSummary, CliError>;

    fn visit<M: Model>(self, model: &M) -> Self::Output {
        let RunVisitor { config, writer, err, quiet, units } = self;
        let mut depths = Vec::new();
        let mut capped = Vec::new();
        let result = runner::run_reps(model, &config.descent(), config.master_seed, config.reps, config.threads, |record| {
            records::write_record(writer, &record)?;
            writer.flush()?;
            if record.hit_cap() {
                capped.push(record.rep_id);
            }
            depths.push(record.depth());
            if !quiet {
                let (mean, se) = running_estimate(&depths);
                writeln!(
                    err,
                    "rep {}/{}: depth {:.4} {u} ({}) | running mean {:.4} ± {:.4} {u}",
                    record.rep_id + 1,
                    config.reps,
                    units.scale(record.depth()),
                    record.terminated_by,
                    units.scale(mean),
                    units.scale(se),
                    u = units.label(),
                )?;
            }
            Ok::<(), io::Error>(())
        });
        match result {
            Ok(()) => Ok(RunSummary { capped }),
            Err(RunError::Sampler(e)) => Err(CliError::Other(e.to_string())),
            Err(RunError::Sink(e)) => Err(CliError::Io(e)),
        }
    }
}

fn running_estimate(depths: &[f64]) -> (f64, f64) {
    match estimator::DepthEstimate::from_samples(depths) {
        Ok(e) => (e.mean, e.std_error),
        Err(_) => (depths.first().copied().unwrap_or(0.0), f64::NAN),
    }
}

fn run(args: RunArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let config = build_config(&args)?;
    let file = File::create(&args.output)?;
    let mut writer = BufWriter::new(file);
    records::write_header(&mut writer, &config)?;
    writer.flush()?;
    let summary = config.model.with_model(
        config.distance,
        RunVisitor { config: &config, writer: &mut writer, err, quiet: args.quiet, units: args.units },
    );
    let summary = summary.map_err(|e| CliError::Usage(e.to_string()))??;
    writer.flush()?;
    writeln!(out, "wrote {} reps to {}", config.reps, args.output.display())?;
    if !summary.capped.is_empty() {
        return Err(CliError::CapHit(format!(
            "{} rep(s) hit the depth cap of {} nats: {:?}",
            summary.capped.len(),
            config.depth_cap,
            summary.capped
        )));
    }
    Ok(())
}

fn read_records(path: &Path) -> Result<RecordFile, CliError> {
    let file = File::open(path)?;
    records::read_file(BufReader::new(file)).map_err(|source| CliError::Records { path: path.to_path_buf(), source })
}

fn file_geometry(file: &RecordFile, over: Option<Geometry>) -> Result<Geometry, CliError> {
    match over {
        Some(g) => Ok(g),
        None => file.config.model.geometry(file.config.distance).map_err(|e| CliError::Other(e.to_string())),
    }
}

fn check_tolerance(file: &RecordFile, tol: f64) -> Result<(), CliError> {
    if !(tol >= file.config.tolerance) {
        return Err(CliError::Resolution(SamplerError::InsufficientResolution { requested: tol, run: file.config.tolerance }));
    }
    Ok(())
}

fn dump_depths(records: &[DepthRecord], tol: f64, path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let mut body = String::from("rep_id\titerations\tdepth\n");
    for r in records {
        let depth = r.depth_at(tol).map_err(CliError::Resolution)?;
        let count = (depth * r.n_particles as f64).round() as usize;
        body.push_str(&format!("{}\t{}\t{}\n", r.rep_id, count, depth));
    }
    if path == Path::new("-") {
        out.write_all(body.as_bytes())?;
    } else {
        std::fs::write(path, body)?;
    }
    Ok(())
}

fn postprocess(args: PostprocessArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let file = read_records(&args.file)?;
    let tol = args.tolerance.unwrap_or(file.config.tolerance);
    check_tolerance(&file, tol)?;
    let geometry = file_geometry(&file, args.geometry)?;
    if let Some(path) = &args.dump_depths {
        dump_depths(&file.records, tol, path, out)?;
    }
    let depth = estimator::aggregate(&file.records, tol)?;
    let entropy = match file.config.mode {
        Mode::ConditionalEntropy => estimator::conditional_entropy(&file.records, tol, geometry)?,
        Mode::Entropy => estimator::differential_entropy(&depth, geometry, tol)?,
    };
    let precisional = if geometry.metric() == Metric::OneSided {
        Some(precisional::precisional_entropy_via_sampler(&file.records, tol, geometry).map_err(|e| CliError::Other(e.to_string()))?)
    } else {
        None
    };

    let u = args.units;
    let label = match file.config.mode {
        Mode::ConditionalEntropy => "conditional entropy",
        Mode::Entropy => "entropy",
    };
    writeln!(out, "model: {} ({} mode, {} distance)", file.config.model, file.config.mode, file.config.distance)?;
    writeln!(out, "reps: {}  particles: {}  mcmc steps: {}", depth.reps, file.config.n_particles, file.config.mcmc_steps)?;
    writeln!(out, "tolerance: {tol}")?;
    writeln!(out, "depth: {:.6} ± {:.6} {}", u.scale(depth.mean), u.scale(depth.std_error), u.label())?;
    writeln!(out, "log-volume ({geometry}): {:.6} {}", u.scale(entropy.log_volume), u.label())?;
    writeln!(out, "{label}: {:.6} ± {:.6} {}", u.scale(entropy.value), u.scale(entropy.std_error), u.label())?;
    if let Some(p) = &precisional {
        writeln!(out, "precisional entropy: {:.6} ± {:.6} {}", u.scale(p.value), u.scale(p.std_error), u.label())?;
    }
    if args.machine {
        write_machine_block(out, u, tol, &depth, &entropy, precisional.as_ref())?;
    }
    Ok(())
}

fn write_machine_block(
    out: &mut dyn Write,
    u: Units,
    tol: f64,
    depth: &estimator::DepthEstimate,
    entropy: &EntropyEstimate,
    precisional: Option<&EntropyEstimate>,
) -> io::Result<()> {
    writeln!(out, "units={}", u.label())?;
    writeln!(out, "tolerance={tol}")?;
    writeln!(out, "reps={}", depth.reps)?;
    writeln!(out, "depth_mean={}", u.scale(depth.mean))?;
    writeln!(out, "depth_std_error={}", u.scale(depth.std_error))?;
    writeln!(out, "log_volume={}", u.scale(entropy.log_volume))?;
    writeln!(out, "entropy={}", u.scale(entropy.value))?;
    writeln!(out, "entropy_std_error={}", u.scale(entropy.std_error))?;
    if let Some(p) = precisional {
        writeln!(out, "precisional_entropy={}", u.scale(p.value))?;
    }
    Ok(())
}

fn pair(args: PairArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let fx = read_records(&args.x)?;
    let fy = read_records(&args.y)?;
    let fxy = read_records(&args.xy)?;
    let seed = fx.config.master_seed;
    if fy.config.master_seed != seed || fxy.config.master_seed != seed {
        return Err(CliError::Pairing(format!(
            "master seeds differ: {} / {} / {}",
            seed, fy.config.master_seed, fxy.config.master_seed
        )));
    }
    let ids = |f: &RecordFile| f.records.iter().map(|r| r.rep_id).collect::<Vec<_>>();
    if ids(&fx) != ids(&fy) || ids(&fx) != ids(&fxy) {
        return Err(CliError::Pairing("record files do not share the same rep ids".into()));
    }
    let tol_x = args.tol_x.unwrap_or(fx.config.tolerance);
    let tol_y = args.tol_y.unwrap_or(fy.config.tolerance);
    let tol_xy = args.tol_xy.unwrap_or(fxy.config.tolerance);
    check_tolerance(&fx, tol_x)?;
    check_tolerance(&fy, tol_y)?;
    check_tolerance(&fxy, tol_xy)?;
    let sx = DepthSeries { records: &fx.records, tolerance: tol_x, geometry: file_geometry(&fx, args.geometry_x)? };
    let sy = DepthSeries { records: &fy.records, tolerance: tol_y, geometry: file_geometry(&fy, args.geometry_y)? };
    let sxy = DepthSeries { records: &fxy.records, tolerance: tol_xy, geometry: file_geometry(&fxy, args.geometry_xy)? };

    let (hx, hy, hxy) = (sx.entropy()?, sy.entropy()?, sxy.entropy()?);
    let unpaired = estimator::mutual_information(&hx, &hy, &hxy);
    let paired = estimator::mutual_information_paired(sx, sy, sxy)?;

    let u = args.units;
    let show = |e: &EntropyEstimate| format!("{:.6} ± {:.6}", u.scale(e.value), u.scale(e.std_error));
    writeln!(out, "H(x):  {} {}", show(&hx), u.label())?;
    writeln!(out, "H(y):  {} {}", show(&hy), u.label())?;
    writeln!(out, "H(xy): {} {}", show(&hxy), u.label())?;
    writeln!(out, "I(x;y) paired:   {:.6} ± {:.6} {}", u.scale(paired.value), u.scale(paired.std_error), u.label())?;
    writeln!(out, "I(x;y) unpaired: {:.6} ± {:.6} {}", u.scale(unpaired.value), u.scale(unpaired.std_error), u.label())?;
    if args.machine {
        writeln!(out, "units={}", u.label())?;
        writeln!(out, "mi_paired={}", u.scale(paired.value))?;
        writeln!(out, "mi_paired_std_error={}", u.scale(paired.std_error))?;
        writeln!(out, "mi_unpaired={}", u.scale(unpaired.value))?;
        writeln!(out, "mi_unpaired_std_error={}", u.scale(unpaired.std_error))?;
    }
    Ok(())
}
