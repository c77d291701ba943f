//! Plain-text record files.
//!
//! ```text
//! # nestdepth-records v1
//! # model=uniform-toy
//! # mode=entropy
//! # ...
//! 0	1	4.9031853396974637e-1
//! 0	2	4.5210092114432573e-1
//! 0	END	tolerance-reached
//! 1	END	tolerance-reached
//! ```
//!
//! Header lines start with `#` and hold the run configuration as `key=value`.
//! Body lines are `rep_id<TAB>iteration<TAB>distance`, sorted by rep then
//! iteration (1-based), and every rep ends with an `END` line giving how the
//! descent stopped. Distances carry 17 significant digits so they read back
//! bit-exact.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::model::{DistanceKind, Mode};
use crate::models::ModelKind;
use crate::runner::RunConfig;
use crate::sampler::{DepthRecord, Termination};

pub const FORMAT_TAG: &str = "nestdepth-records v1";

#[derive(Debug, Error)]
pub enum RecordsError {
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("header is missing `{0}`")]
    MissingKey(&'static str),
    #[error("unsupported format tag `{0}`")]
    Format(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> RecordsError {
    RecordsError::Parse { line, message: message.into() }
}

/// A run configuration together with its finished records.
#[derive(Debug, Clone, PartialEq)]
pub struct RecordFile {
    pub config: RunConfig,
    pub records: Vec<DepthRecord>,
}

pub fn write_header<W: Write>(out: &mut W, config: &RunConfig) -> io::Result<()> {
    writeln!(out, "# {FORMAT_TAG}")?;
    writeln!(out, "# model={}", config.model)?;
    writeln!(out, "# mode={}", config.mode)?;
    writeln!(out, "# distance={}", config.distance)?;
    writeln!(out, "# particles={}", config.n_particles)?;
    writeln!(out, "# mcmc_steps={}", config.mcmc_steps)?;
    writeln!(out, "# tolerance={}", config.tolerance)?;
    writeln!(out, "# reps={}", config.reps)?;
    writeln!(out, "# seed={}", config.master_seed)?;
    writeln!(out, "# threads={}", config.threads)?;
    writeln!(out, "# depth_cap={}", config.depth_cap)?;
    writeln!(out, "# output={}", config.output)?;
    Ok(())
}

pub fn write_record<W: Write>(out: &mut W, record: &DepthRecord) -> io::Result<()> {
    for (i, d) in record.discarded.iter().enumerate() {
        writeln!(out, "{}\t{}\t{:.16e}", record.rep_id, i + 1, d)?;
    }
    writeln!(out, "{}\tEND\t{}", record.rep_id, record.terminated_by)
}

pub fn write_file<W: Write>(out: &mut W, file: &RecordFile) -> io::Result<()> {
    write_header(out, &file.config)?;
    file.records.iter().try_for_each(|r| write_record(out, r))
}

fn header_config(pairs: &[(String, String, usize)]) -> Result<RunConfig, RecordsError> {
    let get = |key: &'static str| -> Result<(&str, usize), RecordsError> {
        pairs
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, line)| (v.as_str(), *line))
            .ok_or(RecordsError::MissingKey(key))
    };
    fn parse<T: std::str::FromStr>(key: &str, (value, line): (&str, usize)) -> Result<T, RecordsError>
    where
        T::Err: std::fmt::Display,
    {
        value.parse().map_err(|e| parse_err(line, format!("bad {key} `{value}`: {e}")))
    }
    Ok(RunConfig {
        model: parse::<ModelKind>("model", get("model")?)?,
        mode: parse::<Mode>("mode", get("mode")?)?,
        distance: parse::<DistanceKind>("distance", get("distance")?)?,
        n_particles: parse("particles", get("particles")?)?,
        mcmc_steps: parse("mcmc_steps", get("mcmc_steps")?)?,
        tolerance: parse("tolerance", get("tolerance")?)?,
        reps: parse("reps", get("reps")?)?,
        master_seed: parse("seed", get("seed")?)?,
        threads: parse("threads", get("threads")?)?,
        depth_cap: parse("depth_cap", get("depth_cap")?)?,
        output: get("output")?.0.to_string(),
    })
}

/// Reads a record file. Reps without an `END` line (a run interrupted
/// mid-rep) are an error; use the records of a completed run.
pub fn read_file<R: BufRead>(input: R) -> Result<RecordFile, RecordsError> {
    let mut pairs = Vec::new();
    let mut saw_tag = false;
    let mut body: Vec<(usize, String)> = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if !saw_tag {
                if rest != FORMAT_TAG {
                    return Err(RecordsError::Format(rest.to_string()));
                }
                saw_tag = true;
                continue;
            }
            let (k, v) = rest.split_once('=').ok_or_else(|| parse_err(lineno, "header line without `=`"))?;
            pairs.push((k.trim().to_string(), v.trim().to_string(), lineno));
        } else if !line.trim().is_empty() {
            body.push((lineno, line));
        }
    }
    if !saw_tag {
        return Err(RecordsError::Format(String::new()));
    }
    let config = header_config(&pairs)?;

    let mut records = Vec::new();
    let mut current: Option<(u64, Vec<f64>)> = None;
    for (lineno, line) in body {
        let mut fields = line.split('\t');
        let (Some(rep), Some(second), Some(third), None) = (fields.next(), fields.next(), fields.next(), fields.next()) else {
            return Err(parse_err(lineno, "expected three tab-separated fields"));
        };
        let rep: u64 = rep.parse().map_err(|_| parse_err(lineno, format!("bad rep id `{rep}`")))?;
        let (cur_rep, discarded) = current.get_or_insert_with(|| (rep, Vec::new()));
        if *cur_rep != rep {
            return Err(parse_err(lineno, format!("rep {cur_rep} has no END line before rep {rep}")));
        }
        if second == "END" {
            let terminated_by: Termination = third.parse().map_err(|e: String| parse_err(lineno, e))?;
            if let Some(last) = records.last() {
                let last: &DepthRecord = last;
                if last.rep_id >= rep {
                    return Err(parse_err(lineno, format!("rep {rep} out of order")));
                }
            }
            records.push(DepthRecord {
                rep_id: rep,
                discarded: std::mem::take(discarded),
                n_particles: config.n_particles,
                run_tolerance: config.tolerance,
                mode: config.mode,
                terminated_by,
            });
            current = None;
        } else {
            let iteration: usize = second.parse().map_err(|_| parse_err(lineno, format!("bad iteration `{second}`")))?;
            if iteration != discarded.len() + 1 {
                return Err(parse_err(lineno, format!("expected iteration {}, found {iteration}", discarded.len() + 1)));
            }
            let distance: f64 = third.parse().map_err(|_| parse_err(lineno, format!("bad distance `{third}`")))?;
            discarded.push(distance);
        }
    }
    if let Some((rep, _)) = current {
        return Err(parse_err(0, format!("rep {rep} is incomplete (no END line)")));
    }
    Ok(RecordFile { config, records })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RecordFile {
        let config = RunConfig { tolerance: 0.1, master_seed: 7, ..RunConfig::new(ModelKind::UniformToy) };
        let records = vec![
            DepthRecord {
                rep_id: 0,
                discarded: vec![0.49031853396974637, 0.1 + 0.2, 0.100000001],
                n_particles: 10,
                run_tolerance: 0.1,
                mode: Mode::Entropy,
                terminated_by: Termination::ToleranceReached,
            },
            DepthRecord {
                rep_id: 1,
                discarded: vec![],
                n_particles: 10,
                run_tolerance: 0.1,
                mode: Mode::Entropy,
                terminated_by: Termination::DepthCapHit,
            },
        ];
        RecordFile { config, records }
    }

    #[test]
    fn roundtrip_is_exact() {
        let file = sample();
        let mut buf = Vec::new();
        write_file(&mut buf, &file).unwrap();
        let back = read_file(buf.as_slice()).unwrap();
        assert_eq!(back, file);
        let mut again = Vec::new();
        write_file(&mut again, &back).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn infinite_distances_roundtrip() {
        let mut file = sample();
        file.records[0].discarded.insert(0, f64::INFINITY);
        let mut buf = Vec::new();
        write_file(&mut buf, &file).unwrap();
        assert_eq!(read_file(buf.as_slice()).unwrap(), file);
    }

    #[test]
    fn rejects_malformed_input() {
        let mut buf = Vec::new();
        write_file(&mut buf, &sample()).unwrap();
        let text = String::from_utf8(buf).unwrap();

        let truncated: String = text.lines().filter(|l| !l.starts_with("1\tEND")).map(|l| format!("{l}\n")).collect();
        let truncated = truncated.replace("0\tEND\ttolerance-reached\n", "");
        assert!(read_file(truncated.as_bytes()).is_err());

        let skipped = text.replace("0\t2\t", "0\t5\t");
        assert!(matches!(read_file(skipped.as_bytes()), Err(RecordsError::Parse { .. })));

        let no_model: String = text.lines().filter(|l| !l.starts_with("# model")).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_file(no_model.as_bytes()), Err(RecordsError::MissingKey("model"))));

        assert!(matches!(read_file("# something else\n".as_bytes()), Err(RecordsError::Format(_))));
    }
}
