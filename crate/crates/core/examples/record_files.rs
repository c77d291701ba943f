//! Stream records to a file, read them back and postprocess at several
//! tolerances without rerunning anything.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use nestdepth::estimator::{aggregate, differential_entropy};
use nestdepth::models::{ModelKind, UniformToy};
use nestdepth::records::{read_file, write_header, write_record};
use nestdepth::runner::{run_reps, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::temp_dir().join("nestdepth-uniform.txt");
    let config = RunConfig {
        tolerance: 1e-4,
        reps: 50,
        output: path.display().to_string(),
        ..RunConfig::new(ModelKind::UniformToy)
    };

    let mut out = BufWriter::new(File::create(&path)?);
    write_header(&mut out, &config)?;
    run_reps(&UniformToy::default(), &config.descent(), config.master_seed, config.reps, config.threads, |r| {
        write_record(&mut out, &r)?;
        out.flush()
    })?;
    drop(out);

    let file = read_file(BufReader::new(File::open(&path)?))?;
    let geometry = file.config.model.geometry(file.config.distance)?;
    println!("{} reps of {} from {}", file.records.len(), file.config.model, path.display());
    for tol in [1e-1, 1e-2, 1e-3, 1e-4] {
        let depth = aggregate(&file.records, tol)?;
        let h = differential_entropy(&depth, geometry, tol)?;
        println!("r = {tol:<6} depth {:6.3} ± {:.3}  H = {:+.3} ± {:.3}", depth.mean, depth.std_error, h.value, h.std_error);
    }
    Ok(())
}
