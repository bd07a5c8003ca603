use std::path::{Path, PathBuf};

use kxcore::Field;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cert::error_line;
use crate::commands::{cmd_cn, cmd_module_analyze, cmd_op_check, CliError, CliResult, Outcome};

pub const OUT_DIR_VAR: &str = "KXCERT_OUT_DIR";

/// File kinds understood by `batch`, keyed by extension. `.vec` files are
/// consumed as the sample of the `.op` file with the same stem.
fn job_for(path: &Path) -> Option<&'static str> {
    match path.extension()?.to_str()? {
        "mat" => Some("cn"),
        "mod" => Some("module"),
        "op" => Some("op"),
        _ => None,
    }
}

fn run_one(path: &Path, field: Option<Field>, budget: usize) -> CliResult<Outcome> {
    match job_for(path) {
        Some("cn") => cmd_cn(path, field),
        Some("module") => cmd_module_analyze(path, field),
        _ => cmd_op_check(path, &path.with_extension("vec"), budget, field),
    }
}

pub struct BatchReport {
    pub json: Value,
    pub exit_code: i32,
}

pub fn run(dir: &Path, jobs: usize, budget: usize, field: Option<Field>) -> CliResult<BatchReport> {
    let io = |e: std::io::Error| CliError::Io {
        path: dir.display().to_string(),
        reason: e.to_string(),
    };
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()))
        .collect::<Result<_, _>>()
        .map_err(io)?;
    files.retain(|p| job_for(p).is_some());
    files.sort();

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Inconsistent(format!("thread pool: {e}")))?;
    let outcomes: Vec<CliResult<Outcome>> = pool.install(|| {
        files
            .par_iter()
            .map(|p| run_one(p, field, budget))
            .collect()
    });

    let out_dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    let mut entries = Map::new();
    let mut exit_code = 0;
    for (path, outcome) in files.iter().zip(outcomes) {
        let name = path
            .file_name()
            .unwrap_or_default()
            .to_string_lossy()
            .into_owned();
        let entry = match outcome {
            Ok(o) => {
                let code = o.status.exit_code();
                exit_code = exit_code.max(code);
                if let Some(out) = &out_dir {
                    let target = out.join(format!("{name}.json"));
                    std::fs::write(&target, o.cert.render()).map_err(|e| CliError::Io {
                        path: target.display().to_string(),
                        reason: e.to_string(),
                    })?;
                }
                json!({ "exit_code": code, "certificate": o.cert.to_json() })
            }
            Err(e) => {
                let code = e.exit_code();
                exit_code = exit_code.max(code);
                let error: Value = serde_json::from_str(&error_line(e.kind(), &e.to_string()))
                    .expect("error line is JSON");
                json!({ "exit_code": code, "error": error })
            }
        };
        entries.insert(name, entry);
    }
    Ok(BatchReport {
        json: Value::Object(entries),
        exit_code,
    })
}
