//! Running many instance files, optionally in parallel.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::engine::Engine;
use crate::instance::parse_instance;
use crate::report::{BatchEntry, BatchReport};

/// Instance files to run: every `*.json` in a directory, or explicit files.
#[derive(Clone, Debug)]
pub struct BatchInput {
    pub files: Vec<PathBuf>,
}

impl BatchInput {
    /// Expands directories into their `*.json` files (non-recursively).
    pub fn collect(paths: &[PathBuf]) -> std::io::Result<Self> {
        let mut files = Vec::new();
        for p in paths {
            if p.is_dir() {
                for entry in std::fs::read_dir(p)? {
                    let path = entry?.path();
                    if path.is_file() && path.extension().is_some_and(|e| e == "json") {
                        files.push(path);
                    }
                }
            } else {
                files.push(p.clone());
            }
        }
        Ok(BatchInput { files })
    }
}

fn entry_name(path: &Path) -> String {
    path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Runs one file, mapping unreadable or invalid input to exit code 2.
pub fn run_file(engine: &Engine, path: &Path) -> BatchEntry {
    let name = entry_name(path);
    let outcome = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))
        .and_then(|text| parse_instance(&text).map_err(|e| e.to_string()))
        .and_then(|inst| engine.run(&name, &inst).map_err(|e| e.to_string()));
    match outcome {
        Ok(report) => BatchEntry { name, exit_code: report.exit_code(), report: Some(report), error: None },
        Err(error) => BatchEntry { name, exit_code: 2, report: None, error: Some(error) },
    }
}

/// Runs every file on a pool of `jobs` threads; entries are ordered by name
/// and the exit code is the worst one.
pub fn run_batch(engine: &Engine, input: &BatchInput, jobs: usize) -> BatchReport {
    let mut files = input.files.clone();
    files.sort_by(|a, b| entry_name(a).cmp(&entry_name(b)).then_with(|| a.cmp(b)));
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let entries: Vec<BatchEntry> = pool.install(|| files.par_iter().map(|f| run_file(engine, f)).collect());
    let exit_code = entries.iter().map(|e| e.exit_code).max().unwrap_or(0);
    BatchReport { entries, exit_code, engine_version: env!("CARGO_PKG_VERSION").to_string() }
}
