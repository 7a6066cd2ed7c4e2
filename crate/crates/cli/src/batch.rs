//! Batch manifests and atomic output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;

use crate::args::Cli;
use crate::commands::{self, Outcome};
use crate::document::parse;
use crate::error::{CliError, EXIT_INVALID, EXIT_OK};

/// `{"jobs": [{"args": [...], "out": "path"}]}`. Job args omit the program name.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub jobs: Vec<Job>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Job {
    pub args: Vec<String>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::Output(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| fail(&e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| fail(&e))?;
    tmp.persist(path).map_err(|e| fail(&e.error))?;
    Ok(())
}

/// Runs a parsed invocation, writing artifacts and `--out`.
/// Returns the exit code and the text for stdout, if any.
pub fn execute(cli: &Cli) -> Result<(i32, Option<String>), CliError> {
    if let Some(manifest) = &cli.batch {
        if cli.command.is_some() {
            return Err(CliError::Invalid("--batch cannot be combined with a subcommand".into()));
        }
        return run_batch(manifest).map(|code| (code, None));
    }
    let Some(command) = &cli.command else {
        return Err(CliError::Invalid("a subcommand or --batch is required".into()));
    };
    let tol = cli.tolerances()?;
    let outcome: Outcome = commands::run(command, &tol, cli.prune_zero)?;
    for a in &outcome.artifacts {
        if let Some(dir) = a.path.parent().filter(|p| !p.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Output(format!("{}: {e}", dir.display())))?;
        }
        write_atomic(&a.path, &a.contents)?;
    }
    let text = outcome.text();
    match &cli.out {
        Some(path) => {
            write_atomic(path, &text)?;
            Ok((outcome.exit, None))
        }
        None => Ok((outcome.exit, Some(text))),
    }
}

/// Runs one job; failures become exit codes and stderr lines.
fn run_job(job: &Job) -> i32 {
    let argv = std::iter::once("povmkit".to_string()).chain(job.args.iter().cloned());
    let mut cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("batch job {:?}: {e}", job.args);
            return EXIT_INVALID;
        }
    };
    if cli.batch.is_some() {
        eprintln!("batch job {:?}: nested --batch is not allowed", job.args);
        return EXIT_INVALID;
    }
    if job.out.is_some() {
        cli.out = job.out.clone();
    }
    match execute(&cli) {
        Ok((code, Some(text))) => {
            print!("{text}");
            code
        }
        Ok((code, None)) => code,
        Err(e) => {
            eprintln!("batch job {:?}: {e}", job.args);
            e.exit_code()
        }
    }
}

/// Runs every job concurrently; the batch exits with the largest job code.
pub fn run_batch(manifest: &Path) -> Result<i32, CliError> {
    let bytes = std::fs::read(manifest)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", manifest.display())))?;
    let m: Manifest = parse(&bytes, &manifest.display().to_string())?;
    let codes: Vec<i32> = std::thread::scope(|s| {
        let handles: Vec<_> = m.jobs.iter().map(|job| s.spawn(move || run_job(job))).collect();
        handles.into_iter().map(|h| h.join().unwrap_or(EXIT_INVALID)).collect()
    });
    Ok(codes.into_iter().max().unwrap_or(EXIT_OK))
}
