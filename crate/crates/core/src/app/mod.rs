//! Config-driven front end: spectral sweeps, transient runs and verification
//! suites, rendered as CSV or JSON.

pub mod config;
pub mod output;
pub mod run;

use std::path::PathBuf;

use thiserror::Error;

pub use config::{Mode, OutputFormat, RunConfig};
pub use run::{run_sweep, run_transient, run_verify, Check, Marker, SweepRecord, VerifyReport};

/// JSON Schema of every JSON document the binary writes.
pub const OUTPUT_SCHEMA: &str = include_str!("../../schema/output.schema.json");

#[derive(Debug, Error)]
pub enum AppError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("{0}")]
    Io(String),
    #[error("verification failed: {failed} of {total} checks")]
    VerificationFailed { failed: usize, total: usize },
}

impl AppError {
    /// 1 validation, 2 numerical failure, 3 verification failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Validation(_) => 1,
            AppError::Core(e) if e.is_input_error() => 1,
            AppError::Core(_) | AppError::Io(_) => 2,
            AppError::VerificationFailed { .. } => 3,
        }
    }
}

/// One command-line invocation before config resolution.
#[derive(Debug, Clone, Default)]
pub struct Invocation {
    pub config: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub jobs: Option<usize>,
    pub sets: Vec<String>,
}

/// Defaults, then the config file, then `--set` overrides, then the
/// subcommand and the `--out` / `--format` flags.
pub fn resolve(mode: Mode, inv: &Invocation) -> Result<RunConfig, AppError> {
    let base = match &inv.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let mut c = base.with_overrides(&inv.sets)?;
    c.mode = mode;
    if let Some(f) = inv.format {
        c.format = f;
    }
    if let Some(o) = &inv.out {
        c.out = o.to_string_lossy().into_owned();
    }
    c.validate()?;
    Ok(c)
}

/// Runs `config` and renders the result. A failed verification still
/// renders its report; the error is returned alongside.
pub fn render(config: &RunConfig, jobs: Option<usize>) -> Result<(String, Option<AppError>), AppError> {
    let json = config.format == OutputFormat::Json;
    Ok(match config.mode {
        Mode::Sweep => {
            let rows = run_sweep(config, jobs)?;
            let text = if json {
                output::sweep_json(config, &rows)
            } else {
                output::sweep_csv(config, &rows)
            };
            (text, None)
        }
        Mode::Transient => {
            let t = run_transient(config)?;
            let text = if json {
                output::transient_json(config, &t)
            } else {
                output::transient_csv(config, &t)
            };
            (text, None)
        }
        Mode::Verify => {
            let report = match jobs {
                Some(0) => return Err(AppError::Validation("--jobs must be >= 1".into())),
                Some(j) => rayon::ThreadPoolBuilder::new()
                    .num_threads(j)
                    .build()
                    .map_err(|e| AppError::Io(e.to_string()))?
                    .install(|| run_verify(config))?,
                None => run_verify(config)?,
            };
            let text = if json {
                output::verify_json(config, &report)
            } else {
                output::verify_csv(config, &report)
            };
            let err = (!report.passed()).then(|| AppError::VerificationFailed {
                failed: report.failures(),
                total: report.checks.len(),
            });
            (text, err)
        }
    })
}

/// Resolves, runs and writes to `config.out` (stdout when empty).
pub fn execute(mode: Mode, inv: &Invocation) -> Result<(), AppError> {
    let config = resolve(mode, inv)?;
    let (text, failure) = render(&config, inv.jobs)?;
    if config.out.is_empty() {
        use std::io::Write;
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| AppError::Io(e.to_string()))?;
    } else {
        std::fs::write(&config.out, text).map_err(|e| AppError::Io(format!("{}: {e}", config.out)))?;
    }
    failure.map_or(Ok(()), Err)
}
