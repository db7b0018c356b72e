pub mod barcobar;
pub mod counterexample;
pub mod distlaw;
pub mod reedy;
pub mod wfs;

use serde_json::Value;

use crate::config::{Suite, SuiteConfig};
use crate::report::Report;
use crate::CliError;

/// Runs a suite on a pool capped at `cfg.threads` (or `DGW_THREADS`).
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cfg.threads {
        b = b.num_threads(t);
    }
    let pool = b.build().map_err(|e| CliError::Usage(e.to_string()))?;
    let (cases, details) = pool.install(|| -> Result<_, CliError> {
        Ok(match cfg.suite {
            Suite::Wfs => (wfs::run(cfg), Value::Null),
            Suite::Barcobar => (barcobar::run(cfg), Value::Null),
            Suite::Distlaw => (distlaw::run(cfg), Value::Null),
            Suite::Counterexample => counterexample::run(cfg)?,
            Suite::Reedy => (reedy::run(cfg)?, Value::Null),
        })
    })?;
    Ok(Report::new(cfg.suite.name(), cfg.to_json(), cases, details))
}
