pub mod average;
pub mod figures;
pub mod pattern;
pub mod simulate;
pub mod sweep;
pub mod validate;

use crate::error::{CliError, CliResult};

/// Worker pool bounded by `--jobs`; `None` uses every core.
pub fn pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))
}
