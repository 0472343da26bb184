//! Batch front end for the `twinfock` library: JSON run configurations,
//! ordered parallel sweeps, figure presets and CSV/JSON output.

pub mod config;
pub mod figure;
pub mod sweep;

pub use config::{ResolvedConfig, RunConfig};
pub use figure::{run_figure, FigureRun};
pub use sweep::{run_sweep, ResultRow, SweepOutput};

#[derive(Debug)]
pub enum CliError {
    /// Every violation found in the configuration.
    Config(Vec<String>),
    /// A sweep point failed; `value` is the offending sweep value.
    Point { value: f64, source: twinfock::Error },
    Io(String),
}

impl CliError {
    pub(crate) fn row(value: f64, source: twinfock::Error) -> Self {
        CliError::Point { value, source }
    }

    /// 2 for configuration problems, 3 for numerical failures, 1 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Point {
                source: twinfock::Error::InvalidParameter { .. },
                ..
            } => 2,
            CliError::Point { .. } => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(errs) => {
                write!(f, "invalid configuration:")?;
                for e in errs {
                    write!(f, "\n  - {e}")?;
                }
                Ok(())
            }
            CliError::Point { value, source } if value.is_nan() => write!(f, "{source}"),
            CliError::Point { value, source } => write!(f, "at sweep value {value}: {source}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}
