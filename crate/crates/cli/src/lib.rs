//! Report generation behind the `liesym` binary.

pub mod commands;
pub mod reference;
pub mod report;

use std::fmt;
use std::path::Path;

use liesym::dsl::Problem;

pub use report::{Input, Report, Section};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// A failure with the process exit code it maps to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_INTERNAL,
            message: message.into(),
        }
    }

    fn context(mut self, prefix: &str) -> Self {
        self.message = format!("{prefix}: {}", self.message);
        self
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<liesym::Error> for CliError {
    fn from(e: liesym::Error) -> Self {
        let code = match e {
            liesym::Error::NotSupported(_) => EXIT_UNSUPPORTED,
            _ => EXIT_INPUT,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Contents of an input file with its provenance.
pub struct Source {
    pub input: Input,
    pub text: String,
}

pub fn read_source(path: &Path) -> CliResult<Source> {
    let bytes = std::fs::read(path).map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let input = Input::new(&name, &bytes);
    let text = String::from_utf8(bytes).map_err(|_| CliError::input(format!("{} is not UTF-8", path.display())))?;
    Ok(Source { input, text })
}

pub fn load_problem(path: &Path) -> CliResult<(Problem, Input)> {
    let src = read_source(path)?;
    let problem = Problem::parse(&src.text).map_err(|e| CliError::from(e).context(&path.display().to_string()))?;
    Ok((problem, src.input))
}
