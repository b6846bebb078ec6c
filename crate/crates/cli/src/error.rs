use std::fmt;
use std::path::Path;

use serde_json::{json, Map, Value};

use exphull::Error;

/// Failures of a run: input files, usage, or the algebra itself.
#[derive(Debug, Clone)]
pub enum CliError {
    Io { path: String, message: String },
    Usage(String),
    Core { file: Option<String>, error: Error },
}

impl CliError {
    pub fn in_file(path: &Path, error: Error) -> Self {
        CliError::Core { file: Some(path.display().to_string()), error }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core { error, .. } => core_kind(error),
        }
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("kind".into(), json!(self.kind()));
        m.insert("message".into(), json!(self.to_string()));
        match self {
            CliError::Io { path, .. } => {
                m.insert("file".into(), json!(path));
            }
            CliError::Core { file, error } => {
                if let Some(f) = file {
                    m.insert("file".into(), json!(f));
                }
                if let Error::Parse { line, column, .. } = error {
                    m.insert("line".into(), json!(line));
                    m.insert("column".into(), json!(column));
                }
            }
            CliError::Usage(_) => {}
        }
        Value::Object(m)
    }
}

fn core_kind(e: &Error) -> &'static str {
    match e {
        Error::ResourceLimit(_) => "resource_limit",
        Error::Parse { .. } => "parse",
        Error::Validation(_) => "validation",
        Error::Precondition(_) => "precondition",
        Error::NegativeExponent(_) => "negative_exponent",
        Error::InexpressibleExponential(_) => "inexpressible_exponential",
        Error::NonIntegralExponent(_) => "non_integral_exponent",
        Error::FlagContradiction { .. } => "flag_contradiction",
        Error::AmbientMismatch(_) => "ambient_mismatch",
        Error::CharacterNotConstant(_) => "character_not_constant",
        Error::NonColinear(_) => "non_colinear",
        Error::IndependentOfX1(_) => "independent_of_x1",
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, message } => write!(f, "cannot read {}: {}", path, message),
            CliError::Usage(m) => f.write_str(m),
            CliError::Core { file: Some(p), error } => write!(f, "{}: {}", p, error),
            CliError::Core { file: None, error } => write!(f, "{}", error),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(error: Error) -> Self {
        CliError::Core { file: None, error }
    }
}
