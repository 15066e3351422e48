use std::path::PathBuf;

use thiserror::Error;

/// Failures raised while advancing the model by one day.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    /// A daily outflow exceeded its stock. Inputs are outside the range where
    /// the difference equations stay non-negative.
    #[error("step-size violation: {compartment} would become {value:e}")]
    NegativeStock { compartment: &'static str, value: f64 },
    #[error("non-finite input `{name}` = {value}")]
    NonFinite { name: &'static str, value: f64 },
    #[error("probability `{name}` = {value} outside [0, 1]")]
    ProbabilityRange { name: &'static str, value: f64 },
    /// The soft controller needs a non-empty band between the normal and
    /// maximum stress levels.
    #[error("degenerate stress band: h_max = {h_max}, l_norm = {l_norm}")]
    DegenerateBand { h_max: f64, l_norm: f64 },
    #[error("trajectory has {available} rows, horizon needs {required}")]
    HorizonTooShort { required: usize, available: usize },
    #[error("power {m} undefined for negative output gap term {value:e}")]
    UndefinedPower { m: f64, value: f64 },
    #[error("quarterly table needs at least 90 days, trajectory ends at day {last_day}")]
    TooShortForQuarters { last_day: u32 },
}

/// A model error tagged with the simulation day on which it occurred.
#[derive(Debug, Error, Clone, PartialEq)]
#[error("day {day}: {source}")]
pub struct SimError {
    pub day: u32,
    #[source]
    pub source: ModelError,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(#[from] toml::ser::Error),
}

impl ConfigError {
    pub(crate) fn invalid(path: impl Into<String>, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            path: path.into(),
            reason: reason.into(),
        }
    }

    /// Dotted key path the error refers to.
    pub fn key_path(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { path, .. } | ConfigError::Parse { path, .. } => Some(path),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("writing {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("writing {}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}
