//! File formats and command implementations behind the `blochsep` binary.

pub mod commands;
pub mod float_repr;
pub mod report;
pub mod scan;
pub mod state_file;
pub mod witness_file;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use blochsep::{SystemShape, Verdict};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] blochsep::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Process exit status: 0, 1 and 2 carry a verdict, anything above is an
/// error.
pub fn verdict_exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::SeparableCertified => 0,
        Verdict::Entangled => 1,
        Verdict::Inconclusive => 2,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) | Self::Io { .. } | Self::Json { .. } => 3,
            Self::Core(e) => match e {
                blochsep::Error::Usage(_) | blochsep::Error::ParameterRange { .. } => 3,
                blochsep::Error::NumericalInconsistency(_) => 5,
                _ => 4,
            },
            Self::Verification(_) => 5,
        }
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Writes to `path`, or to stdout when no path is given.
pub fn write_text(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn to_json<T: serde::Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|source| CliError::Json {
        context: "serializing output".into(),
        source,
    })?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: serde::de::DeserializeOwned>(text: &str, context: &Path) -> CliResult<T> {
    serde_json::from_str(text).map_err(|source| CliError::Json {
        context: context.display().to_string(),
        source,
    })
}

/// Parses `key=value` assignments into a parameter map.
pub fn parse_assignments(items: &[String]) -> CliResult<BTreeMap<String, f64>> {
    items
        .iter()
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("expected key=value, got {item:?}")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("{k}: {v:?} is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Parses "2,2,2" or "[2,2,2]".
pub fn parse_shape(s: &str) -> CliResult<SystemShape> {
    let dims = s
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Usage(format!("bad shape {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(SystemShape::new(dims)?)
}

/// Accepts a number or "inf".
pub fn parse_p(s: &str) -> CliResult<f64> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other
            .parse()
            .map_err(|_| CliError::Usage(format!("bad norm order {s:?}"))),
    }
}
