//! The solver contract and its implementations.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formats::format_value;
use crate::tasks::{RetrievalKey, TaskInstance};

mod http;
mod oracle;
mod random;
mod statistical;

pub use http::HttpSolver;
pub use oracle::OracleSolver;
pub use random::RandomSolver;
pub use statistical::{StatisticalSolver, Thresholds};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub role: String,
    pub content: String,
}

impl Message {
    pub fn user(content: impl Into<String>) -> Self {
        Self {
            role: "user".into(),
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        Self {
            role: "assistant".into(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("request timed out after {attempts} attempt(s)")]
    Timeout { attempts: u32 },
    #[error("transport error after {attempts} attempt(s): {message}")]
    Transport { attempts: u32, message: String },
    #[error("HTTP status {status} after {attempts} attempt(s): {body}")]
    Status { status: u16, attempts: u32, body: String },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("cannot read the series from the prompt: {0}")]
    Input(String),
    #[error("invalid solver configuration: {0}")]
    Config(String),
}

/// Anything that answers tasks. Implementations must be callable from
/// several threads at once.
pub trait Solver: Send + Sync {
    fn name(&self) -> &str;

    /// Answer `task`. `messages` is the conversation so far, ending with the
    /// user turn to answer; for a single-turn task it is just the prompt.
    fn solve(&self, task: &TaskInstance, messages: &[Message]) -> Result<String, SolverError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Oracle,
    Statistical,
    Http,
    Random,
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Oracle => "oracle",
            SolverKind::Statistical => "statistical",
            SolverKind::Http => "http",
            SolverKind::Random => "random",
        })
    }
}

impl FromStr for SolverKind {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, SolverError> {
        match s {
            "oracle" => Ok(SolverKind::Oracle),
            "statistical" => Ok(SolverKind::Statistical),
            "http" => Ok(SolverKind::Http),
            "random" => Ok(SolverKind::Random),
            other => Err(SolverError::Config(format!("unknown solver `{other}`"))),
        }
    }
}

pub const ENV_URL: &str = "TSBENCH_API_URL";
pub const ENV_KEY: &str = "TSBENCH_API_KEY";
pub const ENV_MODEL: &str = "TSBENCH_MODEL";

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub kind: SolverKind,
    pub endpoint: Option<String>,
    pub api_key: Option<String>,
    pub model_name: String,
    pub timeout: Duration,
    pub max_retries: u32,
    pub concurrency_limit: usize,
    /// First retry delay; doubled on each further attempt.
    pub backoff_base: Duration,
    /// Append request/response records here as JSONL.
    pub transcript: Option<PathBuf>,
    /// Seed for the random solver.
    pub seed: u64,
}

impl SolverConfig {
    pub fn new(kind: SolverKind) -> Self {
        Self {
            kind,
            endpoint: None,
            api_key: None,
            model_name: String::new(),
            timeout: Duration::from_secs(60),
            max_retries: 3,
            concurrency_limit: 4,
            backoff_base: Duration::from_secs(1),
            transcript: None,
            seed: 0,
        }
    }

    /// Fill endpoint, key and model from the environment where unset.
    pub fn with_env(mut self) -> Self {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.is_empty());
        if self.endpoint.is_none() {
            self.endpoint = var(ENV_URL);
        }
        if self.api_key.is_none() {
            self.api_key = var(ENV_KEY);
        }
        if self.model_name.is_empty() {
            self.model_name = var(ENV_MODEL).unwrap_or_default();
        }
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if self.timeout.is_zero() {
            return Err(SolverError::Config("timeout must be positive".into()));
        }
        if self.concurrency_limit == 0 {
            return Err(SolverError::Config("concurrency limit must be at least 1".into()));
        }
        if self.kind == SolverKind::Http {
            if self.endpoint.as_deref().is_none_or(str::is_empty) {
                return Err(SolverError::Config(format!("http solver needs an endpoint (or {ENV_URL})")));
            }
            if self.model_name.is_empty() {
                return Err(SolverError::Config(format!("http solver needs a model name (or {ENV_MODEL})")));
            }
        }
        Ok(())
    }
}

/// Construct the solver described by `config`.
pub fn build_solver(config: &SolverConfig) -> Result<Box<dyn Solver>, SolverError> {
    config.validate()?;
    Ok(match config.kind {
        SolverKind::Oracle => Box::new(OracleSolver),
        SolverKind::Statistical => Box::new(StatisticalSolver::default()),
        SolverKind::Random => Box::new(RandomSolver::new(config.seed)),
        SolverKind::Http => Box::new(HttpSolver::new(config.clone())?),
    })
}

pub(crate) fn yes_no(b: bool) -> String {
    if b { "Yes" } else { "No" }.to_string()
}

pub(crate) fn choice(c: char) -> String {
    format!("({c})")
}

/// The dictionary reply requested by the retrieval prompt.
pub fn format_retrieval(key: &RetrievalKey) -> String {
    format!(
        "{{'max_value': {{'value': {}, 'date': '{}'}}, 'min_value': {{'value': {}, 'date': '{}'}}, 'value_on_date {}': {{'value': {}}}}}",
        format_value(key.max.value),
        key.max.date,
        format_value(key.min.value),
        key.min.date,
        key.value_on_date.date,
        format_value(key.value_on_date.value),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn http_config_needs_endpoint_and_model() {
        let mut c = SolverConfig::new(SolverKind::Http);
        assert!(c.validate().is_err());
        c.endpoint = Some("http://localhost:1".into());
        assert!(c.validate().is_err());
        c.model_name = "m".into();
        assert!(c.validate().is_ok());
        c.timeout = Duration::ZERO;
        assert!(c.validate().is_err());
        assert!(SolverConfig::new(SolverKind::Oracle).validate().is_ok());
    }
}
