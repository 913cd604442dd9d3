use std::fmt;
use std::path::Path;

use serde::Serialize;
use swe_core::Error as CoreError;

/// Machine-readable name of the violated rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    Config,
    Dalang,
    Wraparound,
    Cfl,
    Replicates,
    SigmaAtOne,
    DenseSize,
    MemoryBudget,
    NotPsd,
    Quadrature,
    Degenerate,
    SeedMismatch,
    MixedFingerprint,
    Io,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = serde_json::to_value(self).expect("rule serializes");
        write!(f, "{}", name.as_str().unwrap_or("unknown"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CliError {
    rule: Rule,
    message: String,
}

impl CliError {
    pub fn new(rule: Rule, message: impl Into<String>) -> Self {
        Self {
            rule,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, err: std::io::Error) -> Self {
        Self::new(Rule::Io, format!("{}: {err}", path.display()))
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn message(&self) -> &str {
        &self.message
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        let rule = match &e {
            CoreError::Dalang { .. } => Rule::Dalang,
            CoreError::InvalidParameter { .. } => Rule::Config,
            CoreError::Wraparound { .. } => Rule::Wraparound,
            CoreError::Quadrature { .. } => Rule::Quadrature,
            CoreError::Cfl { .. } => Rule::Cfl,
            CoreError::InsufficientReplicates { .. } => Rule::Replicates,
            CoreError::Degenerate(_) => Rule::Degenerate,
            CoreError::SeedMismatch(_) => Rule::SeedMismatch,
            CoreError::MemoryBudget { .. } => Rule::MemoryBudget,
            CoreError::NotPsd(_) => Rule::NotPsd,
        };
        Self::new(rule, e.to_string())
    }
}
