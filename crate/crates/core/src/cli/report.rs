//! Run reports written by the `solve`, `certify` and `hypothesis` commands.

use serde::{Deserialize, Serialize};

use crate::certify::{Certificate, Refutation};
use crate::solver::{EquipartitionResult, FailureDiagnostic, HypothesisReport};

use super::problem::ProblemFile;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: CommandEcho,
    #[serde(flatten)]
    pub outcome: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residuals: Option<(f64, f64)>,
    /// Wall-clock seconds; only recorded on request so reports stay
    /// reproducible byte for byte.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<f64>,
}

/// The command and the problem it ran on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandEcho {
    pub name: String,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    pub problem: ProblemFile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", content = "data", rename_all = "snake_case")]
pub enum Outcome {
    Result(EquipartitionResult),
    Certificate(Certificate),
    Refutation(Refutation),
    Diagnostic(Diagnostic),
    Hypothesis(HypothesisReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    NoEquipartition(FailureDiagnostic),
    GridTooCoarse { indices: Vec<usize>, bound: f64, grid_step: f64 },
}

impl RunReport {
    pub fn new(command: CommandEcho, outcome: Outcome) -> Self {
        let residuals = match &outcome {
            Outcome::Result(r) => Some(r.residuals),
            Outcome::Refutation(r) => Some(r.residuals),
            _ => None,
        };
        Self { tool: TOOL.into(), version: VERSION.into(), command, outcome, residuals, timing: None }
    }

    /// Exit code of the command that produced this report.
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Outcome::Result(_) | Outcome::Certificate(_) | Outcome::Hypothesis(_) => 0,
            Outcome::Diagnostic(Diagnostic::NoEquipartition(_)) => 2,
            Outcome::Refutation(_) => 3,
            Outcome::Diagnostic(Diagnostic::GridTooCoarse { .. }) => 4,
        }
    }

    /// The solution wedge, if the outcome carries one.
    pub fn solution(&self) -> Option<(usize, [f64; 2])> {
        match &self.outcome {
            Outcome::Result(r) => Some((r.j, r.t.into())),
            Outcome::Refutation(r) => Some((r.j, r.t.into())),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
