use qcfa::{Error, Result};
use serde::{Deserialize, Serialize};

use crate::report::{Engine, Format};
use crate::sources::{generate_inputs, OracleSource};

/// An experiment file. Command-line flags override its fields.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Builtin name with parameters, or a definition file ending in `.json`.
    pub machine: Option<String>,
    #[serde(default)]
    pub oracle: OracleSource,
    #[serde(default)]
    pub inputs: Vec<String>,
    /// Input generators such as `power-eq:3` or `unary:0..6`.
    #[serde(default)]
    pub generators: Vec<String>,
    pub engine: Option<Engine>,
    pub precision: Option<usize>,
    pub trials: Option<u64>,
    pub max_steps: Option<u64>,
    pub node_budget: Option<usize>,
    pub seed: Option<u64>,
    pub prover: Option<String>,
    pub out: Option<String>,
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn from_file(path: &str) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })
    }

    /// Explicit inputs followed by generated ones, in order.
    pub fn input_set(&self) -> Result<Vec<String>> {
        let mut out = self.inputs.clone();
        for g in &self.generators {
            out.extend(generate_inputs(g)?);
        }
        Ok(out)
    }
}
