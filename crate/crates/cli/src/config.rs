//! TOML run configuration. Every field is optional; command-line flags take
//! precedence over the file, and the file over built-in defaults.
//!
//! ```toml
//! threads = 4
//!
//! [selector]
//! threshold = 0.05
//! budget_q = 400
//! bandwidth_grid = [0.3, 0.5, 0.8, 1.2, 1.8, 2.7]
//! weight = { kind = "unit" }
//!
//! [model]
//! model = "m1"
//! n = 200
//! p = 50
//! trap = true
//!
//! [experiment]
//! replications = 20
//!
//! [benchmark]
//! p_list = [100, 500, 1000]
//! ```

use std::fs;
use std::path::Path;

use novas_core::{ModelSpec, SelectorConfig};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub threads: Option<usize>,
    pub selector: SelectorConfig,
    pub model: ModelSpec,
    pub experiment: ExperimentConfig,
    pub benchmark: BenchmarkConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub replications: u32,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { replications: 100 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub p_list: Vec<usize>,
    pub n: usize,
    pub stages: usize,
    pub repeats: usize,
    pub seed: u64,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            p_list: vec![100, 500, 1000],
            n: 100,
            stages: 4,
            repeats: 1,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }
}
