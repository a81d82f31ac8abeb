use std::path::{Path, PathBuf};

use pmtopo_core::budget::parse_t_grid;
use pmtopo_core::convergence::SequenceSpec;
use pmtopo_core::{Ball, Family, MutationKind, PmSpace, SampleBudget, Vector};
use serde::Deserialize;

/// Batch configuration file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub instance: Option<PmSpace>,
    #[serde(default)]
    pub budget: Option<SampleBudget>,
    /// Subcommand name; must match the one invoked when present.
    #[serde(default)]
    pub operation: Option<String>,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

/// Operation parameters. Each subcommand reads the fields it needs.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub c: Option<f64>,
    pub candidates: Option<Vec<f64>>,
    pub beta: Option<f64>,
    pub points: Option<Vec<Vector>>,
    pub x: Option<Vector>,
    pub y: Option<Vector>,
    pub point: Option<Vector>,
    pub level: Option<f64>,
    pub level2: Option<f64>,
    pub scale: Option<f64>,
    pub scale2: Option<f64>,
    pub outer: Option<Ball>,
    pub second: Option<Ball>,
    pub target: Option<Ball>,
    pub lambda: Option<f64>,
    pub sequence: Option<SequenceSpec>,
    pub n_max: Option<u64>,
    pub k_max: Option<u64>,
    pub eps_conv: Option<f64>,
    pub expect_converges: Option<bool>,
    pub runs: Option<u64>,
    pub family: Option<Family>,
    pub mutation: Option<MutationKind>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let config: Config = serde_json::from_str(&text)
            .map_err(|e| format!("invalid config {}: {e}", path.display()))?;
        if let Some(space) = &config.instance {
            space
                .validate()
                .map_err(|e| format!("invalid instance: {e}"))?;
        }
        Ok(config)
    }

    pub fn require_instance(&self) -> Result<&PmSpace, String> {
        self.instance
            .as_ref()
            .ok_or_else(|| "this operation needs a config with an instance (--config)".to_string())
    }
}

/// Flag overrides applied on top of the config budget.
#[derive(Debug, Clone, Default)]
pub struct BudgetFlags {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub t_grid: Option<String>,
    pub epsilon: Option<f64>,
}

pub fn resolve_budget(config: &Config, flags: &BudgetFlags) -> Result<SampleBudget, String> {
    let mut b = config.budget.clone().unwrap_or_default();
    if let Some(seed) = flags.seed {
        b.rng_seed = seed;
    }
    if let Some(n) = flags.samples {
        b.n_vectors = n;
    }
    if let Some(g) = &flags.t_grid {
        b.t_grid = parse_t_grid(g).map_err(|e| e.to_string())?;
    }
    if let Some(eps) = flags.epsilon {
        b.epsilon = eps;
    }
    b.validate().map_err(|e| format!("invalid budget: {e}"))?;
    Ok(b)
}
