use std::path::PathBuf;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zetasum_core::estlab::log_grid;
use zetasum_core::Precision;

use crate::registry::{lookup, ClaimEntry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    #[default]
    Log,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
    #[serde(default)]
    pub spacing: Spacing,
}

impl TGrid {
    pub fn values(&self) -> anyhow::Result<Vec<f64>> {
        if self.points < 5 {
            bail!("t grid needs at least 5 points, got {}", self.points);
        }
        Ok(log_grid(self.t_min, self.t_max, self.points)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum PrecisionOpt {
    #[default]
    Standard,
    Extended,
}

impl From<PrecisionOpt> for Precision {
    fn from(p: PrecisionOpt) -> Precision {
        match p {
            PrecisionOpt::Standard => Precision::Standard,
            PrecisionOpt::Extended => Precision::Extended,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub suite: String,
    #[serde(default)]
    pub sigma_list: Vec<f64>,
    pub t_grid: Option<TGrid>,
    /// explicit `t` list for the suites that check fixed points
    pub t_values: Option<Vec<f64>>,
    #[serde(default)]
    pub delta_list: Vec<f64>,
    #[serde(default)]
    pub delta_pairs: Vec<[f64; 2]>,
    pub draws: Option<usize>,
    #[serde(default = "one")]
    pub threads: usize,
    #[serde(default)]
    pub precision: PrecisionOpt,
    #[serde(default)]
    pub out_format: OutFormat,
    pub out_path: Option<PathBuf>,
    #[serde(default = "seven")]
    pub seed: u64,
}

fn one() -> usize {
    1
}

fn seven() -> u64 {
    7
}

/// The part of a config that can change results; threads and output settings are left out.
#[derive(Serialize)]
struct HashView<'a> {
    suite: &'a str,
    sigma_list: &'a [f64],
    t_grid: Option<TGrid>,
    t_values: Option<&'a [f64]>,
    delta_list: &'a [f64],
    delta_pairs: &'a [[f64; 2]],
    draws: Option<usize>,
    precision: PrecisionOpt,
    seed: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl ExperimentConfig {
    /// Defaults for a registered suite.
    pub fn for_suite(id: &str) -> anyhow::Result<ExperimentConfig> {
        let e = lookup(id)?;
        Ok(Self::from_entry(e))
    }

    fn from_entry(e: &ClaimEntry) -> ExperimentConfig {
        let t_grid = match (e.t_min, e.t_max, e.points) {
            (Some(t_min), Some(t_max), Some(points)) => Some(TGrid { t_min, t_max, points, spacing: Spacing::Log }),
            _ => None,
        };
        ExperimentConfig {
            suite: e.id.clone(),
            sigma_list: e.sigma.clone(),
            t_grid,
            t_values: e.t_values.clone(),
            delta_list: e.delta_list.clone().unwrap_or_default(),
            delta_pairs: e.delta_pairs.clone().unwrap_or_default(),
            draws: e.draws,
            threads: 1,
            precision: PrecisionOpt::Standard,
            out_format: OutFormat::Csv,
            out_path: None,
            seed: 7,
        }
    }

    /// Parse a TOML config; fields it leaves out take the suite defaults.
    pub fn from_toml(text: &str) -> anyhow::Result<ExperimentConfig> {
        let raw: toml::Table = toml::from_str(text).context("parsing config")?;
        let suite = raw.get("suite").and_then(|v| v.as_str()).context("config needs a 'suite' key")?;
        let mut merged = toml::Table::try_from(Self::for_suite(suite)?)?;
        for (k, v) in raw {
            merged.insert(k, v);
        }
        let cfg: ExperimentConfig = merged.try_into().context("config fields")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        lookup(&self.suite)?;
        if self.threads == 0 {
            bail!("threads must be >= 1");
        }
        if let Some(g) = &self.t_grid {
            g.values()?;
        }
        if let Some(v) = &self.t_values {
            if v.is_empty() || v.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
                bail!("t values must be nonempty and strictly increasing");
            }
        }
        if self.sigma_list.iter().chain(&self.delta_list).any(|x| !x.is_finite()) {
            bail!("non-finite parameter");
        }
        Ok(())
    }

    pub fn grid(&self) -> anyhow::Result<Vec<f64>> {
        match &self.t_grid {
            Some(g) => g.values(),
            None => bail!("suite '{}' needs a t grid", self.suite),
        }
    }

    pub fn points(&self) -> anyhow::Result<Vec<f64>> {
        match &self.t_values {
            Some(v) => Ok(v.clone()),
            None => bail!("suite '{}' needs a t list", self.suite),
        }
    }

    pub fn config_hash(&self) -> String {
        let view = HashView {
            suite: &self.suite,
            sigma_list: &self.sigma_list,
            t_grid: self.t_grid,
            t_values: self.t_values.as_deref(),
            delta_list: &self.delta_list,
            delta_pairs: &self.delta_pairs,
            draws: self.draws,
            precision: self.precision,
            seed: self.seed,
        };
        sha256_hex(serde_json::to_string(&view).expect("config serializes").as_bytes())
    }
}
