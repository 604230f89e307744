//! The claim registry, read from `claims.toml` at build time.

use std::sync::OnceLock;

use serde::Deserialize;

#[derive(Clone, Debug, Deserialize, PartialEq)]
pub struct ClaimEntry {
    pub id: String,
    /// the statement being checked, in plain notation
    pub anchor: String,
    #[serde(default)]
    pub sigma: Vec<f64>,
    pub t_values: Option<Vec<f64>>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub points: Option<usize>,
    pub draws: Option<usize>,
    pub delta_list: Option<Vec<f64>>,
    pub delta_pairs: Option<Vec<[f64; 2]>>,
}

#[derive(Deserialize)]
struct Manifest {
    claim: Vec<ClaimEntry>,
}

const MANIFEST: &str = include_str!("../claims.toml");

pub fn registry() -> &'static [ClaimEntry] {
    static REG: OnceLock<Vec<ClaimEntry>> = OnceLock::new();
    REG.get_or_init(|| toml::from_str::<Manifest>(MANIFEST).expect("claims.toml is malformed").claim)
}

pub fn suite_ids() -> Vec<&'static str> {
    registry().iter().map(|c| c.id.as_str()).collect()
}

pub fn lookup(id: &str) -> anyhow::Result<&'static ClaimEntry> {
    registry()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| anyhow::anyhow!("unknown suite '{id}'; registered suites: {}", suite_ids().join(", ")))
}
