//! Optional JSON run configuration; command-line flags take precedence over
//! file values, which take precedence over built-in defaults.

use serde::Deserialize;
use std::path::Path;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Must match the invoked subcommand when present.
    pub command: Option<String>,
    pub scheme: Option<String>,
    pub params: Option<ParamsConfig>,
    /// Grid values, in the same units the matching flag would use.
    pub grid: Option<Vec<f64>>,
    pub series: Option<SeriesConfig>,
    pub quad: Option<QuadConfig>,
    pub mc: Option<McConfig>,
    pub output: Option<String>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub kappa: Option<f64>,
    pub mu: Option<f64>,
    pub m: Option<f64>,
    /// Mean SNR in linear units (the CLI flag speaks dB instead).
    pub gamma_bar: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeriesConfig {
    pub max_terms: Option<usize>,
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadConfig {
    pub rel: Option<f64>,
    pub abs: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McConfig {
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
    pub streams: Option<u32>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, aep_core::Error> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text)
            .map_err(|e| aep_core::Error::Domain(format!("config {}: {e}", path.display())))
    }
}
