//! Declarative run configuration.
//!
//! A single TOML file mirrors the command-line surface; flags given on the
//! command line override file values, which override built-in defaults.

use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    #[serde(default)]
    pub domain: DomainSection,
    #[serde(default)]
    pub exponents: ExponentSection,
    #[serde(default)]
    pub params: ParamSection,
    #[serde(default)]
    pub tolerances: ToleranceSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSection {
    /// Catalog key; alternatively give the raw cover data below.
    pub name: Option<String>,
    pub n: Option<u32>,
    pub m_lip: Option<f64>,
    pub overlap: Option<u32>,
    pub eps: Option<f64>,
    pub measure: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExponentSection {
    pub n: Option<u32>,
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSection {
    pub tau: Option<f64>,
    pub xi: Option<f64>,
    pub sigma: Option<f64>,
    pub delta: Option<f64>,
    pub c_omega: Option<f64>,
    /// "as-printed" or "exponentiated".
    pub formula_variant: Option<String>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSection {
    pub kernel_sup: Option<f64>,
    pub moment: Option<f64>,
    pub mollifier_c_rel: Option<f64>,
    pub mollifier_i1: Option<f64>,
    pub mollifier_p: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub format: Option<String>,
    pub path: Option<PathBuf>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        toml::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}
