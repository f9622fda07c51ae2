//! TOML run configuration. Every key is optional; command-line flags win.

use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub run: RunSection,
    pub data: DataSection,
    pub algorithm: AlgorithmSection,
    pub plan: PlanSection,
    pub measures: MeasuresSection,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunSection {
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub path: Option<PathBuf>,
    pub holdout: Option<PathBuf>,
    pub holdout_fraction: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmSection {
    pub name: Option<String>,
    pub width: Option<usize>,
    pub learning_rate: Option<f64>,
    pub steps: Option<usize>,
    pub batch_size: Option<usize>,
    pub noise: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlanSection {
    pub sizes: Option<String>,
    pub replicates: Option<usize>,
    pub loss_cap: Option<f64>,
    pub metric: Option<String>,
    pub normalize: Option<bool>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeasuresSection {
    pub epsilon: Vec<f64>,
    pub at: Vec<usize>,
    pub delta: Option<f64>,
    pub rounds: Option<usize>,
    pub search_limit: Option<usize>,
    pub budget: Option<usize>,
}

pub fn load(path: Option<&Path>) -> anyhow::Result<FileConfig> {
    let Some(path) = path else {
        return Ok(FileConfig::default());
    };
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse(&text).with_context(|| format!("in config {}", path.display()))
}

pub fn parse(text: &str) -> anyhow::Result<FileConfig> {
    Ok(toml::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sections_parse() {
        let cfg = parse(
            r#"
            [run]
            seed = 7
            [algorithm]
            name = "probe:mlp2"
            width = 64
            [plan]
            sizes = "log:10:1000:5"
            [measures]
            epsilon = [0.1, 0.5]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.run.seed, Some(7));
        assert_eq!(cfg.algorithm.width, Some(64));
        assert_eq!(cfg.measures.epsilon, vec![0.1, 0.5]);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse("[plan]\nsizez = \"1,2\"").is_err());
    }
}
