//! The JSON configuration document.

use serde::{Deserialize, Serialize};

use crate::corpus::CorpusThresholds;
use crate::detectors::{DetectorConfig, DetectorThresholds, NameLexicon};
use crate::metrics::FilterConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("invalid configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

/// Every section is optional; missing values take their defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub thresholds: DetectorThresholds,
    pub lexicons: NameLexicon,
    pub filters: FilterConfig,
    pub corpus: CorpusThresholds,
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let config: Config = serde_json::from_str(text)?;
        config.validated()
    }

    pub fn validated(mut self) -> Result<Self, ConfigError> {
        self.thresholds.validate().map_err(ConfigError::Invalid)?;
        self.lexicons = self.lexicons.normalized().map_err(ConfigError::Invalid)?;
        let f = &self.filters;
        if !(f.mild_factor > 0.0 && f.extreme_factor >= f.mild_factor) {
            return Err(ConfigError::Invalid(
                "filter factors must satisfy 0 < mild_factor <= extreme_factor".into(),
            ));
        }
        let c = &self.corpus;
        if !(0.0..=1.0).contains(&c.min_parse_ratio) || !(0.0..=1.0).contains(&c.min_python_share) {
            return Err(ConfigError::Invalid(
                "corpus ratios must lie in [0, 1]".into(),
            ));
        }
        Ok(self)
    }

    pub fn detector_config(&self) -> DetectorConfig {
        DetectorConfig {
            thresholds: self.thresholds.clone(),
            lexicons: self.lexicons.clone(),
            filters: self.filters,
        }
    }
}
