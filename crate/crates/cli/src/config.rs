use std::path::Path;
use std::time::Duration;

use serde::Deserialize;
use thiserror::Error;

pub const DEFAULT_ENDPOINT: &str = "https://en.wiktionary.org";
pub const ENDPOINT_ENV: &str = "WIKIPARADIGM_ENDPOINT";
pub const RATE_LIMIT_ENV: &str = "WIKIPARADIGM_RATE_LIMIT";

/// How to reach the wiki. Loaded from a TOML file, then overridden by the
/// environment.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FetchConfig {
    /// Base URL; pages are read from `<endpoint>/w/index.php?action=raw`.
    pub endpoint: String,
    /// Requests per second.
    pub rate_limit: f64,
    /// Attempts after the first one for transient failures.
    pub retries: u32,
    pub retry_delay_ms: u64,
    pub timeout_secs: u64,
    pub user_agent: String,
}

impl Default for FetchConfig {
    fn default() -> Self {
        FetchConfig {
            endpoint: DEFAULT_ENDPOINT.to_string(),
            rate_limit: 1.0,
            retries: 3,
            retry_delay_ms: 1000,
            timeout_secs: 30,
            user_agent: format!(
                "wikiparadigm/{} (dictionary ingestion; one request per second)",
                env!("CARGO_PKG_VERSION")
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
    #[error("{name}: {message}")]
    Invalid { name: String, message: String },
}

impl FetchConfig {
    /// Reads `path` if given, then applies environment overrides.
    pub fn load(path: Option<&Path>) -> Result<Self, ConfigError> {
        let mut config = match path {
            Some(p) => Self::from_toml_file(p)?,
            None => FetchConfig::default(),
        };
        config.apply_env(|k| std::env::var(k).ok())?;
        config.validate()?;
        Ok(config)
    }

    pub fn from_toml_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
            path: path.display().to_string(),
            source,
        })?;
        toml::from_str(&text).map_err(|source| ConfigError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn apply_env(&mut self, var: impl Fn(&str) -> Option<String>) -> Result<(), ConfigError> {
        if let Some(endpoint) = var(ENDPOINT_ENV).filter(|v| !v.trim().is_empty()) {
            self.endpoint = endpoint.trim().to_string();
        }
        if let Some(rate) = var(RATE_LIMIT_ENV).filter(|v| !v.trim().is_empty()) {
            self.rate_limit = rate.trim().parse().map_err(|_| ConfigError::Invalid {
                name: RATE_LIMIT_ENV.into(),
                message: format!("'{rate}' is not a number"),
            })?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.rate_limit.is_finite() && self.rate_limit > 0.0) {
            return Err(ConfigError::Invalid {
                name: "rate_limit".into(),
                message: "must be a positive number of requests per second".into(),
            });
        }
        if !(self.endpoint.starts_with("http://") || self.endpoint.starts_with("https://")) {
            return Err(ConfigError::Invalid {
                name: "endpoint".into(),
                message: format!("'{}' is not an http(s) URL", self.endpoint),
            });
        }
        Ok(())
    }

    /// Minimum time between two request starts.
    pub fn interval(&self) -> Duration {
        Duration::from_secs_f64(1.0 / self.rate_limit)
    }
}
