use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: String,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    #[serde(default)]
    pub scale: Scale,
}

impl SweepConfig {
    /// Parses `start,stop,count` into a log-spaced sweep of `parameter`.
    pub fn parse_triplet(parameter: &str, spec: &str) -> CliResult<Self> {
        let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
        let bad = || CliError::schema(format!("expected START,STOP,COUNT, got `{spec}`"));
        if parts.len() != 3 {
            return Err(bad());
        }
        Ok(Self {
            parameter: parameter.to_string(),
            start: parts[0].parse().map_err(|_| bad())?,
            stop: parts[1].parse().map_err(|_| bad())?,
            count: parts[2].parse().map_err(|_| bad())?,
            scale: Scale::Log,
        })
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.count < 2 {
            return Err(CliError::schema(format!(
                "sweep count must be at least 2, got {}",
                self.count
            )));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(CliError::schema("sweep bounds must be finite"));
        }
        if self.scale == Scale::Log && (self.start <= 0.0 || self.stop <= 0.0) {
            return Err(CliError::schema("log sweeps need positive bounds"));
        }
        Ok(())
    }

    /// Sweep points in order, endpoints included.
    pub fn values(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|k| {
                if k == n - 1 {
                    return self.stop;
                }
                let s = k as f64 / (n - 1) as f64;
                match self.scale {
                    Scale::Linear => self.start + s * (self.stop - self.start),
                    Scale::Log => self.start * (self.stop / self.start).powf(s),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

/// A config file with experiment-specific `params`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig<P> {
    pub experiment: String,
    #[serde(
        default = "Default::default",
        bound(deserialize = "P: Deserialize<'de> + Default")
    )]
    pub params: P,
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl<P: Default> RunConfig<P> {
    pub fn empty(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            params: P::default(),
            sweep: None,
            output: OutputConfig::default(),
        }
    }
}

#[derive(Deserialize)]
struct Head {
    experiment: String,
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::schema(format!("cannot read {}: {e}", path.display())))
}

fn parse_error(path: &Path, e: toml::de::Error) -> CliError {
    CliError::schema(format!("{}: {}", path.display(), e.to_string().trim_end()))
}

/// Reads only the `experiment` key, for dispatch.
pub fn experiment_of(path: &Path) -> CliResult<String> {
    let text = read(path)?;
    let head: Head = toml::from_str(&text).map_err(|e| parse_error(path, e))?;
    Ok(head.experiment)
}

/// Parses a config file whose `experiment` must be `expected`.
pub fn load<P: DeserializeOwned + Default>(path: &Path, expected: &str) -> CliResult<RunConfig<P>> {
    let text = read(path)?;
    let config: RunConfig<P> = toml::from_str(&text).map_err(|e| parse_error(path, e))?;
    if config.experiment != expected {
        return Err(CliError::schema(format!(
            "{}: experiment is `{}` but the `{expected}` command was used",
            path.display(),
            config.experiment
        )));
    }
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sweep_hits_endpoints() {
        let s = SweepConfig::parse_triplet("omega", "0.01, 0.0025, 3").unwrap();
        let v = s.values();
        assert_eq!(v.len(), 3);
        assert_eq!(v, [0.01, 0.005, 0.0025]);
        assert!(SweepConfig::parse_triplet("omega", "1,2").is_err());
    }

    #[test]
    fn count_below_two_is_rejected() {
        let s = SweepConfig {
            parameter: "x".into(),
            start: 0.0,
            stop: 1.0,
            count: 1,
            scale: Scale::Linear,
        };
        assert!(matches!(s.validate(), Err(CliError::Schema(_))));
    }
}
