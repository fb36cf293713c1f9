//! The run configuration document (TOML).
//!
//! Loading validates everything. The manifest written next to sweep outputs
//! is this same document with every default filled in plus a `provenance`
//! table, so it can be passed back through `--config`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::assignment::SolveOptions;
use crate::error::{Error, Result};
use crate::experiments::{MetricsReport, ScenarioSpec};
use crate::rf_model::{ChannelModel, RfCatalog, RfInterface};

pub const SEED_SCHEDULE: &str = "splitmix64(base_seed ^ splitmix64(point << 32 | run))";
pub const PRECEDENCE: &str = "flags > file > defaults";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub repair_conflicts: bool,
    #[serde(default = "yes")]
    pub truncate_channels_to_sources: bool,
    #[serde(default)]
    pub channel_model: ChannelModel,
    #[serde(default = "ScenarioSpec::s1")]
    pub scenario: ScenarioSpec,
    #[serde(default = "default_catalog")]
    pub rf_catalog: Vec<RfInterface>,
    /// Written by `sweep`; ignored on load.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Provenance {
    pub code_version: String,
    pub precedence: String,
    /// Flags that overrode the file or the defaults.
    pub overridden: Vec<String>,
    pub seed_schedule: String,
    /// Per sweep point, the run seeds in hex.
    pub seeds: Vec<Vec<String>>,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

fn yes() -> bool {
    true
}

fn default_catalog() -> Vec<RfInterface> {
    RfCatalog::default_catalog().interfaces().cloned().collect()
}

impl Default for Config {
    fn default() -> Self {
        Self {
            output_dir: default_output_dir(),
            repair_conflicts: false,
            truncate_channels_to_sources: true,
            channel_model: ChannelModel::default(),
            scenario: ScenarioSpec::s1(),
            rf_catalog: default_catalog(),
            provenance: None,
        }
    }
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.catalog()?;
        self.channel_model.validate()?;
        self.scenario.validate()?;
        if self.scenario.base_seed > i64::MAX as u64 {
            return Err(Error::Config(format!(
                "scenario: base_seed {} exceeds {}",
                self.scenario.base_seed,
                i64::MAX
            )));
        }
        Ok(())
    }

    pub fn catalog(&self) -> Result<RfCatalog> {
        RfCatalog::new(self.rf_catalog.clone())
            .map_err(|e| Error::Config(format!("rf_catalog: {e}")))
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            truncate_channels_to_sources: self.truncate_channels_to_sources,
            repair_conflicts: self.repair_conflicts,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(format!("serializing config: {e}")))
    }

    /// The config echo with a provenance table for `report`.
    pub fn manifest(&self, report: &MetricsReport, overridden: &[String]) -> Result<String> {
        let mut echo = self.clone();
        echo.provenance = Some(Provenance {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            precedence: PRECEDENCE.to_string(),
            overridden: overridden.to_vec(),
            seed_schedule: SEED_SCHEDULE.to_string(),
            seeds: report
                .seeds
                .iter()
                .map(|p| p.iter().map(|s| format!("{s:#018x}")).collect())
                .collect(),
        });
        Ok(format!("# run manifest\n{}", echo.to_toml()?))
    }
}
