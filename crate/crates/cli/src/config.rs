//! Effective run settings: command-line flags over the config file over
//! built-in defaults.

use std::fs;
use std::path::{Path, PathBuf};

use mrsband_core::dataset::EchoTime;
use mrsband_core::energy::{SelectionScope, ZoneConfig};
use mrsband_core::experiment::{ExperimentConfig, SelectionMode};
use serde::Deserialize;

use crate::args::{GlobalArgs, ModeArg};
use crate::UsageError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    seed: Option<u64>,
    zones: Option<[usize; 2]>,
    jobs: Option<usize>,
    out: Option<PathBuf>,
    mode: Option<SelectionMode>,
    include_z1: Option<bool>,
    percents: Option<Vec<u8>>,
    echo: Option<String>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub zones: Option<ZoneConfig>,
    pub jobs: Option<usize>,
    pub out: PathBuf,
    pub mode: SelectionMode,
    pub include_z1: bool,
    pub percents: Vec<u8>,
    pub echo: Option<EchoTime>,
}

impl RunConfig {
    pub fn resolve(flags: &GlobalArgs) -> Result<Self, UsageError> {
        let file = match &flags.config {
            Some(path) => read_file_config(path)?,
            None => FileConfig::default(),
        };
        let zones = match &flags.zones {
            Some(z) => Some(parse_zones(z)?),
            None => file
                .zones
                .map(|[z1_end, z2_end]| ZoneConfig { z1_end, z2_end }),
        };
        let percents = match &flags.percents {
            Some(p) => parse_list(p, "percent")?,
            None => file.percents.unwrap_or_else(|| (1..=10).collect()),
        };
        let mode = match flags.mode {
            Some(ModeArg::Paper) => SelectionMode::Paper,
            Some(ModeArg::Nested) => SelectionMode::Nested,
            None => file.mode.unwrap_or_default(),
        };
        let echo = match flags.echo.as_ref().or(file.echo.as_ref()) {
            Some(e) => Some(
                e.parse::<EchoTime>()
                    .map_err(|e| UsageError(format!("--echo: {e}")))?,
            ),
            None => None,
        };
        let jobs = flags.jobs.or(file.jobs);
        if jobs == Some(0) {
            return Err(UsageError("--jobs must be at least 1".into()));
        }
        Ok(RunConfig {
            seed: flags.seed.or(file.seed).unwrap_or(0),
            zones,
            jobs,
            out: flags
                .out
                .clone()
                .or(file.out)
                .unwrap_or_else(|| PathBuf::from(".")),
            mode,
            include_z1: flags.include_z1.or(file.include_z1).unwrap_or(true),
            percents,
            echo,
        })
    }

    /// Explicit zones, or the defaults rescaled to `m` samples.
    pub fn zones_for(&self, m: usize) -> ZoneConfig {
        self.zones.unwrap_or_else(|| ZoneConfig::default_for(m))
    }

    pub fn scope(&self) -> SelectionScope {
        SelectionScope::from_include_z1(self.include_z1)
    }

    pub fn experiment(&self, m: usize) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(self.zones_for(m), self.seed);
        cfg.percents = self.percents.clone();
        cfg.scope = self.scope();
        cfg.mode = self.mode;
        cfg
    }

    pub fn out_path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }
}

fn read_file_config(path: &Path) -> Result<FileConfig, UsageError> {
    let text = fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| UsageError(format!("config {}: {e}", path.display())))
}

pub fn parse_zones(s: &str) -> Result<ZoneConfig, UsageError> {
    let v: Vec<usize> = parse_list(s, "zone boundary")?;
    match v[..] {
        [z1_end, z2_end] => Ok(ZoneConfig { z1_end, z2_end }),
        _ => Err(UsageError(format!(
            "--zones expects z1_end,z2_end, got {s:?}"
        ))),
    }
}

pub fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, UsageError> {
    s.split(',')
        .map(|item| {
            item.trim()
                .parse()
                .map_err(|_| UsageError(format!("invalid {what} {item:?}")))
        })
        .collect()
}
