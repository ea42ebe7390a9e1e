//! Zone energies of the single-frequency separation profile and the
//! cumulative-energy feature groups built from it.
//!
//! The frequency axis is split into three zones: Z1 `[0, z1_end)` (acquisition
//! and water artifacts), Z2 `[z1_end, z2_end)` (metabolite resonances) and Z3
//! `[z2_end, m)` (noise tail). The standardized energy of a zone is the mean
//! of `λ²` over it, and Z3's energy is the noise floor used to rescale the
//! others.

use std::io::{self, Write};
use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::dataset::DEFAULT_SAMPLES;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZoneConfig {
    pub z1_end: usize,
    pub z2_end: usize,
}

impl Default for ZoneConfig {
    fn default() -> Self {
        ZoneConfig {
            z1_end: 120,
            z2_end: 400,
        }
    }
}

impl ZoneConfig {
    /// The 512-sample defaults rescaled to `m` samples.
    pub fn default_for(m: usize) -> Self {
        let d = ZoneConfig::default();
        if m == DEFAULT_SAMPLES {
            return d;
        }
        let scale = |b: usize| ((b * m) as f64 / DEFAULT_SAMPLES as f64).round() as usize;
        ZoneConfig {
            z1_end: scale(d.z1_end).max(1),
            z2_end: scale(d.z2_end).max(2),
        }
    }

    pub fn validate(&self, m: usize) -> Result<()> {
        if 0 < self.z1_end && self.z1_end < self.z2_end && self.z2_end < m {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "zones need 0 < z1_end < z2_end < m, got z1_end = {}, z2_end = {}, m = {m}",
                self.z1_end, self.z2_end
            )))
        }
    }

    pub fn z1(&self) -> Range<usize> {
        0..self.z1_end
    }

    pub fn z2(&self) -> Range<usize> {
        self.z1_end..self.z2_end
    }

    pub fn z3(&self, m: usize) -> Range<usize> {
        self.z2_end..m
    }
}

/// Which zones are eligible for feature selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SelectionScope {
    #[default]
    Z1AndZ2,
    Z2Only,
}

impl SelectionScope {
    pub fn from_include_z1(include_z1: bool) -> Self {
        if include_z1 {
            SelectionScope::Z1AndZ2
        } else {
            SelectionScope::Z2Only
        }
    }

    fn range(self, zc: &ZoneConfig) -> Range<usize> {
        match self {
            SelectionScope::Z1AndZ2 => 0..zc.z2_end,
            SelectionScope::Z2Only => zc.z2(),
        }
    }
}

/// Mean of `λ²` over `zone`.
pub fn zone_energy(lambdas: &[f64], zone: Range<usize>) -> Result<f64> {
    if zone.is_empty() || zone.end > lambdas.len() {
        return Err(Error::InvalidArgument(format!(
            "zone {}..{} is empty or outside 0..{}",
            zone.start,
            zone.end,
            lambdas.len()
        )));
    }
    let p = zone.len() as f64;
    Ok(lambdas[zone].iter().map(|v| v * v).sum::<f64>() / p)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub r1: f64,
    pub r2: f64,
    pub zones: ZoneConfig,
}

impl EnergyReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("energy report serializes")
    }
}

pub fn energy_ratios(lambdas: &[f64], zc: &ZoneConfig) -> Result<EnergyReport> {
    let m = lambdas.len();
    zc.validate(m)?;
    let e1 = zone_energy(lambdas, zc.z1())?;
    let e2 = zone_energy(lambdas, zc.z2())?;
    let e3 = zone_energy(lambdas, zc.z3(m))?;
    if e3 == 0.0 {
        return Err(Error::ZeroNoiseEnergy);
    }
    Ok(EnergyReport {
        e1,
        e2,
        e3,
        r1: e1 / e3,
        r2: e2 / e3,
        zones: *zc,
    })
}

/// Eligible frequency indices by descending `λ`, ties by ascending index.
pub fn rank_variables(
    lambdas: &[f64],
    zc: &ZoneConfig,
    scope: SelectionScope,
) -> Result<Vec<usize>> {
    zc.validate(lambdas.len())?;
    let mut idx: Vec<usize> = scope.range(zc).collect();
    idx.sort_by(|&a, &b| lambdas[b].total_cmp(&lambdas[a]).then(a.cmp(&b)));
    Ok(idx)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureGroup {
    pub percent: u8,
    pub indices: Vec<usize>,
    /// Mean `λ²` over the group divided by the Z3 energy.
    pub group_energy_ratio: f64,
}

impl FeatureGroup {
    pub fn n_vars(&self) -> usize {
        self.indices.len()
    }
}

pub fn validate_percents(percents: &[u8]) -> Result<()> {
    if percents.is_empty() {
        return Err(Error::InvalidArgument("percent list is empty".into()));
    }
    if percents.iter().any(|&p| p == 0 || p > 100) || percents.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "percents must be strictly increasing in 1..=100: {percents:?}"
        )));
    }
    Ok(())
}

/// For each `p`, the shortest prefix of the ranking whose `Σ λ²` reaches
/// `p%` of the eligible total. `p = 100` always takes every eligible index.
pub fn cumulative_groups(
    lambdas: &[f64],
    zc: &ZoneConfig,
    scope: SelectionScope,
    percents: &[u8],
) -> Result<Vec<FeatureGroup>> {
    validate_percents(percents)?;
    let report = energy_ratios(lambdas, zc)?;
    let ranking = rank_variables(lambdas, zc, scope)?;
    let prefix: Vec<f64> = ranking
        .iter()
        .scan(0.0, |acc, &k| {
            *acc += lambdas[k] * lambdas[k];
            Some(*acc)
        })
        .collect();
    let total = *prefix.last().expect("non-empty scope");
    if total <= 0.0 {
        return Err(Error::NoDiscriminativeEnergy);
    }
    Ok(percents
        .iter()
        .map(|&p| {
            let len = if p == 100 {
                ranking.len()
            } else {
                let target = f64::from(p) / 100.0 * total;
                prefix
                    .iter()
                    .position(|&s| s >= target)
                    .map_or(ranking.len(), |i| i + 1)
            };
            FeatureGroup {
                percent: p,
                indices: ranking[..len].to_vec(),
                group_energy_ratio: prefix[len - 1] / len as f64 / report.e3,
            }
        })
        .collect())
}

/// CSV `percent,n_vars,group_energy_ratio,indices` with space-separated indices.
pub fn write_groups_csv<W: Write>(groups: &[FeatureGroup], mut out: W) -> io::Result<()> {
    writeln!(out, "percent,n_vars,group_energy_ratio,indices")?;
    for g in groups {
        let idx: Vec<String> = g.indices.iter().map(usize::to_string).collect();
        writeln!(
            out,
            "{},{},{},{}",
            g.percent,
            g.n_vars(),
            g.group_energy_ratio,
            idx.join(" ")
        )?;
    }
    Ok(())
}
