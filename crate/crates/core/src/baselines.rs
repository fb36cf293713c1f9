//! Comparison algorithms, expressed as restrictions of the same pipeline.
//!
//! Each baseline only narrows the candidate columns and the quota, so its
//! feasible set is nested inside the unrestricted one and the dominance
//! ordering between algorithms holds on every instance.

use std::fmt;
use std::str::FromStr;

use crate::assignment::{solve_restricted, AssignmentResult, Restriction, SolveOptions};
use crate::error::{Error, Result};
use crate::rf_model::RfCatalog;
use crate::topology::{RateTable, Topology};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgorithmName {
    /// Dynamic selection over every M2M and M2B interface.
    Donsa,
    /// Dynamic M2M selection, single M2B interface.
    Dorsa,
    /// Relay selection with one fixed interface per hop.
    Sorsa,
    /// Direct transmission only.
    Ditosa,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmSpec {
    pub name: AlgorithmName,
    pub allowed_m2m_rfs: Vec<String>,
    pub allowed_m2b_rfs: Vec<String>,
    pub relays_enabled: bool,
    pub direct_enabled: bool,
}

/// CLI keys of the built-in algorithms, in dominance order.
pub const ALGORITHM_KEYS: [&str; 4] = ["donsa_wbz_lmn", "dorsa_wbz_l", "sorsa_w_l", "ditosa_l"];

fn names(ids: &[&str]) -> Vec<String> {
    ids.iter().map(|s| s.to_string()).collect()
}

impl AlgorithmSpec {
    pub fn new(
        name: AlgorithmName,
        allowed_m2m_rfs: Vec<String>,
        allowed_m2b_rfs: Vec<String>,
        relays_enabled: bool,
        direct_enabled: bool,
    ) -> Result<Self> {
        let spec = Self {
            name,
            allowed_m2m_rfs,
            allowed_m2b_rfs,
            relays_enabled,
            direct_enabled,
        };
        match spec.name {
            AlgorithmName::Ditosa if spec.relays_enabled => Err(Error::InvalidArgument(
                "direct-transmission algorithm cannot use relays".into(),
            )),
            AlgorithmName::Sorsa
                if spec.allowed_m2m_rfs.len() != 1 || spec.allowed_m2b_rfs.len() != 1 =>
            {
                Err(Error::InvalidArgument(
                    "static relay selection uses exactly one interface per hop".into(),
                ))
            }
            _ => Ok(spec),
        }
    }

    /// WiFi, Bluetooth, Z-Wave with LTE, LTE-M, NB-IoT; relays and direct.
    pub fn donsa_wbz_lmn() -> Self {
        Self::new(
            AlgorithmName::Donsa,
            names(&["WiFi", "Bluetooth", "Z-Wave"]),
            names(&["LTE", "LTE-M", "NB-IoT"]),
            true,
            true,
        )
        .expect("valid preset")
    }

    /// WiFi, Bluetooth, Z-Wave with LTE only; relays and direct.
    pub fn dorsa_wbz_l() -> Self {
        Self::new(
            AlgorithmName::Dorsa,
            names(&["WiFi", "Bluetooth", "Z-Wave"]),
            names(&["LTE"]),
            true,
            true,
        )
        .expect("valid preset")
    }

    /// WiFi then LTE, relayed only.
    pub fn sorsa_w_l() -> Self {
        Self::new(
            AlgorithmName::Sorsa,
            names(&["WiFi"]),
            names(&["LTE"]),
            true,
            false,
        )
        .expect("valid preset")
    }

    /// Direct LTE uplink only.
    pub fn ditosa_l() -> Self {
        Self::new(AlgorithmName::Ditosa, vec![], names(&["LTE"]), false, true)
            .expect("valid preset")
    }

    /// All four built-in algorithms in dominance order.
    pub fn presets() -> Vec<Self> {
        vec![
            Self::donsa_wbz_lmn(),
            Self::dorsa_wbz_l(),
            Self::sorsa_w_l(),
            Self::ditosa_l(),
        ]
    }

    pub fn key(&self) -> String {
        let m2m: String = self
            .allowed_m2m_rfs
            .iter()
            .filter_map(|id| id.chars().next())
            .collect();
        let m2b: String = self
            .allowed_m2b_rfs
            .iter()
            .map(|id| match id.as_str() {
                "LTE" => 'l',
                "LTE-M" => 'm',
                "NB-IoT" => 'n',
                other => other.chars().next().unwrap_or('x'),
            })
            .collect();
        let name = match self.name {
            AlgorithmName::Donsa => "donsa",
            AlgorithmName::Dorsa => "dorsa",
            AlgorithmName::Sorsa => "sorsa",
            AlgorithmName::Ditosa => "ditosa",
        };
        if m2m.is_empty() {
            format!("{name}_{}", m2b.to_lowercase())
        } else {
            format!("{name}_{}_{}", m2m.to_lowercase(), m2b.to_lowercase())
        }
    }

    /// Maps interface names to catalog ordinals.
    pub fn restriction(&self, catalog: &RfCatalog) -> Result<Restriction> {
        let mut allowed_m2m = vec![false; catalog.m2m().len()];
        for id in &self.allowed_m2m_rfs {
            allowed_m2m[catalog.m2m_index(id)?] = true;
        }
        let mut allowed_m2b = vec![false; catalog.m2b().len()];
        for id in &self.allowed_m2b_rfs {
            allowed_m2b[catalog.m2b_index(id)?] = true;
        }
        Ok(Restriction {
            allowed_m2m,
            allowed_m2b,
            relays_enabled: self.relays_enabled,
            direct_enabled: self.direct_enabled,
        })
    }
}

impl fmt::Display for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

impl FromStr for AlgorithmSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "donsa_wbz_lmn" => Ok(Self::donsa_wbz_lmn()),
            "dorsa_wbz_l" => Ok(Self::dorsa_wbz_l()),
            "sorsa_w_l" => Ok(Self::sorsa_w_l()),
            "ditosa_l" => Ok(Self::ditosa_l()),
            other => Err(Error::InvalidArgument(format!(
                "unknown algorithm `{other}`, expected one of {}",
                ALGORITHM_KEYS.join(", ")
            ))),
        }
    }
}

pub fn run_algorithm(
    spec: &AlgorithmSpec,
    topology: &Topology,
    rates: &RateTable,
    catalog: &RfCatalog,
    options: &SolveOptions,
) -> Result<AssignmentResult> {
    let restriction = spec.restriction(catalog)?;
    solve_restricted(topology, rates, catalog, &restriction, options)
}
