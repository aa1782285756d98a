//! mEGG water-condition parameter table.
//!
//! Turbulence parameter sets (lambda, sigma, p, q, r) per water condition are
//! loaded from a TOML file rather than hardcoded: the authoritative values
//! come from published experimental fits that this repository does not
//! reprint. The shipped `data/water_conditions.toml` contains clearly
//! labelled placeholder sets; replace them (and set `authoritative = true`)
//! to reproduce published numbers.

use crate::channel::{Salinity, WaterCondition};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Environment variable overriding the parameter-table path.
pub const WATER_TABLE_ENV: &str = "UOWC_WATER_TABLE";

/// One water-condition record of the mEGG parameter table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaterRecord {
    pub label: String,
    pub h_lpm: f64,
    #[serde(default)]
    pub l_degc_per_cm: f64,
    pub salinity: Salinity,
    pub lambda: f64,
    pub sigma: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl WaterRecord {
    pub fn condition(&self) -> WaterCondition {
        WaterCondition {
            label: self.label.clone(),
            h_lpm: self.h_lpm,
            l_degc_per_cm: self.l_degc_per_cm,
            salinity: self.salinity,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
struct TableFile {
    /// True only when the shipped values transcribe the published tables.
    #[serde(default)]
    authoritative: bool,
    condition: Vec<WaterRecord>,
}

/// Loaded water-condition table.
#[derive(Debug, Clone)]
pub struct WaterTable {
    pub authoritative: bool,
    records: Vec<WaterRecord>,
}

impl WaterTable {
    pub fn from_str(text: &str) -> Result<Self> {
        let file: TableFile =
            toml::from_str(text).map_err(|e| Error::TableParse(e.to_string()))?;
        Ok(Self { authoritative: file.authoritative, records: file.condition })
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_str(&text)
    }

    /// Load from `UOWC_WATER_TABLE` when set, else from the bundled table.
    pub fn load_default() -> Result<Self> {
        if let Ok(path) = std::env::var(WATER_TABLE_ENV) {
            return Self::from_path(&PathBuf::from(path));
        }
        Self::from_str(include_str!("../data/water_conditions.toml"))
    }

    pub fn lookup(&self, label: &str) -> Result<&WaterRecord> {
        self.records
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::UnknownWaterCondition(label.to_string()))
    }

    pub fn records(&self) -> &[WaterRecord] {
        &self.records
    }
}
