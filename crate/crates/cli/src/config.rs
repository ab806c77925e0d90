//! Scenario files (TOML) and their validation.

use std::fmt;
use std::path::PathBuf;

use lambda_wqed_core::analysis::BandThresholds;
use lambda_wqed_core::lattice::{build_conventional, build_orthogonal, build_zigzag, LatticeSpec, SystemParams};
use lambda_wqed_core::linear_response::DetuningGrid;
use serde::{Deserialize, Serialize};

use crate::presets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GeometryName {
    Conventional,
    Zigzag,
    Orthogonal,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    pub geometry: GeometryName,
    #[serde(default = "one")]
    pub m_cells: usize,
    #[serde(default = "two")]
    pub n_per_cell: usize,
}

fn one() -> usize {
    1
}

fn two() -> usize {
    2
}

impl LatticeConfig {
    pub fn conventional() -> Self {
        LatticeConfig { geometry: GeometryName::Conventional, m_cells: 1, n_per_cell: 2 }
    }

    pub fn zigzag(m_cells: usize) -> Self {
        LatticeConfig { geometry: GeometryName::Zigzag, m_cells, n_per_cell: 2 }
    }

    pub fn orthogonal(m_cells: usize, n_per_cell: usize) -> Self {
        LatticeConfig { geometry: GeometryName::Orthogonal, m_cells, n_per_cell }
    }

    /// Directory name for this lattice's artifacts.
    pub fn label(&self) -> String {
        match self.geometry {
            GeometryName::Conventional => "conventional".into(),
            GeometryName::Zigzag => format!("zigzag_m{}", self.m_cells),
            GeometryName::Orthogonal => format!("orthogonal_n{}_m{}", self.n_per_cell, self.m_cells),
        }
    }

    pub fn build(&self, params: SystemParams) -> lambda_wqed_core::Result<LatticeSpec> {
        match self.geometry {
            GeometryName::Conventional => build_conventional(params),
            GeometryName::Zigzag => build_zigzag(self.m_cells, params),
            GeometryName::Orthogonal => build_orthogonal(self.m_cells, self.n_per_cell, params),
        }
    }
}

/// Mirror of [`SystemParams`] with serde support; missing keys take the defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ParamsConfig {
    pub gamma_1d: f64,
    pub gamma_e: f64,
    pub omega_c: f64,
    pub delta_c: f64,
    pub j1: f64,
    pub j2: f64,
    pub k0d: f64,
    pub a_over_d: f64,
}

impl Default for ParamsConfig {
    fn default() -> Self {
        SystemParams::default().into()
    }
}

impl From<SystemParams> for ParamsConfig {
    fn from(p: SystemParams) -> Self {
        ParamsConfig {
            gamma_1d: p.gamma_1d,
            gamma_e: p.gamma_e,
            omega_c: p.omega_c,
            delta_c: p.delta_c,
            j1: p.j1,
            j2: p.j2,
            k0d: p.k0d,
            a_over_d: p.a_over_d,
        }
    }
}

impl From<ParamsConfig> for SystemParams {
    fn from(p: ParamsConfig) -> Self {
        SystemParams {
            gamma_1d: p.gamma_1d,
            gamma_e: p.gamma_e,
            omega_c: p.omega_c,
            delta_c: p.delta_c,
            j1: p.j1,
            j2: p.j2,
            k0d: p.k0d,
            a_over_d: p.a_over_d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { min: -5.0, max: 5.0, points: 2001 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdConfig {
    pub t_low: f64,
    pub t_high: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        let t = BandThresholds::default();
        ThresholdConfig { t_low: t.t_low, t_high: t.t_high }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Table1Config {
    pub j2: Vec<f64>,
    #[serde(default = "table1_cells")]
    pub m_cells: usize,
}

fn table1_cells() -> usize {
    lambda_wqed_core::analysis::TABLE1_M_CELLS
}

/// Everything a run needs. Keys absent from a file take the defaults below, or
/// the named preset's values when `preset` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default)]
    pub lattices: Vec<LatticeConfig>,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub thresholds: ThresholdConfig,
    /// Degenerate two-photon input detunings; one inelastic spectrum per entry.
    #[serde(default)]
    pub inelastic_inputs: Vec<f64>,
    /// Output-frequency points per inelastic spectrum, spanning input ± `inelastic_half_span`.
    #[serde(default = "inelastic_points")]
    pub inelastic_points: usize,
    #[serde(default = "inelastic_half_span")]
    pub inelastic_half_span: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table1: Option<Table1Config>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub plots: bool,
    #[serde(default)]
    pub dump_h1: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn inelastic_points() -> usize {
    1001
}

fn inelastic_half_span() -> f64 {
    5.0
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            preset: None,
            lattices: Vec::new(),
            params: ParamsConfig::default(),
            grid: GridConfig::default(),
            thresholds: ThresholdConfig::default(),
            inelastic_inputs: Vec::new(),
            inelastic_points: inelastic_points(),
            inelastic_half_span: inelastic_half_span(),
            table1: None,
            notes: Vec::new(),
            out: None,
            plots: false,
            dump_h1: false,
            threads: None,
        }
    }
}

/// A rejected configuration, with the offending field.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError { field: field.into(), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

/// Overlay `top` onto `base`, recursing into tables; arrays and scalars replace.
fn merge(base: &mut toml::Value, top: toml::Value) {
    match (base, top) {
        (toml::Value::Table(b), toml::Value::Table(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

impl ScenarioConfig {
    /// Parse a scenario file. When it names a preset, the file's keys override that preset.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        Self::resolve(Some(text), None)
    }

    /// Combine an optional scenario file with an optional preset name; the name wins over the file's own `preset`.
    pub fn resolve(text: Option<&str>, preset: Option<&str>) -> Result<Self, ConfigError> {
        let mut value: toml::Value = match text {
            Some(t) => toml::from_str(t).map_err(|e| ConfigError::new("", e.message().trim().to_string()))?,
            None => toml::Value::Table(Default::default()),
        };
        if let (Some(name), toml::Value::Table(t)) = (preset, &mut value) {
            t.insert("preset".into(), toml::Value::String(name.to_owned()));
        }
        let preset = value.get("preset").map(|p| p.as_str().map(str::to_owned));
        let merged = match preset {
            Some(None) => return Err(ConfigError::new("preset", "must be a string")),
            Some(Some(name)) => {
                let base = presets::find(&name)
                    .ok_or_else(|| ConfigError::new("preset", format!("unknown preset `{name}`")))?
                    .config();
                let mut base = toml::Value::try_from(base).map_err(|e| ConfigError::new("", e.to_string()))?;
                merge(&mut base, value);
                base
            }
            None => value,
        };
        let config: ScenarioConfig = merged.try_into().map_err(|e: toml::de::Error| ConfigError::new("", e.message().trim().to_string()))?;
        Ok(config)
    }

    pub fn system_params(&self) -> SystemParams {
        self.params.into()
    }

    pub fn detuning_grid(&self) -> Result<DetuningGrid, ConfigError> {
        DetuningGrid::uniform(self.grid.min, self.grid.max, self.grid.points).map_err(|e| ConfigError::new("grid", e.to_string()))
    }

    /// Output grid for the inelastic spectrum at `input`: symmetric about it by construction.
    pub fn inelastic_grid(&self, input: f64) -> Result<DetuningGrid, ConfigError> {
        let h = self.inelastic_half_span;
        DetuningGrid::uniform(input - h, input + h, self.inelastic_points)
            .map_err(|e| ConfigError::new("inelastic_points", e.to_string()))
    }

    pub fn band_thresholds(&self) -> Result<BandThresholds, ConfigError> {
        BandThresholds::new(self.thresholds.t_low, self.thresholds.t_high).map_err(|e| ConfigError::new("thresholds", e.to_string()))
    }

    /// Check every field before anything is computed.
    pub fn validate(&self) -> Result<(), ConfigError> {
        let params = self.system_params();
        params.validate().map_err(|e| match e {
            lambda_wqed_core::Error::InvalidParameter { field, reason } => ConfigError::new(format!("params.{field}"), reason),
            other => ConfigError::new("params", other.to_string()),
        })?;
        self.detuning_grid()?;
        if self.grid.points < 2 {
            return Err(ConfigError::new("grid.points", "need at least 2 points"));
        }
        self.band_thresholds()?;
        if self.lattices.is_empty() && self.table1.is_none() {
            return Err(ConfigError::new("lattices", "nothing to run: give at least one lattice or a table1 block"));
        }
        for (i, l) in self.lattices.iter().enumerate() {
            if l.m_cells < 1 {
                return Err(ConfigError::new(format!("lattices[{i}].m_cells"), "must be at least 1"));
            }
            if l.n_per_cell < 1 {
                return Err(ConfigError::new(format!("lattices[{i}].n_per_cell"), "must be at least 1"));
            }
            if l.geometry == GeometryName::Zigzag && l.n_per_cell != 2 {
                return Err(ConfigError::new(format!("lattices[{i}].n_per_cell"), "zigzag cells hold exactly 2 atoms"));
            }
            let spec = l.build(params).map_err(|e| ConfigError::new(format!("lattices[{i}]"), e.to_string()))?;
            if !self.inelastic_inputs.is_empty() && 2 * spec.n_atoms() > lambda_wqed_core::two_photon::MAX_SINGLE_DIM {
                return Err(ConfigError::new(
                    format!("lattices[{i}]"),
                    format!("{} atoms exceed the two-photon size limit", spec.n_atoms()),
                ));
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &self.lattices {
            if !seen.insert(l.label()) {
                return Err(ConfigError::new("lattices", format!("duplicate lattice `{}`", l.label())));
            }
        }
        for (i, x) in self.inelastic_inputs.iter().enumerate() {
            if !x.is_finite() {
                return Err(ConfigError::new(format!("inelastic_inputs[{i}]"), "must be finite"));
            }
        }
        if !self.inelastic_inputs.is_empty() {
            if !(self.inelastic_half_span > 0.0 && self.inelastic_half_span.is_finite()) {
                return Err(ConfigError::new("inelastic_half_span", "must be positive"));
            }
            if self.inelastic_points < 3 {
                return Err(ConfigError::new("inelastic_points", "need at least 3 points"));
            }
        }
        if let Some(t) = &self.table1 {
            if t.j2.is_empty() {
                return Err(ConfigError::new("table1.j2", "empty"));
            }
            if t.m_cells < 1 {
                return Err(ConfigError::new("table1.m_cells", "must be at least 1"));
            }
            if t.j2.iter().any(|x| !x.is_finite()) {
                return Err(ConfigError::new("table1.j2", "must be finite"));
            }
        }
        if self.threads == Some(0) {
            return Err(ConfigError::new("threads", "must be at least 1"));
        }
        Ok(())
    }
}

/// Input detunings rendered for file names: shortest round-trip form, `-` kept.
pub fn detuning_tag(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x}")
}
