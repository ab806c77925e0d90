//! Scenario execution: everything is computed in memory, then written.

use std::fmt;
use std::path::{Path, PathBuf};

use lambda_wqed_core::analysis::{extract_bands, find_peaks, BandReport, Peak, Table1Row};
use lambda_wqed_core::hamiltonian::{build_h1, EffectiveHamiltonian};
use lambda_wqed_core::lattice::{build_zigzag, LatticeSpec, SystemParams};
use lambda_wqed_core::linear_response::{DetuningGrid, ResponseSolver, SpectrumSeries, CONDITION_WARNING};
use lambda_wqed_core::two_photon::{InelasticKernel, TwoPhotonSpectrum};
use rayon::prelude::*;

use crate::config::{ConfigError, LatticeConfig, ScenarioConfig};
use crate::output;

/// Relative prominence used for the peak summary in the manifest.
pub const PEAK_PROMINENCE: f64 = 0.05;

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerical { context: String, source: lambda_wqed_core::Error },
    Io { path: PathBuf, source: std::io::Error },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Numerical { .. } => 3,
            RunError::Io { .. } => 1,
        }
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "config error: {e}"),
            RunError::Numerical { context, source } => write!(f, "{context}: {source}"),
            RunError::Io { path, source } => write!(f, "{}: {source}", path.display()),
        }
    }
}

impl std::error::Error for RunError {}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

fn numerical(context: impl Into<String>) -> impl FnOnce(lambda_wqed_core::Error) -> RunError {
    let context = context.into();
    move |source| RunError::Numerical { context, source }
}

/// A solve that went through but crossed the conditioning threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Warning {
    pub lattice: String,
    pub what: String,
    pub at: f64,
    pub condition: f64,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} at {} has condition {:e}", self.lattice, self.what, self.at, self.condition)
    }
}

#[derive(Debug, Clone)]
pub struct InelasticResult {
    pub spectrum: TwoPhotonSpectrum,
    pub peaks: Vec<Peak>,
}

#[derive(Debug, Clone)]
pub struct LatticeResult {
    pub config: LatticeConfig,
    pub spec: LatticeSpec,
    pub h1: EffectiveHamiltonian,
    pub series: SpectrumSeries,
    pub bands: BandReport,
    pub inelastic: Vec<InelasticResult>,
}

impl LatticeResult {
    pub fn label(&self) -> String {
        self.config.label()
    }
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub lattices: Vec<LatticeResult>,
    pub table1: Option<Vec<Table1Row>>,
    pub warnings: Vec<Warning>,
}

impl ScenarioResult {
    pub fn lattice(&self, label: &str) -> Option<&LatticeResult> {
        self.lattices.iter().find(|l| l.label() == label)
    }
}

/// Transmission and susceptibility over `grid`, points evaluated in parallel and kept in grid order.
pub fn par_sweep(spec: &LatticeSpec, grid: &DetuningGrid) -> lambda_wqed_core::Result<SpectrumSeries> {
    let solver = ResponseSolver::new(spec);
    let points = grid
        .par_iter()
        .map(|&w| solver.at(w))
        .collect::<lambda_wqed_core::Result<Vec<_>>>()?;
    Ok(SpectrumSeries::from_points(&points))
}

/// Degenerate-input inelastic spectrum with the output frequencies evaluated in parallel.
pub fn par_inelastic(spec: &LatticeSpec, input: f64, grid: &DetuningGrid) -> lambda_wqed_core::Result<(TwoPhotonSpectrum, f64)> {
    lambda_wqed_core::two_photon::check_output_grid(input, grid)?;
    let kernel = InelasticKernel::new(spec, input, input)?;
    let intensity = grid
        .par_iter()
        .map(|&nu| kernel.intensity(nu))
        .collect::<lambda_wqed_core::Result<Vec<_>>>()?;
    let spectrum = TwoPhotonSpectrum {
        input_detuning: input,
        output_grid: grid.to_vec(),
        intensity,
        elastic_coefficient: kernel.elastic_coefficient(),
    };
    Ok((spectrum, kernel.t_condition()))
}

fn run_lattice(config: &ScenarioConfig, lattice: &LatticeConfig, warnings: &mut Vec<Warning>) -> Result<LatticeResult, RunError> {
    let label = lattice.label();
    let spec = lattice.build(config.system_params()).map_err(numerical(label.clone()))?;
    let grid = config.detuning_grid()?;
    let series = par_sweep(&spec, &grid).map_err(numerical(format!("{label}: sweep")))?;
    warnings.extend(series.diagnostics.iter().map(|d| Warning {
        lattice: label.clone(),
        what: "resolvent".into(),
        at: d.delta_omega,
        condition: d.condition,
    }));
    let bands = extract_bands(&series, config.band_thresholds()?).map_err(numerical(format!("{label}: bands")))?;
    let mut inelastic = Vec::with_capacity(config.inelastic_inputs.len());
    for &input in &config.inelastic_inputs {
        let grid = config.inelastic_grid(input)?;
        let (spectrum, condition) = par_inelastic(&spec, input, &grid).map_err(numerical(format!("{label}: inelastic at {input}")))?;
        if condition > CONDITION_WARNING {
            warnings.push(Warning { lattice: label.clone(), what: "two-photon T-matrix".into(), at: input, condition });
        }
        let peaks = find_peaks(&spectrum, PEAK_PROMINENCE);
        inelastic.push(InelasticResult { spectrum, peaks });
    }
    let h1 = build_h1(&spec);
    Ok(LatticeResult { config: lattice.clone(), spec, h1, series, bands, inelastic })
}

fn run_table1(config: &ScenarioConfig) -> Result<Option<Vec<Table1Row>>, RunError> {
    let Some(t) = &config.table1 else { return Ok(None) };
    let grid = config.detuning_grid()?;
    let thresholds = config.band_thresholds()?;
    let base = config.system_params();
    let rows = t
        .j2
        .iter()
        .map(|&j2| {
            let params = SystemParams { j2, ..base };
            let spec = build_zigzag(t.m_cells, params).map_err(numerical(format!("table1 j2={j2}")))?;
            let series = par_sweep(&spec, &grid).map_err(numerical(format!("table1 j2={j2}")))?;
            let report = extract_bands(&series, thresholds).map_err(numerical(format!("table1 j2={j2}")))?;
            Ok(Table1Row { j1: params.j1, j2, w_prime: report.w_prime, w: report.w })
        })
        .collect::<Result<Vec<_>, RunError>>()?;
    Ok(Some(rows))
}

/// Validate and compute a scenario without touching the filesystem.
pub fn compute(config: &ScenarioConfig) -> Result<ScenarioResult, RunError> {
    config.validate()?;
    let work = || -> Result<ScenarioResult, RunError> {
        let mut warnings = Vec::new();
        let lattices = config
            .lattices
            .iter()
            .map(|l| run_lattice(config, l, &mut warnings))
            .collect::<Result<Vec<_>, _>>()?;
        let table1 = run_table1(config)?;
        Ok(ScenarioResult { config: config.clone(), lattices, table1, warnings })
    };
    match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| RunError::Config(ConfigError::new("threads", e.to_string())))?
            .install(work),
        None => work(),
    }
}

/// Outcome of a completed run.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<Warning>,
}

impl RunReport {
    /// 0 when clean, 3 when any solve crossed the conditioning threshold.
    pub fn exit_code(&self) -> i32 {
        if self.warnings.is_empty() {
            0
        } else {
            3
        }
    }
}

/// Compute the scenario and write its artifacts under `out_dir`.
pub fn run_scenario(config: &ScenarioConfig, out_dir: &Path) -> Result<RunReport, RunError> {
    let result = compute(config)?;
    let files = output::write_all(&result, out_dir)?;
    Ok(RunReport { out_dir: out_dir.to_path_buf(), files, warnings: result.warnings })
}
