//! Scenario runner for Λ-atom waveguide lattices.
//!
//! A scenario is a TOML file (or a built-in preset) naming lattices, physical
//! parameters and a detuning grid. Running it writes per-lattice CSV tables
//! plus a manifest into an output directory.
//!
//! ```toml
//! preset = "fig3"
//!
//! [params]
//! omega_c = 1.5
//!
//! [grid]
//! min = -5.0
//! max = 5.0
//! points = 1001
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod output;
pub mod plot;
pub mod presets;
pub mod run;

pub use config::{ConfigError, LatticeConfig, ScenarioConfig};
pub use run::{compute, run_scenario, RunError, RunReport, ScenarioResult};
