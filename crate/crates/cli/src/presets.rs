//! Built-in scenarios.

use lambda_wqed_core::analysis::{TABLE1_J1, TABLE1_J2, TABLE1_M_CELLS};
use lambda_wqed_core::lattice::SystemParams;

use crate::config::{LatticeConfig, ScenarioConfig, Table1Config};

#[derive(Debug, Clone, Copy)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ScenarioConfig,
}

impl Preset {
    pub fn config(&self) -> ScenarioConfig {
        let mut c = (self.build)();
        c.preset = Some(self.name.to_owned());
        c
    }
}

const ZIGZAG_NOTE: &str = "zigzag sizes count cells; cells pair into clusters (0,1), (2,3), ..., so odd sizes leave the last cell without a J2 partner";
const CONTROL_NOTE: &str = "omega_c is not listed for this scenario's source data; 2 is used, as in the companion transmission scenario";
const ORTHOGONAL_NOTE: &str = "orthogonal sizes: n_per_cell = 2 atoms stacked per cell, m_cells cells along the waveguide";

fn zigzag_params() -> SystemParams {
    SystemParams {
        gamma_1d: 1.0,
        gamma_e: 0.1,
        omega_c: 2.0,
        delta_c: 0.0,
        j1: 0.2,
        j2: 1.6,
        k0d: core::f64::consts::FRAC_PI_2,
        a_over_d: 1.0,
    }
}

fn orthogonal_params() -> SystemParams {
    SystemParams { j1: 3.0, j2: 6.0, ..zigzag_params() }
}

fn scenario(params: SystemParams, lattices: Vec<LatticeConfig>, inputs: &[f64], notes: &[&str]) -> ScenarioConfig {
    ScenarioConfig {
        lattices,
        params: params.into(),
        inelastic_inputs: inputs.to_vec(),
        notes: notes.iter().map(|s| (*s).to_owned()).collect(),
        ..ScenarioConfig::default()
    }
}

fn fig3() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::zigzag(3), LatticeConfig::zigzag(5)];
    scenario(zigzag_params(), l, &[], &[ZIGZAG_NOTE])
}

fn table1() -> ScenarioConfig {
    let mut c = scenario(SystemParams { j1: TABLE1_J1, ..zigzag_params() }, vec![], &[], &[ZIGZAG_NOTE]);
    c.table1 = Some(Table1Config { j2: TABLE1_J2.to_vec(), m_cells: TABLE1_M_CELLS });
    c
}

fn fig4() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::zigzag(5)];
    scenario(
        zigzag_params(),
        l,
        &[0.0, 0.5, 1.0],
        &[ZIGZAG_NOTE, "zigzag size is not listed for the two-photon runs; m_cells = 5 is used, the larger of the transmission sizes"],
    )
}

fn fig5() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::orthogonal(10, 2), LatticeConfig::orthogonal(20, 2)];
    scenario(orthogonal_params(), l, &[], &[ORTHOGONAL_NOTE])
}

fn fig6() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::orthogonal(10, 2)];
    scenario(orthogonal_params(), l, &[0.0, 0.5, 1.0], &[ORTHOGONAL_NOTE, CONTROL_NOTE])
}

fn fig7() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::orthogonal(20, 2)];
    scenario(orthogonal_params(), l, &[0.0, 0.5, 1.0], &[ORTHOGONAL_NOTE, CONTROL_NOTE])
}

fn fig_b1() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::zigzag(3), LatticeConfig::zigzag(5)];
    scenario(
        zigzag_params(),
        l,
        &[],
        &[ZIGZAG_NOTE, "the source labels these curves both as N = 2 and as M = 3, 5; read as 2 atoms per cell and 3, 5 cells", CONTROL_NOTE],
    )
}

fn fig_b2() -> ScenarioConfig {
    let l = vec![LatticeConfig::conventional(), LatticeConfig::orthogonal(10, 2), LatticeConfig::orthogonal(20, 2)];
    scenario(orthogonal_params(), l, &[], &[ORTHOGONAL_NOTE, CONTROL_NOTE])
}

static PRESETS: [Preset; 8] = [
    Preset { name: "fig3", description: "transmission: conventional pair vs zigzag with 3 and 5 cells", build: fig3 },
    Preset { name: "table1", description: "zigzag (5 cells) window widths W' and W for J2 from 1.6 to 4.0, J1 = 0.2", build: table1 },
    Preset { name: "fig4", description: "two-photon inelastic spectra: conventional pair vs zigzag, inputs 0, 0.5, 1", build: fig4 },
    Preset { name: "fig5", description: "transmission: conventional pair vs orthogonal (2 per cell) with 10 and 20 cells", build: fig5 },
    Preset { name: "fig6", description: "two-photon inelastic spectra: conventional pair vs orthogonal with 10 cells", build: fig6 },
    Preset { name: "fig7", description: "two-photon inelastic spectra: conventional pair vs orthogonal with 20 cells", build: fig7 },
    Preset { name: "figB1", description: "susceptibility: conventional pair vs zigzag with 3 and 5 cells", build: fig_b1 },
    Preset { name: "figB2", description: "susceptibility: conventional pair vs orthogonal with 10 and 20 cells", build: fig_b2 },
];

pub fn all() -> &'static [Preset] {
    &PRESETS
}

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for p in all() {
            p.config().validate().unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }

    #[test]
    fn names_are_unique() {
        let mut names: Vec<_> = all().iter().map(|p| p.name).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), all().len());
    }
}
