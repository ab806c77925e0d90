use std::f64::consts::FRAC_PI_2;

use lambda_wqed::config::GeometryName::{Conventional, Orthogonal, Zigzag};
use lambda_wqed::config::{GeometryName, ParamsConfig};
use lambda_wqed::presets;

struct Expected {
    name: &'static str,
    j1: f64,
    j2: f64,
    lattices: &'static [(GeometryName, usize, usize)],
    inputs: &'static [f64],
}

const ZZ: (f64, f64) = (0.2, 1.6);
const OR: (f64, f64) = (3.0, 6.0);

const TABLE: [Expected; 8] = [
    Expected { name: "fig3", j1: ZZ.0, j2: ZZ.1, lattices: &[(Conventional, 1, 2), (Zigzag, 3, 2), (Zigzag, 5, 2)], inputs: &[] },
    Expected { name: "table1", j1: ZZ.0, j2: ZZ.1, lattices: &[], inputs: &[] },
    Expected { name: "fig4", j1: ZZ.0, j2: ZZ.1, lattices: &[(Conventional, 1, 2), (Zigzag, 5, 2)], inputs: &[0.0, 0.5, 1.0] },
    Expected {
        name: "fig5",
        j1: OR.0,
        j2: OR.1,
        lattices: &[(Conventional, 1, 2), (Orthogonal, 10, 2), (Orthogonal, 20, 2)],
        inputs: &[],
    },
    Expected { name: "fig6", j1: OR.0, j2: OR.1, lattices: &[(Conventional, 1, 2), (Orthogonal, 10, 2)], inputs: &[0.0, 0.5, 1.0] },
    Expected { name: "fig7", j1: OR.0, j2: OR.1, lattices: &[(Conventional, 1, 2), (Orthogonal, 20, 2)], inputs: &[0.0, 0.5, 1.0] },
    Expected { name: "figB1", j1: ZZ.0, j2: ZZ.1, lattices: &[(Conventional, 1, 2), (Zigzag, 3, 2), (Zigzag, 5, 2)], inputs: &[] },
    Expected {
        name: "figB2",
        j1: OR.0,
        j2: OR.1,
        lattices: &[(Conventional, 1, 2), (Orthogonal, 10, 2), (Orthogonal, 20, 2)],
        inputs: &[],
    },
];

#[test]
fn catalog_has_exactly_eight_presets() {
    let mut names: Vec<_> = presets::all().iter().map(|p| p.name).collect();
    names.sort();
    let mut expected: Vec<_> = TABLE.iter().map(|e| e.name).collect();
    expected.sort();
    assert_eq!(names, expected);
}

#[test]
fn preset_parameters_match_reference_table() {
    for e in &TABLE {
        let c = presets::find(e.name).unwrap().config();
        let want = ParamsConfig {
            gamma_1d: 1.0,
            gamma_e: 0.1,
            omega_c: 2.0,
            delta_c: 0.0,
            j1: e.j1,
            j2: e.j2,
            k0d: FRAC_PI_2,
            a_over_d: 1.0,
        };
        assert_eq!(c.params, want, "{}", e.name);
        let got: Vec<_> = c.lattices.iter().map(|l| (l.geometry, l.m_cells, l.n_per_cell)).collect();
        assert_eq!(got, e.lattices, "{}", e.name);
        assert_eq!(c.inelastic_inputs, e.inputs, "{}", e.name);
        assert_eq!((c.grid.min, c.grid.max, c.grid.points), (-5.0, 5.0, 2001), "{}", e.name);
        assert_eq!(c.preset.as_deref(), Some(e.name));
    }
}

#[test]
fn table1_preset_sweeps_seven_couplings() {
    let c = presets::find("table1").unwrap().config();
    let t = c.table1.unwrap();
    assert_eq!(t.j2, vec![1.6, 2.0, 2.4, 2.8, 3.2, 3.6, 4.0]);
    assert_eq!(t.m_cells, 5);
    assert_eq!(c.params.j1, 0.2);
}

#[test]
fn presets_that_fill_in_missing_values_say_so() {
    for name in ["fig4", "fig6", "fig7", "figB1", "figB2"] {
        let c = presets::find(name).unwrap().config();
        assert!(!c.notes.is_empty(), "{name}");
    }
}
