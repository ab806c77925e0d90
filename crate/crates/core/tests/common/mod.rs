#![allow(dead_code)]

use std::f64::consts::FRAC_PI_2;

use lambda_wqed_core::lattice::{build_conventional, build_orthogonal, build_zigzag, AtomSite, LatticeSpec, SystemParams};
use proptest::prelude::*;

pub fn params() -> impl Strategy<Value = SystemParams> {
    (
        0.0..2.0f64,
        0.0..0.5f64,
        0.0..3.0f64,
        prop_oneof![Just(0.0), -1.0..1.0f64],
        -3.0..3.0f64,
        -3.0..3.0f64,
        prop_oneof![Just(FRAC_PI_2), 0.1..6.2f64],
        0.5..2.0f64,
    )
        .prop_map(|(gamma_1d, gamma_e, omega_c, delta_c, j1, j2, k0d, a_over_d)| SystemParams {
            gamma_1d,
            gamma_e,
            omega_c,
            delta_c,
            j1,
            j2,
            k0d,
            a_over_d,
        })
}

fn site(z: f64, coupled: bool, rate: f64, cell: usize) -> AtomSite {
    AtomSite {
        site_id: 0,
        cell_index: cell,
        cluster_index: cell / 2,
        intra_cell_index: 0,
        z_position: z,
        decay_rate: if coupled { rate } else { 0.0 },
    }
}

/// Hand-assembled lattices of up to `max_atoms` atoms with arbitrary exchange.
pub fn custom_spec(max_atoms: usize) -> impl Strategy<Value = LatticeSpec> {
    (params(), 1..=max_atoms)
        .prop_flat_map(|(p, n)| {
            (
                Just(p),
                proptest::collection::vec((0.0..3.0f64, any::<bool>()), n),
                proptest::collection::vec(-2.0..2.0f64, n * (n - 1) / 2),
            )
        })
        .prop_map(|(p, atoms, js)| {
            let sites: Vec<AtomSite> = atoms.iter().enumerate().map(|(i, &(z, c))| site(z, c, p.gamma_1d, i)).collect();
            let n = sites.len();
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    edges.push((u, v, js[k]));
                    k += 1;
                }
            }
            LatticeSpec::custom(sites, &edges, p).unwrap()
        })
}

/// Any geometry, kept small enough for dense two-excitation checks.
pub fn any_spec() -> impl Strategy<Value = LatticeSpec> {
    prop_oneof![
        params().prop_map(|p| build_conventional(p).unwrap()),
        (params(), 1..=4usize).prop_map(|(p, m)| build_zigzag(m, p).unwrap()),
        (params(), 1..=3usize, 1..=3usize).prop_map(|(p, m, n)| build_orthogonal(m, n, p).unwrap()),
        custom_spec(3),
    ]
}

pub fn rel_close(a: f64, b: f64, rel: f64, floor: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(floor)
}
