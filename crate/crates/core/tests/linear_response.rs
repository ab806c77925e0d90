mod common;

use std::f64::consts::FRAC_PI_2;

use common::{any_spec, params, rel_close};
use lambda_wqed_core::hamiltonian::build_h1;
use lambda_wqed_core::lattice::{build_conventional, build_orthogonal, build_zigzag, AtomSite, LatticeSpec, SystemParams};
use lambda_wqed_core::linear_response::{green_single, response_at, sweep, DetuningGrid, ResponseSolver};
use lambda_wqed_core::C64;
use nalgebra::DMatrix;
use proptest::prelude::*;

fn single_atom(p: SystemParams, z: f64) -> LatticeSpec {
    let site = AtomSite { site_id: 0, cell_index: 0, cluster_index: 0, intra_cell_index: 0, z_position: z, decay_rate: p.gamma_1d };
    LatticeSpec::custom(vec![site], &[], p).unwrap()
}

/// 1 − (iΓ/2) / [Δω + i(Γ + Γ_e)/2 − Ω²/(Δω − Δ_c)]
fn closed_form(p: &SystemParams, w: f64) -> C64 {
    let i = C64::new(0.0, 1.0);
    let mut den = C64::new(w, 0.0) + i * (0.5 * (p.gamma_1d + p.gamma_e));
    if p.omega_c != 0.0 {
        den -= C64::new(p.omega_c * p.omega_c / (w - p.delta_c), 0.0);
    }
    C64::new(1.0, 0.0) - i * (0.5 * p.gamma_1d) / den
}

#[test]
fn single_atom_matches_closed_form_on_default_grid() {
    let p = SystemParams::default();
    let spec = single_atom(p, 0.0);
    let grid = DetuningGrid::uniform(-5.0, 5.0, 1001).unwrap();
    let s = sweep(&spec, &grid).unwrap();
    for (k, &w) in grid.iter().enumerate() {
        let want = closed_form(&p, w);
        let got = s.amplitude[k];
        // at Δω = Δ_c the closed form is 1 by continuity
        let want = if w == p.delta_c { C64::new(1.0, 0.0) } else { want };
        assert!((got - want).norm() <= 1e-8 * want.norm().max(1e-12), "{w}: {got} vs {want}");
    }
}

#[test]
fn conventional_pair_is_transparent_at_two_photon_resonance() {
    let spec = build_conventional(SystemParams::default()).unwrap();
    let h1 = build_h1(&spec);
    let r = response_at(&spec, &h1, 0.0).unwrap();
    assert!(r.transmission() > 1.0 - 1e-6);
}

#[test]
fn resolvent_identity() {
    let spec = build_zigzag(3, SystemParams { j1: 0.2, j2: 1.6, ..SystemParams::default() }).unwrap();
    let h1 = build_h1(&spec);
    let (a, b) = (0.3, -1.7);
    let ga = green_single(&h1, a).unwrap().matrix;
    let gb = green_single(&h1, b).unwrap().matrix;
    let rhs: DMatrix<C64> = (&ga * &gb) * C64::new(b - a, 0.0);
    assert!((ga - gb - rhs).iter().all(|z| z.norm() < 1e-12));
}

#[test]
fn zigzag_preset_has_no_mirror_gauge() {
    let spec = build_zigzag(5, SystemParams { j1: 0.2, j2: 1.6, ..SystemParams::default() }).unwrap();
    assert!(spec.mirror_gauge().is_none());
    let o = build_orthogonal(20, 2, SystemParams { j1: 3.0, j2: 6.0, ..SystemParams::default() }).unwrap();
    assert!(o.mirror_gauge().is_some());
    assert!(build_conventional(SystemParams::default()).unwrap().mirror_gauge().is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorised_solver_matches_direct_inverse(spec in any_spec(), w in -6.0..6.0f64) {
        let h1 = build_h1(&spec);
        let (Ok(direct), Ok(fast)) = (response_at(&spec, &h1, w), ResponseSolver::new(&spec).at(w)) else { return Ok(()); };
        let scale = direct.amplitude.norm().max(1.0);
        prop_assert!((direct.amplitude - fast.amplitude).norm() <= 1e-9 * scale * direct.condition.max(1.0).sqrt(),
            "{} vs {}", direct.amplitude, fast.amplitude);
        // 1-norms of unitarily similar matrices differ by at most a factor n
        let n2 = (h1.dim() * h1.dim()) as f64;
        prop_assert!(fast.condition <= n2 * direct.condition * (1.0 + 1e-6));
        prop_assert!(fast.condition * n2 * 3.0 >= direct.condition * (1.0 - 1e-6));
    }

    #[test]
    fn single_atom_calibration(p in params(), z in -3.0..3.0f64, w in -5.0..5.0f64) {
        prop_assume!((w - p.delta_c).abs() > 1e-6);
        let spec = single_atom(p, z);
        let h1 = build_h1(&spec);
        let got = response_at(&spec, &h1, w).unwrap();
        let want = closed_form(&p, w);
        prop_assert!((got.amplitude - want).norm() <= 1e-8 * want.norm().max(1e-12));
    }

    #[test]
    fn passivity_and_chi_relation(spec in any_spec(), w in -5.0..5.0f64) {
        let h1 = build_h1(&spec);
        if let Ok(r) = response_at(&spec, &h1, w) {
            prop_assert!(r.transmission() <= 1.0 + 1e-10);
            let back = C64::new(1.0, 0.0) - C64::new(0.0, 0.5 * spec.total_decay()) * r.chi;
            prop_assert!((back - r.amplitude).norm() <= 1e-10 * r.amplitude.norm().max(1.0));
        }
    }

    #[test]
    fn mirror_symmetry_where_a_gauge_exists(spec in any_spec(), w in 0.01..5.0f64) {
        prop_assume!(spec.mirror_gauge().is_some());
        let h1 = build_h1(&spec);
        let (Ok(a), Ok(b)) = (response_at(&spec, &h1, w), response_at(&spec, &h1, -w)) else { return Ok(()); };
        prop_assert!(rel_close(a.transmission(), b.transmission(), 1e-9, 1e-12), "{} vs {}", a.transmission(), b.transmission());
    }

    #[test]
    fn quarter_wave_presets_are_mirror_symmetric(p in params(), m in 1..=4usize, n in 1..=3usize, w in 0.01..5.0f64) {
        let p = SystemParams { delta_c: 0.0, k0d: FRAC_PI_2, ..p };
        for spec in [build_conventional(p).unwrap(), build_orthogonal(m, n, p).unwrap()] {
            let h1 = build_h1(&spec);
            let (Ok(a), Ok(b)) = (response_at(&spec, &h1, w), response_at(&spec, &h1, -w)) else { continue; };
            prop_assert!(rel_close(a.transmission(), b.transmission(), 1e-9, 1e-12));
        }
    }

    #[test]
    fn decoupled_lattices_are_transparent(spec in any_spec(), w in -5.0..5.0f64) {
        let p = SystemParams { gamma_1d: 0.0, ..spec.params };
        let sites: Vec<AtomSite> = spec.sites.iter().map(|s| AtomSite { decay_rate: 0.0, ..*s }).collect();
        let edges: Vec<(usize, usize, f64)> = spec.graph.edges().iter().map(|e| (e.a, e.b, e.strength)).collect();
        let dark = LatticeSpec::custom(sites, &edges, p).unwrap();
        let h1 = build_h1(&dark);
        if let Ok(r) = response_at(&dark, &h1, w) {
            prop_assert_eq!(r.amplitude, C64::new(1.0, 0.0));
            prop_assert_eq!(r.chi, C64::new(0.0, 0.0));
        }
    }
}
