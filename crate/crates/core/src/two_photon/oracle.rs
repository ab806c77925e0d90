//! Reference two-photon spectrum for lattices of at most three atoms.
//!
//! Works in the bosonic (exchange-symmetric) two-excitation sector with an
//! explicit basis: allowed states are symmetrised pairs of modes on different
//! atoms, forbidden states are `|aa>` and symmetrised pairs on one atom. The
//! hard-core T-matrix is the Schur complement
//! `(E − H_FF) − H_FA (E − H_AA)⁻¹ H_AF`, with the allowed-block resolvent and
//! every single-photon leg taken from eigen-decompositions.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::hamiltonian::build_h1;
use crate::lattice::LatticeSpec;
use crate::linalg::EigenDecomposition;
use crate::linear_response::DetuningGrid;
use crate::C64;

use super::{check_output_grid, TwoPhotonSpectrum};

pub const ORACLE_MAX_ATOMS: usize = 3;

/// A symmetric two-excitation basis state over mode indices `p ≤ q`.
#[derive(Debug, Clone, Copy)]
struct SymState {
    p: usize,
    q: usize,
}

impl SymState {
    /// Components on the ordered pairs `(p,q)` and `(q,p)`.
    fn components(&self) -> [(usize, usize, f64); 2] {
        if self.p == self.q {
            [(self.p, self.p, 1.0), (self.p, self.p, 0.0)]
        } else {
            let h = core::f64::consts::FRAC_1_SQRT_2;
            [(self.p, self.q, h), (self.q, self.p, h)]
        }
    }
}

/// `<s|H₁⊗I + I⊗H₁|t>` by direct action on ordered pairs.
fn h2_element(h: &DMatrix<C64>, s: &SymState, t: &SymState) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for (a, b, x) in s.components() {
        for (c, d, y) in t.components() {
            if x == 0.0 || y == 0.0 {
                continue;
            }
            let mut e = C64::new(0.0, 0.0);
            if b == d {
                e += h[(a, c)];
            }
            if a == c {
                e += h[(b, d)];
            }
            acc += e * (x * y);
        }
    }
    acc
}

fn block(h: &DMatrix<C64>, rows: &[SymState], cols: &[SymState]) -> DMatrix<C64> {
    DMatrix::from_fn(rows.len(), cols.len(), |i, j| h2_element(h, &rows[i], &cols[j]))
}

/// Projection of an ordered-pair amplitude `f(a, b)` onto a symmetric state.
fn project(state: &SymState, f: impl Fn(usize, usize) -> C64) -> C64 {
    state.components().iter().filter(|c| c.2 != 0.0).map(|&(a, b, x)| f(a, b) * x).sum()
}

pub fn oracle_two_photon(spec: &LatticeSpec, input_detuning: f64, output_grid: &DetuningGrid) -> Result<TwoPhotonSpectrum> {
    let n = spec.n_atoms();
    if n > ORACLE_MAX_ATOMS {
        return Err(Error::DimensionGuard { dimension: n, limit: ORACLE_MAX_ATOMS });
    }
    check_output_grid(input_detuning, output_grid)?;

    let h1 = build_h1(spec);
    let modes = h1.active_modes();
    let m = modes.len();
    let h = DMatrix::from_fn(m, m, |i, j| h1.matrix[(modes[i], modes[j])]);
    let atom = |i: usize| h1.basis.atom_of(modes[i]);

    let mut allowed = Vec::new();
    let mut forbidden = Vec::new();
    for p in 0..m {
        for q in p..m {
            if atom(p) == atom(q) {
                forbidden.push(SymState { p, q });
            } else {
                allowed.push(SymState { p, q });
            }
        }
    }

    let e = C64::new(2.0 * input_detuning, 0.0);
    let mut t = -block(&h, &forbidden, &forbidden);
    for i in 0..forbidden.len() {
        t[(i, i)] += e;
    }
    if !allowed.is_empty() {
        let h_aa = block(&h, &allowed, &allowed);
        let h_af = block(&h, &allowed, &forbidden);
        let h_fa = block(&h, &forbidden, &allowed);
        let g_aa = EigenDecomposition::new(&h_aa)?.resolvent(e);
        t -= h_fa * g_aa * h_af;
    }

    let eig = EigenDecomposition::new(&h)?;
    let drive_in = DVector::from_iterator(m, modes.iter().map(|&a| drive(spec, a, 1.0)));
    let drive_out = DVector::from_iterator(m, modes.iter().map(|&a| drive(spec, a, -1.0)));

    let leg_in = eig.resolvent(C64::new(input_detuning, 0.0)) * &drive_in;
    let w: DVector<C64> = DVector::from_iterator(forbidden.len(), forbidden.iter().map(|s| project(s, |a, b| leg_in[a] * leg_in[b])));
    let tw = &t * w;

    let leg_out = |p: f64| (drive_out.transpose() * eig.resolvent(C64::new(p, 0.0))).transpose();
    let mut intensity = Vec::with_capacity(output_grid.len());
    for &nu in output_grid.iter() {
        let o1 = leg_out(nu);
        let o2 = leg_out(2.0 * input_detuning - nu);
        let amp: C64 = forbidden
            .iter()
            .zip(tw.iter())
            .map(|(s, x)| project(s, |a, b| o1[a] * o2[b]) * x)
            .sum();
        intensity.push(amp.norm_sqr());
    }

    // elastic reference from the same eigen-decomposition
    let g = eig.resolvent(C64::new(input_detuning, 0.0));
    let t1 = C64::new(1.0, 0.0) - C64::new(0.0, 0.5) * (drive_out.transpose() * g * &drive_in)[(0, 0)];
    Ok(TwoPhotonSpectrum {
        input_detuning,
        output_grid: output_grid.to_vec(),
        intensity,
        elastic_coefficient: t1.norm_sqr() * t1.norm_sqr(),
    })
}

fn drive(spec: &LatticeSpec, mode: usize, sign: f64) -> C64 {
    let n = spec.n_atoms();
    if mode >= n {
        return C64::new(0.0, 0.0);
    }
    let site = &spec.sites[mode];
    let phase = sign * spec.params.k0d * site.z_position;
    C64::new(phase.cos(), phase.sin()) * site.decay_rate.sqrt()
}
