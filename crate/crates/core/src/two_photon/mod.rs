//! Two-photon inelastic scattering.
//!
//! Two excitations live in the product space of the single-excitation basis,
//! `H₂ = H₁⊗I + I⊗H₁`. The on-site nonlinearity forbids both excitations on the
//! same atom; in the hard-core limit it enters only through
//!
//! ```text
//!   T(E) = [P_D (E − H₂)⁻¹ P_D]⁻¹
//! ```
//!
//! on the forbidden subspace `D`. The inelastic amplitude for inputs
//! `(k₁, k₂)` scattered into `(p₁, p₂)` is
//!
//! ```text
//!   A = −i Σ_{d,d′∈D} o(p₁)_a o(p₂)_b T_{dd′}(k₁+k₂) w(k₁,k₂)_{d′}
//! ```
//!
//! with `w(k₁,k₂)_{ab} = ψ(k₁)_a ψ(k₂)_b`, `ψ(k) = G₀(k) u_in` and the output
//! legs `o(p) = u_outᵀ G₀(p)`.
//!
//! `(E − H₂)⁻¹` is never formed. Projected entries come from Bartels–Stewart
//! solves on the complex Schur form of `H₁`, which keeps the 40-atom lattices
//! (two-excitation dimension 6400) cheap.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::hamiltonian::{build_h1, EffectiveHamiltonian};
use crate::lattice::LatticeSpec;
use crate::linalg::{inverse_with_condition, KroneckerSumSolver};
use crate::linear_response::{green_single, guided_drive, transmission_amplitude, DetuningGrid};
use crate::C64;

mod oracle;

pub use oracle::{oracle_two_photon, ORACLE_MAX_ATOMS};

/// Largest single-excitation dimension `2N` accepted by [`build_h2`].
pub const MAX_SINGLE_DIM: usize = 160;

/// Largest two-excitation dimension [`TwoExcitationOperator::to_dense`] will build.
pub const MAX_DENSE_DIM: usize = 1600;

/// Output grids must mirror about the input detuning to this tolerance.
pub const GRID_SYMMETRY_TOL: f64 = 1e-9;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// The two-excitation Kronecker sum restricted to the probe-reachable modes,
/// with the forbidden same-atom pairs.
#[derive(Debug, Clone)]
pub struct TwoExcitationOperator {
    h1: EffectiveHamiltonian,
    /// Modes of `H₁` kept in the product space (full-basis indices).
    modes: Vec<usize>,
    /// Ordered same-atom pairs, as positions into `modes`.
    forbidden: Vec<(usize, usize)>,
    solver: KroneckerSumSolver,
}

pub fn build_h2(h1: &EffectiveHamiltonian) -> Result<TwoExcitationOperator> {
    if h1.dim() > MAX_SINGLE_DIM {
        return Err(Error::DimensionGuard { dimension: h1.dim(), limit: MAX_SINGLE_DIM });
    }
    let modes = h1.active_modes();
    let m = modes.len();
    let block = DMatrix::from_fn(m, m, |i, j| h1.matrix[(modes[i], modes[j])]);
    let solver = KroneckerSumSolver::new(&block)?;
    let mut forbidden = Vec::new();
    for a in 0..m {
        for b in 0..m {
            if h1.basis.atom_of(modes[a]) == h1.basis.atom_of(modes[b]) {
                forbidden.push((a, b));
            }
        }
    }
    // group by atom: (e,e), (e,s), (s,e), (s,s) per site
    forbidden.sort_by_key(|&(a, b)| (h1.basis.atom_of(modes[a]), a, b));
    Ok(TwoExcitationOperator { h1: h1.clone(), modes, forbidden, solver })
}

impl TwoExcitationOperator {
    pub fn single(&self) -> &EffectiveHamiltonian {
        &self.h1
    }

    /// Full-basis indices of the modes spanning each factor.
    pub fn modes(&self) -> &[usize] {
        &self.modes
    }

    /// Dimension of the product space, `m²` for `m` active modes.
    pub fn dim(&self) -> usize {
        self.modes.len() * self.modes.len()
    }

    /// Ordered pairs `(a, b)` of full-basis modes addressing the same atom.
    pub fn forbidden_pairs(&self) -> Vec<(usize, usize)> {
        self.forbidden.iter().map(|&(a, b)| (self.modes[a], self.modes[b])).collect()
    }

    /// Row-major product index `a·m + b` of each forbidden pair.
    pub fn forbidden_indices(&self) -> Vec<usize> {
        let m = self.modes.len();
        self.forbidden.iter().map(|&(a, b)| a * m + b).collect()
    }

    /// Dense `H₁⊗I + I⊗H₁` on the active modes, row-major product indexing.
    pub fn to_dense(&self) -> Result<DMatrix<C64>> {
        let m = self.modes.len();
        if m * m > MAX_DENSE_DIM {
            return Err(Error::DimensionGuard { dimension: m * m, limit: MAX_DENSE_DIM });
        }
        let h = DMatrix::from_fn(m, m, |i, j| self.h1.matrix[(self.modes[i], self.modes[j])]);
        let eye = DMatrix::<C64>::identity(m, m);
        Ok(h.kronecker(&eye) + eye.kronecker(&h))
    }

    /// `P_D (E − H₂)⁻¹ P_D` on the forbidden pairs, in [`forbidden_pairs`](Self::forbidden_pairs) order.
    pub fn projected_resolvent(&self, energy: f64) -> Result<DMatrix<C64>> {
        let nd = self.forbidden.len();
        let mut g = DMatrix::<C64>::zeros(nd, nd);
        for (col, &(c, d)) in self.forbidden.iter().enumerate() {
            let column = self.solver.unit_response(energy, c, d, &self.forbidden)?;
            for (row, v) in column.into_iter().enumerate() {
                g[(row, col)] = v;
            }
        }
        Ok(g)
    }

    /// `u_outᵀ (p − H₁)⁻¹` on the active modes by a triangular solve against the Schur form.
    fn output_leg(&self, out: &[C64], p: f64) -> Result<Vec<C64>> {
        let schur = self.solver.schur();
        let (q, r) = (&schur.q, &schur.r);
        let m = self.modes.len();
        let mut y = vec![zero(); m];
        for j in 0..m {
            let mut acc: C64 = (0..m).map(|i| out[i] * q[(i, j)]).sum();
            for i in 0..j {
                acc += y[i] * r[(i, j)];
            }
            let denom = C64::new(p, 0.0) - r[(j, j)];
            if denom.norm() == 0.0 {
                return Err(Error::SingularResolvent { frequency: p });
            }
            y[j] = acc / denom;
        }
        Ok((0..m).map(|a| (0..m).map(|k| y[k] * q[(a, k)].conj()).sum()).collect())
    }
}

/// `T(E)` on the forbidden subspace.
#[derive(Debug, Clone)]
pub struct TMatrix {
    pub energy: f64,
    /// Full-basis mode pairs labelling rows and columns.
    pub pairs: Vec<(usize, usize)>,
    pub matrix: DMatrix<C64>,
    /// 1-norm condition number of the projected resolvent that was inverted.
    pub condition: f64,
}

pub fn t_matrix(h2: &TwoExcitationOperator, energy: f64) -> Result<TMatrix> {
    let g = h2.projected_resolvent(energy)?;
    let (matrix, condition) = inverse_with_condition(g).ok_or(Error::SingularProjection { energy })?;
    Ok(TMatrix { energy, pairs: h2.forbidden_pairs(), matrix, condition })
}

/// `w(k₁,k₂)_{ab} = ψ(k₁)_a ψ(k₂)_b` over the full single-excitation basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringVertex {
    pub k1: f64,
    pub k2: f64,
    pub first: DVector<C64>,
    pub second: DVector<C64>,
}

impl ScatteringVertex {
    pub fn element(&self, a: usize, b: usize) -> C64 {
        self.first[a] * self.second[b]
    }

    pub fn tensor(&self) -> DMatrix<C64> {
        &self.first * self.second.transpose()
    }
}

/// `ψ(k) = G₀(k) u_in`.
pub fn input_leg(spec: &LatticeSpec, h1: &EffectiveHamiltonian, k: f64) -> Result<DVector<C64>> {
    let g = green_single(h1, k)?;
    Ok(&g.matrix * guided_drive(spec, 1.0))
}

pub fn vertex(spec: &LatticeSpec, k1: f64, k2: f64) -> Result<ScatteringVertex> {
    let h1 = build_h1(spec);
    let first = input_leg(spec, &h1, k1)?;
    let second = if k2 == k1 { first.clone() } else { input_leg(spec, &h1, k2)? };
    Ok(ScatteringVertex { k1, k2, first, second })
}

/// Everything that depends only on the inputs, prepared once and then
/// evaluated at any number of output frequencies.
#[derive(Debug, Clone)]
pub struct InelasticKernel {
    h2: TwoExcitationOperator,
    k1: f64,
    k2: f64,
    /// `T(k₁+k₂)·w` on the forbidden pairs (positions into the active modes).
    driven: Vec<C64>,
    out: Vec<C64>,
    elastic: f64,
    t_condition: f64,
}

impl InelasticKernel {
    pub fn new(spec: &LatticeSpec, k1: f64, k2: f64) -> Result<Self> {
        let h1 = build_h1(spec);
        let h2 = build_h2(&h1)?;
        let w = vertex(spec, k1, k2)?;
        let t = t_matrix(&h2, k1 + k2)?;
        let w_d: Vec<C64> = t.pairs.iter().map(|&(a, b)| w.element(a, b)).collect();
        let driven = (0..w_d.len())
            .map(|i| (0..w_d.len()).map(|j| t.matrix[(i, j)] * w_d[j]).sum())
            .collect();
        let full_out = guided_drive(spec, -1.0);
        let out = h2.modes.iter().map(|&a| full_out[a]).collect();
        let ta = transmission_amplitude(spec, &h1, k1)?;
        let tb = transmission_amplitude(spec, &h1, k2)?;
        let elastic = ta.norm_sqr() * tb.norm_sqr();
        Ok(InelasticKernel { h2, k1, k2, driven, out, elastic, t_condition: t.condition })
    }

    pub fn total_energy(&self) -> f64 {
        self.k1 + self.k2
    }

    /// `|t(k₁)|²|t(k₂)|²`, the elastic reference.
    pub fn elastic_coefficient(&self) -> f64 {
        self.elastic
    }

    pub fn t_condition(&self) -> f64 {
        self.t_condition
    }

    /// Inelastic amplitude for the outgoing pair `(p₁, p₂)`.
    pub fn amplitude_pair(&self, p1: f64, p2: f64) -> Result<C64> {
        let o1 = self.h2.output_leg(&self.out, p1)?;
        let o2 = if p2 == p1 { o1.clone() } else { self.h2.output_leg(&self.out, p2)? };
        let s: C64 = self.h2.forbidden.iter().zip(&self.driven).map(|(&(a, b), d)| o1[a] * o2[b] * d).sum();
        Ok(C64::new(0.0, -1.0) * s)
    }

    /// Amplitude with one photon at `nu` and its partner fixed by energy conservation.
    pub fn amplitude(&self, nu: f64) -> Result<C64> {
        self.amplitude_pair(nu, self.total_energy() - nu)
    }

    pub fn intensity(&self, nu: f64) -> Result<f64> {
        Ok(self.amplitude(nu)?.norm_sqr())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPhotonSpectrum {
    pub input_detuning: f64,
    pub output_grid: Vec<f64>,
    pub intensity: Vec<f64>,
    pub elastic_coefficient: f64,
}

impl TwoPhotonSpectrum {
    pub fn peak(&self) -> Option<(f64, f64)> {
        self.output_grid
            .iter()
            .zip(&self.intensity)
            .fold(None, |best: Option<(f64, f64)>, (&x, &y)| match best {
                Some((_, b)) if b >= y => best,
                _ => Some((x, y)),
            })
    }

    pub fn max_intensity(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }
}

pub fn check_output_grid(input_detuning: f64, grid: &DetuningGrid) -> Result<()> {
    let scale = grid.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if !grid.is_symmetric_about(input_detuning, GRID_SYMMETRY_TOL * scale) {
        return Err(Error::AsymmetricOutputGrid { center: input_detuning });
    }
    Ok(())
}

/// Inelastic spectrum for two degenerate input photons at `input_detuning`.
pub fn inelastic_spectrum(spec: &LatticeSpec, input_detuning: f64, output_grid: &DetuningGrid) -> Result<TwoPhotonSpectrum> {
    check_output_grid(input_detuning, output_grid)?;
    let kernel = InelasticKernel::new(spec, input_detuning, input_detuning)?;
    let intensity = output_grid.iter().map(|&nu| kernel.intensity(nu)).collect::<Result<Vec<_>>>()?;
    Ok(TwoPhotonSpectrum {
        input_detuning,
        output_grid: output_grid.to_vec(),
        intensity,
        elastic_coefficient: kernel.elastic_coefficient(),
    })
}
