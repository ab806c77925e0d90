//! Effective non-Hermitian Hamiltonian on the single-excitation manifold.
//!
//! Basis ordering: the `|e>` excitation of every site by `site_id`, followed by
//! the `|s>` excitation of every site by `site_id`. The probe detuning is *not*
//! part of the matrix; it enters through the resolvent `(Δω − H₁)⁻¹`, so that
//! `H₁` has the excited state at zero energy and the metastable state at `Δ_c`.
//!
//! ```text
//!         | −iΓ_e/2 − J − (i/2)√(Γ_uΓ_v) e^{ik₀|z_u−z_v|}   Ω_c |
//!   H₁ =  |                                                      |
//!         |                 Ω_c                              Δ_c |
//! ```

use nalgebra::{DMatrix, SymmetricEigen};

#[allow(unused_imports)]
use num_traits::Float;

use crate::lattice::LatticeSpec;
use crate::C64;

/// Index bookkeeping for the `[e…, s…]` ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisOrdering {
    n_atoms: usize,
}

impl BasisOrdering {
    pub fn new(n_atoms: usize) -> Self {
        BasisOrdering { n_atoms }
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn dim(&self) -> usize {
        2 * self.n_atoms
    }

    pub fn excited(&self, site: usize) -> usize {
        site
    }

    pub fn metastable(&self, site: usize) -> usize {
        self.n_atoms + site
    }

    pub fn atom_of(&self, mode: usize) -> usize {
        mode % self.n_atoms
    }

    pub fn is_excited(&self, mode: usize) -> bool {
        mode < self.n_atoms
    }
}

/// How the probe detuning relates to the stored matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetuningConvention {
    /// `H₁` excludes `Δω`; resolvents are `(Δω·I − H₁)⁻¹`.
    AppliedAtResolvent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveHamiltonian {
    pub matrix: DMatrix<C64>,
    pub basis: BasisOrdering,
    pub detuning_convention: DetuningConvention,
}

/// `e^{i k₀d |Δz|}` for a separation measured in pitches.
pub fn guided_phase(k0d: f64, dz: f64) -> C64 {
    C64::from_polar(1.0, k0d * dz.abs())
}

pub fn build_h1(spec: &LatticeSpec) -> EffectiveHamiltonian {
    let n = spec.n_atoms();
    let basis = BasisOrdering::new(n);
    let p = &spec.params;
    let mut h = DMatrix::<C64>::zeros(2 * n, 2 * n);
    let minus_half_i = C64::new(0.0, -0.5);

    for u in &spec.sites {
        let eu = basis.excited(u.site_id);
        let su = basis.metastable(u.site_id);
        h[(eu, eu)] += C64::new(0.0, -0.5 * p.gamma_e);
        h[(eu, su)] = C64::new(p.omega_c, 0.0);
        h[(su, eu)] = C64::new(p.omega_c, 0.0);
        h[(su, su)] = C64::new(p.delta_c, 0.0);
        if !u.is_coupled() {
            continue;
        }
        for v in spec.coupled_sites() {
            let ev = basis.excited(v.site_id);
            let rate = (u.decay_rate * v.decay_rate).sqrt();
            h[(eu, ev)] += minus_half_i * rate * guided_phase(p.k0d, u.z_position - v.z_position);
        }
    }
    for (u, v, j) in spec.graph.directed() {
        h[(basis.excited(u), basis.excited(v))] -= C64::new(j, 0.0);
    }
    EffectiveHamiltonian { matrix: h, basis, detuning_convention: DetuningConvention::AppliedAtResolvent }
}

impl EffectiveHamiltonian {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Eigenvalues of the Hermitian decay matrix `(i/2)(H₁ − H₁†)`; all ≥ 0 for a passive system.
    pub fn dissipation_spectrum(&self) -> nalgebra::DVector<f64> {
        let anti = (&self.matrix - self.matrix.adjoint()) * C64::new(0.0, 0.5);
        SymmetricEigen::new(anti).eigenvalues
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let diff = &self.matrix - self.matrix.adjoint();
        diff.iter().all(|z| z.norm() <= tol)
    }

    /// Whether the control field couples any `|e>` to any `|s>`.
    pub fn has_control_coupling(&self) -> bool {
        let n = self.basis.n_atoms();
        (0..n).any(|i| (0..n).any(|j| self.matrix[(i, n + j)] != C64::new(0.0, 0.0)))
    }

    /// Indices of the modes the probe can reach: the `|e>` block alone when the
    /// control field is off, otherwise the full basis.
    pub fn active_modes(&self) -> alloc::vec::Vec<usize> {
        if self.has_control_coupling() {
            (0..self.dim()).collect()
        } else {
            (0..self.basis.n_atoms()).collect()
        }
    }
}

/// Collective guided decay `Γ_ij = √(Γ_iΓ_j) cos(k₀|z_i − z_j|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipationMatrix {
    pub matrix: DMatrix<f64>,
}

impl DissipationMatrix {
    pub fn eigenvalues(&self) -> nalgebra::DVector<f64> {
        SymmetricEigen::new(self.matrix.clone()).eigenvalues
    }
}

pub fn dissipation_matrix(spec: &LatticeSpec) -> DissipationMatrix {
    let n = spec.n_atoms();
    let k0d = spec.params.k0d;
    let matrix = DMatrix::from_fn(n, n, |i, j| {
        let (u, v) = (&spec.sites[i], &spec.sites[j]);
        (u.decay_rate * v.decay_rate).sqrt() * (k0d * (u.z_position - v.z_position).abs()).cos()
    });
    DissipationMatrix { matrix }
}
