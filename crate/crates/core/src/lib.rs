//! Waveguide-QED model of Λ-type atomic lattices: single-excitation Hamiltonian,
//! linear transmission, two-photon inelastic spectra and band analysis.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;

pub type C64 = num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod analysis;
pub mod error;
pub mod hamiltonian;
pub mod lattice;
pub mod linalg;
pub mod linear_response;
pub mod two_photon;

pub use error::{Error, Result};
pub use hamiltonian::{build_h1, EffectiveHamiltonian};
pub use lattice::{Geometry, LatticeSpec, SystemParams};
pub use linear_response::{DetuningGrid, SpectrumSeries};
