use alloc::string::String;
use core::fmt;

/// Everything that can go wrong while building a lattice or evaluating a spectrum.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter is outside its admissible range.
    InvalidParameter { field: &'static str, reason: String },
    /// A lattice size argument was rejected.
    InvalidLatticeSize { field: &'static str, value: usize },
    /// A hand-assembled lattice violates a structural invariant.
    InvalidLattice(String),
    /// Detuning grids must be non-empty and strictly increasing.
    InvalidGrid(String),
    /// Band thresholds must satisfy `t_low < t_high`.
    InvalidThresholds { t_low: f64, t_high: f64 },
    /// `(ω − H)` could not be factorised at this frequency.
    SingularResolvent { frequency: f64 },
    /// The projected two-excitation resolvent on the same-atom subspace is singular.
    SingularProjection { energy: f64 },
    /// A dense two-excitation object would exceed the desk-scale guard.
    DimensionGuard { dimension: usize, limit: usize },
    /// The output grid of a degenerate two-photon spectrum must mirror about the input.
    AsymmetricOutputGrid { center: f64 },
    /// An eigen-decomposition was too ill-conditioned to be trusted.
    IllConditioned { what: &'static str, condition: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            Error::InvalidLatticeSize { field, value } => {
                write!(f, "`{field}` must be at least 1 (got {value})")
            }
            Error::InvalidLattice(msg) => write!(f, "invalid lattice: {msg}"),
            Error::InvalidGrid(msg) => write!(f, "invalid detuning grid: {msg}"),
            Error::InvalidThresholds { t_low, t_high } => {
                write!(f, "band thresholds need t_low < t_high (got {t_low} >= {t_high})")
            }
            Error::SingularResolvent { frequency } => {
                write!(f, "single-excitation resolvent is singular at {frequency}")
            }
            Error::SingularProjection { energy } => {
                write!(f, "projected two-excitation resolvent is singular at E = {energy}")
            }
            Error::DimensionGuard { dimension, limit } => {
                write!(f, "dimension {dimension} exceeds the limit of {limit}")
            }
            Error::AsymmetricOutputGrid { center } => {
                write!(f, "output grid is not symmetric about the input detuning {center}")
            }
            Error::IllConditioned { what, condition } => {
                write!(f, "{what} is ill-conditioned (condition ~ {condition:e})")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
