//! Exact finite-dimensional quantum layer.
//!
//! Operators are given by rational spectral data over the Gaussian
//! rationals. On top of them sit the operator category (arrows `A → f(A)`),
//! the dual and coarse-graining presheaves over it, state-induced
//! sieve-valued valuations and the global-section search for the dual
//! presheaf.

mod category;
pub mod gauss;
mod operator;
mod presheaves;
mod valuation;

use thiserror::Error;

use crate::fincat::CategoryError;
use crate::heyting::HeytingError;
use crate::presheaf::PresheafError;

pub use category::{build_operator_category, OperatorCategory};
pub use gauss::{CMatrix, GaussianRational, Rational};
pub use operator::{
    born_prob, born_prob_mask, find_arrow, function_of, identity_function, image_mask,
    make_operator, EigenGroup, EigenMask, SpectralOperator, State, MAX_DIM,
};
pub use presheaves::{coarse_graining_presheaf, dual_presheaf, ks_global_section_search};
pub use valuation::{
    nu_state, nu_state_by_probability, nu_state_mask, FuncViolation, SieveValuation,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("operator `{operator}`: eigenvectors are not pairwise orthogonal")]
    NotOrthogonal { operator: String },
    #[error("operator `{operator}`: eigenvectors span rank {rank}, expected {dim}")]
    IncompleteBasis {
        operator: String,
        rank: usize,
        dim: usize,
    },
    #[error("operator `{operator}`: eigenvalue {eigenvalue} given twice")]
    DuplicateEigenvalue {
        operator: String,
        eigenvalue: String,
    },
    #[error("operator `{operator}`: eigenvalue {eigenvalue} has no eigenvectors")]
    EmptyEigenspace {
        operator: String,
        eigenvalue: String,
    },
    #[error("operator `{operator}`: zero eigenvector")]
    ZeroVector { operator: String },
    #[error("operator `{operator}` violates: {law}")]
    InvariantViolation { operator: String, law: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {dim} outside 1..={max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("function is undefined at eigenvalue {eigenvalue} of `{operator}`")]
    PartialFunction {
        operator: String,
        eigenvalue: String,
    },
    #[error("{value} is not in the spectrum of `{operator}`")]
    NotInSpectrum { operator: String, value: String },
    #[error("name `{0}` used by two structurally different operators")]
    NameCollision(String),
    #[error("unknown operator `{0}`")]
    UnknownObject(String),
    #[error("state vector is zero")]
    ZeroState,
    #[error("valuation is missing values: {0}")]
    IncompleteValuation(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Heyting(#[from] HeytingError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
}
