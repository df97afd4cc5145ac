//! Presheaf toposes over finite categories and their application to
//! contextual quantum valuations.
//!
//! * [`fincat`]: finite categories and posets as categories.
//! * [`heyting`]: sieves, their Heyting algebra, finite topologies.
//! * [`presheaf`]: presheaves, natural transformations, subobjects, the
//!   subobject classifier `Ω`, global sections.
//! * [`quantum`]: exact spectral operators, the operator category, the dual
//!   and coarse-graining presheaves, sieve-valued valuations.
//! * [`fixtures`]: small standard examples.

pub mod fincat;
pub mod fixtures;
pub mod heyting;
pub mod presheaf;
pub mod quantum;

pub use fincat::{
    poset_to_category, Arrow, ArrowId, CategoryBuilder, CategoryError, FinCategory, ObjectId,
};
pub use heyting::{all_sieves, is_sieve, FiniteTopology, HeytingAlgebraTable, HeytingError, Sieve};
pub use presheaf::{
    characteristic_arrow, coproduct, enumerate_subobjects, global_sections,
    natural_transformations, omega_presheaf, product, representable, subobject_from_arrow,
    terminal_presheaf, FunctorViolation, GlobalSection, NaturalTransformation, OmegaPresheaf,
    Presheaf, PresheafError, SearchOptions, SectionSearch, Subobject,
};
pub use quantum::QuantumError;
