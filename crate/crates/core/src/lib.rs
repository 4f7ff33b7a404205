//! Frieze and Y-frieze patterns attached to symmetrizable Cartan matrices.
//!
//! Patterns take values in a pluggable semiring and are computed exactly:
//! integers and rationals are arbitrary precision, and the universal
//! semifield is modelled by canonical rational functions. Alongside the
//! patterns the crate provides seed mutation, the belt of seeds that
//! produces them, the rank-2 generalized cluster algebras, and exhaustive
//! enumeration of positive-integer patterns in finite type.

#![allow(clippy::needless_range_loop)]

pub mod cartan;
pub mod enumerate;
pub mod frieze;
pub mod gca2;
pub mod mutation;
pub mod semiring;
pub mod symbolic;

pub use cartan::{parse_cartan, CartanError, CartanMatrix, FiniteType, GlideData, IntMatrix};
pub use enumerate::{
    enumerate_patterns, theorem_bound, tropical_y_friezes, EnumerateError, EnumerationReport,
};
pub use frieze::{
    check_glide, ensemble_image, knit, verify, Direction, FriezeError, GridPoint, PatternKind,
    PatternWindow,
};
pub use gca2::{gca_period, gca_variables, phi_check, superunitary_contains, GcaParams};
pub use mutation::{belt, check_relations, unitary_pattern, Belt, Flavor, MutationError, MutationMatrix, Seed};
pub use semiring::{SemiringError, SemiringId, SemiringValue};
pub use symbolic::{LaurentPoly, RationalFn, SymbolicError};
