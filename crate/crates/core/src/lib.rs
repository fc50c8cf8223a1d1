//! Explicit Deuring correspondence for a prime `p`.
//!
//! Supersingular j-invariants in characteristic `p` are paired with the
//! maximal-order types of the definite quaternion algebra ramified at `p`,
//! each order given by an explicit basis `{1, e1, e2, e3}` built from a
//! reduced ternary quadratic form of discriminant `p`.
//!
//! The pipeline:
//!
//! 1. [`ternary_forms::enumerate_reduced`] lists one reduced form per class.
//! 2. [`clifford_orders::clifford`] turns each form into an order presentation.
//! 3. [`supersingular_curves::supersingular_j_list`] finds the supersingular j's.
//! 4. [`clifford_orders::select_lambda`] picks a small set of primes `ℓ` whose
//!    trace/norm pairs tell the orders apart.
//! 5. [`velu_isogenies::isog_fingerprint`] collects `(trace, ℓ)` of every
//!    degree-`ℓ` endomorphism of each curve.
//! 6. [`matcher::build_correspondence`] finds the unique matching bijection.

pub mod cli_table;
pub mod clifford_orders;
pub mod error;
pub mod finite_fields;
pub mod matcher;
pub mod supersingular_curves;
pub mod ternary_forms;
pub mod velu_isogenies;

pub use clifford_orders::{Fingerprint, OrderPresentation, QuaternionElement};
pub use error::{Error, Result};
pub use finite_fields::{make_field, Field, FieldDescriptor, FieldElement};
pub use matcher::{
    build_correspondence, Correspondence, CorrespondenceEntry, MatchOptions, TauClass,
};
pub use supersingular_curves::{Curve, CurvePoint, TorsionContext};
pub use ternary_forms::TernaryForm;
