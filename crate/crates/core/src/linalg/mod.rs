//! Exact dense linear algebra over prime fields and the rationals, plus the
//! integer Smith normal form used for Cartan fingerprints.

pub mod field;
pub mod matrix;
pub mod snf;
pub mod subspace;

pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use matrix::{solve_linear, LinearSolution, Matrix, Rref};
pub use snf::{smith_normal_form, IntMatrix, SmithForm};
pub use subspace::{QuotientSpace, Subspace};
