//! Exact linear algebra over small finite fields, plus a rational rank routine.

mod field;
mod matrix;
pub mod rational;
mod subspace;

pub use field::{is_prime, Elem, Field, FieldSpec, MAX_ORDER};
pub use matrix::{kernel, preimage, rref, Matrix, MatrixDoc};
pub use subspace::{enumerate_between, gaussian_binomial, Between, SubspaceBasis};
