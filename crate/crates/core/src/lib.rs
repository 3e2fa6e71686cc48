//! Exact computations on the enhanced nilpotent cone `V × N`.
//!
//! The crate is organised bottom-up:
//!
//! - [`bipartitions`]: partitions, bi-partitions and the closure order on orbits.
//! - [`ff_linalg`]: finite fields, canonical subspaces, preimages and subspace
//!   enumeration, plus a small exact rational rank routine.
//! - [`enhanced_cone`]: normal-form orbit representatives, Jordan types,
//!   orbit identification and orbit censuses.
//! - [`slice`]: centralizer bases, the dual basis, the trace pairing and the
//!   transverse slice / contracting cocharacter certificates.
//! - [`resolution`]: flag data for the resolutions of orbit closures and exact
//!   fibre point counts.
//! - [`pi`]: interpolation and certification of fibre-count polynomials.
//!
//! No floating point is used anywhere in the computational core.

pub mod bipartitions;
pub mod enhanced_cone;
pub mod error;
pub mod ff_linalg;
pub mod pi;
pub mod resolution;
pub mod slice;

pub use bipartitions::{Bipartition, Composition, Partition};
pub use error::{Error, Result};
pub use ff_linalg::{Field, Matrix, SubspaceBasis};
