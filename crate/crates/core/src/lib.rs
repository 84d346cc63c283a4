//! Exact lattice computations for real abelian varieties.
//!
//! The crate works entirely with integer and rational matrices: first
//! cohomology lattices with a complex-conjugation involution, their Tate
//! cohomology, polarizations and principalization by isogeny, Silhol types,
//! the cohomological Fourier transform, and a Hecke orbit search.

pub mod error;
pub mod matrix;
pub mod lattice;
pub mod exterior;
pub mod cohomology;
pub mod polarization;
pub mod moduli;
pub mod fourier;
pub mod hecke;
pub mod json;

pub use error::{Error, Result};
pub use lattice::{tate_cohomology, GLattice, TateGroup, TateRanks};
pub use matrix::{smith_normal_form, IntMatrix, RatMatrix, SmithForm};
