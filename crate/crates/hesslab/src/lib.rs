//! Exact computations around the split symmetric pair (SL(2n+1), SO(2n+1)).
//!
//! Nilpotent orbit combinatorics, Hessenberg fiber polynomials from affine pavings,
//! the monodromy catalog of quadric intersections with an independent Betti-number
//! oracle, prime-field brute-force counters, and the conjectural Fourier matching map.

#![allow(clippy::needless_range_loop)]

pub mod ci_cohomology;
pub mod error;
pub mod finitefield;
pub mod hessenberg;
pub mod linalg;
pub mod monodromy;
pub mod orbits;
pub mod qcombinatorics;
pub mod springer;
pub mod verify;

pub use error::{Error, Result};
pub use orbits::Partition;
pub use qcombinatorics::{PoincarePolynomial, Witt};
