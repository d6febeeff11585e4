//! Sobolev orthonormal polynomials from Hessenberg inverse eigenvalue problems.
//!
//! A discretized Sobolev inner product (function values and derivatives
//! sampled at a finite set of nodes) is equivalent to the Euclidean inner
//! product on the Krylov subspace spanned by a Jordan matrix `Z` and a weight
//! vector `w`. The recurrence matrix of the orthonormal polynomials is the
//! upper Hessenberg matrix `H = Q^H Z Q` with `Q e_1 = w / ||w||`, which this
//! crate reconstructs in two independent ways:
//!
//! * [`hiep::arnoldi`], the Arnoldi iteration with reorthogonalization;
//! * [`hiep::update_solve`], an updating procedure that merges one Jordan
//!   block at a time and restores Hessenberg form with Householder
//!   reflectors or plane rotations.
//!
//! Supporting modules build the quadrature rules that discretize continuous
//! products ([`quadrature`]), the Jordan data for common products
//! ([`jordan`]), eigenvalues of the recurrence matrix ([`eigen`]) and
//! polynomial evaluation / Hermite least squares ([`sop`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![forbid(unsafe_code)]
// `!(x <= tol)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod eigen;
mod error;
pub mod hiep;
pub mod jordan;
pub mod linalg;
pub mod quadrature;
pub mod sop;

pub use error::{Error, Result};
pub use linalg::{Matrix, C64};
