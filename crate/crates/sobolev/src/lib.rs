//! Experiment drivers, file formats and plotting on top of `sobolev-core`.
//!
//! Each experiment returns an [`ExperimentReport`] that renders to CSV (the
//! table only, byte-stable for fixed inputs) or JSON (table, configuration
//! echo, residual diagnostics and wall time).

// `!(x <= tol)` style checks are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod error;
pub mod experiments;
pub mod instrument;
pub mod numfmt;
pub mod plot;
pub mod report;
pub mod spectral_json;

pub use error::{AppError, AppResult};
pub use report::{Cell, ExperimentReport};
