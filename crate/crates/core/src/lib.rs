//! Laplacian eigenvalue spectra on two-dimensional constant-curvature domains.
//!
//! The pipeline is: build a [`geometry::Domain`] in conformally flat model
//! coordinates, triangulate it ([`mesh`]), assemble the weighted P1 pencil
//! ([`fem`]), compute the lowest eigenvalues on successive uniform
//! refinements and extrapolate them ([`eigensolve`]), then compare the
//! result with the three-term refined counting function ([`analysis`]).
//! Closed-form spectra for the classical test domains live in [`exact`].

// NaN must fail range checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod eigensolve;
pub mod error;
pub mod exact;
pub mod fem;
pub mod geometry;
pub mod mesh;
pub mod pipeline;
pub mod sparse;
pub mod spectrum_file;

pub use error::{Error, Result};
