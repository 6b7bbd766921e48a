//! Constant angle surfaces in E³, S²×R and H²×R: generators, differential
//! geometry, verification of the structural identities, and mesh export.

// `!(a < b)` is used on purpose so that NaN takes the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diffgeo;
pub mod error;
pub mod generators;
pub mod geom;
pub mod mesh;
pub mod quadrature;
pub mod spline;
pub mod verify;

pub use error::{Error, Result};
