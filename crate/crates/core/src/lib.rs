//! Desk-scale machinery for the de Rham and signature operators on Witt spaces.
//!
//! The crate is organised along the pipeline a stratified space goes through:
//!
//! - [`strata`]: combinatorial stratified pseudomanifolds, depth, cones and suspensions;
//! - [`resolution`]: resolution to a manifold with corners carrying an iterated
//!   fibration structure, the inverse blowdown and structural isomorphism;
//! - [`ih`]: simplicial intersection homology over the rationals and the Witt check;
//! - [`indicial`]: closed-form weights, Bessel orders and indicial roots of the
//!   mode-reduced de Rham operator;
//! - [`radial`]: modified Bessel functions, radial residuals, truncated-cone
//!   eigenvalue problems, indicial families and Mellin transforms.
//!
//! All values are immutable once built and every public function is pure, so
//! independent computations may be run on separate threads.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod ih;
pub mod indicial;
pub mod radial;
pub mod report;
pub mod resolution;
pub mod strata;

pub use error::{Error, Result};
pub use report::{CheckResult, ValidationReport};
