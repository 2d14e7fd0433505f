//! Integral regulators of higher Chow cycles over cyclotomic fields.
//!
//! Cycles are formal sums of rationally parametrized curves (or points) in the
//! algebraic cube. The crate computes boundaries and normalizations, traces the
//! perturbed branch-cut loci `arg f = pi - eps` of the coordinate functions and
//! integrates the perturbed KLM current along them.

pub mod mp;
pub mod error;
pub mod field_arith;

pub use error::{Error, ErrorClass, Result};
pub mod func_field;
pub mod special_functions;
pub mod cycles;
pub mod fixtures;
pub mod wavefront;
pub mod regulator;
