//! Exact desk-scale computations for Schubert, Richardson and Bott-Samelson
//! varieties over small prime fields.
//!
//! Everything is enumerated: flags and subspaces of `F_p^n` are listed in
//! canonical form, Schubert conditions are rank conditions, and tangent
//! spaces are kernels of minor Jacobians on a frame lift.

pub mod error;
pub mod family;
pub mod bott;
pub mod cli;
pub mod ffgeom;
pub mod grass;
pub mod interp;
pub mod perm;
pub mod schubert;
pub mod tangent;

pub use error::{Error, Result};
