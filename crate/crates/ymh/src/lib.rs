//! Numerical toolkit for the conformal method applied to the
//! Yang–Mills–Higgs system with gauge group SO(3).
//!
//! Fields are evolved in temporal gauge on Minkowski space and on the
//! Einstein cylinder under spherical symmetry, moved between Minkowski,
//! cylinder and de Sitter frames by the conformal maps, and checked against
//! finite-difference evaluations of the full covariant equations.

pub mod algebra;
pub mod cli;
pub mod cronstrom;
pub mod data;
pub mod diagnostics;
pub mod error;
pub mod evolve;
pub mod fields;
pub mod geometry;
pub mod io;
pub mod oracle;
pub mod quadrature;
pub mod sampler;
pub mod transport;

pub use error::{Error, Result};
