//! Exact Pfaffian constructions of multiple skew-orthogonal polynomials and
//! identically-zero checks of the 2-component Pfaff lattice hierarchy.

pub mod error;
pub mod exactalg;
pub mod hierarchy;
pub mod moments;
pub mod msop;
pub mod par;
pub mod pfaffian;
pub mod report;
pub mod suites;

pub use error::{Error, Result};
