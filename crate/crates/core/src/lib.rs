//! Exact symbolic calculus for Lie algebroids over polynomial charts:
//! deformation complexes, VB-algebroids and IM derivations.

pub mod algebroid;
pub mod defcomplex;
pub mod error;
pub mod fixtures;
pub mod im;
pub mod random;
pub mod report;
pub mod symexpr;
pub mod vb;

pub use error::{Error, Result};
pub use report::{Check, Status, Witness};
