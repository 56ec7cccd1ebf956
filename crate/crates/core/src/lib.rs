//! Dirac particle in a uniform magnetic field on noncommutative phase space.

pub mod classical_limit;
pub mod cli;
pub mod error;
pub mod estimates;
pub mod fock_spectrum;
pub mod nc_model;
pub mod operator_algebra;
pub mod scalar;
pub mod surd;

pub use error::{Error, Result};
