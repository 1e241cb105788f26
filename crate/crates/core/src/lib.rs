//! Series expansions of the Lambert W function: exact coefficient machinery,
//! convergence domains, asymptotic coefficient estimates and an independent
//! iterative oracle to check them against.

pub mod asymptotics;
pub mod cli;
pub mod combinatorics;
pub mod convergence;
pub mod error;
pub mod exact;
pub mod exec;
pub mod oracle;
pub mod real;
pub mod series;

pub use error::{Error, Result};
pub use num_complex::Complex64;
