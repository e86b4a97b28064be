//! Numerical library for local zeta functions, Green's kernel expansions and
//! the conformal mass invariant of m-Laplace type operators on model
//! geometries (flat tori, round spheres, spherical space forms).
//!
//! All operations are pure and re-entrant; spectral reductions use fixed-order
//! compensated summation so results are reproducible run to run.

pub mod greens;
pub mod mheat;
pub mod models;
pub mod num;
pub mod riesz;
pub mod specfun;
pub mod varlab;
pub mod verify;
pub mod zeta;

pub use specfun::LaurentValue;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("pole error: {0}")]
    Pole(String),
    #[error("accuracy error: {0}")]
    Accuracy(String),
    #[error("convergence error: {0}")]
    Convergence(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("inconsistency: {0}")]
    Inconsistency(String),
    #[error("degenerate kernel: {0}")]
    DegenerateKernel(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
