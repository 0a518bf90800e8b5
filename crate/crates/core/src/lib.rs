//! Phase-space (star-product) quantization of a particle in front of a hard wall.
//!
//! Units are fixed once for the whole crate: `hbar = 1` and `2m = 1`, so the free
//! Hamiltonian symbol is `H = p^2`. Wigner functions use the normalization
//! `rho(x, p) = (1/pi) ∫ dy exp(-2ipy) psi(x + y) psi*(x - y)`.

pub mod analysis;
pub mod error;
pub mod phase_space;
pub mod quadrature;
pub mod specfun;
pub mod star;
pub mod states;

pub use error::{Error, Result};

pub mod conventions {
    pub const HBAR: f64 = 1.0;
    /// The constant `2m`.
    pub const MASS_FACTOR: f64 = 1.0;
}
