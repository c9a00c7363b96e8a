//! Solvers and verification tools for the nonlinear Schrodinger equation
//! `i u_t + u_xx + lambda |u|^{p-2} u = 0` with Dirichlet data on the
//! half-line and on the unit interval.
//!
//! Fourier convention throughout: `u^(xi) = int u e^{-i xi x} dx`, so free
//! evolution multiplies by `e^{-i xi^2 t}` and sine modes rotate as
//! `e^{-i (n pi)^2 t}`.

pub mod error;
pub mod estimates;
pub mod halfline;
pub mod interval;
pub mod invariants;
pub mod nonlinear;
pub mod spectral;

pub use error::{Annotated, Error, Result, Warning};
pub use num_complex::Complex64;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
