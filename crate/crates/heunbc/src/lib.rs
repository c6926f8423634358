//! Polynomial eigen-solutions of the biconfluent Heun equation.
//!
//! - [`cpoly`]: complex polynomials, Aberth root finding, exact Q(√2) mode
//! - [`bhe`]: parameters, series recursion, terminating solutions, residuals
//! - [`spectra`]: termination condition, tridiagonal determinant, periodic solutions
//! - [`weight`]: the Laurent weight on the unit circle
//! - [`quad`]: contour quadrature and orthogonality / Fredholm checks
//! - [`qes`]: Turbiner / Bender–Dunne specialization
//! - [`cli`]: command-line front end

pub mod bhe;
pub mod cli;
pub mod cpoly;
pub mod error;
pub mod qes;
pub mod quad;
pub mod spectra;
pub mod weight;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
