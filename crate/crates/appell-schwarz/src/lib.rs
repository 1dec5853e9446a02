//! Numerical study of the Schwarz map for Appell's second hypergeometric
//! system with parameters `(a, b1, b2, c1, c2) = (1/2, 1/4, 1/4, 1/2, 1/2)`.
//!
//! The library evaluates the four solution integrals as period integrals on
//! the genus-3 curve `w^4 = v^3 (1-v)(1-vz)`, assembles the map
//! `(x1, x2) -> (y1, y2, tau)` into `C^2 x H`, inverts it in closed form
//! through theta functions with characteristics, and realizes the monodromy
//! group exactly over the Gaussian integers together with a constructive
//! membership test and word decomposition.
//!
//! Modules mirror the layers of that pipeline:
//!
//! - [`numerics`]: tolerances, tanh-sinh quadrature, gamma/beta, torus points
//! - [`hypergeo`]: Gauss and Appell series, their Euler integrals, PDE checks
//! - [`periods`]: the four periods, eigenform segment integrals, homology
//! - [`theta`]: theta functions with characteristics and their identities
//! - [`curve`]: points and automorphisms of the curve, the Abel-Jacobi map
//! - [`schwarz`]: the forward map, its image equation, and its inverse
//! - [`monodromy`]: exact circuit matrices and the congruence description
//! - [`cli`]: the command-line front end (exposed through the `schwarz` binary)

// frozen reference constants carry their full source precision
#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod curve;
pub mod error;
pub mod hypergeo;
pub mod monodromy;
pub mod numerics;
pub mod periods;
pub mod schwarz;
pub mod theta;
pub mod verify;

mod book;

pub use error::{Error, Result};
pub use numerics::Tolerance;

pub use num_complex::Complex64;
