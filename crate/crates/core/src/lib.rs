//! Numerical laboratory for open quantum baker's maps.
//!
//! The crate is organized bottom-up:
//!
//! - [`classical`]: the open baker's map, its symbolic dynamics, escape sets,
//!   trapped-set covers and topological pressure.
//! - [`quantum`]: the quantized map `U_N`, its opening `M_N = U_N Π`, the Walsh
//!   tensor model, parity sectors and diagonal phase perturbations.
//! - [`spectral`]: eigenvalues, counting profiles, fractal Weyl fits, and the
//!   Schur-complement effective Hamiltonian.
//! - [`phase_space`]: torus coherent states and Husimi localization metrics.
//! - [`io`] and [`cli`]: stable CSV/JSON/binary artifacts and the command-line runner.

pub mod classical;
pub mod cli;
pub mod error;
pub mod io;
pub mod linalg;
pub mod phase_space;
pub mod quantum;
pub mod rational;
pub mod spectral;

pub use error::{Error, Result};
