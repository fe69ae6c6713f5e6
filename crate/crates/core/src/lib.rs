//! Numerical verification of the differential geometry of Lagrangian and
//! minimal Lagrangian surfaces in the product of two unit spheres.
//!
//! The crate is organised bottom-up:
//!
//! * [`elliptic`]: complete elliptic integrals and Jacobi amplitude functions.
//! * [`dual`]: second-order forward differentiation used for analytic jets.
//! * [`geometry`]: ambient structure, jets, fundamental forms and the
//!   residuals of the identities satisfied by (minimal) Lagrangian surfaces.
//! * [`catalog`]: constructors for the explicit surfaces under test.
//! * [`sinh_gordon`]: the sinh-Gordon correspondence for minimal Lagrangian data.
//! * [`spectral`]: conformal Laplace–Beltrami spectra and index counts.
//! * [`harness`]: reports, suites and the command-line front end.

pub mod catalog;
pub mod dual;
pub mod elliptic;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod sinh_gordon;
pub mod spectral;

pub use error::{Error, Result};

/// Version string embedded in reports.
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
