//! Laplace spectra of conformally parametrized tori and Klein bottles.

pub mod grid;
pub mod index;
pub mod lanczos;
pub mod operator;

pub use grid::{ConformalGrid, GridGluing};
pub use index::{index_report, spectrum_through, Margins, Parity, SpectralResult, DEFAULT_MARGIN};
pub use lanczos::{dense_eigenvalues, lowest_eigenpairs, Eigenpairs};
pub use operator::{assemble, assemble_klein, parity_split, rayleigh, Operators, ParitySplit};
