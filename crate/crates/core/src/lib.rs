//! Exact Fourier analysis of functions on `Z_p^d` and `Z_{p^l}^d`.

pub mod algebra;
pub mod eigen;
pub mod error;
pub mod format;
pub mod fourier;
pub mod scalars;
pub mod spectrum;
pub mod varieties;
pub mod wavelets;
pub mod zmodpl;

pub use error::{Error, Result};
