//! Numerical corroboration for symmetric delay systems: Fourier–Galerkin
//! residuals, Newton, trajectory symmetry detection and a-priori bounds.

pub mod apriori;
pub mod corroborate;
pub mod error;
pub mod fourier;
pub mod galerkin;
pub mod pipeline;
pub mod symmetry;
pub mod system;

pub use error::{Result, VerifyError};
pub use fourier::FourierSolution;
pub use galerkin::{newton_solve, Galerkin, NewtonOptions, NewtonResult, NewtonStatus};
pub use system::{SystemSpec, Term};
