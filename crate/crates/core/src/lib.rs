//! Numerical and exact tools for mock theta functions: Mordell integrals,
//! Appell-Lerch sums, indefinite theta functions of type (r-1,1), Fourier
//! coefficients of meromorphic Jacobi forms, and the vector valued completions
//! of the fifth and seventh order mock theta functions.

pub mod error;
pub mod families;
pub mod fourier;
pub mod indefinite;
pub mod lerch;
pub mod numerics;
pub mod qidentities;
pub mod qseries;
pub mod registry;
pub mod report;
pub mod theta;

pub use error::{MockError, Result};
pub use numerics::C64;
