//! Error type shared by every evaluator in the crate.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MockError {
    #[error("tau not in upper half plane (Im(tau) = {0})")]
    NotInUpperHalfPlane(f64),
    #[error("argument lies within {dist:e} of a pole ({what})")]
    NearPole { what: String, dist: f64 },
    #[error("series truncation failed: {0}")]
    Truncation(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invalid lattice form: {0}")]
    Form(String),
    #[error("invalid cone vector: {0}")]
    Cone(String),
    #[error("characteristic lies on a wall: {0}")]
    Wall(String),
    #[error("q-series error: {0}")]
    Series(String),
    #[error("not a Jacobi form: {0}")]
    NotJacobi(String),
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("unknown id: {0}")]
    UnknownId(String),
    #[error("family data error: {0}")]
    Data(String),
}

impl MockError {
    /// Short machine readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            MockError::NotInUpperHalfPlane(_) => "not_in_upper_half_plane",
            MockError::NearPole { .. } => "near_pole",
            MockError::Truncation(_) => "truncation_failure",
            MockError::Quadrature(_) => "quadrature_failure",
            MockError::InvalidInput(_) => "invalid_input",
            MockError::Form(_) => "invalid_form",
            MockError::Cone(_) => "invalid_cone_vector",
            MockError::Wall(_) => "wall_proximity",
            MockError::Series(_) => "series_error",
            MockError::NotJacobi(_) => "not_jacobi_form",
            MockError::Domain(_) => "out_of_domain",
            MockError::UnknownId(_) => "unknown_id",
            MockError::Data(_) => "data_error",
        }
    }

    /// True for errors caused by the caller's input rather than by a numerical failure.
    pub fn is_input_error(&self) -> bool {
        !matches!(
            self,
            MockError::Truncation(_) | MockError::Quadrature(_) | MockError::UnknownId(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, MockError>;
