//! Error type shared by all modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix is not of quaternionic form (deviation {0:.3e})")]
    NotQuaternionic(f64),
    #[error("quaternion is not imaginary (real part {0:.3e})")]
    NotImaginary(f64),
    #[error("vector is numerically zero (norm {0:.3e})")]
    ZeroVector(f64),
    #[error("spectral parameter must be nonzero")]
    LambdaZero,
    #[error("mu = {0} is not admissible for this transform")]
    MuForbidden(num_complex::Complex64),
    #[error("parallel section vanishes (min |phi| = {0:.3e})")]
    ZeroSection(f64),
    #[error("frame is numerically singular (|det| = {0:.3e})")]
    SingularFrame(f64),
    #[error("transform is numerically singular (guard value {0:.3e})")]
    SingularTransform(f64),
    #[error("immersion is degenerate at a grid point (|df| = {0:.3e})")]
    DegenerateImmersion(f64),
    #[error("parameter must lie on the unit circle (got |mu| = {0})")]
    NotUnitCircle(f64),
    #[error("one-form violates the required type structure (deviation {0:.3e})")]
    TypeViolation(f64),
    #[error("branch point: |df| = {0:.3e} below threshold")]
    BranchPoint(f64),
    #[error("gamma has a pole at lambda = {0}")]
    PoleAt(num_complex::Complex64),
    #[error("left-normal factor H vanishes at a grid point (|H| = {0:.3e})")]
    ZeroH(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("path is not a chain of adjacent grid points")]
    BadPath,
}
