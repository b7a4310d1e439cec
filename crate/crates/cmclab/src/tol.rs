//! Default tolerances and guard thresholds.
//!
//! Absolute thresholds (1e-10 .. 1e-12) guard algebraic identities that hold
//! to round-off; the *_FACTOR constants scale with h^2 where a residual is
//! limited by the second-order discretization.

/// Algebraic identities evaluated pointwise.
pub const ALGEBRAIC: f64 = 1e-12;

/// Looser algebraic bound for identities involving a quaternion inversion.
pub const ALGEBRAIC_INV: f64 = 1e-10;

/// Quaternionic-form predicate on 2x2 matrices (relative to 1 + norm).
pub const QUAT_FORM: f64 = 1e-10;

/// Imaginary-part predicate on quaternions (relative to 1 + norm).
pub const IMAGINARY: f64 = 1e-10;

/// Norm below which a vector counts as zero.
pub const ZERO_VECTOR: f64 = 1e-12;

/// Guard for denominators |T|, |1 - a_hat|, frame determinants.
pub const SINGULAR_GUARD: f64 = 1e-10;

/// |df| below which an immersion is flagged degenerate.
pub const DEGENERATE_DF: f64 = 1e-8;

/// Flagship equivalence of the two transforms.
pub const EQUIVALENCE: f64 = 1e-6;

/// Agreement of the ODE parallel section with the frame formula F F_mu^-1 v.
pub const TWO_ROUTE: f64 = 1e-7;

/// Factor on h^2 for flatness / frame-consistency residuals.
pub const FLATNESS_FACTOR: f64 = 50.0;

/// Factor on h^2 for Riccati and dressed-harmonicity residuals.
pub const RICCATI_FACTOR: f64 = 100.0;

/// Factor on h^2 for mean-curvature deviations from 1.
pub const MEAN_CURVATURE_FACTOR: f64 = 10.0;

/// Default number of RK4 substeps per grid edge.
pub const DEFAULT_SUBSTEPS: usize = 16;
