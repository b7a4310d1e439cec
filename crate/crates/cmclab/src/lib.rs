//! Numerical toolkit for constant mean curvature surfaces and harmonic maps
//! into the 2-sphere.
//!
//! The library works on rectangular conformal grids and provides
//!
//! * a quaternion / 2x2 complex matrix kernel realizing R^4 = H = C + jC,
//! * discrete differential operators, Hopf fields and curvature diagnostics,
//! * the C*-family of flat connections of a harmonic map, with parallel
//!   transport and parallel sections,
//! * extended frames, the Sym-Bobenko reconstruction and the associated
//!   family of CMC surfaces,
//! * mu-Darboux transforms and simple factor dressing, together with the
//!   residual checks that verify their equivalence at desk scale.
//!
//! Everything is deterministic: randomized checks take explicit seeds and all
//! sweeps follow a fixed path convention.

pub mod connection;
pub mod error;
pub mod frame;
pub mod grid;
pub mod quat;
pub mod rk;
pub mod surface;
pub mod tol;
pub mod transform;

pub use connection::{ConnectionFamily, ParallelSection};
pub use error::{Error, Result};
pub use frame::{ExtendedFrame, FrameDerivative, FrameProblem};
pub use grid::{ddx, ddy, Field, Grid, OneForm};
pub use quat::{e_minus, e_plus, inner_r3, line_to_sphere, pauli, Col2, Mat2, Quaternion, C64};
pub use surface::{
    harmonic_residual, hopf_fields, mean_curvature, type_split_dn, vacuum_cylinder, SurfaceData,
    VacuumData,
};
pub use transform::{
    darboux_left_normal, dressed_cmc_surface, dressed_holomorphy_check, equivalence_check, gamma,
    gamma_inf, gamma_zero, mu_darboux_normal, mu_darboux_surface, mu_darboux_t, mu_params,
    orientation_report, riccati_residual, simple_factor_dress, DarbouxResult, DressingResult,
    HolomorphyCheck, LeftNormalTransform, MuParams, OrientationReport,
};
