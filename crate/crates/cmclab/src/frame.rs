//! Extended frames of a CMC surface, the Sym-Bobenko reconstruction and the
//! associated family.
//!
//! The frame of a conformal CMC immersion with metric e^u and Hopf
//! coefficient Q solves
//!
//! ```text
//! F^-1 F_z    = [ -u_z/4             Q e^{-u/2} ]
//!               [ -lambda/2 e^{u/2}      u_z/4  ]
//! F^-1 F_zbar = [ u_zbar/4           e^{u/2}/(2 lambda) ]
//!               [ -conj(Q) e^{-u/2}     -u_zbar/4       ]
//! ```
//!
//! with F = id at the base point.  The surface is recovered from the
//! t-derivative of the frame along lambda = e^{it}, and the gauge
//! S_lambda = F_lambda F^-1 identifies the frame with the flat family
//! d_lambda through S^-1 dS = alpha_lambda.

use crate::connection::{ConnectionFamily, ParallelSection};
use crate::error::{Error, Result};
use crate::grid::{ddx, ddy, differential, Field, Grid};
use crate::quat::{c, cr, e_minus, e_plus, pauli, Col2, Mat2, Quaternion, C64};
use crate::rk;
use crate::surface::{
    frame_u_matrix, frame_v_matrix, hopf_fields, surface_from_immersion, SurfaceData, VacuumData,
};
use crate::tol;

/// Coefficient data (u, Q) for the frame equations; constant coefficients
/// are sampled exactly along edges, field coefficients linearly.
#[derive(Debug, Clone)]
pub struct FrameProblem {
    grid: Grid,
    u: Field<f64>,
    q: Field<C64>,
    uz: Field<C64>,
    constant: Option<(f64, C64)>,
    substeps: usize,
}

/// Frame field at one value of the spectral parameter, F(base) = id.
#[derive(Debug, Clone)]
pub struct ExtendedFrame {
    pub lambda: C64,
    pub f: Field<Mat2>,
}

/// d/dt F_{e^{it}} at t = s, integrated jointly with the frame.
#[derive(Debug, Clone)]
pub struct FrameDerivative {
    pub s: f64,
    pub g: Field<Mat2>,
}

/// Sym-Bobenko output with the bookkeeping residuals of the quaternion
/// projection and of the constant-real-part normalization.
#[derive(Debug, Clone)]
pub struct SymBobenko {
    pub surface: SurfaceData,
    /// Max deviation of Re(2 G F^-1) from its grid mean.
    pub re_part_dev: f64,
    /// Max deviation of 2 G F^-1 from quaternionic form.
    pub quat_form_dev: f64,
}

impl ExtendedFrame {
    pub fn grid(&self) -> Grid {
        self.f.grid()
    }

    pub fn min_det(&self) -> f64 {
        self.f
            .values()
            .fold(f64::INFINITY, |m, v| m.min(v.det().norm()))
    }

    /// Gauss map -i F sigma_3 F^-1 (meaningful for the lambda = 1 frame).
    pub fn normal_field(&self) -> Result<Field<Quaternion>> {
        let mut worst = 0.0_f64;
        let mut out = Field::constant(self.grid(), Quaternion::i());
        for (i, j) in self.grid().indices() {
            let f = self.f.at(i, j);
            let fi = f.inverse()?;
            let (q, dev) = (f * pauli(3) * fi).scale(c(0.0, -1.0)).project_quat();
            worst = worst.max(dev);
            let q = q.imag_part();
            out.set(i, j, q * (1.0 / q.norm()));
        }
        if worst > 1e-6 {
            return Err(Error::SingularFrame(worst));
        }
        Ok(out)
    }
}

impl FrameProblem {
    /// Frame coefficients from sampled fields; u_z is formed by finite
    /// differences.
    pub fn from_fields(u: &Field<f64>, q: &Field<C64>) -> Result<Self> {
        if u.grid() != q.grid() {
            return Err(Error::GridMismatch);
        }
        let (ux, uy) = (ddx(u), ddy(u));
        let uz = Field::from_fn(u.grid(), |i, j| c(ux.at(i, j), -uy.at(i, j)) * 0.5);
        Ok(Self {
            grid: u.grid(),
            u: u.clone(),
            q: q.clone(),
            uz,
            constant: None,
            substeps: tol::DEFAULT_SUBSTEPS,
        })
    }

    /// Constant coefficients; edge samples are exact.
    pub fn constant(grid: Grid, u0: f64, q0: C64) -> Self {
        Self {
            grid,
            u: Field::constant(grid, u0),
            q: Field::constant(grid, q0),
            uz: Field::constant(grid, cr(0.0)),
            constant: Some((u0, q0)),
            substeps: tol::DEFAULT_SUBSTEPS,
        }
    }

    pub fn with_substeps(mut self, substeps: usize) -> Self {
        self.substeps = substeps.max(1);
        self
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    fn coeffs_at(&self, i: usize, j: usize) -> (f64, C64, C64) {
        (self.u.at(i, j), self.uz.at(i, j), self.q.at(i, j))
    }

    fn coeffs_on_edge(&self, lo: (usize, usize), hi: (usize, usize), t: f64) -> (f64, C64, C64) {
        if let Some((u0, q0)) = self.constant {
            return (u0, cr(0.0), q0);
        }
        let a = self.coeffs_at(lo.0, lo.1);
        let b = self.coeffs_at(hi.0, hi.1);
        (
            a.0 * (1.0 - t) + b.0 * t,
            a.1 * (1.0 - t) + b.1 * t,
            a.2 * (1.0 - t) + b.2 * t,
        )
    }

    /// Right-hand side of the frame equation along a grid direction:
    /// F_x = F (U + V), F_y = i F (U - V).
    fn b_matrix(lambda: C64, coeffs: (f64, C64, C64), horizontal: bool) -> Mat2 {
        let (u, uz, q) = coeffs;
        let um = frame_u_matrix(lambda, u, uz, q);
        let vm = frame_v_matrix(lambda, u, uz, q);
        if horizontal {
            um + vm
        } else {
            (um - vm).scale(c(0.0, 1.0))
        }
    }

    /// t-derivative of the right-hand side at lambda = e^{it}, via
    /// dU/dt = i lambda dU/dlambda with dU/dlambda = -e^{u/2}/2 e_- and
    /// dV/dlambda = -lambda^-2 e^{u/2}/2 e_+.
    fn db_matrix(lambda: C64, coeffs: (f64, C64, C64), horizontal: bool) -> Mat2 {
        let (u, _, _) = coeffs;
        let eu = (0.5 * u).exp();
        let du = e_minus().scale(c(0.0, -0.5 * eu) * lambda);
        let dv = e_plus().scale(c(0.0, -0.5 * eu) / lambda);
        if horizontal {
            du + dv
        } else {
            (du - dv).scale(c(0.0, 1.0))
        }
    }

    fn edge_step(
        &self,
        lambda: C64,
        e: rk::SweepEdge,
        f: Mat2,
        g: Option<Mat2>,
    ) -> (Mat2, Option<Mat2>) {
        let horizontal = e.from.1 == e.to.1;
        let positive = if horizontal {
            e.to.0 > e.from.0
        } else {
            e.to.1 > e.from.1
        };
        let h = if horizontal {
            self.grid.hx()
        } else {
            self.grid.hy()
        };
        let h = if positive { h } else { -h };
        let (lo, hi) = if positive { (e.from, e.to) } else { (e.to, e.from) };
        let sample = |t: f64| {
            let tt = if positive { t } else { 1.0 - t };
            self.coeffs_on_edge(lo, hi, tt)
        };
        match g {
            None => (
                rk::edge_right(f, h, self.substeps, |t| {
                    Self::b_matrix(lambda, sample(t), horizontal)
                }),
                None,
            ),
            Some(g) => {
                let (fo, go) = rk::edge_right_pair(f, g, h, self.substeps, |t| {
                    let cfs = sample(t);
                    (
                        Self::b_matrix(lambda, cfs, horizontal),
                        Self::db_matrix(lambda, cfs, horizontal),
                    )
                });
                (fo, Some(go))
            }
        }
    }

    /// Integrates the extended frame at the given spectral parameter along
    /// the base-row-then-columns sweep.
    pub fn integrate(&self, lambda: C64) -> Result<ExtendedFrame> {
        if lambda.norm() < tol::ZERO_VECTOR {
            return Err(Error::LambdaZero);
        }
        let mut f = Field::constant(self.grid, Mat2::identity());
        for e in rk::sweep_edges(self.grid.nx, self.grid.ny, self.grid.i0, self.grid.j0) {
            let (next, _) = self.edge_step(lambda, e, f.at(e.from.0, e.from.1), None);
            f.set(e.to.0, e.to.1, next);
        }
        let frame = ExtendedFrame { lambda, f };
        let det = frame.min_det();
        if det < tol::SINGULAR_GUARD {
            return Err(Error::SingularFrame(det));
        }
        Ok(frame)
    }

    /// Integrates the frame at lambda = e^{is} jointly with its t-derivative
    /// d/dt F_{e^{it}} |_{t=s} (the variational equation of the sweep).
    pub fn integrate_with_derivative(&self, s: f64) -> Result<(ExtendedFrame, FrameDerivative)> {
        let lambda = c(s.cos(), s.sin());
        let mut f = Field::constant(self.grid, Mat2::identity());
        let mut g = Field::constant(self.grid, Mat2::zero());
        for e in rk::sweep_edges(self.grid.nx, self.grid.ny, self.grid.i0, self.grid.j0) {
            let (nf, ng) = self.edge_step(
                lambda,
                e,
                f.at(e.from.0, e.from.1),
                Some(g.at(e.from.0, e.from.1)),
            );
            f.set(e.to.0, e.to.1, nf);
            g.set(e.to.0, e.to.1, ng.expect("paired integration returns G"));
        }
        Ok((ExtendedFrame { lambda, f }, FrameDerivative { s, g }))
    }
}

impl VacuumData {
    pub fn frame_problem(&self) -> FrameProblem {
        FrameProblem::constant(self.grid, self.u0, self.q0)
    }
}

/// Max interior deviation of S^-1 dS from alpha_lambda, where
/// S = F_lambda F^-1.
pub fn frame_to_connection(
    frame_l: &ExtendedFrame,
    frame_1: &ExtendedFrame,
    family: &ConnectionFamily,
) -> Result<f64> {
    if frame_l.grid() != frame_1.grid() || frame_l.grid() != family.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = frame_l.grid();
    let mut s_field = Field::constant(grid, Mat2::identity());
    for (i, j) in grid.indices() {
        let f1i = frame_1.f.at(i, j).inverse()?;
        s_field.set(i, j, frame_l.f.at(i, j) * f1i);
    }
    let (sx, sy) = (ddx(&s_field), ddy(&s_field));
    let alpha = family.connection_form(frame_l.lambda)?;
    let mut worst = 0.0_f64;
    for (i, j) in grid.interior_margin(2) {
        let si = s_field.at(i, j).inverse()?;
        let rx = si * sx.at(i, j) - alpha.x.at(i, j);
        let ry = si * sy.at(i, j) - alpha.y.at(i, j);
        worst = worst.max(rx.norm()).max(ry.norm());
    }
    Ok(worst)
}

/// The section phi = F F_mu^-1 v, parallel for d_mu.
pub fn parallel_section_via_frame(
    frame_1: &ExtendedFrame,
    frame_mu: &ExtendedFrame,
    v: Col2,
) -> Result<ParallelSection> {
    if frame_1.grid() != frame_mu.grid() {
        return Err(Error::GridMismatch);
    }
    if v.norm() < tol::ZERO_VECTOR {
        return Err(Error::ZeroVector(v.norm()));
    }
    let grid = frame_1.grid();
    let mut phi = Field::constant(grid, Col2::e1());
    for (i, j) in grid.indices() {
        let fmi = frame_mu.f.at(i, j).inverse()?;
        phi.set(i, j, (frame_1.f.at(i, j) * fmi).mul_col(&v));
    }
    Ok(ParallelSection {
        mu: frame_mu.lambda,
        phi,
        base_value: v,
    })
}

/// CMC surface from the frame form of the Sym-Bobenko formula,
/// f = 2 (d/dt F_{e^{it}} |_{t=0}) F^-1, with the constant real part removed.
pub fn sym_bobenko(problem: &FrameProblem) -> Result<SymBobenko> {
    let (frame, deriv) = problem.integrate_with_derivative(0.0)?;
    let grid = problem.grid();
    let mut quat_dev = 0.0_f64;
    let mut raw = Field::constant(grid, Quaternion::zero());
    for (i, j) in grid.indices() {
        let fi = frame.f.at(i, j).inverse()?;
        let (q, dev) = (deriv.g.at(i, j) * fi).scale(cr(2.0)).project_quat();
        quat_dev = quat_dev.max(dev);
        raw.set(i, j, q);
    }
    let re_mean = raw.map(|q| q.re()).mean();
    let re_dev = raw
        .values()
        .fold(0.0_f64, |m, q| m.max((q.re() - re_mean).abs()));
    let f = raw.map(|q| q.imag_part());
    let n = frame.normal_field()?;
    let df = differential(&f);
    let mut min_df = f64::INFINITY;
    for (i, j) in grid.indices() {
        min_df = min_df.min((df.x.at(i, j).norm_sqr() + df.y.at(i, j).norm_sqr()).sqrt());
    }
    if min_df < tol::DEGENERATE_DF {
        return Err(Error::BranchPoint(min_df));
    }
    Ok(SymBobenko {
        surface: surface_from_immersion(f, n),
        re_part_dev: re_dev,
        quat_form_dev: quat_dev,
    })
}

/// Harmonic companion N_phi = phi^-1 N phi, defined for |mu| = 1.
pub fn associated_normal(
    n: &Field<Quaternion>,
    phi: &ParallelSection,
) -> Result<Field<Quaternion>> {
    if (phi.mu.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::NotUnitCircle(phi.mu.norm()));
    }
    if n.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = Field::constant(n.grid(), Quaternion::i());
    for (i, j) in n.grid().indices() {
        let p = phi.phi.at(i, j).to_quat();
        let v = (p.inverse()? * n.at(i, j) * p).imag_part();
        out.set(i, j, v * (1.0 / v.norm()));
    }
    Ok(out)
}

/// CMC surface of the associated family at mu = e^{is}:
/// f_phi = -2 phi^-1 (d/dt phi_{e^{it}} |_{t=s}) for the frame-generated
/// sections phi_lambda = F F_lambda^-1 v, which collapses to
/// f_phi = 2 v^-1 (G F_mu^-1) v.
pub fn associated_surface(problem: &FrameProblem, s: f64, v: Col2) -> Result<SurfaceData> {
    if v.norm() < tol::ZERO_VECTOR {
        return Err(Error::ZeroVector(v.norm()));
    }
    let grid = problem.grid();
    let (frame, deriv) = problem.integrate_with_derivative(s)?;
    let vq = v.to_quat();
    let vqi = vq.inverse()?;
    let mut f = Field::constant(grid, Quaternion::zero());
    let mut n = Field::constant(grid, Quaternion::i());
    for (i, j) in grid.indices() {
        let fmi = frame.f.at(i, j).inverse()?;
        let (raw, _) = (deriv.g.at(i, j) * fmi).scale(cr(2.0)).project_quat();
        f.set(i, j, (vqi * raw * vq).imag_part());
        let (nq, _) = (frame.f.at(i, j) * pauli(3) * fmi)
            .scale(c(0.0, -1.0))
            .project_quat();
        let nv = (vqi * nq * vq).imag_part();
        n.set(i, j, nv * (1.0 / nv.norm()));
    }
    Ok(surface_from_immersion(f, n))
}

/// Max interior residual of the gauge identity Phi . d_{phi,lambda} = d_{lambda mu}:
/// compares Phi alpha_{phi,lambda} Phi^-1 - (d Phi) Phi^-1 against
/// alpha_{lambda mu}, where alpha_{phi,lambda} is the family of the
/// conjugated normal phi^-1 N phi.
pub fn associated_gauge_residual(
    family: &ConnectionFamily,
    n: &Field<Quaternion>,
    phi: &ParallelSection,
    lambda: C64,
) -> Result<f64> {
    let n_phi = associated_normal(n, phi)?;
    let (a_phi, _) = hopf_fields(&n_phi);
    let fam_phi = ConnectionFamily::from_hopf(&a_phi)?;
    let alpha_phi = fam_phi.connection_form(lambda)?;
    let alpha_lm = family.connection_form(lambda * phi.mu)?;
    let grid = family.grid();
    let big_phi = phi.phi.map(|w| w.to_quat().to_matrix());
    let (px, py) = (ddx(&big_phi), ddy(&big_phi));
    let mut worst = 0.0_f64;
    for (i, j) in grid.interior_margin(2) {
        let p = big_phi.at(i, j);
        let pi = p.inverse()?;
        let rx = p * alpha_phi.x.at(i, j) * pi - px.at(i, j) * pi - alpha_lm.x.at(i, j);
        let ry = p * alpha_phi.y.at(i, j) * pi - py.at(i, j) * pi - alpha_lm.y.at(i, j);
        worst = worst.max(rx.norm()).max(ry.norm());
    }
    Ok(worst)
}

/// Compatibility residual |(F B_x)_y - (F B_y)_x| of the frame equations;
/// O(h^2) exactly when the Gauss-Codazzi data is integrable.
pub fn mixed_partial_residual(problem: &FrameProblem, frame: &ExtendedFrame) -> Result<f64> {
    let grid = problem.grid();
    let fx = Field::from_fn(grid, |i, j| {
        frame.f.at(i, j) * FrameProblem::b_matrix(frame.lambda, problem.coeffs_at(i, j), true)
    });
    let fy = Field::from_fn(grid, |i, j| {
        frame.f.at(i, j) * FrameProblem::b_matrix(frame.lambda, problem.coeffs_at(i, j), false)
    });
    let a = ddy(&fx);
    let b = ddx(&fy);
    let mut worst = 0.0_f64;
    for (i, j) in grid.interior_margin(2) {
        worst = worst.max((a.at(i, j) - b.at(i, j)).norm());
    }
    Ok(worst)
}

/// Mean of a quaternion field.
pub fn mean_quaternion(f: &Field<Quaternion>) -> Quaternion {
    let mut acc = Quaternion::zero();
    let mut count = 0usize;
    for q in f.values() {
        acc = acc + *q;
        count += 1;
    }
    acc * (1.0 / count as f64)
}
