//! The C*-family of flat connections d_lambda = d + alpha_lambda built from
//! the Hopf field of a harmonic map, with parallel transport, parallel
//! sections, curvature and reality diagnostics.
//!
//! The connection form is
//!
//! ```text
//! alpha_lambda = (lambda - 1) A^(1,0) + (lambda^-1 - 1) A^(0,1)
//! ```
//!
//! where the type split is taken with respect to I (scalar multiplication by
//! i on columns).  A form of type (1,0) satisfies w(dy) = i w(dx), so the
//! family is fully determined by the two matrix fields A^(1,0)(dx) and
//! A^(0,1)(dx).

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{ddx, ddy, Field, Grid, OneForm};
use crate::quat::{c, cr, Col2, Mat2, Quaternion, C64};
use crate::rk;
use crate::surface::VacuumData;
use crate::tol;

type Sampler = Arc<dyn Fn(f64, f64) -> (Mat2, Mat2) + Send + Sync>;

/// Family of flat connections, stored through A^(1,0)(dx) and A^(0,1)(dx).
#[derive(Clone)]
pub struct ConnectionFamily {
    grid: Grid,
    a10x: Field<Mat2>,
    a01x: Field<Mat2>,
    /// Exact point evaluation (x, y) -> (A10(dx), A01(dx)) when the family
    /// comes from closed-form data; grid families interpolate along edges.
    sampler: Option<Sampler>,
    substeps: usize,
}

impl std::fmt::Debug for ConnectionFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionFamily")
            .field("grid", &self.grid)
            .field("analytic", &self.sampler.is_some())
            .field("substeps", &self.substeps)
            .finish()
    }
}

/// A nonvanishing d_mu-parallel section with its base value.
#[derive(Debug, Clone)]
pub struct ParallelSection {
    pub mu: C64,
    pub phi: Field<Col2>,
    pub base_value: Col2,
}

impl ParallelSection {
    pub fn grid(&self) -> Grid {
        self.phi.grid()
    }

    pub fn phi_quat(&self) -> Field<Quaternion> {
        self.phi.map(|w| w.to_quat())
    }

    pub fn min_norm(&self) -> f64 {
        self.phi
            .values()
            .fold(f64::INFINITY, |m, w| m.min(w.norm()))
    }
}

fn check_lambda(lambda: C64) -> Result<()> {
    if lambda.norm() < tol::ZERO_VECTOR {
        return Err(Error::LambdaZero);
    }
    Ok(())
}

impl ConnectionFamily {
    /// Splits a Hopf-field 1-form into its (1,0) and (0,1) parts.
    ///
    /// The input must be quaternionic-linear (matrix values of quaternionic
    /// form); this is the executable shape of the requirement that A
    /// anti-commutes with the complex structure of a harmonic map.
    pub fn from_hopf(a: &OneForm<Mat2>) -> Result<Self> {
        let grid = a.grid();
        let mut dev = 0.0_f64;
        for v in a.x.values().chain(a.y.values()) {
            dev = dev.max(v.quat_form_deviation() / (1.0 + v.norm()));
        }
        if dev > tol::QUAT_FORM {
            return Err(Error::TypeViolation(dev));
        }
        let i = c(0.0, 1.0);
        let a10x = a
            .x
            .zip_with(&a.y, |ax, ay| (ax - ay.scale(i)).scale(cr(0.5)))?;
        let a01x = a
            .x
            .zip_with(&a.y, |ax, ay| (ax + ay.scale(i)).scale(cr(0.5)))?;
        Ok(Self {
            grid,
            a10x,
            a01x,
            sampler: None,
            substeps: tol::DEFAULT_SUBSTEPS,
        })
    }

    /// Family from already split parts (used by tests and gauges).
    pub fn from_split_parts(a10x: Field<Mat2>, a01x: Field<Mat2>) -> Result<Self> {
        if a10x.grid() != a01x.grid() {
            return Err(Error::GridMismatch);
        }
        Ok(Self {
            grid: a10x.grid(),
            a10x,
            a01x,
            sampler: None,
            substeps: tol::DEFAULT_SUBSTEPS,
        })
    }

    /// Family with exact point evaluation.
    pub fn analytic(grid: Grid, sampler: impl Fn(f64, f64) -> (Mat2, Mat2) + Send + Sync + 'static) -> Self {
        let s: Sampler = Arc::new(sampler);
        let a10x = Field::from_fn(grid, |i, j| s(grid.x(i), grid.y(j)).0);
        let a01x = Field::from_fn(grid, |i, j| s(grid.x(i), grid.y(j)).1);
        Self {
            grid,
            a10x,
            a01x,
            sampler: Some(s),
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

    pub fn substeps(&self) -> usize {
        self.substeps
    }

    pub fn a10x(&self) -> &Field<Mat2> {
        &self.a10x
    }

    pub fn a01x(&self) -> &Field<Mat2> {
        &self.a01x
    }

    /// A^(1,0) as a 1-form, using w(dy) = i w(dx).
    pub fn a10(&self) -> OneForm<Mat2> {
        OneForm {
            x: self.a10x.clone(),
            y: self.a10x.map(|m| m.scale(c(0.0, 1.0))),
        }
    }

    /// A^(0,1) as a 1-form, using w(dy) = -i w(dx).
    pub fn a01(&self) -> OneForm<Mat2> {
        OneForm {
            x: self.a01x.clone(),
            y: self.a01x.map(|m| m.scale(c(0.0, -1.0))),
        }
    }

    fn pair_on_x_edge(&self, i: usize, j: usize, t: f64) -> (Mat2, Mat2) {
        match &self.sampler {
            Some(s) => s(self.grid.x(i) + t * self.grid.hx(), self.grid.y(j)),
            None => {
                let a = (self.a10x.at(i, j), self.a01x.at(i, j));
                let b = (self.a10x.at(i + 1, j), self.a01x.at(i + 1, j));
                (
                    a.0.scale(cr(1.0 - t)) + b.0.scale(cr(t)),
                    a.1.scale(cr(1.0 - t)) + b.1.scale(cr(t)),
                )
            }
        }
    }

    fn pair_on_y_edge(&self, i: usize, j: usize, t: f64) -> (Mat2, Mat2) {
        match &self.sampler {
            Some(s) => s(self.grid.x(i), self.grid.y(j) + t * self.grid.hy()),
            None => {
                let a = (self.a10x.at(i, j), self.a01x.at(i, j));
                let b = (self.a10x.at(i, j + 1), self.a01x.at(i, j + 1));
                (
                    a.0.scale(cr(1.0 - t)) + b.0.scale(cr(t)),
                    a.1.scale(cr(1.0 - t)) + b.1.scale(cr(t)),
                )
            }
        }
    }

    fn alpha_x_of(pair: (Mat2, Mat2), lambda: C64) -> Mat2 {
        pair.0.scale(lambda - 1.0) + pair.1.scale(1.0 / lambda - 1.0)
    }

    fn alpha_y_of(pair: (Mat2, Mat2), lambda: C64) -> Mat2 {
        let i = c(0.0, 1.0);
        pair.0.scale(i * (lambda - 1.0)) - pair.1.scale(i * (1.0 / lambda - 1.0))
    }

    /// Connection form alpha_lambda on the grid points.
    pub fn connection_form(&self, lambda: C64) -> Result<OneForm<Mat2>> {
        check_lambda(lambda)?;
        let x = self
            .a10x
            .zip_with(&self.a01x, |a, b| Self::alpha_x_of((a, b), lambda))?;
        let y = self
            .a10x
            .zip_with(&self.a01x, |a, b| Self::alpha_y_of((a, b), lambda))?;
        Ok(OneForm { x, y })
    }

    /// Hopf field of the complex structure with respect to d_mu:
    /// A_mu = mu A^(1,0) + mu^-1 A^(0,1).
    pub fn hopf_field_mu(&self, mu: C64) -> Result<OneForm<Mat2>> {
        check_lambda(mu)?;
        let i = c(0.0, 1.0);
        let x = self
            .a10x
            .zip_with(&self.a01x, |a, b| a.scale(mu) + b.scale(1.0 / mu))?;
        let y = self
            .a10x
            .zip_with(&self.a01x, |a, b| a.scale(i * mu) - b.scale(i / mu))?;
        Ok(OneForm { x, y })
    }

    /// Pointwise norm of d_mu * A_mu, the covariant coclosedness defect of
    /// the associated Hopf field.
    pub fn coclosed_residual(&self, mu: C64) -> Result<Field<f64>> {
        let a_mu = self.hopf_field_mu(mu)?;
        let alpha = self.connection_form(mu)?;
        let sx = a_mu.y.clone(); // (*A_mu)(dx) = A_mu(dy)
        let sy = a_mu.x.map(|m| -m); // (*A_mu)(dy) = -A_mu(dx)
        let d1 = ddx(&sy);
        let d2 = ddy(&sx);
        Ok(Field::from_fn(self.grid, |i, j| {
            let comm = alpha.x.at(i, j).commutator(&sy.at(i, j))
                - alpha.y.at(i, j).commutator(&sx.at(i, j));
            (d1.at(i, j) - d2.at(i, j) + comm).norm()
        }))
    }

    /// Per-plaquette holonomy deviation |P - id| / (hx hy), with P the
    /// ordered product of the four edge transports exp(-alpha(edge)).
    /// Entry (i, j) belongs to the cell with lower-left corner (i, j); the
    /// last row and column are zero.
    pub fn curvature_residual(&self, lambda: C64) -> Result<Field<f64>> {
        check_lambda(lambda)?;
        let hx = self.grid.hx();
        let hy = self.grid.hy();
        let area = hx * hy;
        Ok(Field::from_fn(self.grid, |i, j| {
            if i + 1 >= self.grid.nx || j + 1 >= self.grid.ny {
                return 0.0;
            }
            let e1 = Self::alpha_x_of(self.pair_on_x_edge(i, j, 0.5), lambda)
                .scale(cr(-hx))
                .expm();
            let e2 = Self::alpha_y_of(self.pair_on_y_edge(i + 1, j, 0.5), lambda)
                .scale(cr(-hy))
                .expm();
            let e3 = Self::alpha_x_of(self.pair_on_x_edge(i, j + 1, 0.5), lambda)
                .scale(cr(hx))
                .expm();
            let e4 = Self::alpha_y_of(self.pair_on_y_edge(i, j, 0.5), lambda)
                .scale(cr(hy))
                .expm();
            let p = e4 * e3 * e2 * e1;
            (p - Mat2::identity()).norm() / area
        }))
    }

    /// Max over random sections phi of |d_lambda(phi j) - (d_{conj(lambda)^-1} phi) j|.
    ///
    /// The identity is algebraic, so the result is at round-off for any
    /// family built from quaternionic Hopf fields.
    pub fn reality_residual(&self, lambda: C64, samples: usize, seed: u64) -> Result<f64> {
        check_lambda(lambda)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lam_dual = 1.0 / lambda.conj();
        let mut worst = 0.0_f64;
        for _ in 0..samples.max(1) {
            let phi = Field::from_fn(self.grid, |_, _| {
                Col2::new(
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                )
            });
            let phi_j = phi.map(|w| w.j_conj());
            let (dxp, dyp) = (ddx(&phi), ddy(&phi));
            let (dxj, dyj) = (ddx(&phi_j), ddy(&phi_j));
            for (i, j) in self.grid.indices() {
                let pair = (self.a10x.at(i, j), self.a01x.at(i, j));
                let ax = Self::alpha_x_of(pair, lambda);
                let ay = Self::alpha_y_of(pair, lambda);
                let bx = Self::alpha_x_of(pair, lam_dual);
                let by = Self::alpha_y_of(pair, lam_dual);
                let lhs_x = dxj.at(i, j) + ax.mul_col(&phi_j.at(i, j));
                let lhs_y = dyj.at(i, j) + ay.mul_col(&phi_j.at(i, j));
                let rhs_x = (dxp.at(i, j) + bx.mul_col(&phi.at(i, j))).j_conj();
                let rhs_y = (dyp.at(i, j) + by.mul_col(&phi.at(i, j))).j_conj();
                worst = worst.max((lhs_x - rhs_x).norm()).max((lhs_y - rhs_y).norm());
            }
        }
        Ok(worst)
    }

    /// Transport of v0 along a chain of adjacent grid points, solving
    /// d phi = -alpha_lambda phi with RK4 substeps per edge.
    pub fn parallel_transport(
        &self,
        lambda: C64,
        path: &[(usize, usize)],
        v0: Col2,
    ) -> Result<Col2> {
        check_lambda(lambda)?;
        let mut phi = v0;
        for pair in path.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            phi = self.transport_edge(lambda, a, b, phi)?;
        }
        Ok(phi)
    }

    fn transport_edge(
        &self,
        lambda: C64,
        a: (usize, usize),
        b: (usize, usize),
        v: Col2,
    ) -> Result<Col2> {
        let m = self.substeps;
        if a.0 == b.0 && a.1.abs_diff(b.1) == 1 {
            let (i, j, up) = (a.0, a.1.min(b.1), b.1 > a.1);
            let h = if up { self.grid.hy() } else { -self.grid.hy() };
            Ok(rk::edge_left(v, h, m, |t| {
                let tt = if up { t } else { 1.0 - t };
                -Self::alpha_y_of(self.pair_on_y_edge(i, j, tt), lambda)
            }))
        } else if a.1 == b.1 && a.0.abs_diff(b.0) == 1 {
            let (i, j, right) = (a.0.min(b.0), a.1, b.0 > a.0);
            let h = if right { self.grid.hx() } else { -self.grid.hx() };
            Ok(rk::edge_left(v, h, m, |t| {
                let tt = if right { t } else { 1.0 - t };
                -Self::alpha_x_of(self.pair_on_x_edge(i, j, tt), lambda)
            }))
        } else {
            Err(Error::BadPath)
        }
    }

    /// Parallel section by integration along the base row and then up and
    /// down each column; phi(base) = v.
    pub fn parallel_section(&self, mu: C64, v: Col2) -> Result<ParallelSection> {
        check_lambda(mu)?;
        if v.norm() < tol::ZERO_VECTOR {
            return Err(Error::ZeroVector(v.norm()));
        }
        let mut phi = Field::constant(self.grid, Col2::new(cr(0.0), cr(0.0)));
        phi.set(self.grid.i0, self.grid.j0, v);
        for e in rk::sweep_edges(self.grid.nx, self.grid.ny, self.grid.i0, self.grid.j0) {
            let start = phi.at(e.from.0, e.from.1);
            let next = self.transport_edge(mu, e.from, e.to, start)?;
            phi.set(e.to.0, e.to.1, next);
        }
        let section = ParallelSection {
            mu,
            phi,
            base_value: v,
        };
        let min = section.min_norm();
        if min < tol::ZERO_VECTOR {
            return Err(Error::ZeroSection(min));
        }
        Ok(section)
    }
}

impl VacuumData {
    /// The associated family of the vacuum Gauss map with closed-form point
    /// evaluation, so transports carry only integrator error.
    pub fn connection(&self) -> ConnectionFamily {
        let vac = self.clone();
        ConnectionFamily::analytic(self.grid, move |x, y| {
            (vac.a10x_at(x, y), vac.a01x_at(x, y))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{hopf_fields, vacuum_cylinder};

    fn desk_grid() -> Grid {
        Grid::new(0.0, 2.0 * std::f64::consts::PI, -1.0, 1.0, 48, 48).unwrap()
    }

    fn fd_family(grid: Grid) -> ConnectionFamily {
        let vac = vacuum_cylinder(grid);
        let (a, _) = hopf_fields(&vac.surface.n);
        ConnectionFamily::from_hopf(&a).unwrap()
    }

    #[test]
    fn from_hopf_splits_and_zero_maps_to_zero() {
        let g = desk_grid();
        let zero = OneForm {
            x: Field::constant(g, Mat2::zero()),
            y: Field::constant(g, Mat2::zero()),
        };
        let fam = ConnectionFamily::from_hopf(&zero).unwrap();
        for (i, j) in g.indices() {
            assert!(fam.a10x.at(i, j).norm() < 1e-15);
            assert!(fam.a01x.at(i, j).norm() < 1e-15);
        }
        let fam = fd_family(g);
        let (a, _) = hopf_fields(&vacuum_cylinder(g).surface.n);
        for (i, j) in g.indices() {
            let sum = fam.a10x.at(i, j) + fam.a01x.at(i, j);
            assert!((sum - a.x.at(i, j)).norm() < 1e-13);
        }
    }

    #[test]
    fn from_hopf_rejects_non_quaternionic_input() {
        let g = desk_grid();
        let bad = OneForm {
            x: Field::constant(g, crate::quat::e_plus()),
            y: Field::constant(g, Mat2::zero()),
        };
        assert!(matches!(
            ConnectionFamily::from_hopf(&bad),
            Err(Error::TypeViolation(_))
        ));
    }

    #[test]
    fn split_parts_are_nilpotent_on_interior() {
        let g = desk_grid();
        let fam = fd_family(g);
        for (i, j) in g.interior() {
            let a10 = fam.a10x.at(i, j);
            let a01 = fam.a01x.at(i, j);
            assert!((a10 * a10).norm() < 1e-12, "at ({i},{j})");
            assert!((a01 * a01).norm() < 1e-12);
        }
    }

    #[test]
    fn reality_identity_on_split_parts() {
        let g = desk_grid();
        let fam = fd_family(g);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let i = rng.gen_range(0..g.nx);
            let j = rng.gen_range(0..g.ny);
            let phi = Col2::new(
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
            let lhs = fam.a10x.at(i, j).mul_col(&phi.j_conj());
            let rhs = fam.a01x.at(i, j).mul_col(&phi).j_conj();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn connection_form_limits() {
        let g = desk_grid();
        let fam = fd_family(g);
        let alpha1 = fam.connection_form(cr(1.0)).unwrap();
        for (i, j) in g.indices() {
            assert!(alpha1.x.at(i, j).norm() < 1e-15);
            assert!(alpha1.y.at(i, j).norm() < 1e-15);
        }
        // lambda = -1 gives -2 A
        let alpham = fam.connection_form(cr(-1.0)).unwrap();
        let (a, _) = hopf_fields(&vacuum_cylinder(g).surface.n);
        for (i, j) in g.indices() {
            assert!((alpham.x.at(i, j) + a.x.at(i, j) * 2.0).norm() < 1e-12);
            assert!((alpham.y.at(i, j) + a.y.at(i, j) * 2.0).norm() < 1e-12);
        }
        assert!(matches!(
            fam.connection_form(cr(0.0)),
            Err(Error::LambdaZero)
        ));
        // on the unit circle the form is quaternionic
        let alpha_i = fam.connection_form(c(0.0, 1.0)).unwrap();
        for (i, j) in g.indices() {
            assert!(alpha_i.x.at(i, j).quat_form_deviation() < 1e-12);
            assert!(alpha_i.y.at(i, j).quat_form_deviation() < 1e-12);
        }
    }

    #[test]
    fn type_structure_of_alpha() {
        // alpha(dy) = i (lambda-1) A10(dx) - i (lambda^-1 - 1) A01(dx): check
        // the star split *alpha = i alpha10 - i alpha01 holds exactly.
        let g = desk_grid();
        let fam = fd_family(g);
        let lam = c(0.7, 0.4);
        let alpha = fam.connection_form(lam).unwrap();
        for (i, j) in g.indices() {
            let a10 = fam.a10x.at(i, j).scale(lam - 1.0);
            let a01 = fam.a01x.at(i, j).scale(1.0 / lam - 1.0);
            let expect = a10.scale(c(0.0, 1.0)) - a01.scale(c(0.0, 1.0));
            assert!((alpha.y.at(i, j) - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn curvature_small_on_vacuum_and_zero_at_one() {
        let g = desk_grid();
        let fam = fd_family(g);
        let r1 = fam.curvature_residual(cr(1.0)).unwrap();
        assert!(r1.max_abs() < 1e-14);
        let r2 = fam.curvature_residual(cr(2.0)).unwrap();
        let tol = 50.0 * g.h_max() * g.h_max();
        assert!(r2.max_abs_interior() < tol, "{} vs {tol}", r2.max_abs_interior());
    }

    #[test]
    fn curvature_control_does_not_vanish() {
        let make = |g: Grid| {
            let n = vacuum_cylinder(g).surface.n.map_indexed(|i, _, q| {
                let v = q + Quaternion::j() * (0.1 * g.x(i).sin());
                v * (1.0 / v.norm())
            });
            let (a, _) = hopf_fields(&n);
            ConnectionFamily::from_hopf(&a).unwrap()
        };
        let coarse = desk_grid();
        let fine = Grid::new(0.0, 2.0 * std::f64::consts::PI, -1.0, 1.0, 95, 95).unwrap();
        let rc = make(coarse).curvature_residual(cr(2.0)).unwrap().max_abs_interior_margin(2);
        let rf = make(fine).curvature_residual(cr(2.0)).unwrap().max_abs_interior_margin(2);
        assert!(rc > 1e-3 && rf > 1e-3, "rc {rc}, rf {rf}");
        assert!(rf > 0.5 * rc, "control should not converge: {rc} -> {rf}");
    }

    #[test]
    fn reality_residual_machine_zero_and_control() {
        let g = desk_grid();
        let fam = fd_family(g);
        assert!(fam.reality_residual(cr(2.0), 3, 0).unwrap() < 1e-12);
        assert!(fam.reality_residual(c(0.0, 1.0), 3, 0).unwrap() < 1e-12);
        // corrupted A10 breaks the identity
        let mut bad10 = fam.a10x.clone();
        let bump = crate::quat::e_plus().scale(cr(0.5));
        for (i, j) in g.indices() {
            bad10.set(i, j, bad10.at(i, j) + bump);
        }
        let bad = ConnectionFamily::from_split_parts(bad10, fam.a01x.clone()).unwrap();
        assert!(bad.reality_residual(cr(2.0), 3, 0).unwrap() > 0.1);
    }

    #[test]
    fn transport_identity_at_lambda_one() {
        let g = desk_grid();
        let fam = fd_family(g);
        let v = Col2::new(cr(1.0), c(0.2, -0.3));
        let path = vec![(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2)];
        let out = fam.parallel_transport(cr(1.0), &path, v).unwrap();
        assert!((out - v).norm() < 1e-15);
        assert!(matches!(
            fam.parallel_transport(cr(2.0), &[(0, 0), (2, 0)], v),
            Err(Error::BadPath)
        ));
    }

    #[test]
    fn plaquette_transport_on_analytic_vacuum() {
        let g = desk_grid();
        let vac = vacuum_cylinder(g);
        let fam = vac.connection();
        let v = Col2::new(cr(1.0), cr(0.5));
        let (i, j) = (10, 10);
        let path = vec![(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1), (i, j)];
        let out = fam.parallel_transport(cr(2.0), &path, v).unwrap();
        let h2 = g.h_max() * g.h_max();
        let bound = 100.0 * h2 * h2 * (g.hx() * g.hy());
        assert!((out - v).norm() < bound, "{} vs {bound}", (out - v).norm());
    }

    #[test]
    fn path_independence_on_analytic_vacuum() {
        let g = desk_grid();
        let fam = vacuum_cylinder(g).connection();
        let v = Col2::new(cr(0.8), c(-0.1, 0.6));
        // two L-shaped paths across the full grid
        let mut p1 = Vec::new();
        for i in 0..g.nx {
            p1.push((i, 0));
        }
        for j in 1..g.ny {
            p1.push((g.nx - 1, j));
        }
        let mut p2 = Vec::new();
        for j in 0..g.ny {
            p2.push((0, j));
        }
        for i in 1..g.nx {
            p2.push((i, g.ny - 1));
        }
        let lam = cr(2.0);
        let out1 = fam.parallel_transport(lam, &p1, v).unwrap();
        let out2 = fam.parallel_transport(lam, &p2, v).unwrap();
        assert!((out1 - out2).norm() < 1e-7, "{}", (out1 - out2).norm());
    }

    #[test]
    fn parallel_section_basics() {
        let g = desk_grid();
        let fam = vacuum_cylinder(g).connection();
        let v = Col2::e1();
        let s1 = fam.parallel_section(cr(1.0), v).unwrap();
        for (i, j) in g.indices() {
            assert!((s1.phi.at(i, j) - v).norm() < 1e-15);
        }
        for mu in [cr(2.0), c(1.0, 1.0)] {
            let s = fam.parallel_section(mu, v).unwrap();
            assert!(s.min_norm() > 0.0);
            assert!((s.phi.at(g.i0, g.j0) - v).norm() < 1e-15);
        }
        assert!(matches!(
            fam.parallel_section(cr(2.0), Col2::new(cr(0.0), cr(0.0))),
            Err(Error::ZeroVector(_))
        ));
    }

    #[test]
    fn coclosedness_of_mu_hopf_field() {
        let g = desk_grid();
        let fam = fd_family(g);
        let (a, _) = hopf_fields(&vacuum_cylinder(g).surface.n);
        // mu = 1 returns A
        let a1 = fam.hopf_field_mu(cr(1.0)).unwrap();
        let am = fam.hopf_field_mu(cr(-1.0)).unwrap();
        for (i, j) in g.indices() {
            assert!((a1.x.at(i, j) - a.x.at(i, j)).norm() < 1e-13);
            assert!((am.x.at(i, j) + a.x.at(i, j)).norm() < 1e-13);
        }
        let tol = 50.0 * g.h_max() * g.h_max();
        for mu in [cr(2.0), c(1.0, 1.0)] {
            let r = fam.coclosed_residual(mu).unwrap().max_abs_interior_margin(2);
            assert!(r < tol, "mu = {mu}: {r} vs {tol}");
        }
    }
}
