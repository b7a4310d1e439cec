//! mu-Darboux transforms of harmonic maps and CMC surfaces, simple factor
//! dressing, and the residual checks verifying that the two transformations
//! produce the same harmonic map.
//!
//! Both constructions start from a d_mu-parallel section phi.  The Darboux
//! side builds the quaternion field
//!
//! ```text
//! T = (N phi (a-1) phi^-1 + phi b phi^-1) / 2,
//! a = (mu + mu^-1)/2,  b = i (mu^-1 - mu)/2,
//! ```
//!
//! and transforms the surface by f + T^-1 and the normal by T^-1 N T.  The
//! dressing side gauges the flat family by r_lambda = pi gamma_lambda + pi_perp
//! for the line M_mu spanned by phi and reads the new normal off the
//! transported eigenline r_inf E.

use crate::connection::{ConnectionFamily, ParallelSection};
use crate::error::{Error, Result};
use crate::grid::{ddx, ddy, differential, Field};
use crate::quat::{
    c, cr, line_to_sphere, plus_i_eigenline, sphere_distance, Col2, Mat2, Quaternion, C64,
};
use crate::surface::{left_normal_residual, surface_from_immersion, type_split_dn, SurfaceData};
use crate::tol;

/// Spectral parameter with the coefficients a, b; a^2 + b^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MuParams {
    pub mu: C64,
    pub a: C64,
    pub b: C64,
}

/// mu-Darboux transform of a CMC surface together with its diagnostics.
#[derive(Debug, Clone)]
pub struct DarbouxResult {
    pub t: Field<Quaternion>,
    /// f + T^-1, quaternion-valued with constant real part.
    pub f_hat: Field<Quaternion>,
    /// Imaginary part of f_hat, the transformed surface.
    pub f_hat_im: Field<Quaternion>,
    /// Gauss map -T^-1 N T of the transformed surface.
    pub n_hat: Field<Quaternion>,
    /// Max deviation of Re(f_hat) from its mean, relative to max(1, |mean|).
    pub re_dev: f64,
    pub min_t: f64,
    pub max_re_t: f64,
}

/// Simple factor dressing data at one parallel line M_mu.
#[derive(Debug, Clone)]
pub struct DressingResult {
    pub mu: C64,
    pub r_inf: Field<Mat2>,
    pub r_zero: Field<Mat2>,
    /// omega^(1,0)(dx) = Ad(r_inf) A^(1,0)(dx) of the dressed family.
    pub omega10x: Field<Mat2>,
    /// omega^(0,1)(dx) = Ad(r_zero) A^(0,1)(dx).
    pub omega01x: Field<Mat2>,
    /// Dressed normal from the transported eigenline r_inf E.
    pub n_hat: Field<Quaternion>,
    /// Max |(omega^(1,0)(dx))^2| over the grid.
    pub nilpotency: f64,
}

/// Boundedness of the gauged connection form near lambda = mu, against the
/// divergence of the ungauged form and of a non-parallel control line.
#[derive(Debug, Clone, Copy)]
pub struct HolomorphyCheck {
    /// Gauged form at the reference point lambda = mu + 0.1.
    pub reference: f64,
    /// Max of the gauged form on the circle |lambda - mu| = 1e-2.
    pub gauged_max: f64,
    /// Ungauged Ad(r) alpha at the reference point.
    pub ungauged_far: f64,
    /// Max of the ungauged form on the circle |lambda - mu| = 1e-3.
    pub ungauged_near: f64,
    /// Max of the gauged form of a constant (non-parallel) line on the
    /// circle |lambda - mu| = 1e-3.
    pub control_near: f64,
}

/// Result of the left-normal transform f + (H T)^-1.
#[derive(Debug, Clone)]
pub enum LeftNormalTransform {
    /// df_hat vanishes uniformly.
    Constant,
    Immersion {
        f_hat: Field<Quaternion>,
        n_hat: Field<Quaternion>,
    },
}

/// Residuals of *df = N df for a normal candidate and its negative; used to
/// record which sign convention the measured Gauss map satisfies.
#[derive(Debug, Clone, Copy)]
pub struct OrientationReport {
    pub plus: f64,
    pub minus: f64,
}

pub fn orientation_report(f: &Field<Quaternion>, n: &Field<Quaternion>) -> OrientationReport {
    OrientationReport {
        plus: left_normal_residual(f, n),
        minus: left_normal_residual(f, &n.map(|q| -q)),
    }
}

fn check_mu(mu: C64) -> Result<()> {
    if mu.norm() < tol::ZERO_VECTOR || (mu - cr(1.0)).norm() < tol::ZERO_VECTOR {
        return Err(Error::MuForbidden(mu));
    }
    Ok(())
}

fn on_unit_circle(mu: C64) -> bool {
    (mu.norm_sqr() - 1.0).abs() < 1e-12
}

/// Coefficients a = (mu + mu^-1)/2 and b = i (mu^-1 - mu)/2.
pub fn mu_params(mu: C64) -> Result<MuParams> {
    check_mu(mu)?;
    let inv = 1.0 / mu;
    Ok(MuParams {
        mu,
        a: (mu + inv) * 0.5,
        b: c(0.0, 1.0) * (inv - mu) * 0.5,
    })
}

fn phi_conjugations(
    phi: &ParallelSection,
    params: &MuParams,
) -> Result<(Field<Quaternion>, Field<Quaternion>)> {
    let a = Quaternion::from_complex(params.a);
    let b = Quaternion::from_complex(params.b);
    let min = phi.min_norm();
    if min < tol::SINGULAR_GUARD {
        return Err(Error::ZeroSection(min));
    }
    let mut a_hat = Field::constant(phi.grid(), Quaternion::zero());
    let mut b_hat = Field::constant(phi.grid(), Quaternion::zero());
    for (i, j) in phi.grid().indices() {
        let p = phi.phi.at(i, j).to_quat();
        let pi = p.inverse()?;
        a_hat.set(i, j, p * a * pi);
        b_hat.set(i, j, p * b * pi);
    }
    Ok((a_hat, b_hat))
}

/// The transform kernel T = (N (a_hat - 1) + b_hat) / 2 with
/// a_hat = phi a phi^-1, b_hat = phi b phi^-1.
pub fn mu_darboux_t(n: &Field<Quaternion>, phi: &ParallelSection) -> Result<Field<Quaternion>> {
    if n.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    let params = mu_params(phi.mu)?;
    let (a_hat, b_hat) = phi_conjugations(phi, &params)?;
    let one = Quaternion::one();
    let mut min_t = f64::INFINITY;
    let mut min_denom = f64::INFINITY;
    let t = Field::from_fn(n.grid(), |i, j| {
        let ah = a_hat.at(i, j);
        min_denom = min_denom.min((one - ah).norm());
        let v = (n.at(i, j) * (ah - one) + b_hat.at(i, j)) * 0.5;
        min_t = min_t.min(v.norm());
        v
    });
    if min_denom < tol::SINGULAR_GUARD || min_t < tol::SINGULAR_GUARD {
        return Err(Error::SingularTransform(min_t.min(min_denom)));
    }
    Ok(t)
}

/// Pointwise norm of dT - (dN)''(a_hat - 1)/2 + T (dN)' T over both
/// coordinate directions.
pub fn riccati_residual(
    t: &Field<Quaternion>,
    n: &Field<Quaternion>,
    phi: &ParallelSection,
) -> Result<Field<f64>> {
    let params = mu_params(phi.mu)?;
    let (a_hat, _) = phi_conjugations(phi, &params)?;
    let (dnp, dnpp) = type_split_dn(n);
    let (tx, ty) = (ddx(t), ddy(t));
    let one = Quaternion::one();
    Ok(Field::from_fn(n.grid(), |i, j| {
        let coeff = (a_hat.at(i, j) - one) * 0.5;
        let tv = t.at(i, j);
        let rx = tx.at(i, j) - dnpp.x.at(i, j) * coeff + tv * dnp.x.at(i, j) * tv;
        let ry = ty.at(i, j) - dnpp.y.at(i, j) * coeff + tv * dnp.y.at(i, j) * tv;
        rx.norm().max(ry.norm())
    }))
}

/// mu-Darboux transform of a CMC surface: f_hat = f + T^-1 with Gauss map
/// -T^-1 N T; the real part of f_hat is constant and reported, the surface
/// is its imaginary part.
pub fn mu_darboux_surface(surface: &SurfaceData, phi: &ParallelSection) -> Result<DarbouxResult> {
    let t = mu_darboux_t(&surface.n, phi)?;
    let grid = surface.grid();
    let mut f_hat = Field::constant(grid, Quaternion::zero());
    let mut n_hat = Field::constant(grid, Quaternion::i());
    let mut min_t = f64::INFINITY;
    let mut max_re_t = 0.0_f64;
    for (i, j) in grid.indices() {
        let tv = t.at(i, j);
        min_t = min_t.min(tv.norm());
        max_re_t = max_re_t.max(tv.re().abs());
        let ti = tv.inverse()?;
        f_hat.set(i, j, surface.f.at(i, j) + ti);
        let nh = -(ti * surface.n.at(i, j) * tv);
        let nh = nh.imag_part();
        n_hat.set(i, j, nh * (1.0 / nh.norm()));
    }
    let re_mean = f_hat.map(|q| q.re()).mean();
    let re_dev = f_hat
        .values()
        .fold(0.0_f64, |m, q| m.max((q.re() - re_mean).abs()))
        / re_mean.abs().max(1.0);
    let f_hat_im = f_hat.map(|q| q.imag_part());
    Ok(DarbouxResult {
        t,
        f_hat,
        f_hat_im,
        n_hat,
        re_dev,
        min_t,
        max_re_t,
    })
}

/// mu-Darboux transform of the harmonic map itself, N_hat = T^-1 N T.
pub fn mu_darboux_normal(
    n: &Field<Quaternion>,
    phi: &ParallelSection,
) -> Result<Field<Quaternion>> {
    let t = mu_darboux_t(n, phi)?;
    let mut out = Field::constant(n.grid(), Quaternion::i());
    for (i, j) in n.grid().indices() {
        let tv = t.at(i, j);
        let nh = (tv.inverse()? * n.at(i, j) * tv).imag_part();
        out.set(i, j, nh * (1.0 / nh.norm()));
    }
    Ok(out)
}

/// Transform of a conformal immersion with harmonic left normal N and
/// (dN)' = -df H: f_hat = f + (H T)^-1, with left normal -T^-1 N T unless
/// the output degenerates to a constant.
pub fn darboux_left_normal(
    f: &Field<Quaternion>,
    n: &Field<Quaternion>,
    h: &Field<Quaternion>,
    phi: &ParallelSection,
) -> Result<LeftNormalTransform> {
    if f.grid() != n.grid() || f.grid() != h.grid() {
        return Err(Error::GridMismatch);
    }
    let t = mu_darboux_t(n, phi)?;
    let mut f_hat = Field::constant(f.grid(), Quaternion::zero());
    for (i, j) in f.grid().indices() {
        let hv = h.at(i, j);
        if hv.norm() < tol::SINGULAR_GUARD {
            return Err(Error::ZeroH(hv.norm()));
        }
        let ht = hv * t.at(i, j);
        f_hat.set(i, j, f.at(i, j) + ht.inverse()?);
    }
    let df = differential(&f_hat);
    let mut max_df = 0.0_f64;
    for (i, j) in f.grid().indices() {
        max_df = max_df.max(df.x.at(i, j).norm()).max(df.y.at(i, j).norm());
    }
    if max_df < 1e-10 {
        return Ok(LeftNormalTransform::Constant);
    }
    let mut n_hat = Field::constant(f.grid(), Quaternion::i());
    for (i, j) in f.grid().indices() {
        let tv = t.at(i, j);
        let nh = (-(tv.inverse()? * n.at(i, j) * tv)).imag_part();
        n_hat.set(i, j, nh * (1.0 / nh.norm()));
    }
    Ok(LeftNormalTransform::Immersion { f_hat, n_hat })
}

/// The simple factor gamma_lambda = (1 - conj(mu)^-1)/(1 - mu) *
/// (lambda - mu)/(lambda - conj(mu)^-1); identically 1 for mu on the unit
/// circle.
pub fn gamma(lambda: C64, mu: C64) -> Result<C64> {
    check_mu(mu)?;
    if on_unit_circle(mu) {
        return Ok(cr(1.0));
    }
    let pole = 1.0 / mu.conj();
    if (lambda - pole).norm() < 1e-12 {
        return Err(Error::PoleAt(lambda));
    }
    Ok(gamma_inf(mu)? * (lambda - mu) / (lambda - pole))
}

/// gamma at lambda = infinity: (1 - conj(mu)^-1)/(1 - mu).
pub fn gamma_inf(mu: C64) -> Result<C64> {
    check_mu(mu)?;
    if on_unit_circle(mu) {
        return Ok(cr(1.0));
    }
    Ok((cr(1.0) - 1.0 / mu.conj()) / (cr(1.0) - mu))
}

/// gamma at lambda = 0: gamma_inf * mu * conj(mu).
pub fn gamma_zero(mu: C64) -> Result<C64> {
    Ok(gamma_inf(mu)? * cr(mu.norm_sqr()))
}

fn projector_field(phi: &ParallelSection) -> Result<Field<Mat2>> {
    let min = phi.min_norm();
    if min < tol::SINGULAR_GUARD {
        return Err(Error::ZeroSection(min));
    }
    let mut out = Field::constant(phi.grid(), Mat2::zero());
    for (i, j) in phi.grid().indices() {
        out.set(i, j, phi.phi.at(i, j).projector()?);
    }
    Ok(out)
}

/// r_lambda = pi gamma + pi_perp = id + (gamma - 1) pi as a matrix field.
fn r_of(pi: &Mat2, gamma: C64) -> Mat2 {
    Mat2::identity() + pi.scale(gamma - 1.0)
}

/// Simple factor dressing of the harmonic map N with respect to the line
/// spanned by phi.
pub fn simple_factor_dress(
    family: &ConnectionFamily,
    n: &Field<Quaternion>,
    phi: &ParallelSection,
) -> Result<DressingResult> {
    check_mu(phi.mu)?;
    if family.grid() != n.grid() || family.grid() != phi.grid() {
        return Err(Error::GridMismatch);
    }
    let g_inf = gamma_inf(phi.mu)?;
    let g_zero = gamma_zero(phi.mu)?;
    let pi = projector_field(phi)?;
    let grid = family.grid();
    let mut r_inf = Field::constant(grid, Mat2::identity());
    let mut r_zero = Field::constant(grid, Mat2::identity());
    let mut omega10x = Field::constant(grid, Mat2::zero());
    let mut omega01x = Field::constant(grid, Mat2::zero());
    let mut n_hat = Field::constant(grid, Quaternion::i());
    let mut nilpotency = 0.0_f64;
    for (i, j) in grid.indices() {
        let p = pi.at(i, j);
        let ri = r_of(&p, g_inf);
        let rz = r_of(&p, g_zero);
        // r^-1 = id + (gamma^-1 - 1) pi
        let rii = r_of(&p, 1.0 / g_inf);
        let rzi = r_of(&p, 1.0 / g_zero);
        let w10 = ri * family.a10x().at(i, j) * rii;
        let w01 = rz * family.a01x().at(i, j) * rzi;
        nilpotency = nilpotency.max((w10 * w10).norm());
        r_inf.set(i, j, ri);
        r_zero.set(i, j, rz);
        omega10x.set(i, j, w10);
        omega01x.set(i, j, w01);
        let e_line = plus_i_eigenline(&n.at(i, j));
        n_hat.set(i, j, line_to_sphere(&ri.mul_col(&e_line))?);
    }
    Ok(DressingResult {
        mu: phi.mu,
        r_inf,
        r_zero,
        omega10x,
        omega01x,
        n_hat,
        nilpotency,
    })
}

/// Gauged connection form omega = r alpha r^-1 - (dr) r^-1 at one point, for
/// the line with projector pi and derivative dpi along the chosen direction.
fn gauged_form(alpha: &Mat2, pi: &Mat2, dpi: &Mat2, g: C64) -> Mat2 {
    let r = r_of(pi, g);
    let rinv = r_of(pi, 1.0 / g);
    r * *alpha * rinv - dpi.scale(g - 1.0) * rinv
}

/// Derivative of the orthogonal projector onto span(phi) for a section with
/// d phi = -alpha_mu phi (parallelism is used as the defining relation, so
/// the pole cancellation below is algebraic, not discretization-limited).
fn dpi_parallel(phi: &Col2, alpha_mu: &Mat2) -> Mat2 {
    let rho = phi.norm_sqr();
    let p = phi.outer(phi).scale(cr(1.0 / rho));
    let dphi = -alpha_mu.mul_col(phi);
    let drho = 2.0 * phi.herm_dot(&dphi).re;
    (dphi.outer(phi) + phi.outer(&dphi)).scale(cr(1.0 / rho)) - p.scale(cr(drho / rho))
}

/// Probes the gauged connection form near lambda = mu: the dressing of a
/// parallel line stays bounded, while the ungauged conjugation and the
/// dressing of a non-parallel control line blow up like 1/(lambda - mu).
pub fn dressed_holomorphy_check(
    family: &ConnectionFamily,
    phi: &ParallelSection,
) -> Result<HolomorphyCheck> {
    check_mu(phi.mu)?;
    let mu = phi.mu;
    let grid = family.grid();
    let alpha_mu = family.connection_form(mu)?;
    // 16 deterministic interior sample points
    let pts: Vec<(usize, usize)> = {
        let all: Vec<_> = grid.interior_margin(2).collect();
        let stride = (all.len() / 16).max(1);
        all.into_iter().step_by(stride).take(16).collect()
    };
    let control = Col2::new(c(0.4, 0.1), cr(1.0));
    let eval = |lambda: C64, gauged: bool, parallel: bool| -> Result<f64> {
        let g = gamma(lambda, mu)?;
        let alpha = family.connection_form(lambda)?;
        let mut worst = 0.0_f64;
        for &(i, j) in &pts {
            let dirs = [
                (alpha.x.at(i, j), alpha_mu.x.at(i, j)),
                (alpha.y.at(i, j), alpha_mu.y.at(i, j)),
            ];
            for (alpha_v, alpha_mu_v) in dirs {
                let value = if parallel {
                    let w = phi.phi.at(i, j);
                    let p = w.projector()?;
                    if gauged {
                        let dpi = dpi_parallel(&w, &alpha_mu_v);
                        gauged_form(&alpha_v, &p, &dpi, g)
                    } else {
                        r_of(&p, g) * alpha_v * r_of(&p, 1.0 / g)
                    }
                } else {
                    // constant line: dpi = 0, so the gauge only conjugates
                    let p = control.projector()?;
                    gauged_form(&alpha_v, &p, &Mat2::zero(), g)
                };
                worst = worst.max(value.norm());
            }
        }
        Ok(worst)
    };
    let reference = eval(mu + cr(0.1), true, true)?;
    let ungauged_far = eval(mu + cr(0.1), false, true)?;
    let mut gauged_max = 0.0_f64;
    let mut ungauged_near = 0.0_f64;
    let mut control_near = 0.0_f64;
    for k in 0..8 {
        let th = 2.0 * std::f64::consts::PI * k as f64 / 8.0;
        let dir = c(th.cos(), th.sin());
        gauged_max = gauged_max.max(eval(mu + dir * 1e-2, true, true)?);
        ungauged_near = ungauged_near.max(eval(mu + dir * 1e-3, false, true)?);
        control_near = control_near.max(eval(mu + dir * 1e-3, true, false)?);
    }
    Ok(HolomorphyCheck {
        reference,
        gauged_max,
        ungauged_far,
        ungauged_near,
        control_near,
    })
}

/// Flagship check: max distance on S^2 between the simple factor dressing of
/// N and the mu-Darboux transform T^-1 N T.
pub fn equivalence_check(
    family: &ConnectionFamily,
    n: &Field<Quaternion>,
    phi: &ParallelSection,
) -> Result<f64> {
    let dress = simple_factor_dress(family, n, phi)?;
    let darb = mu_darboux_normal(n, phi)?;
    let mut worst = 0.0_f64;
    for (i, j) in n.grid().indices() {
        worst = worst.max(sphere_distance(&dress.n_hat.at(i, j), &darb.at(i, j)));
    }
    Ok(worst)
}

/// Dressed CMC surface f_hat = f - 2 ((d/dt r_{e^{it}})|_{t=0} phi_1) phi_1^-1
/// for the constant lambda = 1 section phi_1 = v, using the closed form
/// d/dt r|_0 = i gamma'(1) pi.
pub fn dressed_cmc_surface(
    surface: &SurfaceData,
    phi: &ParallelSection,
    v: Col2,
) -> Result<(SurfaceData, f64)> {
    check_mu(phi.mu)?;
    if v.norm() < tol::ZERO_VECTOR {
        return Err(Error::ZeroVector(v.norm()));
    }
    let mu = phi.mu;
    let dgamma = if on_unit_circle(mu) {
        cr(0.0)
    } else {
        let pole = 1.0 / mu.conj();
        gamma_inf(mu)? * (mu - pole) / ((cr(1.0) - pole) * (cr(1.0) - pole))
    };
    let dt_r_scalar = c(0.0, 1.0) * dgamma; // d/dt gamma_{e^{it}} |_{t=0}
    let pi = projector_field(phi)?;
    let vq = v.to_quat();
    let vqi = vq.inverse()?;
    let grid = surface.grid();
    let mut f_hat = Field::constant(grid, Quaternion::zero());
    for (i, j) in grid.indices() {
        let w = pi.at(i, j).mul_col(&v);
        let corr = w.to_quat().mul_complex_right(dt_r_scalar) * vqi * 2.0;
        f_hat.set(i, j, surface.f.at(i, j) - corr);
    }
    let re_mean = f_hat.map(|q| q.re()).mean();
    let re_dev = f_hat
        .values()
        .fold(0.0_f64, |m, q| m.max((q.re() - re_mean).abs()));
    let f_im = f_hat.map(|q| q.imag_part());
    // Gauss map of the dressed surface: the dressed normal of N
    let fam = family_of(surface)?;
    let dress = simple_factor_dress(&fam, &surface.n, phi)?;
    Ok((surface_from_immersion(f_im, dress.n_hat), re_dev))
}

fn family_of(surface: &SurfaceData) -> Result<ConnectionFamily> {
    let (a, _) = crate::surface::hopf_fields(&surface.n);
    ConnectionFamily::from_hopf(&a)
}
