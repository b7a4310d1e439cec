//! Surface data on conformal grids: type decomposition, Hopf fields, mean
//! curvature, harmonicity diagnostics and the vacuum-cylinder sample datum.
//!
//! A map N into S^2 acts on the trivial quaternion bundle by left
//! multiplication, J phi = N phi.  Its Hopf fields
//!
//! ```text
//! A = (J dJ + *dJ) / 4,    Q = (J dJ - *dJ) / 4
//! ```
//!
//! are endomorphism-valued 1-forms; N is harmonic exactly when d*A = 0.

use crate::error::{Error, Result};
use crate::grid::{ddx, ddy, differential, Field, Grid, OneForm};
use crate::quat::{c, cr, e_minus, e_plus, pauli, Mat2, Quaternion, C64};
use crate::tol;

/// Immersion, Gauss map, conformal factor and Hopf differential coefficient.
#[derive(Debug, Clone)]
pub struct SurfaceData {
    /// Immersion into Im H.
    pub f: Field<Quaternion>,
    /// Unit imaginary Gauss map.
    pub n: Field<Quaternion>,
    /// Conformal factor, metric e^u.
    pub u: Field<f64>,
    /// Hopf differential coefficient Q = <f_zz, N>.
    pub q_hopf: Field<C64>,
}

impl SurfaceData {
    pub fn grid(&self) -> Grid {
        self.f.grid()
    }

    /// Max interior deviation of *df = N df = -df N, relative to |df|.
    pub fn conformality_residual(&self) -> f64 {
        left_normal_residual(&self.f, &self.n).max(right_normal_residual(&self.f, &self.n))
    }

    /// Max interior deviation of N from being unit imaginary.
    pub fn gauss_map_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, j) in self.grid().interior() {
            let n = self.n.at(i, j);
            worst = worst.max(n.re().abs()).max((n.norm() - 1.0).abs());
        }
        worst
    }
}

/// Max interior residual of *df = N df, scaled by the local |df|.
pub fn left_normal_residual(f: &Field<Quaternion>, n: &Field<Quaternion>) -> f64 {
    let df = differential(f);
    let sdf = df.star();
    let mut worst = 0.0_f64;
    for (i, j) in f.grid().interior() {
        let scale = (df.x.at(i, j).norm_sqr() + df.y.at(i, j).norm_sqr()).sqrt();
        if scale < tol::DEGENERATE_DF {
            continue;
        }
        let rx = (sdf.x.at(i, j) - n.at(i, j) * df.x.at(i, j)).norm();
        let ry = (sdf.y.at(i, j) - n.at(i, j) * df.y.at(i, j)).norm();
        worst = worst.max(rx.max(ry) / scale);
    }
    worst
}

/// Max interior residual of *df = -df N, scaled by the local |df|.
pub fn right_normal_residual(f: &Field<Quaternion>, n: &Field<Quaternion>) -> f64 {
    let df = differential(f);
    let sdf = df.star();
    let mut worst = 0.0_f64;
    for (i, j) in f.grid().interior() {
        let scale = (df.x.at(i, j).norm_sqr() + df.y.at(i, j).norm_sqr()).sqrt();
        if scale < tol::DEGENERATE_DF {
            continue;
        }
        let rx = (sdf.x.at(i, j) + df.x.at(i, j) * n.at(i, j)).norm();
        let ry = (sdf.y.at(i, j) + df.y.at(i, j) * n.at(i, j)).norm();
        worst = worst.max(rx.max(ry) / scale);
    }
    worst
}

/// Conformal factor u with e^u = 2 <f_z, f_zbar> = (|f_x|^2 + |f_y|^2) / 2.
pub fn measure_conformal_factor(f: &Field<Quaternion>) -> Field<f64> {
    let df = differential(f);
    Field::from_fn(f.grid(), |i, j| {
        (0.5 * (df.x.at(i, j).norm_sqr() + df.y.at(i, j).norm_sqr())).ln()
    })
}

/// Hopf differential coefficient Q = <f_zz, N>, extended complex-bilinearly.
pub fn measure_hopf_coefficient(f: &Field<Quaternion>, n: &Field<Quaternion>) -> Field<C64> {
    let df = differential(f);
    // f_z = p + i q with p = f_x / 2, q = -f_y / 2
    let p = df.x.map(|v| v * 0.5);
    let q = df.y.map(|v| v * (-0.5));
    let (px, py) = (ddx(&p), ddy(&p));
    let (qx, qy) = (ddx(&q), ddy(&q));
    Field::from_fn(f.grid(), |i, j| {
        // f_zz = (p_x + q_y)/2 + i (q_x - p_y)/2
        let re = (px.at(i, j) + qy.at(i, j)) * 0.5;
        let im = (qx.at(i, j) - py.at(i, j)) * 0.5;
        let nv = n.at(i, j);
        c(re.dot(&nv), im.dot(&nv))
    })
}

/// Surface data with u and Q measured from the immersion.
pub fn surface_from_immersion(f: Field<Quaternion>, n: Field<Quaternion>) -> SurfaceData {
    let u = measure_conformal_factor(&f);
    let q_hopf = measure_hopf_coefficient(&f, &n);
    SurfaceData { f, n, u, q_hopf }
}

/// Splits dN into (1,0) and (0,1) parts with respect to N:
/// (dN)' = (dN - N *dN)/2 and (dN)'' = (dN + N *dN)/2.
pub fn type_split_dn(n: &Field<Quaternion>) -> (OneForm<Quaternion>, OneForm<Quaternion>) {
    let dn = differential(n);
    let half = 0.5;
    let prime = OneForm {
        x: Field::from_fn(n.grid(), |i, j| {
            (dn.x.at(i, j) - n.at(i, j) * dn.y.at(i, j)) * half
        }),
        y: Field::from_fn(n.grid(), |i, j| {
            (dn.y.at(i, j) + n.at(i, j) * dn.x.at(i, j)) * half
        }),
    };
    let dprime = OneForm {
        x: Field::from_fn(n.grid(), |i, j| {
            (dn.x.at(i, j) + n.at(i, j) * dn.y.at(i, j)) * half
        }),
        y: Field::from_fn(n.grid(), |i, j| {
            (dn.y.at(i, j) - n.at(i, j) * dn.x.at(i, j)) * half
        }),
    };
    (prime, dprime)
}

/// Hopf fields A = (J dJ + *dJ)/4 and Q = (J dJ - *dJ)/4 as matrix-valued
/// 1-forms (left multiplications in the C^2 picture).
pub fn hopf_fields(n: &Field<Quaternion>) -> (OneForm<Mat2>, OneForm<Mat2>) {
    let g = n.grid();
    let dn = differential(n);
    let jm = n.map(|q| q.to_matrix());
    let djx = dn.x.map(|q| q.to_matrix());
    let djy = dn.y.map(|q| q.to_matrix());
    let quarter = 0.25;
    let a = OneForm {
        x: Field::from_fn(g, |i, j| {
            (jm.at(i, j) * djx.at(i, j) + djy.at(i, j)) * quarter
        }),
        y: Field::from_fn(g, |i, j| {
            (jm.at(i, j) * djy.at(i, j) - djx.at(i, j)) * quarter
        }),
    };
    let q = OneForm {
        x: Field::from_fn(g, |i, j| {
            (jm.at(i, j) * djx.at(i, j) - djy.at(i, j)) * quarter
        }),
        y: Field::from_fn(g, |i, j| {
            (jm.at(i, j) * djy.at(i, j) + djx.at(i, j)) * quarter
        }),
    };
    (a, q)
}

/// Pointwise least-squares mean curvature from (dN)' = -H df over both
/// coordinate directions.
pub fn mean_curvature(f: &Field<Quaternion>, n: &Field<Quaternion>) -> Result<Field<f64>> {
    if f.grid() != n.grid() {
        return Err(Error::GridMismatch);
    }
    let df = differential(f);
    let (dnp, _) = type_split_dn(n);
    let mut worst_df = f64::INFINITY;
    let h = Field::from_fn(f.grid(), |i, j| {
        let fx = df.x.at(i, j);
        let fy = df.y.at(i, j);
        let denom = fx.norm_sqr() + fy.norm_sqr();
        worst_df = worst_df.min(denom.sqrt());
        let num = dnp.x.at(i, j).dot(&fx) + dnp.y.at(i, j).dot(&fy);
        -num / denom
    });
    if worst_df < tol::DEGENERATE_DF {
        return Err(Error::DegenerateImmersion(worst_df));
    }
    Ok(h)
}

/// Pointwise norm of the discrete exterior derivative of *A; small exactly
/// when N is harmonic.
pub fn harmonic_residual(n: &Field<Quaternion>) -> Field<f64> {
    let (a, _) = hopf_fields(n);
    let sa = a.star();
    let d1 = ddx(&sa.y);
    let d2 = ddy(&sa.x);
    Field::from_fn(n.grid(), |i, j| (d1.at(i, j) - d2.at(i, j)).norm())
}

// ---------------------------------------------------------------------------
// Vacuum cylinder
// ---------------------------------------------------------------------------

/// The vacuum datum u = 0, Q = 1/2 on a grid, with every derived object in
/// closed form.
///
/// The extended frame is the matrix exponential
/// F_lambda(z) = exp((z - z_b) U_lambda + conj(z - z_b) V_lambda), valid
/// because U and V are constant and commute exactly when |Q| = 1/2; the
/// resulting surface is a round cylinder of radius 1/2 with H = 1.
#[derive(Debug, Clone)]
pub struct VacuumData {
    pub grid: Grid,
    pub surface: SurfaceData,
    pub u0: f64,
    pub q0: C64,
}

/// Frame coefficient matrix U of F^-1 F_z for constant u, Q.
pub fn frame_u_matrix(lambda: C64, u: f64, uz: C64, q: C64) -> Mat2 {
    let eu = (0.5 * u).exp();
    Mat2::new(-uz * 0.25, q / eu, -lambda * 0.5 * eu, uz * 0.25)
}

/// Frame coefficient matrix V of F^-1 F_zbar for constant u, Q (u real).
pub fn frame_v_matrix(lambda: C64, u: f64, uz: C64, q: C64) -> Mat2 {
    let eu = (0.5 * u).exp();
    Mat2::new(
        uz.conj() * 0.25,
        cr(0.5) / lambda * eu,
        -q.conj() / eu,
        -uz.conj() * 0.25,
    )
}

/// Builds the vacuum-cylinder datum on a grid.
pub fn vacuum_cylinder(grid: Grid) -> VacuumData {
    VacuumData::with_coefficients(grid, 0.0, cr(0.5))
}

impl VacuumData {
    /// Vacuum datum with constant coefficients; requires |Q| = e^u / 2 so
    /// that U and V commute and the exponential frame is exact.
    pub fn with_coefficients(grid: Grid, u0: f64, q0: C64) -> VacuumData {
        let comm = Self::commutator_defect(u0, q0);
        assert!(
            comm < 1e-12,
            "constant coefficients must satisfy |Q| = e^u/2 (commutator defect {comm:.3e})"
        );
        let f = Field::from_fn(grid, |i, j| Self::surface_point(grid, u0, q0, i, j));
        let n = Field::from_fn(grid, |i, j| Self::normal_point(grid, u0, q0, i, j));
        let surface = SurfaceData {
            f,
            n,
            u: Field::constant(grid, u0),
            q_hopf: Field::constant(grid, q0),
        };
        VacuumData {
            grid,
            surface,
            u0,
            q0,
        }
    }

    /// Size of [U, V]; analytically diag(e^u/4 - |Q|^2 e^-u, ...) up to sign.
    pub fn commutator_defect(u0: f64, q0: C64) -> f64 {
        let lam = cr(1.0);
        frame_u_matrix(lam, u0, cr(0.0), q0)
            .commutator(&frame_v_matrix(lam, u0, cr(0.0), q0))
            .norm()
    }

    pub fn u_mat(&self, lambda: C64) -> Mat2 {
        frame_u_matrix(lambda, self.u0, cr(0.0), self.q0)
    }

    pub fn v_mat(&self, lambda: C64) -> Mat2 {
        frame_v_matrix(lambda, self.u0, cr(0.0), self.q0)
    }

    /// Closed-form extended frame at an arbitrary point of the chart.
    pub fn frame_at(&self, lambda: C64, z: C64) -> Mat2 {
        let dz = z - self.grid.base_z();
        (self.u_mat(lambda).scale(dz) + self.v_mat(lambda).scale(dz.conj())).expm()
    }

    pub fn frame_field(&self, lambda: C64) -> Field<Mat2> {
        Field::from_fn(self.grid, |i, j| self.frame_at(lambda, self.grid.z(i, j)))
    }

    /// A^(1,0)(dx) = -e^{u/2}/2 F e_- F^-1 at an arbitrary point.
    pub fn a10x_at(&self, x: f64, y: f64) -> Mat2 {
        let f = self.frame_at(cr(1.0), c(x, y));
        let fi = f.inverse().expect("closed-form frame is invertible");
        (f * e_minus() * fi).scale(cr(-0.5 * (0.5 * self.u0).exp()))
    }

    /// A^(0,1)(dx) = e^{u/2}/2 F e_+ F^-1 at an arbitrary point.
    pub fn a01x_at(&self, x: f64, y: f64) -> Mat2 {
        let f = self.frame_at(cr(1.0), c(x, y));
        let fi = f.inverse().expect("closed-form frame is invertible");
        (f * e_plus() * fi).scale(cr(0.5 * (0.5 * self.u0).exp()))
    }

    fn normal_point(grid: Grid, u0: f64, q0: C64, i: usize, j: usize) -> Quaternion {
        let vac = VacuumDataRaw { grid, u0, q0 };
        vac.normal_at(grid.z(i, j))
    }

    fn surface_point(grid: Grid, u0: f64, q0: C64, i: usize, j: usize) -> Quaternion {
        let vac = VacuumDataRaw { grid, u0, q0 };
        vac.surface_at(grid.z(i, j))
    }

    /// Closed-form Gauss map N = -i F sigma_3 F^-1.
    pub fn normal_at(&self, z: C64) -> Quaternion {
        VacuumDataRaw {
            grid: self.grid,
            u0: self.u0,
            q0: self.q0,
        }
        .normal_at(z)
    }

    /// Closed-form immersion, normalized to f = 0 at the base point.
    pub fn surface_at(&self, z: C64) -> Quaternion {
        VacuumDataRaw {
            grid: self.grid,
            u0: self.u0,
            q0: self.q0,
        }
        .surface_at(z)
    }
}

// Closed forms shared by the constructors before the struct exists.
struct VacuumDataRaw {
    grid: Grid,
    u0: f64,
    q0: C64,
}

impl VacuumDataRaw {
    fn frame_at(&self, lambda: C64, z: C64) -> Mat2 {
        let dz = z - self.grid.base_z();
        let u = frame_u_matrix(lambda, self.u0, cr(0.0), self.q0);
        let v = frame_v_matrix(lambda, self.u0, cr(0.0), self.q0);
        (u.scale(dz) + v.scale(dz.conj())).expm()
    }

    fn normal_at(&self, z: C64) -> Quaternion {
        let f = self.frame_at(cr(1.0), z);
        let fi = f.inverse().expect("closed-form frame is invertible");
        let m = (f * pauli(3) * fi).scale(c(0.0, -1.0));
        let (q, _) = m.project_quat();
        let q = q.imag_part();
        q * (1.0 / q.norm())
    }

    /// Antiderivative of df = f_z dz + f_zbar dzbar with
    /// f_z = -i e^{u/2} F e_- F^-1; evaluated by integrating the closed-form
    /// x/y derivatives along the straight path base -> (x, y_b) -> (x, y).
    fn surface_at(&self, z: C64) -> Quaternion {
        // For constant coefficients F(z) = exp(a x + b y) with commuting
        // constant a, b, so df has the closed primitive below whenever the
        // integrand is an exact trigonometric polynomial in x and y.  Rather
        // than special-casing the angles we integrate df exactly with
        // Gauss-Legendre quadrature of high order; the integrand is entire
        // and the segment lengths are O(1), so 24 nodes reach round-off.
        let zb = self.grid.base_z();
        let fx_quat = |z: C64| {
            let f = self.frame_at(cr(1.0), z);
            let fi = f.inverse().expect("closed-form frame is invertible");
            let m = (f * pauli(1) * fi).scale(c(0.0, -(0.5 * self.u0).exp()));
            m.project_quat().0
        };
        let fy_quat = |z: C64| {
            let f = self.frame_at(cr(1.0), z);
            let fi = f.inverse().expect("closed-form frame is invertible");
            let m = (f * pauli(2) * fi).scale(c(0.0, -(0.5 * self.u0).exp()));
            m.project_quat().0
        };
        let horizontal = gauss_segment(|t| fx_quat(c(zb.re + t * (z.re - zb.re), zb.im)))
            * (z.re - zb.re);
        let vertical = gauss_segment(|t| fy_quat(c(z.re, zb.im + t * (z.im - zb.im))))
            * (z.im - zb.im);
        horizontal + vertical
    }
}

/// 24-node Gauss-Legendre average of q over [0, 1].
fn gauss_segment(q: impl Fn(f64) -> Quaternion) -> Quaternion {
    // nodes/weights on [-1, 1]
    const XS: [f64; 12] = [
        0.064056892862605626085043082624745,
        0.191118867473616309158639820757270,
        0.315042679696163374386793291319865,
        0.433793507626045138487084231913252,
        0.545421471388839535658375617218391,
        0.648093651936975569252495786910355,
        0.740124191578554364243828103099981,
        0.820001985973902921953949872669847,
        0.886415527004401034213154341982203,
        0.938274552002732758523649001708693,
        0.974728555971309498198391993008091,
        0.995187219997021360179997409700269,
    ];
    const WS: [f64; 12] = [
        0.127938195346752156974056165224694,
        0.125837456346828296121375382511189,
        0.121670472927803391204463153476262,
        0.115505668053725601353344483906050,
        0.107444270115965634782577342446606,
        0.097618652104113888269880664464247,
        0.086190161531953275917185202983743,
        0.073346481411080305734033615253117,
        0.059298584915436780746367758500109,
        0.044277438817419806168602748211338,
        0.028531388628933663181307815951878,
        0.012341229799987199546805667070037,
    ];
    let mut acc = Quaternion::zero();
    for k in 0..12 {
        let tp = 0.5 * (1.0 + XS[k]);
        let tm = 0.5 * (1.0 - XS[k]);
        acc = acc + (q(tp) + q(tm)) * (0.5 * WS[k]);
    }
    acc
}
