//! Quaternions, 2x2 complex matrices and C^2 columns: the three faces of
//! R^4 = H = C + jC used throughout the crate.
//!
//! A quaternion is stored as q = a0 + j*a1 with a0, a1 complex and
//! C = span{1, i}.  Under the identification
//!
//! ```text
//! a0 + j*a1  <->  [ a0  -conj(a1) ]
//!                 [ a1   conj(a0) ]
//! ```
//!
//! left multiplication by a quaternion becomes a matrix acting on the column
//! (a0, a1), and right multiplication by the complex unit i becomes scalar
//! multiplication by i on the column.  Unit quaternions map into SU(2).

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::tol;

pub type C64 = Complex64;

/// Complex number from real and imaginary part.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Real number as a complex scalar.
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// Quaternion
// ---------------------------------------------------------------------------

/// Quaternion q = a0 + j*a1, the pair (a0, a1) of complex numbers.
///
/// In real components q = w + x*i + y*j + z*k with a0 = w + i*x and
/// a1 = y - i*z.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quaternion {
    pub a0: C64,
    pub a1: C64,
}

impl Quaternion {
    pub const fn new(a0: C64, a1: C64) -> Self {
        Self { a0, a1 }
    }

    pub fn zero() -> Self {
        Self::new(cr(0.0), cr(0.0))
    }

    pub fn one() -> Self {
        Self::new(cr(1.0), cr(0.0))
    }

    pub fn i() -> Self {
        Self::new(c(0.0, 1.0), cr(0.0))
    }

    pub fn j() -> Self {
        Self::new(cr(0.0), cr(1.0))
    }

    pub fn k() -> Self {
        Self::new(cr(0.0), c(0.0, -1.0))
    }

    /// Quaternion from real components w + x*i + y*j + z*k.
    pub fn from_parts(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self::new(c(w, x), c(y, -z))
    }

    /// Imaginary quaternion x*i + y*j + z*k.
    pub fn imag(x: f64, y: f64, z: f64) -> Self {
        Self::from_parts(0.0, x, y, z)
    }

    /// Complex number embedded as a0-part (C = span{1, i} inside H).
    pub fn from_complex(a: C64) -> Self {
        Self::new(a, cr(0.0))
    }

    pub fn re(&self) -> f64 {
        self.a0.re
    }

    pub fn x(&self) -> f64 {
        self.a0.im
    }

    pub fn y(&self) -> f64 {
        self.a1.re
    }

    pub fn z(&self) -> f64 {
        -self.a1.im
    }

    /// R^3 components of the imaginary part, in the (i, j, k) basis.
    pub fn imag_parts(&self) -> [f64; 3] {
        [self.x(), self.y(), self.z()]
    }

    pub fn conj(&self) -> Self {
        Self::new(self.a0.conj(), -self.a1)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n < tol::ZERO_VECTOR * tol::ZERO_VECTOR {
            return Err(Error::ZeroVector(n.sqrt()));
        }
        let q = self.conj();
        Ok(Self::new(q.a0 / n, q.a1 / n))
    }

    /// Drops the real part.
    pub fn imag_part(&self) -> Self {
        Self::new(c(0.0, self.a0.im), self.a1)
    }

    /// True if the real part is negligible relative to the magnitude.
    pub fn is_imaginary(&self) -> bool {
        self.re().abs() <= tol::IMAGINARY * (1.0 + self.norm())
    }

    /// Right multiplication by a complex scalar, q * c.
    pub fn mul_complex_right(&self, s: C64) -> Self {
        Self::new(self.a0 * s, self.a1 * s)
    }

    /// Left multiplication by a complex scalar, c * q.
    pub fn mul_complex_left(&self, s: C64) -> Self {
        Self::new(s * self.a0, s.conj() * self.a1)
    }

    /// Matrix of left multiplication by this quaternion.
    pub fn to_matrix(&self) -> Mat2 {
        Mat2::new(self.a0, -self.a1.conj(), self.a1, self.a0.conj())
    }

    /// Column representation (a0, a1) of the quaternion in the basis {1, j}.
    pub fn to_col(&self) -> Col2 {
        Col2::new(self.a0, self.a1)
    }

    /// Conjugation self * q * self^-1.
    pub fn sandwich(&self, q: &Quaternion) -> Result<Quaternion> {
        Ok(*self * *q * self.inverse()?)
    }

    /// Euclidean R^4 inner product Re(p * conj(q)).
    pub fn dot(&self, other: &Quaternion) -> f64 {
        (self.a0 * other.a0.conj() + self.a1 * other.a1.conj()).re
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a0 + rhs.a0, self.a1 + rhs.a1)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, rhs: Quaternion) -> Quaternion {
        Quaternion::new(self.a0 - rhs.a0, self.a1 - rhs.a1)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a0, -self.a1)
    }
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        // (a0 + j a1)(b0 + j b1) = (a0 b0 - conj(a1) b1) + j (a1 b0 + conj(a0) b1)
        Quaternion::new(
            self.a0 * rhs.a0 - self.a1.conj() * rhs.a1,
            self.a1 * rhs.a0 + self.a0.conj() * rhs.a1,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: f64) -> Quaternion {
        Quaternion::new(self.a0 * rhs, self.a1 * rhs)
    }
}

// ---------------------------------------------------------------------------
// Mat2
// ---------------------------------------------------------------------------

/// 2x2 complex matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[C64; 2]; 2],
}

impl Mat2 {
    pub const fn new(m11: C64, m12: C64, m21: C64, m22: C64) -> Self {
        Self {
            m: [[m11, m12], [m21, m22]],
        }
    }

    pub fn zero() -> Self {
        Self::new(cr(0.0), cr(0.0), cr(0.0), cr(0.0))
    }

    pub fn identity() -> Self {
        Self::new(cr(1.0), cr(0.0), cr(0.0), cr(1.0))
    }

    pub fn trace(&self) -> C64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> C64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(
            self.m[0][0] * s,
            self.m[0][1] * s,
            self.m[1][0] * s,
            self.m[1][1] * s,
        )
    }

    pub fn adjoint(&self) -> Self {
        Self::new(
            self.m[0][0].conj(),
            self.m[1][0].conj(),
            self.m[0][1].conj(),
            self.m[1][1].conj(),
        )
    }

    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() < tol::SINGULAR_GUARD * tol::SINGULAR_GUARD {
            return Err(Error::SingularFrame(d.norm()));
        }
        Ok(Self::new(
            self.m[1][1] / d,
            -self.m[0][1] / d,
            -self.m[1][0] / d,
            self.m[0][0] / d,
        ))
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn mul_col(&self, v: &Col2) -> Col2 {
        Col2::new(
            self.m[0][0] * v.c[0] + self.m[0][1] * v.c[1],
            self.m[1][0] * v.c[0] + self.m[1][1] * v.c[1],
        )
    }

    pub fn commutator(&self, other: &Mat2) -> Mat2 {
        *self * *other - *other * *self
    }

    /// Matrix exponential.  Splits off the trace and uses the closed form for
    /// the traceless remainder M0 (M0^2 = -det(M0) id by Cayley-Hamilton).
    pub fn expm(&self) -> Mat2 {
        let t = self.trace() * 0.5;
        let m0 = *self - Mat2::identity().scale(t);
        let s2 = -m0.det();
        let s = s2.sqrt();
        // cosh(s) and sinh(s)/s, series for small |s|
        let (ch, shc) = if s.norm() < 1e-4 {
            let s4 = s2 * s2;
            (
                cr(1.0) + s2 / 2.0 + s4 / 24.0,
                cr(1.0) + s2 / 6.0 + s4 / 120.0,
            )
        } else {
            (s.cosh(), s.sinh() / s)
        };
        let et = t.exp();
        (Mat2::identity().scale(ch) + m0.scale(shc)).scale(et)
    }

    /// Deviation from quaternionic form [[a, -conj(b)], [b, conj(a)]].
    pub fn quat_form_deviation(&self) -> f64 {
        let d1 = self.m[0][0] - self.m[1][1].conj();
        let d2 = self.m[0][1] + self.m[1][0].conj();
        (d1.norm_sqr() + d2.norm_sqr()).sqrt()
    }

    /// Nearest quaternionic-form matrix together with the deviation.
    pub fn project_quat(&self) -> (Quaternion, f64) {
        let a0 = (self.m[0][0] + self.m[1][1].conj()) * 0.5;
        let a1 = (self.m[1][0] - self.m[0][1].conj()) * 0.5;
        (Quaternion::new(a0, a1), self.quat_form_deviation() * 0.5)
    }

    /// Inverse of the quaternion -> matrix identification.
    ///
    /// Fails with `NotQuaternionic` when the matrix does not satisfy the
    /// conjugation symmetry within tolerance.
    pub fn to_quat(&self) -> Result<Quaternion> {
        let dev = self.quat_form_deviation();
        if dev > tol::QUAT_FORM * (1.0 + self.norm()) {
            return Err(Error::NotQuaternionic(dev));
        }
        Ok(self.project_quat().0)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] + rhs.m[0][0],
            self.m[0][1] + rhs.m[0][1],
            self.m[1][0] + rhs.m[1][0],
            self.m[1][1] + rhs.m[1][1],
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] - rhs.m[0][0],
            self.m[0][1] - rhs.m[0][1],
            self.m[1][0] - rhs.m[1][0],
            self.m[1][1] - rhs.m[1][1],
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(cr(-1.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let a = &self.m;
        let b = &rhs.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: f64) -> Mat2 {
        self.scale(cr(rhs))
    }
}

// ---------------------------------------------------------------------------
// Col2
// ---------------------------------------------------------------------------

/// Column (phi1, phi2) in C^2, representing the quaternion phi1 + j*phi2.
///
/// Right multiplication by i on the quaternion is scalar multiplication by i
/// on the column; right multiplication by j is the antilinear map
/// (phi1, phi2) -> (-conj(phi2), conj(phi1)).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Col2 {
    pub c: [C64; 2],
}

impl Col2 {
    pub const fn new(c1: C64, c2: C64) -> Self {
        Self { c: [c1, c2] }
    }

    pub fn e1() -> Self {
        Self::new(cr(1.0), cr(0.0))
    }

    pub fn e2() -> Self {
        Self::new(cr(0.0), cr(1.0))
    }

    pub fn to_quat(&self) -> Quaternion {
        Quaternion::new(self.c[0], self.c[1])
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c[0].norm_sqr() + self.c[1].norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.c[0] * s, self.c[1] * s)
    }

    /// Column of the quaternion (self as quaternion) * j.
    pub fn j_conj(&self) -> Self {
        Self::new(-self.c[1].conj(), self.c[0].conj())
    }

    /// Hermitian inner product, antilinear in self.
    pub fn herm_dot(&self, other: &Col2) -> C64 {
        self.c[0].conj() * other.c[0] + self.c[1].conj() * other.c[1]
    }

    /// Rank-one matrix self * other^* .
    pub fn outer(&self, other: &Col2) -> Mat2 {
        Mat2::new(
            self.c[0] * other.c[0].conj(),
            self.c[0] * other.c[1].conj(),
            self.c[1] * other.c[0].conj(),
            self.c[1] * other.c[1].conj(),
        )
    }

    /// Hermitian orthogonal projection onto the line spanned by self.
    pub fn projector(&self) -> Result<Mat2> {
        let n = self.norm_sqr();
        if n < tol::ZERO_VECTOR * tol::ZERO_VECTOR {
            return Err(Error::ZeroVector(n.sqrt()));
        }
        Ok(self.outer(self).scale(cr(1.0 / n)))
    }
}

impl Add for Col2 {
    type Output = Col2;
    fn add(self, rhs: Col2) -> Col2 {
        Col2::new(self.c[0] + rhs.c[0], self.c[1] + rhs.c[1])
    }
}

impl Sub for Col2 {
    type Output = Col2;
    fn sub(self, rhs: Col2) -> Col2 {
        Col2::new(self.c[0] - rhs.c[0], self.c[1] - rhs.c[1])
    }
}

impl Neg for Col2 {
    type Output = Col2;
    fn neg(self) -> Col2 {
        Col2::new(-self.c[0], -self.c[1])
    }
}

impl Mul<f64> for Col2 {
    type Output = Col2;
    fn mul(self, rhs: f64) -> Col2 {
        self.scale(cr(rhs))
    }
}

// ---------------------------------------------------------------------------
// Constants and free operations
// ---------------------------------------------------------------------------

/// Pauli matrix sigma_k for k in 1..=3.
pub fn pauli(k: usize) -> Mat2 {
    match k {
        1 => Mat2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0)),
        2 => Mat2::new(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)),
        3 => Mat2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0)),
        _ => panic!("pauli index must be 1, 2 or 3, got {k}"),
    }
}

/// Lower-triangular nilpotent e_- = [[0,0],[1,0]].
pub fn e_minus() -> Mat2 {
    Mat2::new(cr(0.0), cr(0.0), cr(1.0), cr(0.0))
}

/// Upper-triangular nilpotent e_+ = [[0,1],[0,0]].
pub fn e_plus() -> Mat2 {
    Mat2::new(cr(0.0), cr(1.0), cr(0.0), cr(0.0))
}

/// Euclidean inner product on Im H, <v, w> = -Re(v w) = -tr(v w)/2.
pub fn inner_r3(v: &Quaternion, w: &Quaternion) -> Result<f64> {
    for q in [v, w] {
        if !q.is_imaginary() {
            return Err(Error::NotImaginary(q.re()));
        }
    }
    Ok(-(*v * *w).re())
}

/// Point on S^2 whose +i eigenline is the given column: N = w i w^-1.
///
/// Scale invariant in w; the result is a unit imaginary quaternion.
pub fn line_to_sphere(w: &Col2) -> Result<Quaternion> {
    if w.norm() <= tol::ZERO_VECTOR {
        return Err(Error::ZeroVector(w.norm()));
    }
    let q = w.to_quat();
    let n = q.sandwich(&Quaternion::i())?;
    // conjugation preserves Im H and the norm; tidy up round-off
    let n = n.imag_part();
    Ok(n * (1.0 / n.norm()))
}

/// Spanning column of the +i eigenline E of J = N * (.), via pi_E = (1 - i J)/2.
pub fn plus_i_eigenline(n: &Quaternion) -> Col2 {
    let j = n.to_matrix();
    let pi_e = (Mat2::identity() - j.scale(c(0.0, 1.0))).scale(cr(0.5));
    let w1 = pi_e.mul_col(&Col2::e1());
    let w2 = pi_e.mul_col(&Col2::e2());
    let w = if w1.norm() >= w2.norm() { w1 } else { w2 };
    w.scale(cr(1.0 / w.norm()))
}

/// Geodesic distance on S^2 between unit imaginary quaternions.
pub fn sphere_distance(n1: &Quaternion, n2: &Quaternion) -> f64 {
    let chord = (*n1 - *n2).norm();
    2.0 * (0.5 * chord.min(2.0)).asin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rand_c(rng: &mut ChaCha8Rng) -> C64 {
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    }

    fn rand_quat(rng: &mut ChaCha8Rng) -> Quaternion {
        Quaternion::new(rand_c(rng), rand_c(rng))
    }

    #[test]
    fn unit_rules() {
        let (i, j, k) = (Quaternion::i(), Quaternion::j(), Quaternion::k());
        assert!((i * j - k).norm() < 1e-15);
        assert!((j * k - i).norm() < 1e-15);
        assert!((k * i - j).norm() < 1e-15);
        assert!((i * i + Quaternion::one()).norm() < 1e-15);
    }

    #[test]
    fn identity_and_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let q = rand_quat(&mut rng);
            assert!((q * Quaternion::one() - q).norm() < 1e-15);
            if q.norm() > 1e-6 {
                let qi = q.inverse().unwrap();
                assert!((q * qi - Quaternion::one()).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn product_formula_matches_matrix_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let p = rand_quat(&mut rng);
            let q = rand_quat(&mut rng);
            let lhs = (p * q).to_matrix();
            let rhs = p.to_matrix() * q.to_matrix();
            assert!((lhs - rhs).norm() < 1e-13);
        }
    }

    #[test]
    fn matrix_identification() {
        assert!((Quaternion::one().to_matrix() - Mat2::identity()).norm() < 1e-15);
        let jm = Quaternion::j().to_matrix();
        let expect = Mat2::new(cr(0.0), cr(-1.0), cr(1.0), cr(0.0));
        assert!((jm - expect).norm() < 1e-15);
        assert!((expect.to_quat().unwrap() - Quaternion::j()).norm() < 1e-15);
        assert!((Mat2::identity().to_quat().unwrap() - Quaternion::one()).norm() < 1e-15);
    }

    #[test]
    fn non_quaternionic_matrix_rejected() {
        let m = Mat2::new(cr(1.0), cr(1.0), cr(0.0), cr(1.0));
        assert!(matches!(m.to_quat(), Err(Error::NotQuaternionic(_))));
    }

    #[test]
    fn unit_quaternions_map_into_su2() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q = rand_quat(&mut rng);
            let q = q * (1.0 / q.norm());
            let m = q.to_matrix();
            assert!((m.det() - cr(1.0)).norm() < 1e-13);
            assert!((m * m.adjoint() - Mat2::identity()).norm() < 1e-13);
        }
    }

    #[test]
    fn inner_product_conventions_agree() {
        assert!((inner_r3(&Quaternion::i(), &Quaternion::i()).unwrap() - 1.0).abs() < 1e-15);
        assert!(inner_r3(&Quaternion::i(), &Quaternion::j()).unwrap().abs() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..50 {
            let v = rand_quat(&mut rng).imag_part();
            let w = rand_quat(&mut rng).imag_part();
            let ip = inner_r3(&v, &w).unwrap();
            let trace = -0.5 * (v.to_matrix() * w.to_matrix()).trace().re;
            let real = -(v * w).re();
            assert!((ip - trace).abs() < 1e-13);
            assert!((ip - real).abs() < 1e-13);
        }
        assert!(matches!(
            inner_r3(&Quaternion::one(), &Quaternion::i()),
            Err(Error::NotImaginary(_))
        ));
    }

    #[test]
    fn pauli_matrices() {
        assert!((pauli(3) - Mat2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0))).norm() < 1e-15);
        for k in 1..=3 {
            assert!((pauli(k) * pauli(k) - Mat2::identity()).norm() < 1e-15);
        }
        // -i sigma_3 is the matrix of the imaginary unit quaternion -i
        let m = pauli(3).scale(c(0.0, -1.0));
        let q = m.to_quat().unwrap();
        assert!(q.is_imaginary());
        assert!((q - (-Quaternion::i())).norm() < 1e-15);
        assert!((e_minus() - Mat2::new(cr(0.0), cr(0.0), cr(1.0), cr(0.0))).norm() < 1e-15);
        assert!((e_plus() - Mat2::new(cr(0.0), cr(1.0), cr(0.0), cr(0.0))).norm() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn pauli_bad_index_panics() {
        let _ = pauli(4);
    }

    #[test]
    fn line_to_sphere_basics() {
        let n = line_to_sphere(&Col2::e1()).unwrap();
        assert!((n - Quaternion::i()).norm() < 1e-14);
        let n = line_to_sphere(&Col2::e2()).unwrap();
        assert!((n + Quaternion::i()).norm() < 1e-14);
        assert!(matches!(
            line_to_sphere(&Col2::new(cr(0.0), cr(0.0))),
            Err(Error::ZeroVector(_))
        ));
    }

    #[test]
    fn line_to_sphere_scale_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let w = Col2::new(rand_c(&mut rng), rand_c(&mut rng));
            if w.norm() < 1e-3 {
                continue;
            }
            let s = rand_c(&mut rng) + cr(2.0);
            let n1 = line_to_sphere(&w).unwrap();
            let n2 = line_to_sphere(&w.scale(s)).unwrap();
            assert!((n1 - n2).norm() < 1e-13);
            assert!((n1 * n1 + Quaternion::one()).norm() < 1e-13);
        }
    }

    #[test]
    fn eigenline_inverts_line_to_sphere() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let q = rand_quat(&mut rng).imag_part();
            if q.norm() < 1e-3 {
                continue;
            }
            let n = q * (1.0 / q.norm());
            let w = plus_i_eigenline(&n);
            // J w = i w
            let jw = n.to_matrix().mul_col(&w);
            assert!((jw - w.scale(c(0.0, 1.0))).norm() < 1e-12);
            let n2 = line_to_sphere(&w).unwrap();
            assert!((n - n2).norm() < 1e-12);
        }
    }

    #[test]
    fn column_scalar_compatibility() {
        // column of q*i equals i * column of q
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let q = rand_quat(&mut rng);
            let lhs = (q.mul_complex_right(c(0.0, 1.0))).to_col();
            let rhs = q.to_col().scale(c(0.0, 1.0));
            assert!((lhs - rhs).norm() < 1e-15);
            // column of q*j is Hermitian-orthogonal to the column of q
            let qj = (q * Quaternion::j()).to_col();
            assert!(q.to_col().herm_dot(&qj).norm() < 1e-14);
            assert!((qj - q.to_col().j_conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn expm_agrees_with_scaling_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let m = Mat2::new(
                rand_c(&mut rng),
                rand_c(&mut rng),
                rand_c(&mut rng),
                rand_c(&mut rng),
            );
            // simple series oracle with scaling and squaring
            let k = 8;
            let small = m.scale(cr(1.0 / f64::from(1 << k)));
            let mut term = Mat2::identity();
            let mut series = Mat2::identity();
            for n in 1..20 {
                term = term * small.scale(cr(1.0 / n as f64));
                series = series + term;
            }
            let mut oracle = series;
            for _ in 0..k {
                oracle = oracle * oracle;
            }
            assert!((m.expm() - oracle).norm() < 1e-12);
        }
    }

    #[test]
    fn sphere_distance_zero_for_equal_points() {
        let n = Quaternion::imag(0.6, 0.8, 0.0);
        assert!(sphere_distance(&n, &n) < 1e-15);
        let m = Quaternion::imag(-0.6, -0.8, 0.0);
        assert!((sphere_distance(&n, &m) - std::f64::consts::PI).abs() < 1e-12);
    }
}
