//! Classical 4th-order one-step integration along grid edges.
//!
//! All linear ODEs in this crate are either column equations phi' = B(s) phi
//! (parallel transport) or frame equations F' = F B(s).  Each grid edge is
//! integrated with a configurable number of RK4 substeps; coefficient
//! matrices are supplied by a sampler over the edge parameter in [0, 1].

use crate::quat::{Col2, Mat2};

/// One RK4 step of phi' = B(s) phi over step h, with B at s, s + h/2, s + h.
fn rk4_left(phi: Col2, b0: &Mat2, bm: &Mat2, b1: &Mat2, h: f64) -> Col2 {
    let k1 = b0.mul_col(&phi);
    let k2 = bm.mul_col(&(phi + k1 * (h / 2.0)));
    let k3 = bm.mul_col(&(phi + k2 * (h / 2.0)));
    let k4 = b1.mul_col(&(phi + k3 * h));
    phi + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// One RK4 step of F' = F B(s).
fn rk4_right(f: Mat2, b0: &Mat2, bm: &Mat2, b1: &Mat2, h: f64) -> Mat2 {
    let k1 = f * *b0;
    let k2 = (f + k1 * (h / 2.0)) * *bm;
    let k3 = (f + k2 * (h / 2.0)) * *bm;
    let k4 = (f + k3 * h) * *b1;
    f + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0)
}

/// One RK4 step of the augmented pair F' = F B, G' = G B + F C.
fn rk4_right_pair(
    f: Mat2,
    g: Mat2,
    b: (&Mat2, &Mat2, &Mat2),
    c: (&Mat2, &Mat2, &Mat2),
    h: f64,
) -> (Mat2, Mat2) {
    let step = |f: Mat2, g: Mat2, b: &Mat2, c: &Mat2| (f * *b, g * *b + f * *c);
    let (kf1, kg1) = step(f, g, b.0, c.0);
    let (kf2, kg2) = step(f + kf1 * (h / 2.0), g + kg1 * (h / 2.0), b.1, c.1);
    let (kf3, kg3) = step(f + kf2 * (h / 2.0), g + kg2 * (h / 2.0), b.1, c.1);
    let (kf4, kg4) = step(f + kf3 * h, g + kg3 * h, b.2, c.2);
    (
        f + (kf1 + kf2 * 2.0 + kf3 * 2.0 + kf4) * (h / 6.0),
        g + (kg1 + kg2 * 2.0 + kg3 * 2.0 + kg4) * (h / 6.0),
    )
}

/// Integrate phi' = B phi across one edge of signed length h, sampling B at
/// the edge parameter in [0, 1].
pub fn edge_left(v: Col2, h: f64, substeps: usize, b: impl Fn(f64) -> Mat2) -> Col2 {
    let m = substeps.max(1);
    let dh = h / m as f64;
    let mut phi = v;
    for k in 0..m {
        let t0 = k as f64 / m as f64;
        let tm = (k as f64 + 0.5) / m as f64;
        let t1 = (k + 1) as f64 / m as f64;
        phi = rk4_left(phi, &b(t0), &b(tm), &b(t1), dh);
    }
    phi
}

/// Integrate F' = F B across one edge.
pub fn edge_right(f: Mat2, h: f64, substeps: usize, b: impl Fn(f64) -> Mat2) -> Mat2 {
    let m = substeps.max(1);
    let dh = h / m as f64;
    let mut out = f;
    for k in 0..m {
        let t0 = k as f64 / m as f64;
        let tm = (k as f64 + 0.5) / m as f64;
        let t1 = (k + 1) as f64 / m as f64;
        out = rk4_right(out, &b(t0), &b(tm), &b(t1), dh);
    }
    out
}

/// Integrate the pair F' = F B, G' = G B + F C across one edge.
pub fn edge_right_pair(
    f: Mat2,
    g: Mat2,
    h: f64,
    substeps: usize,
    bc: impl Fn(f64) -> (Mat2, Mat2),
) -> (Mat2, Mat2) {
    let m = substeps.max(1);
    let dh = h / m as f64;
    let mut out = (f, g);
    for k in 0..m {
        let t0 = k as f64 / m as f64;
        let tm = (k as f64 + 0.5) / m as f64;
        let t1 = (k + 1) as f64 / m as f64;
        let (b0, c0) = bc(t0);
        let (bm, cm) = bc(tm);
        let (b1, c1) = bc(t1);
        out = rk4_right_pair(out.0, out.1, (&b0, &bm, &b1), (&c0, &cm, &c1), dh);
    }
    out
}

/// Edge of the deterministic sweep: from one grid point to an adjacent one.
#[derive(Debug, Clone, Copy)]
pub struct SweepEdge {
    pub from: (usize, usize),
    pub to: (usize, usize),
}

/// Deterministic integration order: the base row first (rightward then
/// leftward from the base column), then every column vertically away from
/// the base row.
pub fn sweep_edges(nx: usize, ny: usize, i0: usize, j0: usize) -> Vec<SweepEdge> {
    let mut edges = Vec::with_capacity(nx * ny);
    for i in i0..nx - 1 {
        edges.push(SweepEdge {
            from: (i, j0),
            to: (i + 1, j0),
        });
    }
    for i in (1..=i0).rev() {
        edges.push(SweepEdge {
            from: (i, j0),
            to: (i - 1, j0),
        });
    }
    for i in 0..nx {
        for j in j0..ny - 1 {
            edges.push(SweepEdge {
                from: (i, j),
                to: (i, j + 1),
            });
        }
        for j in (1..=j0).rev() {
            edges.push(SweepEdge {
                from: (i, j),
                to: (i, j - 1),
            });
        }
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::{cr, C64};

    #[test]
    fn constant_coefficient_step_matches_exponential() {
        let b = Mat2::new(cr(0.0), cr(0.5), cr(-0.5), C64::new(0.0, 0.3));
        let v = Col2::new(cr(1.0), cr(0.25));
        let h = 0.1;
        let num = edge_left(v, h, 8, |_| b);
        let exact = b.scale(cr(h)).expm().mul_col(&v);
        assert!((num - exact).norm() < 1e-10);

        let f = Mat2::identity();
        let num = edge_right(f, h, 8, |_| b);
        let exact = b.scale(cr(h)).expm();
        assert!((num - exact).norm() < 1e-10);
    }

    #[test]
    fn signed_steps_invert_each_other() {
        let b = Mat2::new(cr(0.1), cr(0.4), cr(-0.2), cr(-0.1));
        let v = Col2::new(cr(1.0), cr(-1.0));
        let fwd = edge_left(v, 0.05, 4, |t| b.scale(cr(1.0 + t)));
        let back = edge_left(fwd, -0.05, 4, |t| b.scale(cr(2.0 - t)));
        assert!((back - v).norm() < 1e-10);
    }

    #[test]
    fn sweep_covers_grid_once() {
        let (nx, ny, i0, j0) = (5, 4, 2, 1);
        let edges = sweep_edges(nx, ny, i0, j0);
        assert_eq!(edges.len(), nx * ny - 1);
        let mut seen = vec![false; nx * ny];
        seen[j0 * nx + i0] = true;
        for e in &edges {
            assert!(seen[e.from.1 * nx + e.from.0], "edge from unvisited point");
            assert!(!seen[e.to.1 * nx + e.to.0], "point visited twice");
            seen[e.to.1 * nx + e.to.0] = true;
        }
        assert!(seen.iter().all(|s| *s));
    }
}
