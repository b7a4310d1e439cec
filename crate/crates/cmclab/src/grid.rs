//! Rectangular conformal grids, sampled fields and discrete 1-forms.
//!
//! The grid carries the conformal coordinate z = x + iy; the complex
//! structure of the domain acts by J_M dx = dy, so the star operator on
//! 1-forms is (*w)(dx) = w(dy), (*w)(dy) = -w(dx).  Spacings are uniform per
//! axis and derivatives are central in the interior, one-sided second order
//! at the boundary.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quat::C64;

/// Rectangle [x0, x1] x [y0, y1] with nx * ny sample points and a base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    pub i0: usize,
    pub j0: usize,
}

impl Grid {
    /// New grid with the base point at the center index (nx/2, ny/2).
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<Self> {
        if nx < 3 || ny < 3 {
            return Err(Error::InvalidGrid(format!(
                "need at least 3 points per axis, got {nx} x {ny}"
            )));
        }
        if !(x1 > x0) || !(y1 > y0) {
            return Err(Error::InvalidGrid(format!(
                "empty extents [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Self {
            x0,
            x1,
            y0,
            y1,
            nx,
            ny,
            i0: nx / 2,
            j0: ny / 2,
        })
    }

    pub fn with_base(mut self, i0: usize, j0: usize) -> Result<Self> {
        if i0 >= self.nx || j0 >= self.ny {
            return Err(Error::InvalidGrid(format!(
                "base point ({i0}, {j0}) outside {} x {} grid",
                self.nx, self.ny
            )));
        }
        self.i0 = i0;
        self.j0 = j0;
        Ok(self)
    }

    pub fn hx(&self) -> f64 {
        (self.x1 - self.x0) / (self.nx - 1) as f64
    }

    pub fn hy(&self) -> f64 {
        (self.y1 - self.y0) / (self.ny - 1) as f64
    }

    /// Largest spacing; h^2-scaled tolerances use this value.
    pub fn h_max(&self) -> f64 {
        self.hx().max(self.hy())
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x0 + i as f64 * self.hx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y0 + j as f64 * self.hy()
    }

    pub fn z(&self, i: usize, j: usize) -> C64 {
        C64::new(self.x(i), self.y(j))
    }

    pub fn base_z(&self) -> C64 {
        self.z(self.i0, self.j0)
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.nx && j < self.ny);
        j * self.nx + i
    }

    /// All indices, row major (j outer, i inner).
    pub fn indices(&self) -> impl Iterator<Item = (usize, usize)> {
        let nx = self.nx;
        let ny = self.ny;
        (0..ny).flat_map(move |j| (0..nx).map(move |i| (i, j)))
    }

    /// Indices with the boundary ring removed.
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> {
        self.interior_margin(1)
    }

    /// Indices at distance >= margin from the boundary.  Residuals built
    /// from two stacked derivatives need margin 2: the one-sided boundary
    /// stencils leak an O(h) error into the first ring.
    pub fn interior_margin(&self, margin: usize) -> impl Iterator<Item = (usize, usize)> {
        let nx = self.nx;
        let ny = self.ny;
        let m = margin;
        (m..ny.saturating_sub(m)).flat_map(move |j| (m..nx.saturating_sub(m)).map(move |i| (i, j)))
    }
}

/// Values sampled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid,
    data: Vec<T>,
}

impl<T: Copy> Field<T> {
    pub fn from_fn(grid: Grid, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(grid.len());
        for j in 0..grid.ny {
            for i in 0..grid.nx {
                data.push(f(i, j));
            }
        }
        Self { grid, data }
    }

    pub fn constant(grid: Grid, value: T) -> Self {
        Self {
            grid,
            data: vec![value; grid.len()],
        }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn at(&self, i: usize, j: usize) -> T {
        self.data[self.grid.idx(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let k = self.grid.idx(i, j);
        self.data[k] = value;
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            data: self.data.iter().map(|v| f(*v)).collect(),
        }
    }

    pub fn map_indexed<U: Copy>(&self, mut f: impl FnMut(usize, usize, T) -> U) -> Field<U> {
        Field::from_fn(self.grid, |i, j| f(i, j, self.at(i, j)))
    }

    pub fn zip_with<U: Copy, V: Copy>(
        &self,
        other: &Field<U>,
        mut f: impl FnMut(T, U) -> V,
    ) -> Result<Field<V>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field {
            grid: self.grid,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(a, b)| f(*a, *b))
                .collect(),
        })
    }

    pub fn values(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl Field<f64> {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Maximum absolute value over interior points.
    pub fn max_abs_interior(&self) -> f64 {
        self.max_abs_interior_margin(1)
    }

    pub fn max_abs_interior_margin(&self, margin: usize) -> f64 {
        let mut m = 0.0_f64;
        for (i, j) in self.grid.interior_margin(margin) {
            m = m.max(self.at(i, j).abs());
        }
        m
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn min(&self) -> f64 {
        self.data.iter().fold(f64::INFINITY, |m, v| m.min(*v))
    }
}

/// 1-form stored by its evaluations on the coordinate directions.
#[derive(Debug, Clone, PartialEq)]
pub struct OneForm<T> {
    pub x: Field<T>,
    pub y: Field<T>,
}

impl<T: Copy + Neg<Output = T>> OneForm<T> {
    /// Star operator: (*w)(dx) = w(dy), (*w)(dy) = -w(dx).
    pub fn star(&self) -> OneForm<T> {
        OneForm {
            x: self.y.clone(),
            y: self.x.map(|v| -v),
        }
    }
}

impl<T: Copy> OneForm<T> {
    pub fn grid(&self) -> Grid {
        self.x.grid()
    }

    pub fn map<U: Copy>(&self, mut f: impl FnMut(T) -> U) -> OneForm<U> {
        OneForm {
            x: self.x.map(&mut f),
            y: self.y.map(&mut f),
        }
    }
}

/// Discrete d/dx: central in the interior, one-sided second order at i = 0
/// and i = nx - 1.  Exact on fields affine in x.
pub fn ddx<T>(f: &Field<T>) -> Field<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let g = f.grid();
    let inv2h = 1.0 / (2.0 * g.hx());
    Field::from_fn(g, |i, j| {
        if i == 0 {
            (f.at(0, j) * (-3.0) + f.at(1, j) * 4.0 - f.at(2, j)) * inv2h
        } else if i == g.nx - 1 {
            (f.at(g.nx - 1, j) * 3.0 - f.at(g.nx - 2, j) * 4.0 + f.at(g.nx - 3, j)) * inv2h
        } else {
            (f.at(i + 1, j) - f.at(i - 1, j)) * inv2h
        }
    })
}

/// Discrete d/dy, same stencils along the j axis.
pub fn ddy<T>(f: &Field<T>) -> Field<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    let g = f.grid();
    let inv2h = 1.0 / (2.0 * g.hy());
    Field::from_fn(g, |i, j| {
        if j == 0 {
            (f.at(i, 0) * (-3.0) + f.at(i, 1) * 4.0 - f.at(i, 2)) * inv2h
        } else if j == g.ny - 1 {
            (f.at(i, g.ny - 1) * 3.0 - f.at(i, g.ny - 2) * 4.0 + f.at(i, g.ny - 3)) * inv2h
        } else {
            (f.at(i, j + 1) - f.at(i, j - 1)) * inv2h
        }
    })
}

/// Exterior differential of a grid function, d f = (df/dx) dx + (df/dy) dy.
pub fn differential<T>(f: &Field<T>) -> OneForm<T>
where
    T: Copy + Add<Output = T> + Sub<Output = T> + Mul<f64, Output = T>,
{
    OneForm {
        x: ddx(f),
        y: ddy(f),
    }
}
