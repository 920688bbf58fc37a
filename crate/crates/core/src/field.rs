//! Sampled functions on symmetric grids.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::bicomplex::{Bicomplex, C64};
use crate::error::{Error, Result};
use crate::grid::{Grid2D, SymmetricGrid1D};

/// Values a field can carry: closed under addition and real scaling.
pub trait Sample:
    Copy + Default + PartialEq + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl Sample for f64 {
    fn magnitude(self) -> f64 {
        libm::fabs(self)
    }
}

impl Sample for C64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

impl Sample for Bicomplex {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Field1D<T> {
    grid: SymmetricGrid1D,
    samples: Vec<T>,
}

pub type ComplexField1D = Field1D<C64>;

impl<T: Sample> Field1D<T> {
    pub fn new(grid: SymmetricGrid1D, samples: Vec<T>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: SymmetricGrid1D, f: impl Fn(f64) -> T) -> Self {
        let samples = grid.nodes().map(f).collect();
        Self { grid, samples }
    }

    pub fn constant(grid: SymmetricGrid1D, value: T) -> Self {
        Self {
            grid,
            samples: alloc::vec![value; grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> &SymmetricGrid1D {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Value at the origin.
    pub fn at_center(&self) -> T {
        self.samples[self.grid.center()]
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Field1D<U> {
        Field1D {
            grid: self.grid,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with<U: Sample, V: Sample>(
        &self,
        other: &Field1D<U>,
        f: impl Fn(T, U) -> V,
    ) -> Result<Field1D<V>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field1D {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.magnitude()))
    }

    /// Largest pointwise distance to `other`.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (&a, &b)| m.max((a - b).magnitude())))
    }

    /// Second-order finite-difference derivative.
    pub fn derivative(&self) -> Field1D<T> {
        Field1D {
            grid: self.grid,
            samples: crate::diff::derivative(&self.samples, self.grid.step()),
        }
    }

    /// Restriction to every other node.
    pub fn coarsened(&self) -> Option<Self> {
        let grid = self.grid.coarsened()?;
        Some(Self {
            grid,
            samples: self.samples.iter().step_by(2).copied().collect(),
        })
    }
}

impl Field1D<C64> {
    /// Nodewise product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }
}

/// Samples over a [`Grid2D`], row-major in `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D<T> {
    grid: Grid2D,
    samples: Vec<T>,
}

pub type ComplexField2D = Field2D<C64>;
pub type BicomplexField2D = Field2D<Bicomplex>;

impl<T: Sample> Field2D<T> {
    pub fn new(grid: Grid2D, samples: Vec<T>) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Self { grid, samples })
    }

    pub fn from_fn(grid: Grid2D, f: impl Fn(f64, f64) -> T) -> Self {
        let mut samples = Vec::with_capacity(grid.len());
        for l in 0..grid.ny() {
            let y = grid.y.node(l);
            for j in 0..grid.nx() {
                samples.push(f(grid.x.node(j), y));
            }
        }
        Self { grid, samples }
    }

    /// Separable field `a(x_j) b(y_l)` combined by `f`.
    pub fn outer<A: Sample, B: Sample>(
        a: &Field1D<A>,
        b: &Field1D<B>,
        f: impl Fn(A, B) -> T,
    ) -> Self {
        let grid = Grid2D::new(*a.grid(), *b.grid());
        let mut samples = Vec::with_capacity(grid.len());
        for &bv in b.samples() {
            for &av in a.samples() {
                samples.push(f(av, bv));
            }
        }
        Self { grid, samples }
    }

    pub fn constant(grid: Grid2D, value: T) -> Self {
        Self {
            grid,
            samples: alloc::vec![value; grid.len()],
        }
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    #[inline]
    pub fn samples(&self) -> &[T] {
        &self.samples
    }

    #[inline]
    pub fn samples_mut(&mut self) -> &mut [T] {
        &mut self.samples
    }

    pub fn into_samples(self) -> Vec<T> {
        self.samples
    }

    #[inline]
    pub fn at(&self, j: usize, l: usize) -> T {
        self.samples[self.grid.index(j, l)]
    }

    /// Value at the origin.
    pub fn at_center(&self) -> T {
        self.samples[self.grid.center_index()]
    }

    #[inline]
    pub fn row(&self, l: usize) -> &[T] {
        let nx = self.grid.nx();
        &self.samples[l * nx..(l + 1) * nx]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.grid.ny()).map(|l| self.at(j, l)).collect()
    }

    pub fn map<U: Sample>(&self, f: impl Fn(T) -> U) -> Field2D<U> {
        Field2D {
            grid: self.grid,
            samples: self.samples.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_with<U: Sample, V: Sample>(
        &self,
        other: &Field2D<U>,
        f: impl Fn(T, U) -> V,
    ) -> Result<Field2D<V>> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field2D {
            grid: self.grid,
            samples: self
                .samples
                .iter()
                .zip(&other.samples)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.magnitude()))
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .fold(0.0, |m, (&a, &b)| m.max((a - b).magnitude())))
    }

    /// Largest magnitude over nodes with a full 3×3 neighbourhood.
    pub fn interior_sup(&self) -> f64 {
        self.sup_inside(1)
    }

    /// Largest magnitude over nodes at least `margin` nodes from the boundary.
    pub fn sup_inside(&self, margin: usize) -> f64 {
        let g = self.grid;
        let mut m: f64 = 0.0;
        for l in margin..g.ny().saturating_sub(margin) {
            for j in margin..g.nx().saturating_sub(margin) {
                m = m.max(self.at(j, l).magnitude());
            }
        }
        m
    }

    /// Applies a 1-D map to every row (fiber in `x`).
    pub fn map_rows<U: Sample>(&self, mut f: impl FnMut(&[T]) -> Result<Vec<U>>) -> Result<Field2D<U>> {
        let mut samples = Vec::with_capacity(self.grid.len());
        for l in 0..self.grid.ny() {
            let out = f(self.row(l))?;
            if out.len() != self.grid.nx() {
                return Err(Error::GridMismatch);
            }
            samples.extend(out);
        }
        Ok(Field2D {
            grid: self.grid,
            samples,
        })
    }

    /// Applies a 1-D map to every column (fiber in `y`).
    pub fn map_columns<U: Sample>(
        &self,
        mut f: impl FnMut(&[T]) -> Result<Vec<U>>,
    ) -> Result<Field2D<U>> {
        let (nx, ny) = (self.grid.nx(), self.grid.ny());
        let mut samples = alloc::vec![U::default(); self.grid.len()];
        let mut col = Vec::with_capacity(ny);
        for j in 0..nx {
            col.clear();
            col.extend((0..ny).map(|l| self.at(j, l)));
            let out = f(&col)?;
            if out.len() != ny {
                return Err(Error::GridMismatch);
            }
            for (l, v) in out.into_iter().enumerate() {
                samples[l * nx + j] = v;
            }
        }
        Ok(Field2D {
            grid: self.grid,
            samples,
        })
    }

    /// Partial derivative in `x` (second-order, one-sided at the edges).
    pub fn dx(&self) -> Self {
        let h = self.grid.x.step();
        self.map_rows(|row| Ok(crate::diff::derivative(row, h)))
            .expect("row length is preserved")
    }

    /// Partial derivative in `y` (second-order, one-sided at the edges).
    pub fn dy(&self) -> Self {
        let h = self.grid.y.step();
        self.map_columns(|col| Ok(crate::diff::derivative(col, h)))
            .expect("column length is preserved")
    }

    /// Restriction to every other node in both directions.
    pub fn coarsened(&self) -> Option<Self> {
        let grid = self.grid.coarsened()?;
        let mut samples = Vec::with_capacity(grid.len());
        for l in (0..self.grid.ny()).step_by(2) {
            samples.extend(self.row(l).iter().step_by(2).copied());
        }
        Some(Self { grid, samples })
    }
}

impl Field2D<C64> {
    pub fn to_bicomplex(&self) -> BicomplexField2D {
        self.map(Bicomplex::scalar)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }
}

impl Field2D<Bicomplex> {
    pub fn sc(&self) -> ComplexField2D {
        self.map(Bicomplex::sc)
    }

    pub fn vec(&self) -> ComplexField2D {
        self.map(Bicomplex::vec)
    }

    pub fn conj(&self) -> Self {
        self.map(Bicomplex::conj)
    }

    /// `sc + k vec`.
    pub fn from_parts(sc: &ComplexField2D, vec: &ComplexField2D) -> Result<Self> {
        sc.zip_with(vec, Bicomplex::from_parts)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, s: Bicomplex) -> Self {
        self.map(|w| s * w)
    }
}
