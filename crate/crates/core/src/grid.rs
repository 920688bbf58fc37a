//! Uniform grids symmetric about the origin.

use crate::error::{Error, Result};

/// Nodes `x_j = (j - c) h` for `j = 0..n`, with `c = (n - 1)/2` the center.
///
/// The point count is odd, so `0` and every reflected pair `±x_j` are exact
/// nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricGrid1D {
    half_width: f64,
    point_count: usize,
}

impl SymmetricGrid1D {
    pub fn new(half_width: f64, point_count: usize) -> Result<Self> {
        if point_count < 3 {
            return Err(Error::GridTooSmall(point_count));
        }
        if point_count.is_multiple_of(2) {
            return Err(Error::InvalidGrid("point count must be odd"));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidGrid("half width must be positive"));
        }
        Ok(Self {
            half_width,
            point_count,
        })
    }

    #[inline]
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.point_count
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn step(&self) -> f64 {
        2.0 * self.half_width / (self.point_count - 1) as f64
    }

    /// Index of the node at the origin.
    #[inline]
    pub fn center(&self) -> usize {
        (self.point_count - 1) / 2
    }

    /// Signed offset of node `j` from the center.
    #[inline]
    pub fn offset(&self, j: usize) -> isize {
        j as isize - self.center() as isize
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.offset(j) as f64 * self.step()
    }

    /// Index of the node reflected through the origin.
    #[inline]
    pub fn mirror(&self, j: usize) -> usize {
        self.point_count - 1 - j
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.point_count).map(move |j| self.node(j))
    }

    /// Nearest node index to `x`, clamped to the grid.
    pub fn nearest(&self, x: f64) -> usize {
        let r = libm::round(x / self.step()) as isize + self.center() as isize;
        r.clamp(0, self.point_count as isize - 1) as usize
    }

    /// The grid with half the step on the same interval (`2n - 1` points).
    pub fn refined(&self) -> Self {
        Self {
            half_width: self.half_width,
            point_count: 2 * self.point_count - 1,
        }
    }

    /// The grid made of every other node, if it still has at least 3 points
    /// and an odd count.
    pub fn coarsened(&self) -> Option<Self> {
        let n = self.point_count.div_ceil(2);
        if !(self.point_count - 1).is_multiple_of(2) || n < 3 || n.is_multiple_of(2) {
            return None;
        }
        Some(Self {
            half_width: self.half_width,
            point_count: n,
        })
    }
}

/// Tensor product of two symmetric grids. Samples are stored row by row:
/// index `l * nx + j` holds the node `(x_j, y_l)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: SymmetricGrid1D,
    pub y: SymmetricGrid1D,
}

impl Grid2D {
    pub fn new(x: SymmetricGrid1D, y: SymmetricGrid1D) -> Self {
        Self { x, y }
    }

    pub fn square(half_width: f64, point_count: usize) -> Result<Self> {
        let g = SymmetricGrid1D::new(half_width, point_count)?;
        Ok(Self::new(g, g))
    }

    #[inline]
    pub fn nx(&self) -> usize {
        self.x.len()
    }

    #[inline]
    pub fn ny(&self) -> usize {
        self.y.len()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nx() * self.ny()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn index(&self, j: usize, l: usize) -> usize {
        l * self.nx() + j
    }

    #[inline]
    pub fn coords(&self, j: usize, l: usize) -> (f64, f64) {
        (self.x.node(j), self.y.node(l))
    }

    /// Index of the origin.
    pub fn center_index(&self) -> usize {
        self.index(self.x.center(), self.y.center())
    }

    pub fn refined(&self) -> Self {
        Self::new(self.x.refined(), self.y.refined())
    }

    pub fn coarsened(&self) -> Option<Self> {
        Some(Self::new(self.x.coarsened()?, self.y.coarsened()?))
    }

    /// True for nodes with a full 3×3 neighbourhood.
    #[inline]
    pub fn is_interior(&self, j: usize, l: usize) -> bool {
        j > 0 && l > 0 && j + 1 < self.nx() && l + 1 < self.ny()
    }
}
