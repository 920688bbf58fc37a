//! Finite differences and the Wirtinger operators.

use alloc::vec::Vec;

use crate::bicomplex::Bicomplex;
use crate::error::{Error, Result};
use crate::field::{BicomplexField2D, Sample};

/// First derivative of uniformly spaced samples: central differences inside,
/// second-order one-sided stencils at both ends.
///
/// Panics if fewer than 3 samples are given.
pub fn derivative<T: Sample>(u: &[T], h: f64) -> Vec<T> {
    let n = u.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    let half = 0.5 / h;
    let mut out = Vec::with_capacity(n);
    out.push((u[1] * 4.0 - u[0] * 3.0 - u[2]) * half);
    for j in 1..n - 1 {
        out.push((u[j + 1] - u[j - 1]) * half);
    }
    out.push((u[n - 1] * 3.0 - u[n - 2] * 4.0 + u[n - 3]) * half);
    out
}

/// Second derivative by the three-point stencil at interior nodes; the two
/// end values are copied from their neighbours.
pub fn second_derivative<T: Sample>(u: &[T], h: f64) -> Vec<T> {
    let n = u.len();
    assert!(n >= 3, "second derivative needs at least 3 samples");
    let inv = 1.0 / (h * h);
    let mut out = alloc::vec![T::default(); n];
    for j in 1..n - 1 {
        out[j] = (u[j + 1] - u[j] * 2.0 + u[j - 1]) * inv;
    }
    out[0] = out[1];
    out[n - 1] = out[n - 2];
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wirtinger {
    /// `∂̄ = ½(∂x + k ∂y)`
    Dbar,
    /// `∂ = ½(∂x - k ∂y)`
    D,
}

/// `∂̄W` or `∂W` by second-order finite differences.
pub fn wirtinger_fd(w: &BicomplexField2D, which: Wirtinger) -> Result<BicomplexField2D> {
    let g = w.grid();
    if g.nx() < 3 || g.ny() < 3 {
        return Err(Error::GridTooSmall(g.nx().min(g.ny())));
    }
    let dx = w.dx();
    let dy = w.dy();
    let sign = match which {
        Wirtinger::Dbar => 1.0,
        Wirtinger::D => -1.0,
    };
    dx.zip_with(&dy, |a, b| (a + b.mul_k() * sign) * 0.5)
}

pub fn dbar(w: &BicomplexField2D) -> BicomplexField2D {
    wirtinger_fd(w, Wirtinger::Dbar).expect("grids always have at least 3 points")
}

pub fn d(w: &BicomplexField2D) -> BicomplexField2D {
    wirtinger_fd(w, Wirtinger::D).expect("grids always have at least 3 points")
}

/// `∂̄` of a `C_i`-valued field: `½(u_x + k u_y)`.
pub fn dbar_scalar(u: &crate::field::ComplexField2D) -> BicomplexField2D {
    let ux = u.dx();
    let uy = u.dy();
    ux.zip_with(&uy, |a, b| Bicomplex::from_parts(a * 0.5, b * 0.5))
        .expect("same grid")
}

/// `∂` of a `C_i`-valued field: `½(u_x - k u_y)`.
pub fn d_scalar(u: &crate::field::ComplexField2D) -> BicomplexField2D {
    let ux = u.dx();
    let uy = u.dy();
    ux.zip_with(&uy, |a, b| Bicomplex::from_parts(a * 0.5, -b * 0.5))
        .expect("same grid")
}
