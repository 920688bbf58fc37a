//! Volterra transmutation operators `T u(x) = u(x) + ∫_{-x}^{x} 𝐊(x, t) u(t) dt`
//! and the bicomplex operators `T₀`, `T₁` built from four of them.

use alloc::vec::Vec;

use crate::bicomplex::{Bicomplex, C64};
use crate::error::{Error, Result};
use crate::field::{BicomplexField2D, ComplexField1D, ComplexField2D};
use crate::goursat::{goursat_kernel_with, PicardOptions, TriangularKernel};
use crate::grid::{Grid2D, SymmetricGrid1D};
use crate::quadrature::cumulative_integral;
use crate::systems::{check_generator, DEFAULT_VANISHING_EPS};

/// Pivot magnitude below which the Volterra solve gives up.
pub const SINGULAR_PIVOT: f64 = 1e-12;

/// `𝐊(x, t; c) = c/2 + K(x, t) + (c/2) ∫_t^x [K(x, s) - K(x, -s)] ds`.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedKernel {
    base: TriangularKernel,
    slope: C64,
    values: TriangularKernel,
    zero: bool,
}

impl DressedKernel {
    pub fn base(&self) -> &TriangularKernel {
        &self.base
    }

    pub fn slope(&self) -> C64 {
        self.slope
    }

    pub fn kernel(&self) -> &TriangularKernel {
        &self.values
    }

    pub fn grid(&self) -> &SymmetricGrid1D {
        self.values.grid()
    }

    /// True when every entry is exactly zero, i.e. the operator is the identity.
    pub fn is_identity(&self) -> bool {
        self.zero
    }

    /// Applies the operator to a field on the kernel's grid.
    pub fn apply(&self, u: &ComplexField1D) -> Result<ComplexField1D> {
        if u.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        ComplexField1D::new(*u.grid(), self.apply_slice(u.samples())?)
    }

    /// Trapezoid over the reflected nodes `t = -x..x`; for `x < 0` the
    /// integral keeps its orientation and changes sign.
    pub fn apply_slice(&self, u: &[C64]) -> Result<Vec<C64>> {
        let g = self.grid();
        if u.len() != g.len() {
            return Err(Error::GridMismatch);
        }
        if self.zero {
            return Ok(u.to_vec());
        }
        let c = g.center();
        let h = g.step();
        let mut out = Vec::with_capacity(u.len());
        for j in 0..u.len() {
            let r = j.abs_diff(c);
            if r == 0 {
                out.push(u[j]);
                continue;
            }
            let row = self.values.row(j);
            let seg = &u[c - r..=c + r];
            let mut acc = (row[0] * seg[0] + row[2 * r] * seg[2 * r]) * 0.5;
            for k in 1..2 * r {
                acc += row[k] * seg[k];
            }
            let sign = if j > c { h } else { -h };
            out.push(u[j] + acc * sign);
        }
        Ok(out)
    }

    /// Solves `(I + 𝒦) u = v` for the discrete operator, marching outward
    /// from the center one reflected pair `(c + r, c - r)` at a time.
    pub fn invert(&self, v: &ComplexField1D) -> Result<ComplexField1D> {
        if v.grid() != self.grid() {
            return Err(Error::GridMismatch);
        }
        ComplexField1D::new(*v.grid(), self.invert_slice(v.samples())?)
    }

    pub fn invert_slice(&self, v: &[C64]) -> Result<Vec<C64>> {
        let g = self.grid();
        if v.len() != g.len() {
            return Err(Error::GridMismatch);
        }
        if self.zero {
            return Ok(v.to_vec());
        }
        let c = g.center();
        let h = g.step();
        let one = C64::new(1.0, 0.0);
        let mut u = alloc::vec![C64::new(0.0, 0.0); v.len()];
        u[c] = v[c];
        for r in 1..=c {
            let (p, m) = (c + r, c - r);
            let row_p = self.values.row(p);
            let row_m = self.values.row(m);
            let inner = |row: &[C64]| -> C64 {
                let mut acc = C64::new(0.0, 0.0);
                for k in 1..2 * r {
                    acc += row[k] * u[m + k];
                }
                acc
            };
            let half = 0.5 * h;
            // Row p: t runs from x_m (k = 0) to x_p (k = 2r), positive orientation.
            let a11 = one + row_p[2 * r] * half;
            let a12 = row_p[0] * half;
            let b1 = v[p] - inner(row_p) * h;
            // Row m: negative orientation.
            let a21 = -row_m[2 * r] * half;
            let a22 = one - row_m[0] * half;
            let b2 = v[m] + inner(row_m) * h;
            let det = a11 * a22 - a12 * a21;
            if det.norm() < SINGULAR_PIVOT {
                return Err(Error::SingularStep {
                    offset: r,
                    determinant: det.norm(),
                });
            }
            u[p] = (b1 * a22 - a12 * b2) / det;
            u[m] = (a11 * b2 - a21 * b1) / det;
        }
        Ok(u)
    }
}

/// Dresses a Goursat kernel with the generator slope `c = f'(0)`.
pub fn dress_kernel(base: TriangularKernel, slope: C64) -> DressedKernel {
    let g = *base.grid();
    let c = g.center();
    let h = g.step();
    let half_slope = slope * 0.5;
    let mut values = base.clone();
    let mut reflected = Vec::new();
    let mut integral = Vec::new();
    for j in 0..g.len() {
        let r = j.abs_diff(c);
        let row = base.row(j);
        reflected.clear();
        reflected.extend((0..=2 * r).map(|k| row[k] - row[2 * r - k]));
        integral.clear();
        integral.resize(2 * r + 1, C64::new(0.0, 0.0));
        // ∫_t^x; x sits at k = 2r for x > 0 and at k = 0 for x < 0.
        if j >= c {
            for k in (0..2 * r).rev() {
                integral[k] = integral[k + 1] + (reflected[k] + reflected[k + 1]) * (0.5 * h);
            }
        } else {
            for k in 1..=2 * r {
                integral[k] = integral[k - 1] - (reflected[k - 1] + reflected[k]) * (0.5 * h);
            }
        }
        for (k, out) in values.row_mut(j).iter_mut().enumerate() {
            *out = half_slope + row[k] + half_slope * integral[k];
        }
    }
    let zero = values.is_zero();
    DressedKernel {
        base,
        slope,
        values,
        zero,
    }
}

/// The transmutation for a generator with potential `q = f''/f` and slope `f'(0)`.
pub fn transmutation_for(q: &ComplexField1D, slope: C64, opts: PicardOptions) -> Result<DressedKernel> {
    Ok(dress_kernel(goursat_kernel_with(q, opts)?, slope))
}

/// `T_{1/f} u = (1/f) (∫₀ˣ f T_f[u'] + u(0))`, with `u'` by second-order
/// finite differences.
pub fn apply_recip_transmutation(
    f: &ComplexField1D,
    t_f: &DressedKernel,
    u: &ComplexField1D,
) -> Result<ComplexField1D> {
    if f.grid() != u.grid() || f.grid() != t_f.grid() {
        return Err(Error::GridMismatch);
    }
    check_generator(f, DEFAULT_VANISHING_EPS)?;
    let du = u.derivative();
    let mapped = t_f.apply(&du)?;
    let integrand = f.mul(&mapped)?;
    let integral = cumulative_integral(&integrand);
    let u0 = u.at_center();
    integral.zip_with(f, |i, fv| (i + u0) / fv)
}

/// The four one-dimensional operators behind `T₀` and `T₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmutationSet {
    pub f: DressedKernel,
    pub inv_f: DressedKernel,
    pub g: DressedKernel,
    pub inv_g: DressedKernel,
}

/// Which of the two bicomplex operators to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composite {
    /// `T₀ = T_f T_g P⁺ + k T_{1/f} T_{1/g} P⁻`
    T0,
    /// `T₁ = T_{1/f} T_g P⁺ + k T_f T_{1/g} P⁻`
    T1,
}

impl TransmutationSet {
    pub fn grid(&self) -> Grid2D {
        Grid2D::new(*self.f.grid(), *self.g.grid())
    }

    fn factors(&self, which: Composite) -> [(&DressedKernel, &DressedKernel); 2] {
        match which {
            Composite::T0 => [(&self.f, &self.g), (&self.inv_f, &self.inv_g)],
            Composite::T1 => [(&self.inv_f, &self.g), (&self.f, &self.inv_g)],
        }
    }

    /// `T_x` along rows, then `T_y` along columns. The two fibers act in
    /// different variables, so the order is immaterial.
    pub fn apply_separable(
        tx: &DressedKernel,
        ty: &DressedKernel,
        u: &ComplexField2D,
    ) -> Result<ComplexField2D> {
        if u.grid().x != *tx.grid() || u.grid().y != *ty.grid() {
            return Err(Error::GridMismatch);
        }
        let rows = u.map_rows(|row| tx.apply_slice(row))?;
        rows.map_columns(|col| ty.apply_slice(col))
    }

    pub fn invert_separable(
        tx: &DressedKernel,
        ty: &DressedKernel,
        v: &ComplexField2D,
    ) -> Result<ComplexField2D> {
        if v.grid().x != *tx.grid() || v.grid().y != *ty.grid() {
            return Err(Error::GridMismatch);
        }
        let cols = v.map_columns(|col| ty.invert_slice(col))?;
        cols.map_rows(|row| tx.invert_slice(row))
    }

    pub fn apply(&self, which: Composite, w: &BicomplexField2D) -> Result<BicomplexField2D> {
        let [(sx, sy), (vx, vy)] = self.factors(which);
        let sc = Self::apply_separable(sx, sy, &w.sc())?;
        let vec = Self::apply_separable(vx, vy, &w.vec())?;
        BicomplexField2D::from_parts(&sc, &vec)
    }

    pub fn invert(&self, which: Composite, w: &BicomplexField2D) -> Result<BicomplexField2D> {
        let [(sx, sy), (vx, vy)] = self.factors(which);
        let sc = Self::invert_separable(sx, sy, &w.sc())?;
        let vec = Self::invert_separable(vx, vy, &w.vec())?;
        BicomplexField2D::from_parts(&sc, &vec)
    }

    pub fn apply_t0(&self, w: &BicomplexField2D) -> Result<BicomplexField2D> {
        self.apply(Composite::T0, w)
    }

    pub fn apply_t1(&self, w: &BicomplexField2D) -> Result<BicomplexField2D> {
        self.apply(Composite::T1, w)
    }

    /// `T₀[a zⁿ]` (or `T₁`), sampled on the set's grid.
    pub fn map_power(&self, which: Composite, a: Bicomplex, n: u32) -> Result<BicomplexField2D> {
        let w = BicomplexField2D::from_fn(self.grid(), |x, y| a * Bicomplex::point(x, y).powi(n));
        self.apply(which, &w)
    }
}
