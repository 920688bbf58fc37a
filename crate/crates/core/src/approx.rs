//! Taylor expansions in formal powers and least-squares approximation by
//! formal polynomials.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::bicomplex::{Bicomplex, C64};
use crate::dirac::PotentialData;
use crate::error::{Error, Result};
use crate::field::BicomplexField2D;
use crate::formal::{fg_derivative, Coefficient, FormalPowerSet, GeneratingSequence};
use crate::grid::{Grid2D, SymmetricGrid1D};
use crate::transmutation::{Composite, TransmutationSet};

/// `W ≈ Σ Z⁽ⁿ⁾(aₙ, 0; z)` around the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorExpansion {
    pub coefficients: Vec<Bicomplex>,
    /// `min(R₊, R₋)`; infinite when the coefficients vanish past the noise floor.
    pub radius_estimate: f64,
    pub radius_plus: f64,
    pub radius_minus: f64,
    /// Radius of the sampling circle.
    pub sample_radius: f64,
}

impl TaylorExpansion {
    pub fn center(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TaylorOptions {
    /// Nodes of the trapezoid rule on the circle.
    pub circle_points: usize,
    /// Coefficients with `|aₙ| rⁿ` below this fraction of the largest term
    /// are ignored by the radius fit.
    pub noise_floor: f64,
    /// `NotASolution` when the main-equation residual exceeds
    /// `residual_factor · h² · max(1, ‖W‖)`.
    pub residual_factor: f64,
}

impl Default for TaylorOptions {
    fn default() -> Self {
        Self {
            circle_points: 256,
            noise_floor: 1e-9,
            residual_factor: 100.0,
        }
    }
}

/// Lagrange weights for the 4-point stencil starting at `start`.
fn cubic_stencil(g: &SymmetricGrid1D, t: f64) -> (usize, [f64; 4]) {
    let n = g.len();
    let s = (t / g.step()) + g.center() as f64;
    let base = (libm::floor(s) as isize - 1).clamp(0, n as isize - 4) as usize;
    let u = s - base as f64;
    let mut w = [0.0; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        *wi = (0..4)
            .filter(|&k| k != i)
            .map(|k| (u - k as f64) / (i as f64 - k as f64))
            .product();
    }
    (base, w)
}

/// Bicubic (tensor 4-point Lagrange) interpolation; points outside the
/// grid are extrapolated from the nearest stencil.
pub fn interpolate(w: &BicomplexField2D, x: f64, y: f64) -> Bicomplex {
    let g = w.grid();
    let (bx, wx) = cubic_stencil(&g.x, x);
    let (by, wy) = cubic_stencil(&g.y, y);
    let mut acc = Bicomplex::ZERO;
    for (l, &cy) in wy.iter().enumerate() {
        let row = &w.row(by + l)[bx..bx + 4];
        let mut r = Bicomplex::ZERO;
        for (v, &cx) in row.iter().zip(&wx) {
            r += *v * cx;
        }
        acc += r * cy;
    }
    acc
}

/// Taylor coefficients of a bicomplex analytic field from its values on
/// `|z| = r`: `a⁻ₙ = (2πrⁿ)⁻¹∮ w⁻ e^{-inθ}`, `a⁺ₙ = (2πrⁿ)⁻¹∮ w⁺ e^{inθ}`.
pub fn analytic_coefficients(
    w: &BicomplexField2D,
    n_max: usize,
    r: f64,
    circle_points: usize,
) -> (Vec<Bicomplex>, Vec<C64>, Vec<C64>) {
    let m = circle_points.max(2 * n_max + 2);
    let mut plus = alloc::vec![C64::new(0.0, 0.0); n_max + 1];
    let mut minus = plus.clone();
    for s in 0..m {
        let theta = 2.0 * PI * s as f64 / m as f64;
        let (sin, cos) = libm::sincos(theta);
        let (wp, wm) = interpolate(w, r * cos, r * sin).split();
        for n in 0..=n_max {
            let e = C64::from_polar(1.0, n as f64 * theta);
            plus[n] += wp * e;
            minus[n] += wm * e.conj();
        }
    }
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let scale = 1.0 / (m as f64 * libm::pow(r, n as f64));
        plus[n] *= scale;
        minus[n] *= scale;
        coeffs.push(Bicomplex::from_split(plus[n], minus[n]));
    }
    (coeffs, plus, minus)
}

/// `R` from a log-linear fit of `|aₙ|` over the upper half of the terms
/// that clear the noise floor.
pub fn radius_from_coefficients(coeffs: &[C64], r: f64, noise_floor: f64) -> f64 {
    let terms: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(n, a)| a.norm() * libm::pow(r, n as f64))
        .collect();
    let largest = terms.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return f64::INFINITY;
    }
    let valid: Vec<usize> = (1..coeffs.len())
        .filter(|&n| terms[n] > noise_floor * largest)
        .collect();
    let tail = &valid[valid.len() / 2..];
    if tail.len() < 3 || tail.last() != valid.last() || *valid.last().unwrap() < coeffs.len() / 2 {
        return f64::INFINITY;
    }
    let k = tail.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &n in tail {
        let (x, y) = (n as f64, libm::log(coeffs[n].norm()));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    libm::exp(-slope)
}

/// Expansion of a solution `W` of the main equation: `w = T₀⁻¹W` is
/// bicomplex analytic and its Taylor coefficients are those of `W`.
pub fn taylor_coefficients(
    w: &BicomplexField2D,
    n_max: usize,
    r: f64,
    ops: &TransmutationSet,
    data: &PotentialData,
) -> Result<TaylorExpansion> {
    taylor_coefficients_with(w, n_max, r, ops, data, TaylorOptions::default())
}

pub fn taylor_coefficients_with(
    w: &BicomplexField2D,
    n_max: usize,
    r: f64,
    ops: &TransmutationSet,
    data: &PotentialData,
    opts: TaylorOptions,
) -> Result<TaylorExpansion> {
    let g = *w.grid();
    if g != data.grid || g != ops.grid() {
        return Err(Error::GridMismatch);
    }
    let limit = g.x.half_width().min(g.y.half_width());
    if !(r > 0.0 && r < limit) {
        return Err(Error::RadiusTooLarge { radius: r, limit });
    }
    let h = g.x.step().max(g.y.step());
    let residual = data.main_residual(w)?;
    let tolerance = opts.residual_factor * h * h * w.sup_norm().max(1.0);
    if residual > tolerance {
        return Err(Error::NotASolution { residual, tolerance });
    }
    let analytic = ops.invert(Composite::T0, w)?;
    let (coefficients, plus, minus) = analytic_coefficients(&analytic, n_max, r, opts.circle_points);
    let radius_plus = radius_from_coefficients(&plus, r, opts.noise_floor);
    let radius_minus = radius_from_coefficients(&minus, r, opts.noise_floor);
    Ok(TaylorExpansion {
        coefficients,
        radius_estimate: radius_plus.min(radius_minus),
        radius_plus,
        radius_minus,
        sample_radius: r,
    })
}

/// `Σ_{n ≤ N} Z⁽ⁿ⁾(aₙ, 0; z)`.
pub fn evaluate_formal_series(
    exp: &TaylorExpansion,
    powers: &FormalPowerSet,
    truncation: usize,
) -> Result<BicomplexField2D> {
    let available = powers.max_degree().min(exp.coefficients.len().saturating_sub(1));
    if truncation > available {
        return Err(Error::DegreeOutOfRange {
            requested: truncation,
            available,
        });
    }
    let mut acc = powers.power(0, exp.coefficients[0], 0)?;
    for n in 1..=truncation {
        let term = powers.power(n, exp.coefficients[n], 0)?;
        acc = acc.zip_with(&term, |a, b| a + b)?;
    }
    Ok(acc)
}

/// `W^[n](0)/n!` with `W^[m+1] = d_(F_m, G_m) W^[m] / dz` by finite
/// differences. Only trustworthy for small `n`.
pub fn derivative_coefficients(
    w: &BicomplexField2D,
    seq: &GeneratingSequence,
    n_max: usize,
) -> Result<Vec<Bicomplex>> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut current = w.clone();
    let mut factorial = 1.0;
    for n in 0..=n_max {
        if n > 0 {
            factorial *= n as f64;
            current = fg_derivative(&current, seq.pair(n - 1))?;
        }
        out.push(current.at_center() * (1.0 / factorial));
    }
    Ok(out)
}

/// Result of a least-squares fit by a formal polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct RungeFit {
    pub degree: usize,
    /// `aₙ` of `Σ Z⁽ⁿ⁾(aₙ, 0; z)`.
    pub coefficients: Vec<Bicomplex>,
    /// Root mean square of `|W - Σ|` over the sample nodes.
    pub l2_error: f64,
    pub sup_error: f64,
    /// Ratio of extreme singular values of the design matrix.
    pub condition: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("design matrix condition {condition:e} exceeds the limit; truncated solution attached")]
    IllConditioned {
        condition: f64,
        fallback: Box<RungeFit>,
    },
}

/// Condition numbers above this yield [`FitError::IllConditioned`].
pub const CONDITION_LIMIT: f64 = 1e12;

/// Grid nodes on the boundary of the centered rectangle scaled by `scale`.
pub fn boundary_nodes(grid: &Grid2D, scale: f64) -> Vec<(usize, usize)> {
    let (cx, cy) = (grid.x.center(), grid.y.center());
    let rx = libm::round(scale * cx as f64) as usize;
    let ry = libm::round(scale * cy as f64) as usize;
    let (j0, j1, l0, l1) = (cx - rx, cx + rx, cy - ry, cy + ry);
    let mut out = Vec::new();
    for j in j0..=j1 {
        out.push((j, l0));
        out.push((j, l1));
    }
    for l in l0 + 1..l1 {
        out.push((j0, l));
        out.push((j1, l));
    }
    out
}

/// Least-squares fit of `W` on `nodes` over the scalar span of
/// `{Z⁽ⁿ⁾(1), Z⁽ⁿ⁾(k)}`, `n ≤ degree`, solved by SVD.
pub fn runge_fit(
    w: &BicomplexField2D,
    nodes: &[(usize, usize)],
    powers: &FormalPowerSet,
    degree: usize,
) -> core::result::Result<RungeFit, FitError> {
    if degree > powers.max_degree() {
        return Err(Error::DegreeOutOfRange {
            requested: degree,
            available: powers.max_degree(),
        }
        .into());
    }
    let g = *w.grid();
    for &(j, l) in nodes {
        if j >= g.nx() || l >= g.ny() {
            return Err(Error::PathOffGrid(j.max(l)).into());
        }
    }
    let cols = 2 * (degree + 1);
    let rows = 2 * nodes.len();
    let mut basis = Vec::with_capacity(cols);
    for n in 0..=degree {
        for c in [Coefficient::One, Coefficient::K] {
            let z = powers.get(n, c, 0)?;
            if *z.grid() != g {
                return Err(Error::GridMismatch.into());
            }
            basis.push(z);
        }
    }
    let mut a = DMatrix::<C64>::zeros(rows, cols);
    let mut b = DVector::<C64>::zeros(rows);
    for (p, &(j, l)) in nodes.iter().enumerate() {
        for (c, z) in basis.iter().enumerate() {
            let v = z.at(j, l);
            a[(2 * p, c)] = v.sc();
            a[(2 * p + 1, c)] = v.vec();
        }
        let t = w.at(j, l);
        b[2 * p] = t.sc();
        b[2 * p + 1] = t.vec();
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    // An underdetermined system has `cols - rows` implicit zero singular values.
    let smin = if rows < cols {
        0.0
    } else {
        sv.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    let eps = if condition > CONDITION_LIMIT { smax / CONDITION_LIMIT } else { 0.0 };
    let x = svd.solve(&b, eps).expect("U and Vᴴ were requested");
    let coefficients: Vec<Bicomplex> = (0..=degree)
        .map(|n| Bicomplex::from_parts(x[2 * n], x[2 * n + 1]))
        .collect();
    let (mut sum2, mut sup) = (0.0, 0.0f64);
    for &(j, l) in nodes {
        let mut approx = Bicomplex::ZERO;
        for (c, z) in basis.iter().enumerate() {
            approx += z.at(j, l).scale(x[c]);
        }
        let e = (w.at(j, l) - approx).norm();
        sum2 += e * e;
        sup = sup.max(e);
    }
    let fit = RungeFit {
        degree,
        coefficients,
        l2_error: libm::sqrt(sum2 / nodes.len().max(1) as f64),
        sup_error: sup,
        condition,
    };
    if condition > CONDITION_LIMIT {
        return Err(FitError::IllConditioned {
            condition,
            fallback: Box::new(fit),
        });
    }
    Ok(fit)
}
