//! Fields derived from a Dirac potential `(p, m, ω)`: the generators
//! `f = e^{P + mx}`, `g = e^{iωy}`, `φ = f g`, Schrödinger potentials,
//! the `Ā` line-integral operator and the `W₁ ↔ W₂` transfer.

use alloc::vec::Vec;

use crate::bicomplex::{Bicomplex, C64};
use crate::diff::dbar_scalar;
use crate::error::{Error, Result};
use crate::field::{BicomplexField2D, ComplexField1D, ComplexField2D};
use crate::goursat::PicardOptions;
use crate::grid::Grid2D;
pub use crate::path::PathOrder;
use crate::path::{l_path, l_path_integral, polyline_integral};
use crate::quadrature::{cumulative, Quadrature};
use crate::transmutation::{transmutation_for, TransmutationSet};

/// The potential `p(x)`.
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialKind {
    Zero,
    Constant(f64),
    /// `p(x) = c x`
    Linear(f64),
    /// `p(x) = Σ cᵢ xⁱ`, lowest degree first.
    Polynomial(Vec<f64>),
    /// Sampled `p` on the `x` grid; `dp` must be supplied.
    Table {
        p: ComplexField1D,
        dp: Option<ComplexField1D>,
    },
}

impl PotentialKind {
    fn coefficients(&self) -> Option<Vec<f64>> {
        match self {
            Self::Zero => Some(Vec::new()),
            Self::Constant(c) => Some(alloc::vec![*c]),
            Self::Linear(c) => Some(alloc::vec![0.0, *c]),
            Self::Polynomial(c) => Some(c.clone()),
            Self::Table { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    pub p: PotentialKind,
    pub m: f64,
    pub omega: f64,
    pub domain: Grid2D,
}

impl PotentialSpec {
    pub fn new(p: PotentialKind, m: f64, omega: f64, domain: Grid2D) -> Self {
        Self { p, m, omega, domain }
    }

    /// `p = 0, m = 0, ω = 0`.
    pub fn free(domain: Grid2D) -> Self {
        Self::new(PotentialKind::Zero, 0.0, 0.0, domain)
    }

    /// Tabulated `p(x) = A sin(κx)` with its exact derivative.
    pub fn sine(amplitude: f64, wavenumber: f64, m: f64, omega: f64, domain: Grid2D) -> Self {
        let gx = domain.x;
        let p = ComplexField1D::from_fn(gx, |x| C64::new(amplitude * libm::sin(wavenumber * x), 0.0));
        let dp = ComplexField1D::from_fn(gx, |x| {
            C64::new(amplitude * wavenumber * libm::cos(wavenumber * x), 0.0)
        });
        Self::new(PotentialKind::Table { p, dp: Some(dp) }, m, omega, domain)
    }
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * x + ci)
}

fn poly_derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(i, &ci)| i as f64 * ci).collect()
}

fn poly_antiderivative(c: &[f64]) -> Vec<f64> {
    let mut out = alloc::vec![0.0];
    out.extend(c.iter().enumerate().map(|(i, &ci)| ci / (i + 1) as f64));
    out
}

/// Everything downstream code needs from a potential.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialData {
    pub grid: Grid2D,
    pub m: f64,
    pub omega: f64,
    pub p: ComplexField1D,
    pub dp: ComplexField1D,
    /// Antiderivative of `p` with `P(0) = 0`.
    pub big_p: ComplexField1D,
    pub f: ComplexField1D,
    pub g: ComplexField1D,
    pub inv_f: ComplexField1D,
    pub inv_g: ComplexField1D,
    pub phi: BicomplexField2D,
    /// `f''/f = p' + (p+m)²`
    pub q: ComplexField1D,
    /// `(1/f)''/(1/f) = -p' + (p+m)²`
    pub q_recip: ComplexField1D,
    /// `g''/g = -ω²`, also the potential of `1/g`.
    pub q_tilde: ComplexField1D,
    pub nu: ComplexField1D,
    pub mu: ComplexField1D,
    /// `f'(0) = p(0) + m`
    pub slope_f: C64,
    /// `g'(0) = iω`
    pub slope_g: C64,
}

/// Builds `f, g, φ, q, q̃, ν, μ` from a potential spec. Polynomial kinds use
/// the exact antiderivative; tables use the trapezoid with an end
/// correction from the supplied `p'`.
pub fn derive_potential_data(spec: &PotentialSpec) -> Result<PotentialData> {
    let gx = spec.domain.x;
    let gy = spec.domain.y;
    let (p, dp, big_p) = match spec.p.coefficients() {
        Some(c) => {
            let dc = poly_derivative(&c);
            let ic = poly_antiderivative(&c);
            let real = |coeffs: Vec<f64>| ComplexField1D::from_fn(gx, move |x| C64::new(poly_eval(&coeffs, x), 0.0));
            (real(c), real(dc), real(ic))
        }
        None => {
            let PotentialKind::Table { p, dp } = &spec.p else {
                unreachable!("only tables lack coefficients")
            };
            let dp = dp.as_ref().ok_or(Error::DerivativeMissing)?;
            if *p.grid() != gx || *dp.grid() != gx {
                return Err(Error::GridMismatch);
            }
            for (i, v) in p.samples().iter().chain(dp.samples()).enumerate() {
                if v.im != 0.0 {
                    return Err(Error::NonRealPotential(i % gx.len()));
                }
            }
            let c = gx.center();
            let h = gx.step();
            let mut big = cumulative(p.samples(), c, h, Quadrature::Trapezoid);
            let d0 = dp.samples()[c];
            for (v, &d) in big.iter_mut().zip(dp.samples()) {
                *v -= (d - d0) * (h * h / 12.0);
            }
            (p.clone(), dp.clone(), ComplexField1D::new(gx, big)?)
        }
    };
    let m = spec.m;
    let omega = spec.omega;
    let exponent = big_p.zip_with(&ComplexField1D::from_fn(gx, |x| C64::new(m * x, 0.0)), |a, b| a + b)?;
    let f = exponent.map(|e| e.exp());
    let inv_f = exponent.map(|e| (-e).exp());
    let g = ComplexField1D::from_fn(gy, |y| C64::new(0.0, omega * y).exp());
    let inv_g = ComplexField1D::from_fn(gy, |y| C64::new(0.0, -omega * y).exp());
    let phi = BicomplexField2D::outer(&f, &g, |a, b| Bicomplex::scalar(a * b));
    let pm2 = p.map(|v| (v + m) * (v + m));
    let q = pm2.zip_with(&dp, |a, d| a + d)?;
    let q_recip = pm2.zip_with(&dp, |a, d| a - d)?;
    let w2 = C64::new(omega * omega, 0.0);
    let q_tilde = ComplexField1D::constant(gy, -w2);
    let nu = q.map(|v| v - w2);
    let mu = q_recip.map(|v| v - w2);
    let slope_f = p.at_center() + m;
    let slope_g = C64::new(0.0, omega);
    Ok(PotentialData {
        grid: spec.domain,
        m,
        omega,
        p,
        dp,
        big_p,
        f,
        g,
        inv_f,
        inv_g,
        phi,
        q,
        q_recip,
        q_tilde,
        nu,
        mu,
        slope_f,
        slope_g,
    })
}

impl PotentialData {
    /// `∂̄φ/φ = ½((p+m) + k iω)`, evaluated from the data rather than by
    /// differencing `φ`.
    pub fn dbar_log_phi(&self) -> BicomplexField2D {
        self.log_phi_derivative(1.0)
    }

    /// `∂φ/φ = ½((p+m) - k iω)`.
    pub fn d_log_phi(&self) -> BicomplexField2D {
        self.log_phi_derivative(-1.0)
    }

    fn log_phi_derivative(&self, sign: f64) -> BicomplexField2D {
        let iw = self.slope_g * sign;
        let m = self.m;
        BicomplexField2D::outer(&self.p, &self.g, |p, _| {
            Bicomplex::from_parts((p + m) * 0.5, iw * 0.5)
        })
    }

    /// `8 ∂̄φ ∂φ / φ² - ν` with both Wirtinger derivatives by finite
    /// differences; equals `μ` up to `O(h²)`.
    pub fn mu_from_phi(&self) -> Result<ComplexField2D> {
        let db = crate::diff::dbar(&self.phi);
        let dd = crate::diff::d(&self.phi);
        let nu = self.nu_field();
        let mut out = Vec::with_capacity(nu.samples().len());
        for (i, n) in nu.samples().iter().enumerate() {
            let p = self.phi.samples()[i];
            let r = (db.samples()[i] * dd.samples()[i] * 8.0).div(p * p)?;
            out.push(r.sc() - *n);
        }
        ComplexField2D::new(self.grid, out)
    }

    /// `ν(x)` broadcast over the 2-D grid.
    pub fn nu_field(&self) -> ComplexField2D {
        self.broadcast(&self.nu)
    }

    pub fn mu_field(&self) -> ComplexField2D {
        self.broadcast(&self.mu)
    }

    fn broadcast(&self, v: &ComplexField1D) -> ComplexField2D {
        ComplexField2D::outer(v, &self.g, |a, _| a)
    }

    /// The four Volterra operators behind `T₀` and `T₁`.
    pub fn transmutations(&self, opts: PicardOptions) -> Result<TransmutationSet> {
        Ok(TransmutationSet {
            f: transmutation_for(&self.q, self.slope_f, opts)?,
            inv_f: transmutation_for(&self.q_recip, -self.slope_f, opts)?,
            g: transmutation_for(&self.q_tilde, self.slope_g, opts)?,
            inv_g: transmutation_for(&self.q_tilde, -self.slope_g, opts)?,
        })
    }

    /// Main-equation residual `‖∂̄W - (∂̄φ/φ) W̄‖` over interior nodes.
    pub fn main_residual(&self, w: &BicomplexField2D) -> Result<f64> {
        vekua_residual(w, None, &self.dbar_log_phi())
    }

    /// As [`Self::main_residual`], skipping `margin` boundary layers. Fields
    /// that were themselves produced by differencing carry an `O(h)` seam
    /// next to the boundary, where one-sided and central errors meet; a
    /// margin of 2 excludes it.
    pub fn main_residual_inside(&self, w: &BicomplexField2D, margin: usize) -> Result<f64> {
        Ok(vekua_defect(w, None, &self.dbar_log_phi())?.sup_inside(margin))
    }

    /// Succeeding-equation residual `‖∂̄W + (∂φ/φ) W̄‖`.
    pub fn succeeding_residual(&self, w: &BicomplexField2D) -> Result<f64> {
        let b = self.d_log_phi().map(|v| -v);
        vekua_residual(w, None, &b)
    }
}

/// `max |∂̄W - aW - bW̄|` over interior nodes; `a = None` means `a = 0`.
pub fn vekua_residual(
    w: &BicomplexField2D,
    a: Option<&BicomplexField2D>,
    b: &BicomplexField2D,
) -> Result<f64> {
    Ok(vekua_defect(w, a, b)?.interior_sup())
}

/// Nodewise `∂̄W - aW - bW̄`.
pub fn vekua_defect(
    w: &BicomplexField2D,
    a: Option<&BicomplexField2D>,
    b: &BicomplexField2D,
) -> Result<BicomplexField2D> {
    if w.grid() != b.grid() || a.is_some_and(|a| a.grid() != w.grid()) {
        return Err(Error::GridMismatch);
    }
    let db = crate::diff::wirtinger_fd(w, crate::diff::Wirtinger::Dbar)?;
    let mut out = Vec::with_capacity(w.samples().len());
    for i in 0..w.samples().len() {
        let wv = w.samples()[i];
        let mut r = db.samples()[i] - b.samples()[i] * wv.conj();
        if let Some(a) = a {
            r -= a.samples()[i] * wv;
        }
        out.push(r);
    }
    BicomplexField2D::new(*w.grid(), out)
}

/// `max |-Δu + q(x) u|` over interior nodes, five-point Laplacian.
pub fn schrodinger_residual(u: &ComplexField2D, potential: &ComplexField1D) -> Result<f64> {
    let g = *u.grid();
    if *potential.grid() != g.x {
        return Err(Error::GridMismatch);
    }
    let (hx, hy) = (g.x.step(), g.y.step());
    let q = potential.samples();
    let mut worst: f64 = 0.0;
    for l in 1..g.ny() - 1 {
        for j in 1..g.nx() - 1 {
            let c = u.at(j, l);
            let uxx = (u.at(j + 1, l) - c * 2.0 + u.at(j - 1, l)) / (hx * hx);
            let uyy = (u.at(j, l + 1) - c * 2.0 + u.at(j, l - 1)) / (hy * hy);
            worst = worst.max((-(uxx + uyy) + q[j] * c).norm());
        }
    }
    Ok(worst)
}

/// Tolerance for the discrete curl of the argument of `Ā`. Sampled
/// gradients carry an `O(h²)` curl, so the bound is
/// `max(floor, coefficient · h²) · ‖w‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityTolerance {
    pub floor: f64,
    pub coefficient: f64,
}

impl Default for CompatibilityTolerance {
    fn default() -> Self {
        Self {
            floor: 1e-6,
            coefficient: 50.0,
        }
    }
}

impl CompatibilityTolerance {
    pub fn bound(&self, grid: &Grid2D, norm: f64) -> f64 {
        let h = grid.x.step().max(grid.y.step());
        self.floor.max(self.coefficient * h * h) * norm.max(f64::MIN_POSITIVE)
    }
}

/// `max |∂w₁/∂y - ∂w₂/∂x|`, `w₁ = Sc w`, `w₂ = Vec w`, over nodes at least
/// two layers inside. Arguments of `Ā` are usually finite-difference
/// gradients, whose error has an `O(h²)` jump at the boundary layer.
pub fn curl_defect(w: &BicomplexField2D) -> f64 {
    let w1y = w.sc().dy();
    let w2x = w.vec().dx();
    w1y.zip_with(&w2x, |a, b| a - b).expect("same grid").sup_inside(2)
}

fn check_compatible(w: &BicomplexField2D, tol: CompatibilityTolerance) -> Result<()> {
    let curl = curl_defect(w);
    let tolerance = tol.bound(w.grid(), w.sup_norm());
    if curl > tolerance {
        return Err(Error::NotCompatible { curl, tolerance });
    }
    Ok(())
}

/// `Āw = 2∫(w₁ dx + w₂ dy)` from the origin to node `(j, l)`.
pub fn abar(
    w: &BicomplexField2D,
    node: (usize, usize),
    order: PathOrder,
    tol: CompatibilityTolerance,
) -> Result<C64> {
    let g = *w.grid();
    check_compatible(w, tol)?;
    Ok(polyline_integral(&w.sc(), &w.vec(), &l_path(&g, node, order))? * 2.0)
}

/// `Āw` at every node.
pub fn abar_field(
    w: &BicomplexField2D,
    order: PathOrder,
    tol: CompatibilityTolerance,
) -> Result<ComplexField2D> {
    check_compatible(w, tol)?;
    Ok(l_path_integral(&w.sc(), &w.vec(), order)?.map(|v| v * 2.0))
}

fn warn_if_not_schrodinger(u: &ComplexField2D, potential: &ComplexField1D, label: &str) -> Result<()> {
    let res = schrodinger_residual(u, potential)?;
    let h = u.grid().x.step().max(u.grid().y.step());
    let bound = 100.0 * h * h * u.sup_norm().max(1.0);
    if res > bound {
        log::warn!("{label}: Schrödinger residual {res:e} exceeds {bound:e}");
    }
    Ok(())
}

/// Given a solution `W₁` of `(-Δ + ν)W₁ = 0`, returns
/// `W₂ = (1/φ) Ā(k φ² ∂̄(W₁/φ)) + c₁/φ` so that `W₁ + k W₂` solves the main
/// Vekua equation.
pub fn transfer_w1_to_w2(
    w1: &ComplexField2D,
    data: &PotentialData,
    c1: C64,
    tol: CompatibilityTolerance,
) -> Result<ComplexField2D> {
    if *w1.grid() != data.grid {
        return Err(Error::GridMismatch);
    }
    warn_if_not_schrodinger(w1, &data.nu, "transfer W1 -> W2")?;
    let phi = data.phi.sc();
    let s = w1.zip_with(&phi, |w, p| w / p)?;
    let arg = dbar_scalar(&s)
        .zip_with(&phi, |d, p| (d * (p * p)).mul_k())?;
    let a = abar_field(&arg, PathOrder::default(), tol)?;
    a.zip_with(&phi, |v, p| (v + c1) / p)
}

/// Given a solution `W₂` of `(-Δ + μ)W₂ = 0`, returns
/// `W₁ = -φ Ā((k/φ²) ∂̄(φ W₂)) + c₂ φ`.
pub fn transfer_w2_to_w1(
    w2: &ComplexField2D,
    data: &PotentialData,
    c2: C64,
    tol: CompatibilityTolerance,
) -> Result<ComplexField2D> {
    if *w2.grid() != data.grid {
        return Err(Error::GridMismatch);
    }
    warn_if_not_schrodinger(w2, &data.mu, "transfer W2 -> W1")?;
    let phi = data.phi.sc();
    let s = w2.zip_with(&phi, |w, p| w * p)?;
    let arg = dbar_scalar(&s)
        .zip_with(&phi, |d, p| (d * (p * p).inv()).mul_k())?;
    let a = abar_field(&arg, PathOrder::default(), tol)?;
    a.zip_with(&phi, |v, p| (c2 - v) * p)
}
