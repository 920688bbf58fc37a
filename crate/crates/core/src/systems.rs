//! Recursive integral systems `X⁽ⁿ⁾`, `X̃⁽ⁿ⁾` and the function systems built
//! from them.
//!
//! For a nonvanishing generator `f` with `f(0) = 1`:
//!
//! ```text
//! X⁽⁰⁾ = X̃⁽⁰⁾ = 1
//! X⁽ⁿ⁾(x) = n ∫₀ˣ X⁽ⁿ⁻¹⁾ [f²]^((-1)ⁿ)
//! X̃⁽ⁿ⁾(x) = n ∫₀ˣ X̃⁽ⁿ⁻¹⁾ [f²]^((-1)ⁿ⁻¹)
//! ```
//!
//! The same code builds `Y⁽ⁿ⁾`, `Ỹ⁽ⁿ⁾` when fed `g` on the `y` grid.

use alloc::vec::Vec;

use crate::bicomplex::C64;
use crate::error::{Error, Result};
use crate::field::ComplexField1D;
use crate::quadrature::{cumulative_integral_with, Quadrature};

/// Generators closer to zero than this are rejected.
pub const DEFAULT_VANISHING_EPS: f64 = 1e-12;
/// Allowed deviation of `f(0)` from one.
pub const NORMALIZATION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemOptions {
    pub vanishing_eps: f64,
    pub quadrature: Quadrature,
}

impl Default for SystemOptions {
    fn default() -> Self {
        Self {
            vanishing_eps: DEFAULT_VANISHING_EPS,
            quadrature: Quadrature::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct XSystems {
    pub direct: Vec<ComplexField1D>,
    pub tilde: Vec<ComplexField1D>,
}

impl XSystems {
    pub fn n_max(&self) -> usize {
        self.direct.len() - 1
    }

    /// Systems of `1/f`: raising `1/f²` flips every exponent, so the direct
    /// and tilde families trade places.
    pub fn reciprocal(&self) -> Self {
        Self {
            direct: self.tilde.clone(),
            tilde: self.direct.clone(),
        }
    }

    /// The factor multiplying `f` in `φ_k`: `X⁽ᵏ⁾` for odd `k`, `X̃⁽ᵏ⁾` for even.
    pub fn phi_factor(&self, k: usize) -> &ComplexField1D {
        if k % 2 == 1 {
            &self.direct[k]
        } else {
            &self.tilde[k]
        }
    }

    /// The factor multiplying `1/f` in `φ̃_k`: `X⁽ᵏ⁾` for even `k`, `X̃⁽ᵏ⁾` for odd.
    pub fn phi_tilde_factor(&self, k: usize) -> &ComplexField1D {
        if k.is_multiple_of(2) {
            &self.direct[k]
        } else {
            &self.tilde[k]
        }
    }
}

/// Rejects generators that vanish or are not normalized at the origin.
pub fn check_generator(f: &ComplexField1D, vanishing_eps: f64) -> Result<()> {
    for (index, v) in f.samples().iter().enumerate() {
        let magnitude = v.norm();
        if !(magnitude >= vanishing_eps) {
            return Err(Error::VanishingGenerator { index, magnitude });
        }
    }
    let dev = (f.at_center() - C64::new(1.0, 0.0)).norm();
    if dev > NORMALIZATION_TOL {
        return Err(Error::Unnormalized(dev));
    }
    Ok(())
}

pub fn build_x_systems(f: &ComplexField1D, n_max: usize) -> Result<XSystems> {
    build_x_systems_with(f, n_max, SystemOptions::default())
}

pub fn build_x_systems_with(
    f: &ComplexField1D,
    n_max: usize,
    opts: SystemOptions,
) -> Result<XSystems> {
    check_generator(f, opts.vanishing_eps)?;
    let f2 = f.map(|v| v * v);
    let f2_inv = f2.map(|v| v.inv());
    let one = ComplexField1D::constant(*f.grid(), C64::new(1.0, 0.0));
    let mut direct = Vec::with_capacity(n_max + 1);
    let mut tilde = Vec::with_capacity(n_max + 1);
    direct.push(one.clone());
    tilde.push(one);
    for n in 1..=n_max {
        let (w_direct, w_tilde) = if n % 2 == 0 { (&f2, &f2_inv) } else { (&f2_inv, &f2) };
        let scale = n as f64;
        let next = |prev: &ComplexField1D, weight: &ComplexField1D| -> ComplexField1D {
            let integrand = prev.zip_with(weight, |a, b| a * b * scale).expect("same grid");
            cumulative_integral_with(&integrand, opts.quadrature)
        };
        let d = next(&direct[n - 1], w_direct);
        let t = next(&tilde[n - 1], w_tilde);
        direct.push(d);
        tilde.push(t);
    }
    Ok(XSystems { direct, tilde })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemVariant {
    /// `φ_k = f X⁽ᵏ⁾` (odd `k`), `f X̃⁽ᵏ⁾` (even `k`).
    Phi,
    /// `φ̃_k = X⁽ᵏ⁾/f` (even `k`), `X̃⁽ᵏ⁾/f` (odd `k`).
    PhiTilde,
}

/// `φ_0..φ_{n_max}` or `φ̃_0..φ̃_{n_max}`. Feeding `g` on the `y` grid gives
/// the `ψ` and `ψ̃` systems.
pub fn build_function_system(
    f: &ComplexField1D,
    n_max: usize,
    variant: SystemVariant,
) -> Result<Vec<ComplexField1D>> {
    let xs = build_x_systems(f, n_max)?;
    Ok(function_system_from(f, &xs, variant))
}

pub fn function_system_from(
    f: &ComplexField1D,
    xs: &XSystems,
    variant: SystemVariant,
) -> Vec<ComplexField1D> {
    (0..=xs.n_max())
        .map(|k| match variant {
            SystemVariant::Phi => f.mul(xs.phi_factor(k)).expect("same grid"),
            SystemVariant::PhiTilde => xs
                .phi_tilde_factor(k)
                .zip_with(f, |x, fv| x / fv)
                .expect("same grid"),
        })
        .collect()
}
