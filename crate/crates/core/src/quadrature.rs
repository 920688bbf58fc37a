//! Cumulative integration from the center node of a symmetric grid.

use alloc::vec::Vec;

use crate::field::{Field1D, Sample};

/// Rule used by [`cumulative_integral`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quadrature {
    /// Composite trapezoid, second order.
    Trapezoid,
    /// Trapezoid with the Euler–Maclaurin end correction `-(h²/12)[u']`,
    /// fourth order for smooth integrands. Exact on cubics whenever the
    /// finite-difference slope is.
    #[default]
    EndCorrected,
}

/// `v(x_j) = ∫₀^{x_j} u`, accumulated outward from the center in both
/// directions, so `v(0) = 0` and negative nodes carry the signed integral.
pub fn cumulative_integral<T: Sample>(u: &Field1D<T>) -> Field1D<T> {
    cumulative_integral_with(u, Quadrature::default())
}

pub fn cumulative_integral_with<T: Sample>(u: &Field1D<T>, rule: Quadrature) -> Field1D<T> {
    let g = *u.grid();
    let v = cumulative(u.samples(), g.center(), g.step(), rule);
    Field1D::new(g, v).expect("length preserved")
}

/// Slice form of [`cumulative_integral_with`] with an arbitrary origin index.
pub fn cumulative<T: Sample>(u: &[T], origin: usize, h: f64, rule: Quadrature) -> Vec<T> {
    let n = u.len();
    let mut v = alloc::vec![T::default(); n];
    if n == 0 {
        return v;
    }
    let half = 0.5 * h;
    for j in origin + 1..n {
        v[j] = v[j - 1] + (u[j - 1] + u[j]) * half;
    }
    for j in (0..origin).rev() {
        v[j] = v[j + 1] - (u[j] + u[j + 1]) * half;
    }
    if rule == Quadrature::EndCorrected && n >= 3 {
        let du = crate::diff::derivative(u, h);
        let c = h * h / 12.0;
        let d0 = du[origin];
        for j in 0..n {
            v[j] = v[j] - (du[j] - d0) * c;
        }
    }
    v
}
