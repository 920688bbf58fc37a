//! The commutative algebra spanned by `1, i, k, ik` with `i² = k² = -1`.
//!
//! A value is stored as four reals `(re, im_i, im_k, im_ik)` and read as
//! `w = u + k v` with `u = re + i im_i` and `v = im_k + i im_ik`, both
//! complex numbers in the unit `i`. The scalar/vector view `(u, v)` and the
//! idempotent view `(w⁺, w⁻) = (u - i v, u + i v)` are conversions only.

use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex number in the unit `i`.
pub type C64 = Complex64;

const I: C64 = C64::new(0.0, 1.0);

#[derive(Clone, Copy, Default, PartialEq)]
pub struct Bicomplex {
    pub re: f64,
    pub im_i: f64,
    pub im_k: f64,
    pub im_ik: f64,
}

impl Bicomplex {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const IK: Self = Self::new(0.0, 0.0, 0.0, 1.0);
    /// `½(1 + ik)`; multiplies the antiholomorphic component.
    pub const P_PLUS: Self = Self::new(0.5, 0.0, 0.0, 0.5);
    /// `½(1 - ik)`; multiplies the holomorphic component.
    pub const P_MINUS: Self = Self::new(0.5, 0.0, 0.0, -0.5);

    pub const fn new(re: f64, im_i: f64, im_k: f64, im_ik: f64) -> Self {
        Self { re, im_i, im_k, im_ik }
    }

    /// Builds `u + k v`.
    pub const fn from_parts(u: C64, v: C64) -> Self {
        Self::new(u.re, u.im, v.re, v.im)
    }

    pub const fn scalar(u: C64) -> Self {
        Self::new(u.re, u.im, 0.0, 0.0)
    }

    pub const fn real(x: f64) -> Self {
        Self::new(x, 0.0, 0.0, 0.0)
    }

    /// `x + k y`, the bicomplex coordinate of the point `(x, y)`.
    pub const fn point(x: f64, y: f64) -> Self {
        Self::new(x, 0.0, y, 0.0)
    }

    /// `Sc w = u`.
    #[inline]
    pub fn sc(self) -> C64 {
        C64::new(self.re, self.im_i)
    }

    /// `Vec w = v`.
    #[inline]
    pub fn vec(self) -> C64 {
        C64::new(self.im_k, self.im_ik)
    }

    /// Conjugation in `k`: `u - k v`.
    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.re, self.im_i, -self.im_k, -self.im_ik)
    }

    /// Idempotent components `(w⁺, w⁻) = (u - i v, u + i v)`.
    #[inline]
    pub fn split(self) -> (C64, C64) {
        let (u, v) = (self.sc(), self.vec());
        (u - I * v, u + I * v)
    }

    /// Inverse of [`split`](Self::split): `½(w⁺ + w⁻) + k (i/2)(w⁺ - w⁻)`.
    #[inline]
    pub fn from_split(plus: C64, minus: C64) -> Self {
        Self::from_parts((plus + minus) * 0.5, I * (plus - minus) * 0.5)
    }

    /// `k^m` taken exactly from the cycle `1, k, -1, -k`.
    pub const fn k_pow(m: usize) -> Self {
        match m % 4 {
            0 => Self::ONE,
            1 => Self::K,
            2 => Self::new(-1.0, 0.0, 0.0, 0.0),
            _ => Self::new(0.0, 0.0, -1.0, 0.0),
        }
    }

    /// Multiplication by `k`: `k(u + k v) = -v + k u`.
    #[inline]
    pub fn mul_k(self) -> Self {
        Self::new(-self.im_k, -self.im_ik, self.re, self.im_i)
    }

    /// Product with a scalar in `C_i`.
    #[inline]
    pub fn scale(self, s: C64) -> Self {
        Self::from_parts(s * self.sc(), s * self.vec())
    }

    pub fn is_invertible(self) -> bool {
        let (p, m) = self.split();
        p != C64::new(0.0, 0.0) && m != C64::new(0.0, 0.0)
    }

    /// Multiplicative inverse, computed componentwise in the idempotent basis.
    pub fn inv(self) -> Result<Self> {
        let (p, m) = self.split();
        if p.norm_sqr() == 0.0 || m.norm_sqr() == 0.0 {
            return Err(Error::ZeroDivisor {
                plus: p.norm(),
                minus: m.norm(),
            });
        }
        // u² + v² = w⁺w⁻, so 1/w = (u - k v)/(u² + v²) keeps (u, v) arithmetic.
        let det = p * m;
        let r = det.inv();
        Ok(Self::from_parts(self.sc() * r, -self.vec() * r))
    }

    pub fn div(self, rhs: Self) -> Result<Self> {
        Ok(self * rhs.inv()?)
    }

    /// Euclidean norm of the four real components.
    pub fn norm(self) -> f64 {
        libm::sqrt(
            self.re * self.re + self.im_i * self.im_i + self.im_k * self.im_k + self.im_ik * self.im_ik,
        )
    }

    /// `|u| + |v|`, the norm used for operator bounds.
    pub fn norm_sum(self) -> f64 {
        self.sc().norm() + self.vec().norm()
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im_i.is_finite() && self.im_k.is_finite() && self.im_ik.is_finite()
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, n: u32) -> Self {
        let mut acc = Self::ONE;
        let mut base = self;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl fmt::Debug for Bicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}i + {}k + {}ik)", self.re, self.im_i, self.im_k, self.im_ik)
    }
}

impl fmt::Display for Bicomplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<f64> for Bicomplex {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl From<C64> for Bicomplex {
    fn from(u: C64) -> Self {
        Self::scalar(u)
    }
}

impl Add for Bicomplex {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im_i + o.im_i, self.im_k + o.im_k, self.im_ik + o.im_ik)
    }
}

impl Sub for Bicomplex {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im_i - o.im_i, self.im_k - o.im_k, self.im_ik - o.im_ik)
    }
}

impl Neg for Bicomplex {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im_i, -self.im_k, -self.im_ik)
    }
}

impl Mul for Bicomplex {
    type Output = Self;
    /// `(u₁ + k v₁)(u₂ + k v₂) = u₁u₂ - v₁v₂ + k(u₁v₂ + v₁u₂)`.
    #[inline]
    fn mul(self, o: Self) -> Self {
        let (u1, v1) = (self.sc(), self.vec());
        let (u2, v2) = (o.sc(), o.vec());
        Self::from_parts(u1 * u2 - v1 * v2, u1 * v2 + v1 * u2)
    }
}

impl Mul<f64> for Bicomplex {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.re * s, self.im_i * s, self.im_k * s, self.im_ik * s)
    }
}

impl Mul<Bicomplex> for f64 {
    type Output = Bicomplex;
    #[inline]
    fn mul(self, w: Bicomplex) -> Bicomplex {
        w * self
    }
}

impl Mul<C64> for Bicomplex {
    type Output = Self;
    #[inline]
    fn mul(self, s: C64) -> Self {
        self.scale(s)
    }
}

impl AddAssign for Bicomplex {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Bicomplex {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl MulAssign for Bicomplex {
    #[inline]
    fn mul_assign(&mut self, o: Self) {
        *self = *self * o;
    }
}

impl core::iter::Sum for Bicomplex {
    fn sum<It: Iterator<Item = Self>>(iter: It) -> Self {
        iter.fold(Self::ZERO, Add::add)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn defining_relations() {
        assert_eq!(Bicomplex::K * Bicomplex::K, -Bicomplex::ONE);
        assert_eq!(Bicomplex::I * Bicomplex::I, -Bicomplex::ONE);
        assert_eq!(Bicomplex::I * Bicomplex::K, Bicomplex::K * Bicomplex::I);
        assert_eq!(Bicomplex::I * Bicomplex::K, Bicomplex::IK);
        let one_plus_k = Bicomplex::ONE + Bicomplex::K;
        let one_minus_k = Bicomplex::ONE - Bicomplex::K;
        assert_eq!(one_plus_k * one_minus_k, Bicomplex::real(2.0));
    }

    #[test]
    fn idempotents_annihilate() {
        assert_eq!(Bicomplex::P_PLUS * Bicomplex::P_MINUS, Bicomplex::ZERO);
        assert_eq!(Bicomplex::P_PLUS * Bicomplex::P_PLUS, Bicomplex::P_PLUS);
        assert_eq!(Bicomplex::P_MINUS * Bicomplex::P_MINUS, Bicomplex::P_MINUS);
        assert_eq!(Bicomplex::P_PLUS + Bicomplex::P_MINUS, Bicomplex::ONE);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(Bicomplex::real(2.0).inv().unwrap(), Bicomplex::real(0.5));
        let w = Bicomplex::ONE + Bicomplex::K;
        assert_eq!(w.inv().unwrap(), (Bicomplex::ONE - Bicomplex::K) * 0.5);
        assert!(matches!(Bicomplex::P_PLUS.inv(), Err(Error::ZeroDivisor { .. })));
        assert!(matches!(Bicomplex::P_MINUS.inv(), Err(Error::ZeroDivisor { .. })));
        assert!(!Bicomplex::P_PLUS.is_invertible());
    }

    #[test]
    fn split_examples() {
        assert_eq!(Bicomplex::ONE.split(), (c(1.0, 0.0), c(1.0, 0.0)));
        assert_eq!(Bicomplex::K.split(), (c(0.0, -1.0), c(0.0, 1.0)));
        assert_eq!(Bicomplex::I.split(), (c(0.0, 1.0), c(0.0, 1.0)));
        let w = Bicomplex::new(3.0, -2.0, 5.0, 7.0);
        let (p, m) = w.split();
        assert_eq!(Bicomplex::from_split(p, m), w);
    }

    #[test]
    fn sc_vec_decomposition() {
        let w = Bicomplex::new(1.5, -0.25, 2.0, 4.0);
        let back = Bicomplex::scalar(w.sc()) + Bicomplex::scalar(w.vec()).mul_k();
        assert_eq!(back, w);
        assert_eq!(w.conj().sc(), w.sc());
        assert_eq!(w.conj().vec(), -w.vec());
    }

    #[test]
    fn k_cycle() {
        let mut acc = Bicomplex::ONE;
        for m in 0..9 {
            assert_eq!(Bicomplex::k_pow(m), acc);
            acc *= Bicomplex::K;
        }
        let z = Bicomplex::point(0.5, -1.25);
        assert_eq!(z.powi(3), z * z * z);
    }
}
