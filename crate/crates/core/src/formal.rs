//! Generating pairs, the `(F, G)` calculus and formal powers centered at the
//! origin.

use alloc::vec::Vec;

use crate::bicomplex::{Bicomplex, C64};
use crate::diff::{wirtinger_fd, Wirtinger};
use crate::dirac::PotentialData;
use crate::error::{Error, Result};
use crate::field::{BicomplexField2D, ComplexField1D, ComplexField2D};
use crate::path::{l_path, l_path_integral, polyline_integral, PathOrder};
use crate::systems::{build_x_systems, XSystems};
use crate::transmutation::{Composite, TransmutationSet};

/// Pairs with `|Vec(F̄G)|` below this are rejected.
pub const DEGENERACY_EPS: f64 = 1e-10;

/// `(F, G)` with `Vec(F̄G) ≠ 0` and its characteristic coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingPair {
    pub f: BicomplexField2D,
    pub g: BicomplexField2D,
    pub a: BicomplexField2D,
    pub b: BicomplexField2D,
    pub big_a: BicomplexField2D,
    pub big_b: BicomplexField2D,
}

/// `FḠ - F̄G = -2k Vec(F̄G)` nodewise, or `DegeneratePair`.
fn determinant(f: &BicomplexField2D, g: &BicomplexField2D) -> Result<BicomplexField2D> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let mut out = Vec::with_capacity(f.samples().len());
    for (index, (&fv, &gv)) in f.samples().iter().zip(g.samples()).enumerate() {
        let v = (fv.conj() * gv).vec();
        if v.norm() < DEGENERACY_EPS {
            return Err(Error::DegeneratePair {
                index,
                magnitude: v.norm(),
            });
        }
        out.push(Bicomplex::from_parts(C64::new(0.0, 0.0), v * -2.0));
    }
    BicomplexField2D::new(*f.grid(), out)
}

/// `(a, b, A, B)` from the quotient formulas, with `∂̄` and `∂` by finite
/// differences.
pub fn characteristic_coefficients(
    f: &BicomplexField2D,
    g: &BicomplexField2D,
) -> Result<[BicomplexField2D; 4]> {
    let det = determinant(f, g)?;
    let fb = wirtinger_fd(f, Wirtinger::Dbar)?;
    let gb = wirtinger_fd(g, Wirtinger::Dbar)?;
    let fd = wirtinger_fd(f, Wirtinger::D)?;
    let gd = wirtinger_fd(g, Wirtinger::D)?;
    let n = f.samples().len();
    let mut out: [Vec<Bicomplex>; 4] = core::array::from_fn(|_| Vec::with_capacity(n));
    for i in 0..n {
        let (fv, gv) = (f.samples()[i], g.samples()[i]);
        let inv = det.samples()[i].inv()?;
        let (fc, gc) = (fv.conj(), gv.conj());
        let (dbf, dbg) = (fb.samples()[i], gb.samples()[i]);
        let (ddf, ddg) = (fd.samples()[i], gd.samples()[i]);
        out[0].push(-(fc * dbg - gc * dbf) * inv);
        out[1].push((fv * dbg - gv * dbf) * inv);
        out[2].push(-(fc * ddg - gc * ddf) * inv);
        out[3].push((fv * ddg - gv * ddf) * inv);
    }
    let grid = *f.grid();
    let [a, b, big_a, big_b] = out;
    Ok([
        BicomplexField2D::new(grid, a)?,
        BicomplexField2D::new(grid, b)?,
        BicomplexField2D::new(grid, big_a)?,
        BicomplexField2D::new(grid, big_b)?,
    ])
}

impl GeneratingPair {
    pub fn new(f: BicomplexField2D, g: BicomplexField2D) -> Result<Self> {
        let [a, b, big_a, big_b] = characteristic_coefficients(&f, &g)?;
        Ok(Self {
            f,
            g,
            a,
            b,
            big_a,
            big_b,
        })
    }

    /// `(φ, k/φ)` for a nonvanishing `C_i`-valued `φ`.
    pub fn from_phi(phi: &ComplexField2D) -> Result<Self> {
        let f = phi.to_bicomplex();
        let g = phi.map(|p| Bicomplex::from_parts(C64::new(0.0, 0.0), p.inv()));
        Self::new(f, g)
    }

    /// `F*` and `G*`.
    pub fn adjoint(&self) -> Result<(BicomplexField2D, BicomplexField2D)> {
        adjoint_pair(&self.f, &self.g)
    }

    /// `λ, μ` scalar with `λ F(center) + μ G(center) = α`.
    pub fn center_coordinates(&self, alpha: Bicomplex) -> (C64, C64) {
        let fc = self.f.at_center();
        let gc = self.g.at_center();
        let det = fc.sc() * gc.vec() - gc.sc() * fc.vec();
        let lambda = (alpha.sc() * gc.vec() - gc.sc() * alpha.vec()) / det;
        let mu = (fc.sc() * alpha.vec() - alpha.sc() * fc.vec()) / det;
        (lambda, mu)
    }
}

/// `F* = -2F̄/(FḠ - F̄G)`, `G* = 2Ḡ/(FḠ - F̄G)`.
pub fn adjoint_pair(
    f: &BicomplexField2D,
    g: &BicomplexField2D,
) -> Result<(BicomplexField2D, BicomplexField2D)> {
    let det = determinant(f, g)?;
    let mut fs = Vec::with_capacity(det.samples().len());
    let mut gs = Vec::with_capacity(det.samples().len());
    for ((&d, &fv), &gv) in det.samples().iter().zip(f.samples()).zip(g.samples()) {
        let inv = d.inv()?;
        fs.push(fv.conj() * inv * -2.0);
        gs.push(gv.conj() * inv * 2.0);
    }
    Ok((
        BicomplexField2D::new(*f.grid(), fs)?,
        BicomplexField2D::new(*f.grid(), gs)?,
    ))
}

/// `Ẇ = ∂W - A W - B W̄`.
pub fn fg_derivative(w: &BicomplexField2D, pair: &GeneratingPair) -> Result<BicomplexField2D> {
    if w.grid() != pair.f.grid() {
        return Err(Error::GridMismatch);
    }
    let dw = wirtinger_fd(w, Wirtinger::D)?;
    let mut out = Vec::with_capacity(w.samples().len());
    for i in 0..w.samples().len() {
        let wv = w.samples()[i];
        out.push(dw.samples()[i] - pair.big_a.samples()[i] * wv - pair.big_b.samples()[i] * wv.conj());
    }
    BicomplexField2D::new(*w.grid(), out)
}

/// `Sc(U dz)` as the 1-form `Sc U dx - Vec U dy`.
fn sc_form(u: &BicomplexField2D) -> (ComplexField2D, ComplexField2D) {
    (u.sc(), u.vec().map(|v| -v))
}

/// `F(z₁) Sc∫G*W dz + G(z₁) Sc∫F*W dz` along a polyline of grid nodes.
///
/// With `F* = -2F̄/(FḠ - F̄G)` and `∂ = ½(∂x - k∂y)` this is the normalization
/// for which `∫ 1 d_(1,k) z = z`, i.e. the integral inverts the
/// `(F, G)`-derivative.
pub fn fg_integral(w: &BicomplexField2D, pair: &GeneratingPair, path: &[(usize, usize)]) -> Result<Bicomplex> {
    if w.grid() != pair.f.grid() {
        return Err(Error::GridMismatch);
    }
    let Some(&(j, l)) = path.last() else {
        return Ok(Bicomplex::ZERO);
    };
    let (fs, gs) = pair.adjoint()?;
    let (g1, g2) = sc_form(&gs.mul(w)?);
    let (f1, f2) = sc_form(&fs.mul(w)?);
    let ig = polyline_integral(&g1, &g2, path)?;
    let if_ = polyline_integral(&f1, &f2, path)?;
    Ok(pair.f.at(j, l) * ig + pair.g.at(j, l) * if_)
}

/// [`fg_integral`] from the center to every node along L-shaped paths.
pub fn fg_integral_field(
    w: &BicomplexField2D,
    pair: &GeneratingPair,
    order: PathOrder,
) -> Result<BicomplexField2D> {
    if w.grid() != pair.f.grid() {
        return Err(Error::GridMismatch);
    }
    let (fs, gs) = pair.adjoint()?;
    let (g1, g2) = sc_form(&gs.mul(w)?);
    let (f1, f2) = sc_form(&fs.mul(w)?);
    let ig = l_path_integral(&g1, &g2, order)?;
    let if_ = l_path_integral(&f1, &f2, order)?;
    let mut out = Vec::with_capacity(w.samples().len());
    for i in 0..w.samples().len() {
        out.push(pair.f.samples()[i] * ig.samples()[i] + pair.g.samples()[i] * if_.samples()[i]);
    }
    BicomplexField2D::new(*w.grid(), out)
}

/// [`fg_integral`] along the L-shaped path to a single node.
pub fn fg_integral_to(
    w: &BicomplexField2D,
    pair: &GeneratingPair,
    node: (usize, usize),
    order: PathOrder,
) -> Result<Bicomplex> {
    fg_integral(w, pair, &l_path(w.grid(), node, order))
}

/// The period-two sequence `(φ, k/φ)`, `(φ/f², k f²/φ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingSequence {
    pub pairs: [GeneratingPair; 2],
}

impl GeneratingSequence {
    pub fn new(data: &PotentialData) -> Result<Self> {
        let phi = data.phi.sc();
        let phi1 = ComplexField2D::outer(&data.inv_f, &data.g, |a, b| a * b);
        Ok(Self {
            pairs: [GeneratingPair::from_phi(&phi)?, GeneratingPair::from_phi(&phi1)?],
        })
    }

    /// `(F_m, G_m)`, cyclic in `m`.
    pub fn pair(&self, m: usize) -> &GeneratingPair {
        &self.pairs[m % 2]
    }

    /// `max |a₁ - a₀|` and `max |b₁ + B₀|` over interior nodes.
    pub fn successor_defects(&self) -> (f64, f64) {
        let [p0, p1] = &self.pairs;
        let da = p1.a.zip_with(&p0.a, |x, y| x - y).expect("same grid").interior_sup();
        let db = p1.b.zip_with(&p0.big_b, |x, y| x + y).expect("same grid").interior_sup();
        (da, db)
    }
}

/// The coefficient of a tabulated formal power.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    One,
    K,
}

impl Coefficient {
    pub fn value(self) -> Bicomplex {
        match self {
            Self::One => Bicomplex::ONE,
            Self::K => Bicomplex::K,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

/// `Z_m⁽ⁿ⁾(a, 0; ·)` for `n ≤ max_degree`, `a ∈ {1, k}`, `m ∈ {0, 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalPowerSet {
    max_degree: usize,
    /// `powers[n][m][a]`
    powers: Vec<[[BicomplexField2D; 2]; 2]>,
}

fn combine(alpha: Bicomplex, one: &BicomplexField2D, k: &BicomplexField2D) -> BicomplexField2D {
    let (a1, a2) = (alpha.sc(), alpha.vec());
    one.zip_with(k, |x, y| x.scale(a1) + y.scale(a2)).expect("same grid")
}

impl FormalPowerSet {
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn center(&self) -> (f64, f64) {
        (0.0, 0.0)
    }

    pub fn get(&self, n: usize, coefficient: Coefficient, m: usize) -> Result<&BicomplexField2D> {
        let level = self.powers.get(n).ok_or(Error::DegreeOutOfRange {
            requested: n,
            available: self.max_degree,
        })?;
        Ok(&level[m % 2][coefficient.index()])
    }

    /// `Z_m⁽ⁿ⁾(α) = α′ Z_m⁽ⁿ⁾(1) + α″ Z_m⁽ⁿ⁾(k)`.
    pub fn power(&self, n: usize, alpha: Bicomplex, m: usize) -> Result<BicomplexField2D> {
        Ok(combine(alpha, self.get(n, Coefficient::One, m)?, self.get(n, Coefficient::K, m)?))
    }

    /// Closed forms from the `X`, `Y` systems of `f` and `g`.
    pub fn closed(data: &PotentialData, max_degree: usize) -> Result<Self> {
        let xs = build_x_systems(&data.f, max_degree)?;
        let ys = build_x_systems(&data.g, max_degree)?;
        let xs1 = xs.reciprocal();
        let phi = data.phi.sc();
        let phi1 = ComplexField2D::outer(&data.inv_f, &data.g, |a, b| a * b);
        let mut powers = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let z0 = [
                formal_power_closed(n, Bicomplex::ONE, &xs, &ys, &phi)?,
                formal_power_closed(n, Bicomplex::K, &xs, &ys, &phi)?,
            ];
            let z1 = [
                formal_power_closed(n, Bicomplex::ONE, &xs1, &ys, &phi1)?,
                formal_power_closed(n, Bicomplex::K, &xs1, &ys, &phi1)?,
            ];
            powers.push([z0, z1]);
        }
        Ok(Self { max_degree, powers })
    }

    /// The integral recursion `Z_m⁽ⁿ⁺¹⁾ = (n+1) ∫ Z_{m+1}⁽ⁿ⁾ d_(F_m, G_m)`
    /// along L-shaped paths.
    pub fn recursive(seq: &GeneratingSequence, max_degree: usize, order: PathOrder) -> Result<Self> {
        let mut powers: Vec<[[BicomplexField2D; 2]; 2]> = Vec::with_capacity(max_degree + 1);
        let level0 = |m: usize| -> [BicomplexField2D; 2] {
            let pair = seq.pair(m);
            [Bicomplex::ONE, Bicomplex::K].map(|alpha| {
                let (lambda, mu) = pair.center_coordinates(alpha);
                pair.f
                    .zip_with(&pair.g, |f, g| f.scale(lambda) + g.scale(mu))
                    .expect("same grid")
            })
        };
        powers.push([level0(0), level0(1)]);
        for n in 0..max_degree {
            let prev = &powers[n];
            let mut next: [Vec<BicomplexField2D>; 2] = [Vec::new(), Vec::new()];
            for (m, slot) in next.iter_mut().enumerate() {
                for a in 0..2 {
                    let integral = fg_integral_field(&prev[(m + 1) % 2][a], seq.pair(m), order)?;
                    slot.push(integral.map(|v| v * (n + 1) as f64));
                }
            }
            let [n0, n1] = next.map(|v| {
                let [x, y]: [BicomplexField2D; 2] = v.try_into().expect("two coefficients");
                [x, y]
            });
            powers.push([n0, n1]);
        }
        Ok(Self { max_degree, powers })
    }

    /// `Z⁽ⁿ⁾(a) = T₀[a zⁿ]` and `Z₁⁽ⁿ⁾(a) = T₁[a zⁿ]`.
    pub fn from_transmutations(set: &TransmutationSet, max_degree: usize) -> Result<Self> {
        let mut powers = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree as u32 {
            let level = [Composite::T0, Composite::T1].map(|which| {
                [Bicomplex::ONE, Bicomplex::K].map(|a| set.map_power(which, a, n))
            });
            let [[a, b], [c, d]] = level;
            powers.push([[a?, b?], [c?, d?]]);
        }
        Ok(Self { max_degree, powers })
    }
}

fn binomial(n: usize, m: usize) -> f64 {
    (0..m).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `Σ_m C(n,m) A⁽ⁿ⁻ᵐ⁾(x) kᵐ B⁽ᵐ⁾(y)` split into scalar and vector parts.
fn binomial_sum(
    n: usize,
    a: &[ComplexField1D],
    b: &[ComplexField1D],
) -> (ComplexField2D, ComplexField2D) {
    let gx = *a[0].grid();
    let gy = *b[0].grid();
    let (nx, ny) = (gx.len(), gy.len());
    let mut sc = alloc::vec![C64::new(0.0, 0.0); nx * ny];
    let mut vec = sc.clone();
    for m in 0..=n {
        let c = binomial(n, m);
        let kp = Bicomplex::k_pow(m);
        let (target, sign) = if kp.sc().re != 0.0 {
            (&mut sc, kp.sc().re)
        } else {
            (&mut vec, kp.vec().re)
        };
        let xa = a[n - m].samples();
        for (l, &yb) in b[m].samples().iter().enumerate() {
            let w = yb * (c * sign);
            let row = &mut target[l * nx..(l + 1) * nx];
            for (t, &xv) in row.iter_mut().zip(xa) {
                *t += xv * w;
            }
        }
    }
    let grid = crate::grid::Grid2D::new(gx, gy);
    (
        ComplexField2D::new(grid, sc).expect("sized to grid"),
        ComplexField2D::new(grid, vec).expect("sized to grid"),
    )
}

/// `Z⁽ⁿ⁾(α, 0; z) = φ Sc(*Z) + (k/φ) Vec(*Z)` with `*Z` the parity-split
/// binomial sums of the `X` and `Y` systems. Linear in `α` by construction.
pub fn formal_power_closed(
    n: usize,
    alpha: Bicomplex,
    xs: &XSystems,
    ys: &XSystems,
    phi: &ComplexField2D,
) -> Result<BicomplexField2D> {
    let available = xs.n_max().min(ys.n_max());
    if n > available {
        return Err(Error::DegreeOutOfRange {
            requested: n,
            available,
        });
    }
    if phi.grid().x != *xs.direct[0].grid() || phi.grid().y != *ys.direct[0].grid() {
        return Err(Error::GridMismatch);
    }
    let odd = n % 2 == 1;
    let (first, second) = if odd {
        ((&xs.direct, &ys.tilde), (&xs.tilde, &ys.direct))
    } else {
        ((&xs.tilde, &ys.tilde), (&xs.direct, &ys.direct))
    };
    let (s1, v1) = binomial_sum(n, first.0, first.1);
    let (s2, v2) = binomial_sum(n, second.0, second.1);
    let (a1, a2) = (alpha.sc(), alpha.vec());
    // *Z = α′ S₁ + k α″ S₂, so Sc*Z = α′ Sc S₁ - α″ Vec S₂ and
    // Vec*Z = α′ Vec S₁ + α″ Sc S₂.
    let mut out = Vec::with_capacity(phi.samples().len());
    for i in 0..phi.samples().len() {
        let p = phi.samples()[i];
        let one = Bicomplex::from_parts(p * s1.samples()[i], v1.samples()[i] / p);
        let k = Bicomplex::from_parts(-(p * v2.samples()[i]), s2.samples()[i] / p);
        out.push(one.scale(a1) + k.scale(a2));
    }
    BicomplexField2D::new(*phi.grid(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dirac::{derive_potential_data, PotentialKind, PotentialSpec};
    use crate::grid::Grid2D;

    fn data(n: usize, free: bool) -> PotentialData {
        let dom = Grid2D::square(1.0, n).unwrap();
        let spec = if free {
            PotentialSpec::free(dom)
        } else {
            PotentialSpec::new(PotentialKind::Linear(1.0), 0.5, 1.0, dom)
        };
        derive_potential_data(&spec).unwrap()
    }

    fn constant_pair(dom: Grid2D) -> GeneratingPair {
        GeneratingPair::new(
            BicomplexField2D::constant(dom, Bicomplex::ONE),
            BicomplexField2D::constant(dom, Bicomplex::K),
        )
        .unwrap()
    }

    #[test]
    fn constant_pair_coefficients_and_adjoint() {
        let dom = Grid2D::square(1.0, 11).unwrap();
        let pair = constant_pair(dom);
        for c in [&pair.a, &pair.b, &pair.big_a, &pair.big_b] {
            assert_eq!(c.sup_norm(), 0.0);
        }
        let (fs, gs) = pair.adjoint().unwrap();
        assert!(fs.samples().iter().all(|&v| v == -Bicomplex::K));
        assert!(gs.samples().iter().all(|&v| v == Bicomplex::ONE));
    }

    #[test]
    fn degenerate_pair_is_rejected() {
        let dom = Grid2D::square(1.0, 11).unwrap();
        let f = BicomplexField2D::from_fn(dom, |x, _| Bicomplex::real(1.0 + 0.1 * x));
        assert!(matches!(GeneratingPair::new(f.clone(), f), Err(Error::DegeneratePair { .. })));
    }

    #[test]
    fn main_pair_coefficients() {
        let d = data(101, false);
        let h = d.grid.x.step();
        let pair = GeneratingPair::from_phi(&d.phi.sc()).unwrap();
        assert!(pair.a.interior_sup() < 10.0 * h * h);
        let db = pair.b.max_diff(&d.dbar_log_phi()).unwrap();
        let dd = pair.big_b.max_diff(&d.d_log_phi()).unwrap();
        assert!(db < 10.0 * h * h && dd < 10.0 * h * h, "{db:e} {dd:e}");
        // Generators have zero (F, G)-derivative.
        assert!(fg_derivative(&pair.f, &pair).unwrap().interior_sup() < 10.0 * h * h);
        assert!(fg_derivative(&pair.g, &pair).unwrap().interior_sup() < 10.0 * h * h);
    }

    #[test]
    fn constant_pair_calculus_is_complex_calculus() {
        let dom = Grid2D::square(1.0, 41).unwrap();
        let pair = constant_pair(dom);
        let z2 = BicomplexField2D::from_fn(dom, |x, y| Bicomplex::point(x, y).powi(2));
        let two_z = BicomplexField2D::from_fn(dom, |x, y| Bicomplex::point(x, y) * 2.0);
        assert!(fg_derivative(&z2, &pair).unwrap().max_diff(&two_z).unwrap() < 1e-12);
        let one = BicomplexField2D::constant(dom, Bicomplex::ONE);
        let z = fg_integral_to(&one, &pair, (35, 7), PathOrder::XFirst).unwrap();
        assert!((z - Bicomplex::point(dom.x.node(35), dom.y.node(7))).norm() < 1e-14);
        let a = fg_integral(&two_z, &pair, &[(20, 20), (3, 20), (3, 40), (30, 40), (30, 9)]).unwrap();
        let b = fg_integral_to(&two_z, &pair, (30, 9), PathOrder::YFirst).unwrap();
        assert!((a - b).norm() < 1e-13);
        assert!((b - z2.at(30, 9)).norm() < 1e-13);
    }

    #[test]
    fn free_powers_are_monomials() {
        let d = data(41, true);
        let set = FormalPowerSet::closed(&d, 6).unwrap();
        let h = d.grid.x.step();
        for n in 0..=6 {
            let tol = if n <= 3 { 1e-12 } else { 500.0 * h.powi(4) };
            for a in [Bicomplex::ONE, Bicomplex::K, Bicomplex::new(0.3, -1.0, 2.0, 0.5)] {
                let z = set.power(n, a, 0).unwrap();
                let exact = BicomplexField2D::from_fn(d.grid, |x, y| a * Bicomplex::point(x, y).powi(n as u32));
                assert!(z.max_diff(&exact).unwrap() < tol * a.norm(), "n={n}");
            }
        }
    }

    #[test]
    fn closed_form_basics() {
        let d = data(31, false);
        let xs = build_x_systems(&d.f, 3).unwrap();
        let ys = build_x_systems(&d.g, 3).unwrap();
        let phi = d.phi.sc();
        let z0 = formal_power_closed(0, Bicomplex::ONE, &xs, &ys, &phi).unwrap();
        assert!(z0.max_diff(&d.phi).unwrap() < 1e-15);
        assert_eq!(
            formal_power_closed(4, Bicomplex::ONE, &xs, &ys, &phi),
            Err(Error::DegreeOutOfRange { requested: 4, available: 3 })
        );
        // Linearity in α holds bit for bit.
        let alpha = Bicomplex::new(0.7, -0.2, 1.3, 0.4);
        let direct = formal_power_closed(3, alpha, &xs, &ys, &phi).unwrap();
        let one = formal_power_closed(3, Bicomplex::ONE, &xs, &ys, &phi).unwrap();
        let k = formal_power_closed(3, Bicomplex::K, &xs, &ys, &phi).unwrap();
        assert_eq!(direct, combine(alpha, &one, &k));
    }

    #[test]
    fn recursion_starts_from_generators() {
        let d = data(31, false);
        let seq = GeneratingSequence::new(&d).unwrap();
        let set = FormalPowerSet::recursive(&seq, 1, PathOrder::XFirst).unwrap();
        let g = &seq.pair(0).g;
        assert!(set.get(0, Coefficient::K, 0).unwrap().max_diff(g).unwrap() < 1e-15);
        assert!(set.get(0, Coefficient::One, 1).unwrap().max_diff(&seq.pair(1).f).unwrap() < 1e-15);
        assert!(set.get(2, Coefficient::One, 0).is_err());
    }

    #[test]
    fn asymptotics_at_the_origin() {
        let d = data(201, false);
        let h = d.grid.x.step();
        let set = FormalPowerSet::closed(&d, 4).unwrap();
        let (cx, cy) = (d.grid.x.center(), d.grid.y.center());
        for n in 0..=4 {
            let z = set.get(n, Coefficient::One, 0).unwrap();
            for (j, l) in [(cx + 1, cy), (cx - 1, cy), (cx, cy + 1), (cx, cy - 1)] {
                let p = Bicomplex::point(d.grid.x.node(j), d.grid.y.node(l)).powi(n as u32);
                let ratio = z.at(j, l).div(p).unwrap();
                assert!((ratio - Bicomplex::ONE).norm() < 10.0 * h, "n={n} {ratio}");
            }
        }
    }
}
