//! Goursat kernels `K(x, t)` on the triangle `|t| ≤ |x|`.
//!
//! `K` solves `(∂²ₓ - q(x)) K = ∂²ₜ K` with `K(x, x) = ½∫₀ˣ q` and
//! `K(x, -x) = 0`. In characteristic coordinates `u = (x + t)/2`,
//! `v = (x - t)/2` this is the integral equation
//!
//! ```text
//! H(u, v) = ½∫₀ᵘ q + ∫₀ᵘ∫₀ᵛ q(α + β) H(α, β) dβ dα
//! ```
//!
//! solved here by Picard iteration with a tensor trapezoid rule. Nodes with
//! `x ± t` an even multiple of `h` sit on the lattice `u, v ∈ hℕ`; the others
//! on `u, v ∈ {0} ∪ (ℕ - ½)h`. Each lattice is closed under the integral, so
//! both are iterated independently and every grid node maps to exactly one
//! lattice point. Nodes with `x < 0` use the reflection
//! `K(-x, t) = -K₋(x, -t)` where `K₋` is the kernel of `q(-x)`.

use alloc::vec::Vec;

use crate::bicomplex::C64;
use crate::error::{Error, Result};
use crate::field::ComplexField1D;
use crate::grid::SymmetricGrid1D;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardOptions {
    /// Stop once the sup-norm change between iterates drops below
    /// `tolerance · max(1, ‖H‖)`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PicardOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-12,
            max_iterations: 50,
        }
    }
}

/// Kernel values on the nodes `(x_j, t_l)` with `|t_l| ≤ |x_j|`; reads outside
/// the triangle return zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularKernel {
    grid: SymmetricGrid1D,
    values: Vec<C64>,
    row_start: Vec<usize>,
    iterations: usize,
}

impl TriangularKernel {
    pub(crate) fn from_rows(grid: SymmetricGrid1D, mut f: impl FnMut(usize, isize) -> C64) -> Self {
        let c = grid.center();
        let mut row_start = Vec::with_capacity(grid.len() + 1);
        let mut values = Vec::new();
        for j in 0..grid.len() {
            row_start.push(values.len());
            let r = j.abs_diff(c) as isize;
            for l in -r..=r {
                values.push(f(j, l));
            }
        }
        row_start.push(values.len());
        Self {
            grid,
            values,
            row_start,
            iterations: 0,
        }
    }

    #[inline]
    pub fn grid(&self) -> &SymmetricGrid1D {
        &self.grid
    }

    /// Picard iterations used (the largest over the sub-problems).
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Row `j`: values for `t_l`, `l = c - r ..= c + r` with `r = |j - c|`.
    #[inline]
    pub fn row(&self, j: usize) -> &[C64] {
        &self.values[self.row_start[j]..self.row_start[j + 1]]
    }

    pub(crate) fn row_mut(&mut self, j: usize) -> &mut [C64] {
        let (a, b) = (self.row_start[j], self.row_start[j + 1]);
        &mut self.values[a..b]
    }

    /// `K(x_j, t_l)`, zero outside the triangle.
    pub fn get(&self, j: usize, l: usize) -> C64 {
        let c = self.grid.center();
        let r = j.abs_diff(c);
        if l.abs_diff(c) > r {
            return C64::new(0.0, 0.0);
        }
        self.row(j)[l + r - c]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// `(x, t, K(x, t))` for every stored node.
    pub fn entries(&self) -> impl Iterator<Item = (f64, f64, C64)> + '_ {
        let c = self.grid.center();
        (0..self.grid.len()).flat_map(move |j| {
            let r = j.abs_diff(c);
            self.row(j)
                .iter()
                .enumerate()
                .map(move |(k, &v)| (self.grid.node(j), self.grid.node(c - r + k), v))
        })
    }

    /// Largest deviation from `K(x, x) = ½∫₀ˣ q` and `K(x, -x) = 0`.
    pub fn boundary_defect(&self, q: &ComplexField1D) -> f64 {
        let c = self.grid.center();
        let half_q = crate::quadrature::cumulative_integral(q);
        let mut worst: f64 = 0.0;
        for j in 0..self.grid.len() {
            let m = self.grid.mirror(j);
            worst = worst.max((self.get(j, j) - half_q.samples()[j] * 0.5).norm());
            if j != c {
                worst = worst.max(self.get(j, m).norm());
            }
        }
        worst
    }

    /// Sup of `(∂²ₓ - q)K - ∂²ₜK` by central differences over nodes whose
    /// five-point stencil stays inside the triangle.
    pub fn wave_residual(&self, q: &ComplexField1D) -> f64 {
        let c = self.grid.center() as isize;
        let n = self.grid.len() as isize;
        let h2 = self.grid.step() * self.grid.step();
        let mut worst: f64 = 0.0;
        for j in 1..n - 1 {
            let r = (j - c).abs();
            if r < 2 || j - 1 == c || j + 1 == c {
                continue;
            }
            for l in (c - r + 2)..=(c + r - 2) {
                let at = |a: isize, b: isize| self.get(a as usize, b as usize);
                let kxx = (at(j + 1, l) - at(j, l) * 2.0 + at(j - 1, l)) / h2;
                let ktt = (at(j, l + 1) - at(j, l) * 2.0 + at(j, l - 1)) / h2;
                let res = kxx - q.samples()[j as usize] * at(j, l) - ktt;
                worst = worst.max(res.norm());
            }
        }
        worst
    }
}

/// Solves the Goursat problem for the sampled potential `q`.
pub fn goursat_kernel(q: &ComplexField1D) -> Result<TriangularKernel> {
    goursat_kernel_with(q, PicardOptions::default())
}

pub fn goursat_kernel_with(q: &ComplexField1D, opts: PicardOptions) -> Result<TriangularKernel> {
    let grid = *q.grid();
    let c = grid.center();
    let h = grid.step();
    let s = q.samples();
    let q_pos: Vec<C64> = (0..=c).map(|k| s[c + k]).collect();
    let q_neg: Vec<C64> = (0..=c).map(|k| s[c - k]).collect();
    let pos = HalfKernel::solve(&q_pos, h, opts)?;
    let neg = HalfKernel::solve(&q_neg, h, opts)?;
    let mut kernel = TriangularKernel::from_rows(grid, |j, l| {
        if j >= c {
            pos.value((j - c) as isize, l)
        } else {
            -neg.value((c - j) as isize, -l)
        }
    });
    kernel.iterations = pos.iterations.max(neg.iterations);
    Ok(kernel)
}

/// Kernel on `x ≥ 0` as two characteristic lattices.
struct HalfKernel {
    even: Lattice,
    odd: Lattice,
    iterations: usize,
}

impl HalfKernel {
    fn solve(q: &[C64], h: f64, opts: PicardOptions) -> Result<Self> {
        let top = q.len() - 1;
        let zero = C64::new(0.0, 0.0);
        // ∫₀^{s h} q by the trapezoid rule.
        let mut big_q = alloc::vec![zero; top + 1];
        for k in 1..=top {
            big_q[k] = big_q[k - 1] + (q[k - 1] + q[k]) * (0.5 * h);
        }
        // q at (s - ½)h by linear interpolation; index 0 unused.
        let mut q_half = alloc::vec![zero; top + 1];
        for k in 1..=top {
            q_half[k] = (q[k - 1] + q[k]) * 0.5;
        }

        let even_coords: Vec<f64> = (0..=top).map(|i| i as f64 * h).collect();
        let even_rows: Vec<usize> = (0..=top).map(|i| top - i + 1).collect();
        let mut even = Lattice::new(
            even_coords,
            even_rows,
            |i, m| q[i + m],
            |i, _| big_q[i] * 0.5,
        );

        let odd_coords: Vec<f64> = (0..=top)
            .map(|i| if i == 0 { 0.0 } else { (i as f64 - 0.5) * h })
            .collect();
        let odd_rows: Vec<usize> = (0..=top)
            .map(|i| if i == 0 { top + 1 } else { (top + 1 - i).min(top) + 1 })
            .collect();
        let diag_half = |i: usize| -> C64 {
            if i == 0 {
                zero
            } else {
                big_q[i - 1] + (q[i - 1] + q_half[i]) * (0.25 * h)
            }
        };
        let mut odd = Lattice::new(
            odd_coords,
            odd_rows,
            |i, m| match (i, m) {
                (0, 0) => q[0],
                (0, k) | (k, 0) => q_half[k],
                _ => q[i + m - 1],
            },
            |i, _| diag_half(i) * 0.5,
        );

        let it_even = even.picard(opts)?;
        let it_odd = odd.picard(opts)?;
        Ok(Self {
            even,
            odd,
            iterations: it_even.max(it_odd),
        })
    }

    /// `K(r h, l h)` for `|l| ≤ r`.
    fn value(&self, r: isize, l: isize) -> C64 {
        if (r + l) % 2 == 0 {
            self.even.get(((r + l) / 2) as usize, ((r - l) / 2) as usize)
        } else {
            self.odd.get(((r + l + 1) / 2) as usize, ((r - l + 1) / 2) as usize)
        }
    }
}

/// Lower-left triangular set of points `(c_i, c_m)` with non-increasing row
/// lengths, carrying the potential, the free term and the current iterate.
struct Lattice {
    coords: Vec<f64>,
    row_len: Vec<usize>,
    offset: Vec<usize>,
    q: Vec<C64>,
    free: Vec<C64>,
    values: Vec<C64>,
}

impl Lattice {
    fn new(
        coords: Vec<f64>,
        row_len: Vec<usize>,
        q_at: impl Fn(usize, usize) -> C64,
        free_at: impl Fn(usize, usize) -> C64,
    ) -> Self {
        let mut offset = Vec::with_capacity(row_len.len());
        let mut q = Vec::new();
        let mut free = Vec::new();
        for (i, &len) in row_len.iter().enumerate() {
            offset.push(q.len());
            for m in 0..len {
                q.push(q_at(i, m));
                free.push(free_at(i, m));
            }
        }
        let values = free.clone();
        Self {
            coords,
            row_len,
            offset,
            q,
            free,
            values,
        }
    }

    #[inline]
    fn get(&self, i: usize, m: usize) -> C64 {
        debug_assert!(m < self.row_len[i]);
        self.values[self.offset[i] + m]
    }

    /// Iterates `H ← free + ∬ q H` in place until the update stalls.
    fn picard(&mut self, opts: PicardOptions) -> Result<usize> {
        let zero = C64::new(0.0, 0.0);
        let width = self.row_len.first().copied().unwrap_or(0);
        let mut prev_g = alloc::vec![zero; width];
        let mut prev_int = alloc::vec![zero; width];
        let mut cur_g = alloc::vec![zero; width];
        let mut cur_int = alloc::vec![zero; width];
        let mut change = f64::INFINITY;
        for iteration in 1..=opts.max_iterations {
            change = 0.0;
            let mut norm: f64 = 0.0;
            for i in 0..self.row_len.len() {
                let len = self.row_len[i];
                let base = self.offset[i];
                for m in 0..len {
                    cur_g[m] = self.q[base + m] * self.values[base + m];
                }
                if i == 0 {
                    cur_int[..len].fill(zero);
                } else {
                    let da = self.coords[i] - self.coords[i - 1];
                    cur_int[0] = zero;
                    for m in 1..len {
                        let db = self.coords[m] - self.coords[m - 1];
                        let cell = (cur_g[m] + cur_g[m - 1] + prev_g[m] + prev_g[m - 1]) * (0.25 * da * db);
                        cur_int[m] = prev_int[m] + cur_int[m - 1] - prev_int[m - 1] + cell;
                    }
                }
                for m in 0..len {
                    let next = self.free[base + m] + cur_int[m];
                    change = change.max((next - self.values[base + m]).norm());
                    norm = norm.max(next.norm());
                    self.values[base + m] = next;
                }
                core::mem::swap(&mut prev_g, &mut cur_g);
                core::mem::swap(&mut prev_int, &mut cur_int);
            }
            if change <= opts.tolerance * norm.max(1.0) {
                return Ok(iteration);
            }
        }
        Err(Error::NoConvergence {
            iterations: opts.max_iterations,
            change,
        })
    }
}
