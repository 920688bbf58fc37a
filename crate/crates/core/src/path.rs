//! Line integrals `∫(u₁ dx + u₂ dy)` along grid paths.

use alloc::vec::Vec;

use crate::bicomplex::C64;
use crate::error::{Error, Result};
use crate::field::ComplexField2D;
use crate::grid::Grid2D;
use crate::quadrature::{cumulative, Quadrature};

/// Leg order of the L-shaped path from the origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathOrder {
    /// Along `x` on `y = 0`, then along `y`.
    #[default]
    XFirst,
    /// Along `y` on `x = 0`, then along `x`.
    YFirst,
}

fn leg(values: &[C64], from: usize, to: usize, h: f64) -> C64 {
    cumulative(values, from, h, Quadrature::default())[to]
}

/// `∫(u₁ dx + u₂ dy)` from the grid center to every node along L-shaped paths.
pub fn l_path_integral(u1: &ComplexField2D, u2: &ComplexField2D, order: PathOrder) -> Result<ComplexField2D> {
    let g = *u1.grid();
    if *u2.grid() != g {
        return Err(Error::GridMismatch);
    }
    let (cx, cy) = (g.x.center(), g.y.center());
    let (hx, hy) = (g.x.step(), g.y.step());
    let rule = Quadrature::default();
    let mut out = match order {
        PathOrder::XFirst => {
            let base = cumulative(u1.row(cy), cx, hx, rule);
            let mut s = u2.map_columns(|col| Ok(cumulative(col, cy, hy, rule)))?.into_samples();
            for (i, v) in s.iter_mut().enumerate() {
                *v += base[i % g.nx()];
            }
            s
        }
        PathOrder::YFirst => {
            let base = cumulative(&u2.column(cx), cy, hy, rule);
            let mut s = u1.map_rows(|row| Ok(cumulative(row, cx, hx, rule)))?.into_samples();
            for (i, v) in s.iter_mut().enumerate() {
                *v += base[i / g.nx()];
            }
            s
        }
    };
    out.shrink_to_fit();
    ComplexField2D::new(g, out)
}

/// `∫(u₁ dx + u₂ dy)` along a polyline through grid nodes `(j, l)`. Each
/// segment must run along a grid line.
pub fn polyline_integral(u1: &ComplexField2D, u2: &ComplexField2D, path: &[(usize, usize)]) -> Result<C64> {
    let g = *u1.grid();
    if *u2.grid() != g {
        return Err(Error::GridMismatch);
    }
    check_path(&g, path)?;
    let mut total = C64::new(0.0, 0.0);
    for w in path.windows(2) {
        let ((j0, l0), (j1, l1)) = (w[0], w[1]);
        if l0 == l1 {
            let (lo, hi) = (j0.min(j1), j0.max(j1));
            let seg = &u1.row(l0)[lo..=hi];
            total += leg(seg, j0 - lo, j1 - lo, g.x.step());
        } else {
            let (lo, hi) = (l0.min(l1), l0.max(l1));
            let col: Vec<C64> = (lo..=hi).map(|l| u2.at(j0, l)).collect();
            total += leg(&col, l0 - lo, l1 - lo, g.y.step());
        }
    }
    Ok(total)
}

fn check_path(g: &Grid2D, path: &[(usize, usize)]) -> Result<()> {
    for (i, &(j, l)) in path.iter().enumerate() {
        if j >= g.nx() || l >= g.ny() {
            return Err(Error::PathOffGrid(i));
        }
        if i > 0 {
            let (pj, pl) = path[i - 1];
            if pj != j && pl != l {
                return Err(Error::PathOffGrid(i));
            }
        }
    }
    Ok(())
}

/// The two-segment path from the center to `(j, l)`.
pub fn l_path(g: &Grid2D, node: (usize, usize), order: PathOrder) -> [(usize, usize); 3] {
    let c = (g.x.center(), g.y.center());
    match order {
        PathOrder::XFirst => [c, (node.0, c.1), node],
        PathOrder::YFirst => [c, (c.0, node.1), node],
    }
}
