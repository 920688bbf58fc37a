//! Goursat kernels against an independent characteristic power series.

use pseudopower_core::goursat::goursat_kernel;
use pseudopower_core::{ComplexField1D, SymmetricGrid1D, C64};

/// Truncated series solution of `H_uv = c H`, `H(0, v) = 0`, `H(u, 0) = c u/2`:
/// `H = Σₙ c^{n+1} u^{n+1} vⁿ / (2 n! (n+1)!)`, evaluated at `u = (x+t)/2`,
/// `v = (x-t)/2`.
fn series_kernel(c: f64, x: f64, t: f64, terms: usize) -> f64 {
    let u = 0.5 * (x + t);
    let v = 0.5 * (x - t);
    let mut term = c * u * 0.5; // n = 0
    let mut sum = term;
    for n in 1..terms {
        term *= c * u * v / (n as f64 * (n + 1) as f64);
        sum += term;
    }
    sum
}

fn max_series_error(n: usize, c: f64) -> (f64, usize) {
    let g = SymmetricGrid1D::new(1.0, n).unwrap();
    let q = ComplexField1D::constant(g, C64::new(c, 0.0));
    let k = goursat_kernel(&q).unwrap();
    let err = k
        .entries()
        .map(|(x, t, v)| (v - C64::new(series_kernel(c, x, t, 20), 0.0)).norm())
        .fold(0.0, f64::max);
    (err, k.iterations())
}

#[test]
fn constant_potential_matches_series() {
    let (e1, it) = max_series_error(201, 1.0);
    let (e2, _) = max_series_error(401, 1.0);
    eprintln!("201: {e1:e}  401: {e2:e}  ratio {}  iterations {it}", e1 / e2);
    assert!(it <= 50);
    assert!(e1 / e2 > 3.5);
}
