mod common;

use pseudopower_core::formal::{
    fg_derivative, fg_integral, fg_integral_to, Coefficient, FormalPowerSet, GeneratingSequence,
};
use pseudopower_core::path::PathOrder;
use pseudopower_core::{Bicomplex, BicomplexField2D, Error};

const MAX: usize = 5;

#[test]
fn successor_pairs_match() {
    for d in [common::linear(81), common::sine(81)] {
        let seq = GeneratingSequence::new(&d).unwrap();
        let (da, db) = seq.successor_defects();
        assert!(da < 1e-10 && db < 1e-10, "{da:e} {db:e}");
    }
}

#[test]
fn closed_and_recursive_powers_agree() {
    for d in [common::linear(101), common::sine(101)] {
        let h = d.grid.x.step();
        let closed = FormalPowerSet::closed(&d, MAX).unwrap();
        let seq = GeneratingSequence::new(&d).unwrap();
        for order in [PathOrder::XFirst, PathOrder::YFirst] {
            let rec = FormalPowerSet::recursive(&seq, MAX, order).unwrap();
            for n in 0..=MAX {
                for c in [Coefficient::One, Coefficient::K] {
                    let a = closed.get(n, c, 0).unwrap();
                    let b = rec.get(n, c, 0).unwrap();
                    let err = a.max_diff(b).unwrap();
                    assert!(err <= 10.0 * h * h, "n={n} {c:?} {order:?}: {err:e}");
                }
            }
        }
    }
}

fn vekua_residuals(n_grid: usize) -> Vec<(f64, f64)> {
    let d = common::linear(n_grid);
    let set = FormalPowerSet::closed(&d, MAX).unwrap();
    let mut out = Vec::new();
    for n in 0..=MAX {
        for c in [Coefficient::One, Coefficient::K] {
            let main = d.main_residual(set.get(n, c, 0).unwrap()).unwrap();
            let next = d.succeeding_residual(set.get(n, c, 1).unwrap()).unwrap();
            out.push((main, next));
        }
    }
    out
}

#[test]
fn closed_powers_solve_both_vekua_equations() {
    let coarse = vekua_residuals(101);
    let fine = vekua_residuals(201);
    for (i, (c, f)) in coarse.iter().zip(&fine).enumerate() {
        // Degree zero solves the equations exactly up to the difference stencil.
        if c.0 > 1e-9 {
            assert!(common::order(c.0, f.0) >= 1.8, "main {i}: {:e} {:e}", c.0, f.0);
        }
        if c.1 > 1e-9 {
            assert!(common::order(c.1, f.1) >= 1.8, "succeeding {i}: {:e} {:e}", c.1, f.1);
        }
    }
}

fn transmuted_gap(n_grid: usize) -> f64 {
    let d = common::linear(n_grid);
    let closed = FormalPowerSet::closed(&d, 4).unwrap();
    let mapped = FormalPowerSet::from_transmutations(&common::ops(&d), 4).unwrap();
    let mut worst: f64 = 0.0;
    for n in 0..=4 {
        for c in [Coefficient::One, Coefficient::K] {
            for m in 0..2 {
                let err = closed.get(n, c, m).unwrap().max_diff(mapped.get(n, c, m).unwrap()).unwrap();
                worst = worst.max(err);
            }
        }
    }
    worst
}

#[test]
fn transmuted_monomials_are_formal_powers() {
    let (c, f) = (transmuted_gap(81), transmuted_gap(161));
    assert!(common::order(c, f) >= 1.8, "{c:e} {f:e}");
}

#[test]
fn derivative_lowers_the_degree() {
    let d = common::sine(201);
    let set = FormalPowerSet::closed(&d, MAX).unwrap();
    let seq = GeneratingSequence::new(&d).unwrap();
    let h = d.grid.x.step();
    let alpha = Bicomplex::new(0.3, -1.0, 0.7, 0.2);
    for n in 1..=MAX {
        let dw = fg_derivative(&set.power(n, alpha, 0).unwrap(), seq.pair(0)).unwrap();
        let lower = set.power(n - 1, alpha, 1).unwrap();
        let gap = dw.zip_with(&lower, |a, b| a - b * n as f64).unwrap().sup_inside(2);
        assert!(gap <= 50.0 * h * h * lower.sup_norm().max(1.0) * n as f64, "n={n}: {gap:e}");
    }
}

#[test]
fn integral_is_path_independent() {
    let d = common::linear(101);
    let set = FormalPowerSet::closed(&d, 3).unwrap();
    let seq = GeneratingSequence::new(&d).unwrap();
    let w = set.power(2, Bicomplex::new(1.0, 0.5, -0.25, 0.0), 1).unwrap();
    let c = d.grid.x.center();
    let node = (c + 30, c - 40);
    let a = fg_integral_to(&w, seq.pair(0), node, PathOrder::XFirst).unwrap();
    let b = fg_integral_to(&w, seq.pair(0), node, PathOrder::YFirst).unwrap();
    let detour = [(c, c), (c, c - 45), (c + 10, c - 45), (c + 10, c - 40), (c + 30, c - 40)];
    let e = fg_integral(&w, seq.pair(0), &detour).unwrap();
    assert!((a - b).norm() < 1e-6 && (a - e).norm() < 1e-6, "{a:?} {b:?} {e:?}");
    // n ∫ Z₁⁽ⁿ⁻¹⁾ d(F₀,G₀)z = Z₀⁽ⁿ⁾ with n = 3.
    let z3 = set.power(3, Bicomplex::new(1.0, 0.5, -0.25, 0.0), 0).unwrap();
    assert!((a * 3.0 - z3.at(node.0, node.1)).norm() < 1e-3);
}

#[test]
fn center_values() {
    let d = common::sine(41);
    let set = FormalPowerSet::closed(&d, 3).unwrap();
    let alpha = Bicomplex::new(0.5, 0.25, -2.0, 1.0);
    assert!((set.power(0, alpha, 0).unwrap().at_center() - alpha).norm() < 1e-14);
    for n in 1..=3 {
        assert!(set.power(n, alpha, 0).unwrap().at_center().norm() < 1e-14);
    }
    assert!(matches!(set.get(4, Coefficient::One, 0), Err(Error::DegreeOutOfRange { .. })));
    let ones = BicomplexField2D::constant(d.grid, Bicomplex::ONE);
    assert_eq!(set.get(0, Coefficient::One, 0).unwrap().grid(), ones.grid());
}
