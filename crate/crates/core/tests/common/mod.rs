#![allow(dead_code)]

use pseudopower_core::dirac::{derive_potential_data, PotentialData, PotentialKind, PotentialSpec};
use pseudopower_core::goursat::PicardOptions;
use pseudopower_core::transmutation::TransmutationSet;
use pseudopower_core::Grid2D;

/// `p(x) = x`, `m = 0.5`, `ω = 1` on `[-1, 1]²`.
pub fn linear(n: usize) -> PotentialData {
    let dom = Grid2D::square(1.0, n).unwrap();
    derive_potential_data(&PotentialSpec::new(PotentialKind::Linear(1.0), 0.5, 1.0, dom)).unwrap()
}

/// `p(x) = sin(πx)` tabulated, `m = 0.5`, `ω = 1`.
pub fn sine(n: usize) -> PotentialData {
    let dom = Grid2D::square(1.0, n).unwrap();
    derive_potential_data(&PotentialSpec::sine(1.0, std::f64::consts::PI, 0.5, 1.0, dom)).unwrap()
}

pub fn ops(d: &PotentialData) -> TransmutationSet {
    d.transmutations(PicardOptions::default()).unwrap()
}

/// Observed order from errors on grids with steps `h` and `h/2`.
pub fn order(coarse: f64, fine: f64) -> f64 {
    (coarse / fine).log2()
}
