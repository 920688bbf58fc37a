use thiserror::Error;

/// Failure modes shared by every stage of the pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("bicomplex value is a zero divisor (w+ = {plus}, w- = {minus})")]
    ZeroDivisor { plus: f64, minus: f64 },
    #[error("grid needs at least 3 points per axis, got {0}")]
    GridTooSmall(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("generator vanishes at node {index} (|f| = {magnitude:e})")]
    VanishingGenerator { index: usize, magnitude: f64 },
    #[error("generator is not normalized: |f(0) - 1| = {0:e}")]
    Unnormalized(f64),
    #[error("degenerate generating pair at node {index} (|Vec(conj(F) G)| = {magnitude:e})")]
    DegeneratePair { index: usize, magnitude: f64 },
    #[error("integration path leaves the grid lines at segment {0}")]
    PathOffGrid(usize),
    #[error("degree {requested} exceeds the available maximum {available}")]
    DegreeOutOfRange { requested: usize, available: usize },
    #[error("Picard iteration did not converge after {iterations} steps (last change {change:e})")]
    NoConvergence { iterations: usize, change: f64 },
    #[error("singular step in Volterra solve at offset {offset} (|det| = {determinant:e})")]
    SingularStep { offset: usize, determinant: f64 },
    #[error("tabulated potential has a non-real sample at node {0}")]
    NonRealPotential(usize),
    #[error("tabulated potential is missing its derivative column")]
    DerivativeMissing,
    #[error("field is not a gradient: curl {curl:e} exceeds tolerance {tolerance:e}")]
    NotCompatible { curl: f64, tolerance: f64 },
    #[error("circle radius {radius} does not fit inside the domain (limit {limit})")]
    RadiusTooLarge { radius: f64, limit: f64 },
    #[error("field is not a solution: Vekua residual {residual:e} above {tolerance:e}")]
    NotASolution { residual: f64, tolerance: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
