//! TOML run configuration.
//!
//! ```toml
//! seed = 7
//!
//! [potential]
//! kind = "linear"      # zero | constant | linear | polynomial | sine | table
//! slope = 1.0
//! m = 0.5
//! omega = 1.0
//!
//! [grid]
//! a = 1.0
//! b = 1.0
//! nx = 2001
//! ny = 2001
//! ```
//!
//! Optional tables: `[degrees]`, `[tolerances]`, `[output]`, `[target]`,
//! `[expansion]`, `[approx]`, `[analysis]`.

use std::path::{Path, PathBuf};

use pseudopower_core::dirac::{CompatibilityTolerance, PotentialKind, PotentialSpec};
use pseudopower_core::goursat::PicardOptions;
use pseudopower_core::quadrature::Quadrature;
use pseudopower_core::systems::SystemOptions;
use pseudopower_core::{ComplexField1D, Grid2D, SymmetricGrid1D, C64};
use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_POINTS: usize = 2001;
pub const DEFAULT_N_MAX: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Zero,
    Constant,
    Linear,
    Polynomial,
    Sine,
    Table,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPotential {
    kind: KindName,
    value: Option<f64>,
    slope: Option<f64>,
    coefficients: Option<Vec<f64>>,
    amplitude: Option<f64>,
    wavenumber: Option<f64>,
    p: Option<Vec<f64>>,
    dp: Option<Vec<f64>>,
    #[serde(default)]
    m: f64,
    #[serde(default)]
    omega: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    a: f64,
    b: f64,
    nx: Option<usize>,
    ny: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDegrees {
    n_max: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    potential: RawPotential,
    grid: RawGrid,
    #[serde(default)]
    degrees: RawDegrees,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    output: RawOutput,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    target: Target,
    #[serde(default)]
    expansion: Expansion,
    #[serde(default)]
    approx: Approx,
    #[serde(default)]
    analysis: Analysis,
}

/// The potential `p`, the shift `m` and the frequency `ω`.
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Zero,
    Constant(f64),
    Linear(f64),
    Polynomial(Vec<f64>),
    Sine { amplitude: f64, wavenumber: f64 },
    /// Samples of `p` and `p'` on the `x` nodes of the configured grid.
    Table { p: Vec<f64>, dp: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureName {
    Trapezoid,
    EndCorrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Generators with `|f| ≤ ε_f` are rejected.
    pub vanishing_eps: f64,
    pub quadrature: QuadratureName,
    pub picard_tolerance: f64,
    pub picard_iterations: usize,
    /// Multiplier `C` of `C·h²` in residual checks.
    pub residual_factor: f64,
    pub compat_floor: f64,
    pub compat_coefficient: f64,
    /// Relative floor for the radius fit of Taylor coefficients.
    pub noise_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let picard = PicardOptions::default();
        let compat = CompatibilityTolerance::default();
        Self {
            vanishing_eps: SystemOptions::default().vanishing_eps,
            quadrature: QuadratureName::EndCorrected,
            picard_tolerance: picard.tolerance,
            picard_iterations: picard.max_iterations,
            residual_factor: 100.0,
            compat_floor: compat.floor,
            compat_coefficient: compat.coefficient,
            noise_floor: 1e-9,
        }
    }
}

impl Tolerances {
    pub fn picard(&self) -> PicardOptions {
        PicardOptions {
            tolerance: self.picard_tolerance,
            max_iterations: self.picard_iterations,
        }
    }

    pub fn systems(&self) -> SystemOptions {
        SystemOptions {
            vanishing_eps: self.vanishing_eps,
            quadrature: match self.quadrature {
                QuadratureName::Trapezoid => Quadrature::Trapezoid,
                QuadratureName::EndCorrected => Quadrature::EndCorrected,
            },
        }
    }

    pub fn compatibility(&self) -> CompatibilityTolerance {
        CompatibilityTolerance {
            floor: self.compat_floor,
            coefficient: self.compat_coefficient,
        }
    }
}

/// Field fed to `expand` and `approx`.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Target {
    /// `T₀[1/(z - center)]`; `center` defaults to `2·min(a, b)`.
    Pole { center: Option<f64> },
    /// A field CSV (`x, y, re, im_i, im_k, im_ik`) on the analysis grid.
    File { path: PathBuf },
}

impl Default for Target {
    fn default() -> Self {
        Self::Pole { center: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Expansion {
    /// Circle radius as a fraction of `min(a, b)`.
    pub radius_fraction: f64,
    pub n_max: usize,
    pub circle_points: usize,
}

impl Default for Expansion {
    fn default() -> Self {
        Self {
            radius_fraction: 0.9,
            n_max: 30,
            circle_points: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Approx {
    pub degrees: Vec<usize>,
    /// Sample nodes on the rectangle scaled by this factor.
    pub scale: f64,
}

impl Default for Approx {
    fn default() -> Self {
        Self {
            degrees: vec![2, 4, 6, 8],
            scale: 0.8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Analysis {
    /// Upper bound on points per axis for `verify`, `expand` and `approx`,
    /// which apply the bicomplex operators at `O(n³)` cost.
    pub max_points: usize,
}

impl Default for Analysis {
    fn default() -> Self {
        Self { max_points: 501 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub a: f64,
    pub b: f64,
    pub nx: usize,
    pub ny: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub potential: Potential,
    pub m: f64,
    pub omega: f64,
    pub grid: GridConfig,
    pub n_max: usize,
    pub tolerances: Tolerances,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub target: Target,
    pub expansion: Expansion,
    pub approx: Approx,
    pub analysis: Analysis,
}

pub fn load_config(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text, path)
}

/// Parses and validates; `origin` is only used in messages.
pub fn parse_config(text: &str, origin: &Path) -> Result<RunConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Parse {
        path: origin.to_owned(),
        line: e.span().map(|s| text[..s.start].matches('\n').count() + 1),
        message: e.message().to_owned(),
    })?;
    validate(raw)
}

fn require<T>(v: Option<T>, field: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::validation(field, "required by this potential kind"))
}

fn validate(raw: RawConfig) -> Result<RunConfig, CliError> {
    let g = &raw.grid;
    let nx = g.nx.unwrap_or(DEFAULT_POINTS);
    let ny = g.ny.unwrap_or(DEFAULT_POINTS);
    for (name, n) in [("grid.nx", nx), ("grid.ny", ny)] {
        if n % 2 == 0 || n < 3 {
            return Err(CliError::validation(name, format!("must be odd and at least 3, got {n}")));
        }
    }
    for (name, v) in [("grid.a", g.a), ("grid.b", g.b)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(CliError::validation(name, format!("must be positive, got {v}")));
        }
    }
    let rp = raw.potential;
    let potential = match rp.kind {
        KindName::Zero => Potential::Zero,
        KindName::Constant => Potential::Constant(require(rp.value, "potential.value")?),
        KindName::Linear => Potential::Linear(require(rp.slope, "potential.slope")?),
        KindName::Polynomial => Potential::Polynomial(require(rp.coefficients, "potential.coefficients")?),
        KindName::Sine => Potential::Sine {
            amplitude: require(rp.amplitude, "potential.amplitude")?,
            wavenumber: require(rp.wavenumber, "potential.wavenumber")?,
        },
        KindName::Table => {
            let p = require(rp.p, "potential.p")?;
            let dp = require(rp.dp, "potential.dp")?;
            for (name, v) in [("potential.p", &p), ("potential.dp", &dp)] {
                if v.len() != nx {
                    return Err(CliError::validation(name, format!("needs {nx} samples, got {}", v.len())));
                }
            }
            Potential::Table { p, dp }
        }
    };
    if raw.expansion.radius_fraction <= 0.0 || raw.expansion.radius_fraction >= 1.0 {
        return Err(CliError::validation("expansion.radius_fraction", "must lie in (0, 1)"));
    }
    if raw.approx.degrees.is_empty() {
        return Err(CliError::validation("approx.degrees", "must not be empty"));
    }
    if raw.analysis.max_points < 5 {
        return Err(CliError::validation("analysis.max_points", "must be at least 5"));
    }
    Ok(RunConfig {
        potential,
        m: rp.m,
        omega: rp.omega,
        grid: GridConfig { a: g.a, b: g.b, nx, ny },
        n_max: raw.degrees.n_max.unwrap_or(DEFAULT_N_MAX),
        tolerances: raw.tolerances,
        out_dir: raw.output.dir.unwrap_or_else(|| PathBuf::from("out")),
        seed: raw.seed,
        target: raw.target,
        expansion: raw.expansion,
        approx: raw.approx,
        analysis: raw.analysis,
    })
}

fn axis(half: f64, n: usize) -> Result<SymmetricGrid1D, CliError> {
    Ok(SymmetricGrid1D::new(half, n)?)
}

/// Largest point count reachable from `n` by halving the step that does
/// not exceed `cap`; falls back to `cap` rounded down to odd.
fn capped(n: usize, cap: usize) -> usize {
    let mut m = n;
    while m > cap && m % 4 == 1 {
        m = m.div_ceil(2);
    }
    if m > cap {
        cap - (1 - cap % 2)
    } else {
        m
    }
}

impl RunConfig {
    pub fn domain(&self) -> Result<Grid2D, CliError> {
        Ok(Grid2D::new(axis(self.grid.a, self.grid.nx)?, axis(self.grid.b, self.grid.ny)?))
    }

    /// The configured grid, coarsened until both axes fit `analysis.max_points`.
    pub fn analysis_domain(&self) -> Result<Grid2D, CliError> {
        let cap = self.analysis.max_points;
        Ok(Grid2D::new(
            axis(self.grid.a, capped(self.grid.nx, cap))?,
            axis(self.grid.b, capped(self.grid.ny, cap))?,
        ))
    }

    pub fn is_free(&self) -> bool {
        let zero_p = match &self.potential {
            Potential::Zero => true,
            Potential::Constant(c) | Potential::Linear(c) => *c == 0.0,
            Potential::Polynomial(c) => c.iter().all(|v| *v == 0.0),
            Potential::Sine { amplitude, .. } => *amplitude == 0.0,
            Potential::Table { p, .. } => p.iter().all(|v| *v == 0.0),
        };
        zero_p && self.m == 0.0 && self.omega == 0.0
    }

    /// Potential spec on `domain`, which must share the configured `x`
    /// extent; tables are subsampled when the grid is a coarsening.
    pub fn potential_spec(&self, domain: Grid2D) -> Result<PotentialSpec, CliError> {
        let kind = match &self.potential {
            Potential::Zero => PotentialKind::Zero,
            Potential::Constant(c) => PotentialKind::Constant(*c),
            Potential::Linear(c) => PotentialKind::Linear(*c),
            Potential::Polynomial(c) => PotentialKind::Polynomial(c.clone()),
            Potential::Sine { amplitude, wavenumber } => {
                return Ok(PotentialSpec::sine(*amplitude, *wavenumber, self.m, self.omega, domain));
            }
            Potential::Table { p, dp } => {
                let n = domain.nx();
                if !(self.grid.nx - 1).is_multiple_of(n - 1) {
                    return Err(CliError::validation(
                        "analysis.max_points",
                        format!("a {n}-point grid cannot subsample the {}-point table", self.grid.nx),
                    ));
                }
                let stride = (self.grid.nx - 1) / (n - 1);
                let pick = |v: &[f64]| {
                    let s = (0..n).map(|j| C64::new(v[j * stride], 0.0)).collect();
                    ComplexField1D::new(domain.x, s)
                };
                PotentialKind::Table {
                    p: pick(p)?,
                    dp: Some(pick(dp)?),
                }
            }
        };
        Ok(PotentialSpec::new(kind, self.m, self.omega, domain))
    }
}
