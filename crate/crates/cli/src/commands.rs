use std::path::PathBuf;

use pseudopower_core::approx::{
    boundary_nodes, runge_fit, taylor_coefficients_with, FitError, RungeFit, TaylorOptions,
};
use pseudopower_core::dirac::{derive_potential_data, PotentialData};
use pseudopower_core::formal::{formal_power_closed, FormalPowerSet};
use pseudopower_core::systems::build_x_systems_with;
use pseudopower_core::transmutation::{Composite, TransmutationSet};
use pseudopower_core::{Bicomplex, BicomplexField2D, ComplexField2D, Grid2D};
use serde::Serialize;

use crate::config::{RunConfig, Target};
use crate::error::CliError;
use crate::output::{finite, read_field, write_field, write_json, write_kernel};
use crate::verify;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    /// Formal powers of both equations as field CSVs.
    Powers,
    /// Goursat and dressed transmutation kernels as CSVs.
    Kernels,
    /// Invariant suite with a JSON report.
    Verify,
    /// Taylor coefficients and radius estimate of the target field.
    Expand,
    /// Runge decay table for the target field.
    Approx,
}

/// What a command produced; `pass` decides the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub pass: bool,
    pub artifacts: Vec<PathBuf>,
}

pub fn run_command(command: Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    std::fs::create_dir_all(&cfg.out_dir).map_err(|e| CliError::io(&cfg.out_dir, e))?;
    match command {
        Command::Powers => powers(cfg),
        Command::Kernels => kernels(cfg),
        Command::Verify => verify::verify(cfg),
        Command::Expand => expand(cfg),
        Command::Approx => approx(cfg),
    }
}

pub(crate) fn data_on(cfg: &RunConfig, grid: Grid2D) -> Result<PotentialData, CliError> {
    Ok(derive_potential_data(&cfg.potential_spec(grid)?)?)
}

fn out(cfg: &RunConfig, name: &str) -> PathBuf {
    cfg.out_dir.join(name)
}

/// `power_{main|succeeding}_n{n}_{1|k}.csv` for `n ≤ n_max`, one power at a
/// time so only a single field is held at once.
fn powers(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let data = data_on(cfg, cfg.domain()?)?;
    let opts = cfg.tolerances.systems();
    let xs = build_x_systems_with(&data.f, cfg.n_max, opts)?;
    let ys = build_x_systems_with(&data.g, cfg.n_max, opts)?;
    let xs1 = xs.reciprocal();
    let phi = data.phi.sc();
    let phi1 = ComplexField2D::outer(&data.inv_f, &data.g, |a, b| a * b);
    let mut artifacts = Vec::new();
    for n in 0..=cfg.n_max {
        for (label, x_sys, generator) in [("main", &xs, &phi), ("succeeding", &xs1, &phi1)] {
            for (a_label, a) in [("1", Bicomplex::ONE), ("k", Bicomplex::K)] {
                let z = formal_power_closed(n, a, x_sys, &ys, generator)?;
                let path = out(cfg, &format!("power_{label}_n{n}_{a_label}.csv"));
                write_field(&path, &z)?;
                artifacts.push(path);
            }
        }
    }
    log::info!("wrote {} power files", artifacts.len());
    Ok(Outcome { pass: true, artifacts })
}

fn kernels(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let data = data_on(cfg, cfg.domain()?)?;
    let set = data.transmutations(cfg.tolerances.picard())?;
    let files = [
        ("kernel_f.csv", set.f.base()),
        ("kernel_recip_f.csv", set.inv_f.base()),
        ("kernel_g.csv", set.g.base()),
        ("dressed_f.csv", set.f.kernel()),
        ("dressed_recip_f.csv", set.inv_f.kernel()),
        ("dressed_g.csv", set.g.kernel()),
        ("dressed_recip_g.csv", set.inv_g.kernel()),
    ];
    let mut artifacts = Vec::new();
    for (name, k) in files {
        let path = out(cfg, name);
        write_kernel(&path, k)?;
        artifacts.push(path);
    }
    Ok(Outcome { pass: true, artifacts })
}

pub(crate) fn pole_field(grid: Grid2D, center: f64) -> Result<BicomplexField2D, CliError> {
    let mut samples = Vec::with_capacity(grid.len());
    for l in 0..grid.ny() {
        for j in 0..grid.nx() {
            let (x, y) = grid.coords(j, l);
            samples.push((Bicomplex::point(x, y) - Bicomplex::real(center)).inv()?);
        }
    }
    Ok(BicomplexField2D::new(grid, samples)?)
}

fn target(cfg: &RunConfig, data: &PotentialData, ops: &TransmutationSet) -> Result<BicomplexField2D, CliError> {
    match &cfg.target {
        Target::Pole { center } => {
            let c = center.unwrap_or(2.0 * cfg.grid.a.min(cfg.grid.b));
            if c.abs() <= cfg.grid.a {
                return Err(CliError::validation("target.center", "pole must lie outside the domain"));
            }
            Ok(ops.apply(Composite::T0, &pole_field(data.grid, c)?)?)
        }
        Target::File { path } => read_field(path, data.grid),
    }
}

#[derive(Debug, Serialize)]
struct CoefficientRecord {
    n: usize,
    re: f64,
    im_i: f64,
    im_k: f64,
    im_ik: f64,
}

#[derive(Debug, Serialize)]
struct ExpansionReport {
    nx: usize,
    ny: usize,
    sample_radius: f64,
    radius_estimate: Option<f64>,
    radius_plus: Option<f64>,
    radius_minus: Option<f64>,
    coefficients: Vec<CoefficientRecord>,
}

fn expand(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.analysis_domain()?;
    let data = data_on(cfg, grid)?;
    let ops = data.transmutations(cfg.tolerances.picard())?;
    let w = target(cfg, &data, &ops)?;
    let opts = TaylorOptions {
        circle_points: cfg.expansion.circle_points,
        noise_floor: cfg.tolerances.noise_floor,
        residual_factor: cfg.tolerances.residual_factor,
    };
    let r = cfg.expansion.radius_fraction * cfg.grid.a.min(cfg.grid.b);
    let exp = taylor_coefficients_with(&w, cfg.expansion.n_max, r, &ops, &data, opts)?;
    let report = ExpansionReport {
        nx: grid.nx(),
        ny: grid.ny(),
        sample_radius: exp.sample_radius,
        radius_estimate: finite(exp.radius_estimate),
        radius_plus: finite(exp.radius_plus),
        radius_minus: finite(exp.radius_minus),
        coefficients: exp
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, a)| CoefficientRecord {
                n,
                re: a.re,
                im_i: a.im_i,
                im_k: a.im_k,
                im_ik: a.im_ik,
            })
            .collect(),
    };
    let path = out(cfg, "expansion.json");
    write_json(&path, &report)?;
    Ok(Outcome {
        pass: true,
        artifacts: vec![path],
    })
}

#[derive(Debug, Serialize)]
pub struct FitRecord {
    pub degree: usize,
    pub l2_error: f64,
    pub sup_error: f64,
    pub condition: Option<f64>,
    /// The truncated-SVD solution was used.
    pub ill_conditioned: bool,
}

impl FitRecord {
    fn new(fit: &RungeFit, ill_conditioned: bool) -> Self {
        Self {
            degree: fit.degree,
            l2_error: fit.l2_error,
            sup_error: fit.sup_error,
            condition: finite(fit.condition),
            ill_conditioned,
        }
    }
}

#[derive(Debug, Serialize)]
struct ApproxReport {
    nx: usize,
    ny: usize,
    nodes: usize,
    fits: Vec<FitRecord>,
    strictly_decreasing: bool,
}

pub(crate) fn fit_or_fallback(
    w: &BicomplexField2D,
    nodes: &[(usize, usize)],
    powers: &FormalPowerSet,
    degree: usize,
) -> Result<(RungeFit, bool), CliError> {
    match runge_fit(w, nodes, powers, degree) {
        Ok(fit) => Ok((fit, false)),
        Err(FitError::IllConditioned { fallback, condition }) => {
            log::warn!("degree {degree}: condition {condition:e}, using truncated solution");
            Ok((*fallback, true))
        }
        Err(FitError::Core(e)) => Err(e.into()),
    }
}

fn approx(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let grid = cfg.analysis_domain()?;
    let data = data_on(cfg, grid)?;
    let ops = data.transmutations(cfg.tolerances.picard())?;
    let w = target(cfg, &data, &ops)?;
    let mut degrees = cfg.approx.degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    let top = *degrees.last().expect("validated non-empty");
    let powers = FormalPowerSet::closed(&data, top)?;
    let nodes = boundary_nodes(&grid, cfg.approx.scale);
    let mut fits = Vec::new();
    for &d in &degrees {
        let (fit, ill) = fit_or_fallback(&w, &nodes, &powers, d)?;
        fits.push(FitRecord::new(&fit, ill));
    }
    let strictly_decreasing = fits.windows(2).all(|p| p[1].sup_error < p[0].sup_error);
    let report = ApproxReport {
        nx: grid.nx(),
        ny: grid.ny(),
        nodes: nodes.len(),
        fits,
        strictly_decreasing,
    };
    let path = out(cfg, "approx.json");
    write_json(&path, &report)?;
    Ok(Outcome {
        pass: strictly_decreasing,
        artifacts: vec![path],
    })
}

pub fn display(paths: &[PathBuf]) -> String {
    paths.iter().map(|p| p.display().to_string()).collect::<Vec<_>>().join("\n")
}

