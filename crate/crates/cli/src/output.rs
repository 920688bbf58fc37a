//! Artifact formats.
//!
//! Fields: CSV with header `x,y,re,im_i,im_k,im_ik`, one row per node in
//! row-major order (`y` outer, `x` inner). Kernels: CSV with header
//! `x,t,re,im`. Reports: pretty-printed JSON.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use pseudopower_core::goursat::TriangularKernel;
use pseudopower_core::{Bicomplex, BicomplexField2D, Grid2D};
use serde::Serialize;

use crate::error::CliError;

pub const FIELD_HEADER: [&str; 6] = ["x", "y", "re", "im_i", "im_k", "im_ik"];
pub const KERNEL_HEADER: [&str; 4] = ["x", "t", "re", "im"];

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

pub fn write_field(path: &Path, w: &BicomplexField2D) -> Result<(), CliError> {
    let g = *w.grid();
    let mut out = writer(path)?;
    let io = |e: csv::Error| CliError::io(path, e);
    out.write_record(FIELD_HEADER).map_err(io)?;
    for l in 0..g.ny() {
        for j in 0..g.nx() {
            let (x, y) = g.coords(j, l);
            let v = w.at(j, l);
            out.serialize((x, y, v.re, v.im_i, v.im_k, v.im_ik)).map_err(io)?;
        }
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

pub fn read_field(path: &Path, grid: Grid2D) -> Result<BicomplexField2D, CliError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| CliError::io(path, e))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| CliError::io(path, e))?
        .iter()
        .map(str::to_owned)
        .collect();
    if header != FIELD_HEADER {
        return Err(CliError::Parse {
            path: path.to_owned(),
            line: Some(1),
            message: format!("expected header {}", FIELD_HEADER.join(",")),
        });
    }
    let tol = 1e-9 * (grid.x.half_width() + grid.y.half_width());
    let mut samples = Vec::with_capacity(grid.len());
    for (i, row) in rdr.deserialize::<(f64, f64, f64, f64, f64, f64)>().enumerate() {
        let line = Some(i + 2);
        let (x, y, re, im_i, im_k, im_ik) = row.map_err(|e| CliError::Parse {
            path: path.to_owned(),
            line,
            message: e.to_string(),
        })?;
        if i >= grid.len() {
            break;
        }
        let (ex, ey) = grid.coords(i % grid.nx(), i / grid.nx());
        if (x - ex).abs() > tol || (y - ey).abs() > tol {
            return Err(CliError::Parse {
                path: path.to_owned(),
                line,
                message: format!("node ({x}, {y}) does not match grid node ({ex}, {ey})"),
            });
        }
        samples.push(Bicomplex::new(re, im_i, im_k, im_ik));
    }
    if samples.len() != grid.len() {
        return Err(CliError::validation(
            "target.path",
            format!("field has {} rows, the grid has {} nodes", samples.len(), grid.len()),
        ));
    }
    Ok(BicomplexField2D::new(grid, samples)?)
}

pub fn write_kernel(path: &Path, k: &TriangularKernel) -> Result<(), CliError> {
    let mut out = writer(path)?;
    let io = |e: csv::Error| CliError::io(path, e);
    out.write_record(KERNEL_HEADER).map_err(io)?;
    for (x, t, v) in k.entries() {
        out.serialize((x, t, v.re, v.im)).map_err(io)?;
    }
    out.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| CliError::io(path, e))?;
    writeln!(out).and_then(|_| out.flush()).map_err(|e| CliError::io(path, e))
}

/// `None` for non-finite values, which JSON cannot represent.
pub fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}
