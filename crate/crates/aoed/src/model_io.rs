//! Model directory format.
//!
//! ```text
//! <dir>/manifest.json   {"format_version": 1, "m", "d", "n", "noise_var", "generator"}
//! <dir>/F.csv           (m*d) x n
//! <dir>/prior_cov.csv   n x n
//! <dir>/prior_mean.csv  n x 1
//! ```
//!
//! Matrix files are row-major decimal CSV with `,` separators, `\n` row
//! terminators, no header, and 17 significant digits per value.

use std::fs;
use std::path::Path;

use aoed_core::Model;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::files::{fmt_f64, write_atomic};
use crate::problems::ProblemSpec;

pub const FORMAT_VERSION: u32 = 1;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const FORWARD_FILE: &str = "F.csv";
pub const PRIOR_COV_FILE: &str = "prior_cov.csv";
pub const PRIOR_MEAN_FILE: &str = "prior_mean.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub format_version: u32,
    pub m: usize,
    pub d: usize,
    pub n: usize,
    pub noise_var: f64,
    /// Spec the model was generated from, if any.
    #[serde(default)]
    pub generator: Option<ProblemSpec>,
}

pub fn save_model(model: &Model, dir: &Path, generator: Option<&ProblemSpec>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let manifest = Manifest {
        format_version: FORMAT_VERSION,
        m: model.m(),
        d: model.d(),
        n: model.n(),
        noise_var: model.noise_var(),
        generator: generator.cloned(),
    };
    let mut json = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    json.push(b'\n');
    write_atomic(&dir.join(MANIFEST_FILE), &json)?;
    write_atomic(&dir.join(FORWARD_FILE), matrix_csv(model.forward()).as_bytes())?;
    write_atomic(&dir.join(PRIOR_COV_FILE), matrix_csv(model.prior_cov()).as_bytes())?;
    let mean = DMatrix::from_column_slice(model.n(), 1, model.prior_mean().as_slice());
    write_atomic(&dir.join(PRIOR_MEAN_FILE), matrix_csv(&mean).as_bytes())?;
    Ok(())
}

pub fn load_model(dir: &Path) -> Result<(Model, Manifest)> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let version: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::format(&manifest_path, e.to_string()))?;
    match version.get("format_version").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(FORMAT_VERSION) => {}
        Some(v) => {
            return Err(Error::format(
                &manifest_path,
                format!("unsupported format_version {v}, expected {FORMAT_VERSION}"),
            ))
        }
        None => return Err(Error::format(&manifest_path, "missing format_version")),
    }
    let manifest: Manifest =
        serde_json::from_value(version).map_err(|e| Error::format(&manifest_path, e.to_string()))?;
    let (m, d, n) = (manifest.m, manifest.d, manifest.n);

    let forward = read_matrix(&dir.join(FORWARD_FILE), m * d, n)?;
    let prior_cov = read_matrix(&dir.join(PRIOR_COV_FILE), n, n)?;
    let prior_mean = read_matrix(&dir.join(PRIOR_MEAN_FILE), n, 1)?;
    let model = Model::new(
        forward,
        m,
        d,
        prior_cov,
        DVector::from_column_slice(prior_mean.as_slice()),
        manifest.noise_var,
    )?;
    Ok((model, manifest))
}

pub(crate) fn matrix_csv(a: &DMatrix<f64>) -> String {
    let mut out = String::with_capacity(a.len() * 24);
    for row in a.row_iter() {
        let line: Vec<String> = row.iter().map(|&v| fmt_f64(v)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

fn read_matrix(path: &Path, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    let mut values = Vec::with_capacity(rows * cols);
    let mut found_rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.len() != cols {
            return Err(Error::format(
                path,
                format!("row {} has {} columns, expected {cols}", found_rows + 1, record.len()),
            ));
        }
        for field in record.iter() {
            let v: f64 = field.trim().parse().map_err(|_| {
                Error::format(path, format!("row {}: cannot parse {field:?}", found_rows + 1))
            })?;
            values.push(v);
        }
        found_rows += 1;
    }
    if found_rows != rows {
        return Err(Error::format(
            path,
            format!("{found_rows} rows, expected {rows}"),
        ));
    }
    Ok(DMatrix::from_row_slice(rows, cols, &values))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    }
}
