//! Two-well corner feasibility from a JSON description of the wells, the
//! boundary gradients and the domain normals.

use std::path::Path;

use junctions_core::twowell::{two_well_bc_feasible, two_well_bc_feasible_complement};
use junctions_core::{Mat3, Vec3};
use serde::{Deserialize, Serialize};

use crate::args::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{fmt_num, round12, to_json, Table};

/// Matrices are row-major.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Input {
    pub u1: [[f64; 3]; 3],
    pub u2: [[f64; 3]; 3],
    pub f1: [[f64; 3]; 3],
    pub f2: [[f64; 3]; 3],
    pub n1: [f64; 3],
    pub n2: [f64; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub hypothesis_ok: bool,
    pub feasible: bool,
    pub d: Option<[f64; 3]>,
    pub overlap_ok: Option<bool>,
}

pub fn parse(text: &str) -> Result<Input, CliError> {
    serde_json::from_str(text).map_err(|e| CliError {
        exit_code: 2,
        kind: "parse".into(),
        message: format!("{e} (line {}, column {})", e.line(), e.column()),
    })
}

pub fn evaluate(input: &Input, complement: bool, cfg: &RunConfig) -> Result<Verdict, CliError> {
    let (u1, u2, f1, f2) = (Mat3(input.u1), Mat3(input.u2), Mat3(input.f1), Mat3(input.f2));
    let (n1, n2) = (Vec3(input.n1), Vec3(input.n2));
    let r = if complement {
        two_well_bc_feasible_complement(&u1, &u2, &n1, &n2, &f1, &f2, &cfg.tol)?
    } else {
        two_well_bc_feasible(&u1, &u2, &n1, &n2, &f1, &f2, &cfg.tol)?
    };
    Ok(Verdict { hypothesis_ok: r.hypothesis_ok, feasible: r.feasible, d: r.d.map(|d| d.0.map(round12)), overlap_ok: r.overlap_ok })
}

pub fn run(cfg: &RunConfig, path: &Path, complement: bool) -> Result<Vec<u8>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
    let v = evaluate(&parse(&text)?, complement, cfg)?;
    match cfg.format {
        Format::Json => to_json(&v),
        Format::Csv => {
            let mut t = Table::new(&["hypothesis_ok", "feasible", "d1", "d2", "d3", "overlap_ok"]);
            let d = |i: usize| v.d.map(|d| fmt_num(d[i])).unwrap_or_default();
            t.rows.push(vec![
                v.hypothesis_ok.to_string(),
                v.feasible.to_string(),
                d(0),
                d(1),
                d(2),
                v.overlap_ok.map(|o| o.to_string()).unwrap_or_default(),
            ]);
            t.to_csv()
        }
    }
}
