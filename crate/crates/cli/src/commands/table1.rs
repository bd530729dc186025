//! Per-partner summary for base plate (1,+) or another base: incompatibility
//! angles under both lattice conventions, junction verdict, shear ranges over
//! λ ∈ [1.033, 1.035] and stability.

use junctions_core::{habit_plate, incompatibility_angle, PlateId};
use rayon::prelude::*;
use serde::Serialize;

use super::{assess, junctions_at};
use crate::args::{lambda_grid, Format, RunConfig};
use crate::error::CliError;
use crate::output::{fmt_opt, round12, to_json, Table};

/// Experimental second lattice parameter paired with λ = 1.0331.
pub const D_EXPERIMENTAL: f64 = 0.9661;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub partner: String,
    /// Degrees, at the `--d` value (0.9661 by default).
    pub angle_experimental_d: Option<f64>,
    /// Degrees, at d = 1/λ.
    pub angle_inverse_d: Option<f64>,
    /// `V_II` or `none`.
    pub junction: String,
    /// Junctions of any kind at the reference λ.
    pub raw_junctions: usize,
    pub small_shear: Option<[f64; 2]>,
    pub large_shear: Option<[f64; 2]>,
    pub stable: Option<bool>,
}

fn angle(lambda: f64, d: f64, base: PlateId, partner: PlateId, cfg: &RunConfig) -> Option<f64> {
    let f1 = habit_plate(lambda, d, base).ok()?.gradient();
    let f2 = habit_plate(lambda, d, partner).ok()?.gradient();
    incompatibility_angle(&f1, &f2, &cfg.tol).ok().map(|a| round12(a.degrees))
}

fn widen(range: &mut Option<[f64; 2]>, x: f64) {
    let r = range.get_or_insert([x, x]);
    r[0] = r[0].min(x);
    r[1] = r[1].max(x);
}

pub fn rows(cfg: &RunConfig) -> Result<Vec<Row>, CliError> {
    let lambda = cfg.lambdas[0];
    let d_exp = cfg.d.unwrap_or(D_EXPERIMENTAL);
    cfg.require_regime()?;
    let partners = cfg.partner_ids();
    let sweep = lambda_grid(1.033, 1.035, 0.0005);
    partners
        .par_iter()
        .map(|&p| {
            let here = junctions_at(lambda, 1.0 / lambda, cfg.base, &[p], &cfg.tol)?;
            let mut vii = Vec::new();
            for j in &here {
                let a = assess(j, &cfg.tol)?;
                if a.vii.admissible() {
                    vii.push(a);
                }
            }
            let (mut small, mut large) = (None, None);
            for &l in &sweep {
                for j in junctions_at(l, 1.0 / l, cfg.base, &[p], &cfg.tol)? {
                    if super::classify_vii(&j, &cfg.tol)?.admissible() {
                        let (a, b) = (j.t1.abs().min(j.t2.abs()), j.t1.abs().max(j.t2.abs()));
                        widen(&mut small, round12(a));
                        widen(&mut large, round12(b));
                    }
                }
            }
            Ok(Row {
                partner: p.to_string(),
                angle_experimental_d: angle(lambda, d_exp, cfg.base, p, cfg),
                angle_inverse_d: angle(lambda, 1.0 / lambda, cfg.base, p, cfg),
                junction: if vii.is_empty() { "none" } else { "V_II" }.into(),
                raw_junctions: here.len(),
                small_shear: small,
                large_shear: large,
                stable: (!vii.is_empty()).then(|| vii.iter().all(|a| a.stability.stable)),
            })
        })
        .collect()
}

pub fn run(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let rows = rows(cfg)?;
    match cfg.format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut t = Table::new(&[
                "partner",
                "angle_experimental_d",
                "angle_inverse_d",
                "junction",
                "raw_junctions",
                "small_shear_min",
                "small_shear_max",
                "large_shear_min",
                "large_shear_max",
                "stable",
            ]);
            for r in rows {
                let lo = |x: Option<[f64; 2]>, i: usize| fmt_opt(x.map(|v| v[i]));
                t.rows.push(vec![
                    r.partner,
                    fmt_opt(r.angle_experimental_d),
                    fmt_opt(r.angle_inverse_d),
                    r.junction,
                    r.raw_junctions.to_string(),
                    lo(r.small_shear, 0),
                    lo(r.small_shear, 1),
                    lo(r.large_shear, 0),
                    lo(r.large_shear, 1),
                    r.stable.map(|s| s.to_string()).unwrap_or_default(),
                ]);
            }
            t.to_csv()
        }
    }
}
