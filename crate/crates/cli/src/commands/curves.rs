//! λ-curves: shear amounts, rigidity function, dislocation density and
//! separation margin of the four cases of base plate (1,+).

use junctions_core::junction::{dislocation_density_norm, eta_xi, local_rigidity, match_case, separation_margin, ThmCase};
use junctions_core::{PlateId, Sign};
use serde::Serialize;

use super::{junctions_at, per_lambda};
use crate::args::{Curve, Format, RunConfig};
use crate::error::CliError;
use crate::output::{fmt_opt, round12, to_json, Table};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Curves {
    pub columns: Vec<String>,
    /// One row per λ, ascending; the first entry is λ.
    pub rows: Vec<Vec<Option<f64>>>,
}

fn columns(which: Curve) -> Vec<String> {
    let per_case = |p: &str| ThmCase::ALL.iter().map(|c| format!("{p}_{}", c.label())).collect::<Vec<_>>();
    let mut cols = vec!["lambda".to_string()];
    cols.extend(match which {
        Curve::EtaXi => ["eta1", "eta2", "xi1", "xi2"].map(String::from).to_vec(),
        Curve::RigidityF => per_case("f"),
        Curve::Curl => per_case("curl"),
        Curve::Separation => per_case("margin"),
    });
    cols
}

fn row(cfg: &RunConfig, which: Curve, lambda: f64) -> Result<Vec<Option<f64>>, CliError> {
    if which == Curve::EtaXi {
        let (a, b, c, d) = eta_xi(lambda)?;
        return Ok(vec![Some(lambda), Some(a), Some(b), Some(c), Some(d)]);
    }
    let d = cfg.d_for(lambda);
    let partners: Vec<PlateId> = ThmCase::ALL.iter().map(|c| c.partner()).collect();
    let js = junctions_at(lambda, d, cfg.base, &partners, &cfg.tol)?;
    let mut out = vec![Some(lambda)];
    for case in ThmCase::ALL {
        let mut value: Option<f64> = None;
        for j in &js {
            let Some(m) = match_case(j).filter(|m| m.case == case) else { continue };
            match which {
                Curve::RigidityF if m.option == 1 => value = Some(local_rigidity(j, &cfg.tol)?.f_normalized),
                Curve::Curl if m.option == 1 => value = Some(dislocation_density_norm(j)),
                Curve::Separation => {
                    let (f1, f2) = j.gradients();
                    for (f, plate, slip) in [(f1, &j.plate1, &j.slip1), (f2, &j.plate2, &j.slip2)] {
                        let r = separation_margin(&f, plate.id.variant, Some(slip), lambda, d, &cfg.tol)?;
                        value = Some(value.map_or(r.margin, |v| v.min(r.margin)));
                    }
                }
                _ => {}
            }
        }
        out.push(value);
    }
    Ok(out)
}

pub fn curves(cfg: &RunConfig, which: Curve) -> Result<Curves, CliError> {
    cfg.require_regime()?;
    if which != Curve::EtaXi && cfg.base != PlateId::new(1, Sign::Plus) {
        return Err(CliError::config("case curves are defined for base plate 1,+"));
    }
    let rows = per_lambda(cfg, |l| row(cfg, which, l))?;
    let rows = rows.into_iter().map(|r| r.into_iter().map(|x| x.map(round12)).collect()).collect();
    Ok(Curves { columns: columns(which), rows })
}

pub fn run(cfg: &RunConfig, which: Curve) -> Result<Vec<u8>, CliError> {
    let c = curves(cfg, which)?;
    match cfg.format {
        Format::Json => to_json(&c),
        Format::Csv => {
            let mut t = Table { header: c.columns.clone(), rows: Vec::new() };
            t.rows = c.rows.iter().map(|r| r.iter().map(|x| fmt_opt(*x)).collect()).collect();
            t.to_csv()
        }
    }
}
