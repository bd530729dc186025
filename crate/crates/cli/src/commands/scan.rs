//! Junction report: every plastic junction of the base plate with its
//! classification, rigidity, separation and stability.

use junctions_core::junction::dislocation_density_norm;
use junctions_core::{SlipSystem, Vec3};
use rayon::prelude::*;
use serde::Serialize;

use super::{assess, junctions_at, per_lambda, Assessed};
use crate::args::{Format, RunConfig};
use crate::error::CliError;
use crate::output::{fmt_num, round12, to_json, Table};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Slip {
    pub phi: [i32; 3],
    pub psi: [i32; 3],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JunctionRecord {
    pub partner: String,
    pub slip1: Slip,
    pub slip2: Slip,
    pub t1: f64,
    pub t2: f64,
    pub b: [f64; 3],
    pub m: [f64; 3],
    pub residual: f64,
    /// Closed-form case label (`a`–`d`) and option, when the junction is one of them.
    pub case: Option<String>,
    pub option: Option<u8>,
    pub psi_perp: bool,
    pub rigid: bool,
    pub rigidity_method: String,
    pub f_normalized: f64,
    pub det_normalized: f64,
    pub fd_rel_error: f64,
    pub vii: bool,
    /// Separation margins of the two sheared gradients.
    pub margins: [f64; 2],
    pub stable: bool,
    /// Sign of the partner normal used for the wedge construction.
    pub n2_sign: f64,
    pub reasons: Vec<String>,
    pub dislocation_density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub junctions: usize,
    pub vii: usize,
    pub stable: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub lambda: f64,
    pub d: f64,
    pub base: String,
    pub partners: Vec<String>,
    pub summary: Summary,
    pub junctions: Vec<JunctionRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reports {
    pub reports: Vec<ScanReport>,
}

fn slip(s: &SlipSystem) -> Slip {
    Slip { phi: s.phi, psi: s.psi }
}

fn vec(v: &Vec3) -> [f64; 3] {
    v.0.map(round12)
}

fn record(a: &Assessed) -> JunctionRecord {
    let j = &a.junction;
    let r = &a.vii.rigidity;
    JunctionRecord {
        partner: j.plate2.id.to_string(),
        slip1: slip(&j.slip1),
        slip2: slip(&j.slip2),
        t1: round12(j.t1),
        t2: round12(j.t2),
        b: vec(&j.b),
        m: vec(&j.m),
        residual: round12(j.residual),
        case: a.case.map(|c| c.case.label().to_string()),
        option: a.case.map(|c| c.option),
        psi_perp: a.vii.psi_perp,
        rigid: r.rigid,
        rigidity_method: format!("{:?}", r.method).to_lowercase(),
        f_normalized: round12(r.f_normalized),
        det_normalized: round12(r.det_normalized),
        fd_rel_error: round12(r.fd_rel_error),
        vii: a.vii.admissible(),
        margins: [0, 1].map(|i| a.stability.separation.get(i).map_or(f64::NAN, |s| round12(s.margin))),
        stable: a.stability.stable,
        n2_sign: a.n2_sign,
        reasons: a.stability.reasons.clone(),
        dislocation_density: round12(dislocation_density_norm(j)),
    }
}

pub fn report(cfg: &RunConfig, lambda: f64) -> Result<ScanReport, CliError> {
    let d = cfg.d_for(lambda);
    let partners = cfg.partner_ids();
    let js = junctions_at(lambda, d, cfg.base, &partners, &cfg.tol)?;
    let assessed = js.par_iter().map(|j| assess(j, &cfg.tol)).collect::<Result<Vec<_>, _>>()?;
    let junctions: Vec<JunctionRecord> = assessed.iter().map(record).collect();
    let summary = Summary {
        junctions: junctions.len(),
        vii: junctions.iter().filter(|r| r.vii).count(),
        stable: junctions.iter().filter(|r| r.stable).count(),
    };
    Ok(ScanReport {
        lambda: round12(lambda),
        d: round12(d),
        base: cfg.base.to_string(),
        partners: partners.iter().map(|p| p.to_string()).collect(),
        summary,
        junctions,
    })
}

pub fn reports(cfg: &RunConfig) -> Result<Reports, CliError> {
    cfg.require_regime()?;
    Ok(Reports { reports: per_lambda(cfg, |l| report(cfg, l))? })
}

pub fn run(cfg: &RunConfig) -> Result<Vec<u8>, CliError> {
    let r = reports(cfg)?;
    match cfg.format {
        Format::Json => to_json(&r),
        Format::Csv => {
            let mut t = Table::new(&[
                "lambda", "d", "partner", "phi1", "psi1", "phi2", "psi2", "t1", "t2", "m1", "m2", "m3", "case", "option",
                "vii", "rigid", "f_normalized", "margin1", "margin2", "stable", "dislocation_density",
            ]);
            let ints = |v: [i32; 3]| format!("{} {} {}", v[0], v[1], v[2]);
            for rep in &r.reports {
                for j in &rep.junctions {
                    t.rows.push(vec![
                        fmt_num(rep.lambda),
                        fmt_num(rep.d),
                        j.partner.clone(),
                        ints(j.slip1.phi),
                        ints(j.slip1.psi),
                        ints(j.slip2.phi),
                        ints(j.slip2.psi),
                        fmt_num(j.t1),
                        fmt_num(j.t2),
                        fmt_num(j.m[0]),
                        fmt_num(j.m[1]),
                        fmt_num(j.m[2]),
                        j.case.clone().unwrap_or_default(),
                        j.option.map(|o| o.to_string()).unwrap_or_default(),
                        j.vii.to_string(),
                        j.rigid.to_string(),
                        fmt_num(j.f_normalized),
                        fmt_num(j.margins[0]),
                        fmt_num(j.margins[1]),
                        j.stable.to_string(),
                        fmt_num(j.dislocation_density),
                    ]);
                }
            }
            t.to_csv()
        }
    }
}
