//! Command-line arguments and the resolved run configuration.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use junctions_core::junction::LAMBDA_MAX;
use junctions_core::{PlateId, Tolerances};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "junctions", version, about = "Plastic junctions between habit-plane martensite plates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Incompatibility angles, junction verdicts and shear ranges per partner plate.
    Table1 {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// One λ-curve as a table with one row per grid point.
    Curves {
        #[arg(value_enum)]
        which: Curve,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Every junction of the base plate with rigidity, separation and stability.
    Scan {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Corner boundary-condition feasibility for two wells, read from JSON.
    Twowell {
        /// JSON file with `u1`, `u2`, `f1`, `f2` (row-major 3×3) and `n1`, `n2`.
        #[arg(long)]
        input: PathBuf,
        /// Also require the overlap condition of the complementary domain.
        #[arg(long)]
        complement: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Curve {
    #[value(name = "eta_xi")]
    EtaXi,
    #[value(name = "rigidity_f")]
    RigidityF,
    Curl,
    Separation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, Default, Args)]
pub struct CommonArgs {
    /// Single stretch parameter λ.
    #[arg(long, conflicts_with = "lambda_range")]
    pub lambda: Option<f64>,
    /// Grid `LO:HI:STEP`, endpoints included.
    #[arg(long, value_name = "LO:HI:STEP")]
    pub lambda_range: Option<String>,
    /// Second lattice parameter; defaults to 1/λ.
    #[arg(long)]
    pub d: Option<f64>,
    /// Base plate as `I,SIGMA`, e.g. `1,+`.
    #[arg(long, default_value = "1,+")]
    pub base: String,
    /// Partner plates, comma separated (`3+,4-`); empty for none. Defaults to all others.
    #[arg(long)]
    pub partners: Option<String>,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Tolerance override `KEY=VAL`; repeatable.
    #[arg(long, value_name = "KEY=VAL")]
    pub tol_override: Vec<String>,
    /// Worker threads for sweeps. Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Validated configuration shared by all commands.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    /// Ascending.
    pub lambdas: Vec<f64>,
    pub d: Option<f64>,
    pub base: PlateId,
    pub partners: Option<Vec<PlateId>>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub tol: Tolerances,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn d_for(&self, lambda: f64) -> f64 {
        self.d.unwrap_or(1.0 / lambda)
    }

    /// Partner plates of the base: the explicit list, or the other eleven.
    pub fn partner_ids(&self) -> Vec<PlateId> {
        match &self.partners {
            Some(p) => p.clone(),
            None => PlateId::all().into_iter().filter(|p| *p != self.base).collect(),
        }
    }

    /// Reject λ values outside (1, √2).
    pub fn require_regime(&self) -> Result<(), CliError> {
        match self.lambdas.iter().find(|&&l| !(l > 1.0 && l < LAMBDA_MAX)) {
            Some(l) => Err(CliError::config(format!("lambda = {l} lies outside (1, sqrt 2)"))),
            None => Ok(()),
        }
    }
}

pub fn default_curve_grid() -> Vec<f64> {
    lambda_grid(1.01, 1.41, 0.01)
}

/// `lo, lo+step, …` up to `hi` inclusive (with a relative slack of 1e-9 steps).
pub fn lambda_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let n = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=n).map(|k| lo + step * k as f64).collect()
}

pub fn parse_range(s: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || CliError::config(format!("lambda range {s:?} (expected LO:HI:STEP)"));
    let [lo, hi, step] = parts.as_slice() else { return Err(bad()) };
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| bad());
    let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) {
        return Err(bad());
    }
    if !(step > 0.0) {
        return Err(CliError::config(format!("lambda range step must be positive, got {step}")));
    }
    if !(lo < hi) {
        return Err(CliError::config(format!("lambda range needs LO < HI, got {lo} and {hi}")));
    }
    Ok(lambda_grid(lo, hi, step))
}

fn parse_plate(s: &str) -> Result<PlateId, CliError> {
    s.parse::<PlateId>().map_err(|e| CliError::config(e.to_string()))
}

impl CommonArgs {
    pub fn into_config(self, default_lambdas: &[f64], default_format: Format) -> Result<RunConfig, CliError> {
        let lambdas = match (&self.lambda, &self.lambda_range) {
            (Some(l), _) if !l.is_finite() => return Err(CliError::config("lambda must be finite")),
            (Some(l), _) => vec![*l],
            (None, Some(r)) => parse_range(r)?,
            (None, None) => default_lambdas.to_vec(),
        };
        if let Some(d) = self.d {
            if !(d.is_finite() && d > 0.0) {
                return Err(CliError::config(format!("d = {d} must be positive")));
            }
        }
        let base = parse_plate(&self.base)?;
        let partners = match &self.partners {
            None => None,
            Some(list) if list.trim().is_empty() => Some(Vec::new()),
            Some(list) => Some(
                list.split(|c| c == ';' || c == ' ')
                    .flat_map(split_labels)
                    .map(|p| parse_plate(&p))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        let mut tol = Tolerances::default();
        for kv in &self.tol_override {
            let (k, v) = kv.split_once('=').ok_or_else(|| CliError::config(format!("tolerance override {kv:?} (expected KEY=VAL)")))?;
            let v: f64 = v.trim().parse().map_err(|_| CliError::config(format!("tolerance value {v:?} is not a number")))?;
            tol.set(k.trim(), v)?;
        }
        if self.threads == Some(0) {
            return Err(CliError::config("threads must be at least 1"));
        }
        Ok(RunConfig {
            lambdas,
            d: self.d,
            base,
            partners,
            out: self.out,
            format: self.format.unwrap_or(default_format),
            tol,
            threads: self.threads,
        })
    }
}

/// Split `3+,4-` or `(3,+),(4,-)` into single labels.
fn split_labels(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '+' | '-' => {
                cur.push(c);
                out.push(std::mem::take(&mut cur));
            }
            ',' | '(' | ')' => {}
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_includes_both_ends() {
        let g = parse_range("1.01:1.41:0.01").unwrap();
        assert_eq!(g.len(), 41);
        assert!((g[40] - 1.41).abs() < 1e-12);
        assert!(parse_range("1.2:1.1:0.01").is_err());
        assert!(parse_range("1.1:1.2:0").is_err());
        assert!(parse_range("1.1:1.2").is_err());
    }

    #[test]
    fn partner_labels() {
        let a = CommonArgs { partners: Some("3+,4-".into()), base: "1,+".into(), ..Default::default() };
        let cfg = a.into_config(&[1.2], Format::Csv).unwrap();
        assert_eq!(cfg.partner_ids().iter().map(|p| p.to_string()).collect::<Vec<_>>(), ["(3,+)", "(4,-)"]);
        let b = CommonArgs { partners: Some("(2,+),(2,-)".into()), base: "1,+".into(), ..Default::default() };
        assert_eq!(b.into_config(&[1.2], Format::Csv).unwrap().partner_ids().len(), 2);
        let c = CommonArgs { partners: Some(String::new()), base: "1,+".into(), ..Default::default() };
        assert!(c.into_config(&[1.2], Format::Csv).unwrap().partner_ids().is_empty());
    }

    #[test]
    fn tolerance_overrides_are_checked() {
        let ok = CommonArgs { tol_override: vec!["rank_tol=1e-8".into()], base: "1,+".into(), ..Default::default() };
        assert_eq!(ok.into_config(&[1.2], Format::Csv).unwrap().tol.rank_tol, 1e-8);
        for bad in ["rank_tol", "nope=1", "rank_tol=-1"] {
            let a = CommonArgs { tol_override: vec![bad.into()], base: "1,+".into(), ..Default::default() };
            assert_eq!(a.into_config(&[1.2], Format::Csv).unwrap_err().exit_code, 2);
        }
    }
}
