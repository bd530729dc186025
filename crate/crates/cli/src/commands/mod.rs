pub mod curves;
pub mod scan;
pub mod table1;
pub mod twowell;

use junctions_core::junction::{
    classify_vii, find_plastic_junctions, match_case, stability_check, CaseMatch, PlasticJunction, ViiClass,
};
use junctions_core::{bcc_slip_systems, habit_plate, PlateId, Tolerances};
use junctions_core::junction::StabilityReport;
use rayon::prelude::*;

use crate::args::RunConfig;
use crate::error::CliError;

/// All junctions of `base` against `partners` at `(λ, d)`.
pub fn junctions_at(lambda: f64, d: f64, base: PlateId, partners: &[PlateId], tol: &Tolerances) -> Result<Vec<PlasticJunction>, CliError> {
    let b = habit_plate(lambda, d, base)?;
    let ps = partners.iter().map(|p| habit_plate(lambda, d, *p)).collect::<Result<Vec<_>, _>>()?;
    Ok(find_plastic_junctions(lambda, d, &b, &ps, &bcc_slip_systems(), tol)?)
}

/// A junction with its classification and the better of the two stability
/// checks (`n₂ = −n̂₂` first, then `+n̂₂`).
#[derive(Clone, Debug)]
pub struct Assessed {
    pub junction: PlasticJunction,
    pub case: Option<CaseMatch>,
    pub vii: ViiClass,
    pub n2_sign: f64,
    pub stability: StabilityReport,
}

pub fn assess(j: &PlasticJunction, tol: &Tolerances) -> Result<Assessed, CliError> {
    let vii = classify_vii(j, tol)?;
    let n1 = j.plate1.unit_normal();
    let n2 = j.plate2.unit_normal();
    let mut first = None;
    for sign in [-1.0, 1.0] {
        let s = stability_check(j, &n1, &(n2 * sign), tol)?;
        if s.stable {
            return Ok(Assessed { junction: *j, case: match_case(j), vii, n2_sign: sign, stability: s });
        }
        first.get_or_insert(s);
    }
    let stability = first.expect("two attempts were made");
    Ok(Assessed { junction: *j, case: match_case(j), vii, n2_sign: -1.0, stability })
}

/// Map over the λ grid in parallel, keeping grid order.
pub fn per_lambda<T: Send>(cfg: &RunConfig, f: impl Fn(f64) -> Result<T, CliError> + Sync) -> Result<Vec<T>, CliError> {
    cfg.lambdas.par_iter().map(|&l| f(l)).collect()
}
