//! Checkable content of the two-well problem: the K^qc membership test, the
//! corner boundary-condition feasibility predicate and its variants.
//!
//! The predicates are pure algebra. Whether the physical domain has the corner
//! geometry the feasibility statement assumes is the caller's responsibility.

use serde::{Deserialize, Serialize};

use crate::compat::{find_twin_axis, twin_solutions, TwinBranch};
use crate::crystal::cubic_point_group;
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, Mat3, Tolerances, Vec3};

/// Twin data and the orthonormal frame used to describe K^qc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinParams {
    pub e_hat: Vec3,
    pub b: Vec3,
    pub m: Vec3,
    pub u1: Vec3,
    pub u2: Vec3,
    pub u3: Vec3,
    pub delta: f64,
    pub l: Mat3,
    pub u_star: Vec3,
}

/// Coordinates of `GᵀG` in the (u₁,u₂,u₃) frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KqcCoordinates {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

/// Outcome of the feasibility predicates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    pub feasible: bool,
    /// Witness with `F₁ − F₂ = d⊗(u*×n_⊥)`, when feasible.
    pub d: Option<Vec3>,
    pub hypothesis_ok: bool,
    /// Only set by the complementary-domain variant.
    pub overlap_ok: Option<bool>,
}

/// Twin frame for the wells `SO(3)U₁ ∪ SO(3)U₂`, using twin branch I.
pub fn twin_params(u1: &Mat3, u2: &Mat3) -> Result<TwinParams> {
    let e_hat = find_twin_axis(u1, u2, &cubic_point_group()).ok_or(Error::NoTwinAxis)?;
    let [sol, _] = twin_solutions(u1, u2, &e_hat)?;
    debug_assert_eq!(sol.branch, TwinBranch::I);
    let (b, m) = (sol.b, sol.m);
    let u1_inv = u1.inverse().ok_or(Error::NotOrientationPreserving { det: u1.det() })?;
    let ui_m = u1_inv * m;
    if b.norm() == 0.0 {
        return Err(Error::HypothesisFailed("twin vector b vanishes; wells coincide".into()));
    }
    let f1 = ui_m.normalized();
    let f3 = b.normalized();
    let f2 = f3.cross(&f1);
    let delta = 0.5 * ui_m.norm() * b.norm();
    let l = u1_inv * (Mat3::IDENTITY - f3.outer(&f1) * delta);
    let u_star = e_hat.cross(&(*u1 * (*u1 * e_hat)));

    let tol = Tolerances::default();
    let frame = Mat3::from_cols(f1, f2, f3);
    let ortho = (frame.transpose() * frame - Mat3::IDENTITY).norm();
    if ortho > 1e-12 {
        return Err(Error::Residual { residual: ortho, tol: 1e-12, context: "twin frame orthonormality".into() });
    }
    let par = u_star.parallel_defect(&(l * f2));
    if par > tol.residual_tol {
        return Err(Error::Residual { residual: par, tol: tol.residual_tol, context: "u* parallel to L u2".into() });
    }
    Ok(TwinParams { e_hat, b, m, u1: f1, u2: f2, u3: f3, delta, l, u_star })
}

impl TwinParams {
    /// `S± = I ± δ u₃⊗u₁`.
    pub fn shear(&self, sign: f64) -> Mat3 {
        Mat3::IDENTITY + self.u3.outer(&self.u1) * (sign * self.delta)
    }

    /// A representative gradient with prescribed K^qc coordinates:
    /// `F = √M L⁻¹` with `M = αu₁⊗u₁ + u₂⊗u₂ + γu₃⊗u₃ + β(u₁⊗u₃ + u₃⊗u₁)`.
    pub fn gradient_at(&self, c: KqcCoordinates) -> Result<Mat3> {
        let m = self.u1.outer(&self.u1) * c.alpha
            + self.u2.outer(&self.u2)
            + self.u3.outer(&self.u3) * c.gamma
            + (self.u1.outer(&self.u3) + self.u3.outer(&self.u1)) * c.beta;
        let eig = sym_eigen(&m)?;
        if eig.values[0] <= 0.0 {
            return Err(Error::OutOfRange("K^qc coordinates must give a positive-definite metric".into()));
        }
        let root = eig.recompose(f64::sqrt);
        let l_inv = self.l.inverse().ok_or(Error::NotOrientationPreserving { det: self.l.det() })?;
        Ok(root * l_inv)
    }
}

/// Membership of `F` in K^qc together with its (α,β,γ) coordinates.
pub fn kqc_membership(f: &Mat3, tp: &TwinParams, tol: &Tolerances) -> (bool, KqcCoordinates) {
    let g = *f * tp.l;
    let m = g.transpose() * g;
    let at = |x: &Vec3, y: &Vec3| x.dot(&(m * *y));
    let coords = KqcCoordinates { alpha: at(&tp.u1, &tp.u1), beta: at(&tp.u1, &tp.u3), gamma: at(&tp.u3, &tp.u3) };
    let eps = tol.residual_tol * m.norm().max(1.0);
    let pattern = (at(&tp.u2, &tp.u2) - 1.0).abs() <= eps
        && at(&tp.u1, &tp.u2).abs() <= eps
        && at(&tp.u2, &tp.u3).abs() <= eps;
    let KqcCoordinates { alpha, beta, gamma } = coords;
    let member = pattern
        && alpha > 0.0
        && alpha <= 1.0 + tp.delta * tp.delta + eps
        && gamma > 0.0
        && gamma <= 1.0 + eps
        && (alpha * gamma - beta * beta - 1.0).abs() <= eps;
    (member, coords)
}

fn feasibility_core(
    u1: &Mat3,
    u2: &Mat3,
    n1: &Vec3,
    n2: &Vec3,
    f1: &Mat3,
    f2: &Mat3,
    tol: &Tolerances,
) -> Result<(Feasibility, TwinParams, Vec3)> {
    let tp = twin_params(u1, u2)?;
    for (name, f) in [("F1", f1), ("F2", f2)] {
        if !kqc_membership(f, &tp, tol).0 {
            return Err(Error::Precondition(format!("{name} is not in the quasiconvex hull")));
        }
    }
    let cross = n1.cross(n2);
    if cross.norm() <= tol.rank_tol * n1.norm() * n2.norm() {
        return Err(Error::Precondition("n1 and n2 are parallel".into()));
    }
    let n_perp = cross.normalized();
    let k = tp.u_star.cross(&n_perp);
    if tp.u_star.normalized().cross(&n_perp).norm() <= tol.rank_tol {
        return Err(Error::HypothesisFailed("u* is parallel to n1 x n2".into()));
    }
    let diff = *f1 - *f2;
    let d = diff * k * (1.0 / k.norm_sq());
    let residual = (diff - d.outer(&k)).norm();
    let feasible = residual <= tol.residual_tol * f1.norm().max(1.0);
    let report = Feasibility { feasible, d: feasible.then_some(d), hypothesis_ok: true, overlap_ok: None };
    Ok((report, tp, d))
}

/// Corner boundary-condition feasibility: `F₁ − F₂ = d⊗(u*×n_⊥)` for some `d`.
pub fn two_well_bc_feasible(
    u1: &Mat3,
    u2: &Mat3,
    n1: &Vec3,
    n2: &Vec3,
    f1: &Mat3,
    f2: &Mat3,
    tol: &Tolerances,
) -> Result<Feasibility> {
    Ok(feasibility_core(u1, u2, n1, n2, f1, f2, tol)?.0)
}

/// Complementary-domain variant: additionally requires `(u*·n₁)(u*·n₂) ≥ 0`
/// whenever `d ≠ 0`.
pub fn two_well_bc_feasible_complement(
    u1: &Mat3,
    u2: &Mat3,
    n1: &Vec3,
    n2: &Vec3,
    f1: &Mat3,
    f2: &Mat3,
    tol: &Tolerances,
) -> Result<Feasibility> {
    let (mut report, tp, d) = feasibility_core(u1, u2, n1, n2, f1, f2, tol)?;
    let d_zero = d.norm() <= tol.residual_tol * f1.norm().max(1.0);
    let overlap_ok = d_zero || tp.u_star.dot(n1) * tp.u_star.dot(n2) >= 0.0;
    report.overlap_ok = Some(overlap_ok);
    report.feasible &= overlap_ok;
    if !report.feasible {
        report.d = None;
    }
    Ok(report)
}

/// Two-dimensional hull check with `η₃ = 1`.
pub fn twodim_hull_check(eta1: f64, eta2: f64, b: &Mat3) -> Result<bool> {
    twodim_hull_check_with(eta1, eta2, 1.0, b, &Tolerances::default())
}

/// `det B = η₁η₂η₃` and `|B(e₁±e₂)|² ≤ η₁² + η₂²`.
pub fn twodim_hull_check_with(eta1: f64, eta2: f64, eta3: f64, b: &Mat3, tol: &Tolerances) -> Result<bool> {
    if !(eta1 > 0.0 && eta2 > 0.0 && eta3 > 0.0) {
        return Err(Error::OutOfRange("eta values must be positive".into()));
    }
    let scale = b.norm().max(1.0);
    let det_ok = (b.det() - eta1 * eta2 * eta3).abs() <= tol.residual_tol * scale * scale * scale;
    let bound = eta1 * eta1 + eta2 * eta2;
    let e1 = Vec3::unit(0);
    let e2 = Vec3::unit(1);
    let ok = |v: Vec3| (*b * v).norm_sq() <= bound + tol.residual_tol * scale * scale;
    Ok(det_ok && ok(e1 + e2) && ok(e1 - e2))
}
