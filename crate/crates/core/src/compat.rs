//! Rank-one connections, twinning solutions and the incompatibility angle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{polar, rank_le_one, rank_one_factor, rotation_angle, sym_eigen, Mat3, Tolerances, Vec3};

/// `F₁ − R F₂ = b⊗m`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankOneSolution {
    pub r: Mat3,
    pub b: Vec3,
    /// Unit, first nonzero component positive.
    pub m: Vec3,
}

impl RankOneSolution {
    /// Rotation angle of `R` in radians.
    pub fn angle(&self) -> f64 {
        rotation_angle(&self.r)
    }
}

/// Twinning branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TwinBranch {
    I,
    II,
}

/// `R U₂ = U₁ + b⊗m` for a twin axis `ê`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwinSolution {
    /// Variant indices when the wells come from the variant list.
    pub variants: Option<(u8, u8)>,
    pub e_hat: Vec3,
    pub r: Mat3,
    pub b: Vec3,
    pub m: Vec3,
    pub branch: TwinBranch,
}

/// Incompatibility angle together with the middle-eigenvalue diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IncompatibilityAngle {
    pub degrees: f64,
    /// λ₂ of `C = F₂⁻ᵀF₁ᵀF₁F₂⁻¹`.
    pub middle_eigenvalue: f64,
    /// `true` when C was rescaled by 1/λ₂ (approximate compatibility band).
    pub rescaled: bool,
}

/// Connections together with how they were obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct Connections {
    pub solutions: Vec<RankOneSolution>,
    pub middle_eigenvalue: f64,
    /// When set, the solutions satisfy `F₁/√λ₂ − R F₂ = b⊗m`.
    pub rescaled: bool,
}

fn check_orientation(f: &Mat3) -> Result<()> {
    if !f.is_finite() {
        return Err(Error::NonFinite);
    }
    let det = f.det();
    if det <= 0.0 {
        return Err(Error::NotOrientationPreserving { det });
    }
    Ok(())
}

/// Both rotations `R` with `rank(F₁ − R F₂) ≤ 1`, ascending by rotation angle.
pub fn rank_one_connections(f1: &Mat3, f2: &Mat3, tol: &Tolerances) -> Result<Vec<RankOneSolution>> {
    Ok(connections(f1, f2, tol, false)?.solutions)
}

/// Shared worker; `allow_approx` enables the rescaled band.
pub fn connections(f1: &Mat3, f2: &Mat3, tol: &Tolerances, allow_approx: bool) -> Result<Connections> {
    check_orientation(f1)?;
    check_orientation(f2)?;
    let f2_inv = f2.inverse().ok_or(Error::NotOrientationPreserving { det: f2.det() })?;
    let mut g = *f1 * f2_inv;
    let eig = sym_eigen(&(g.transpose() * g))?;
    let lambda2 = eig.values[1];
    let off = (lambda2 - 1.0).abs();
    let mut target = *f1;
    let rescaled = if off <= tol.mid_eig_tol {
        false
    } else if allow_approx && off <= tol.mid_eig_approx_tol {
        true
    } else {
        return Err(Error::MiddleEigenvalue { lambda2 });
    };
    let mut ev = eig.values;
    if rescaled {
        let s = lambda2.sqrt();
        g = g * (1.0 / s);
        target = target * (1.0 / s);
        ev = ev.map(|l| l / lambda2);
    }
    let (l1, l3) = (ev[0], ev[2]);
    let (e1, e3) = (eig.vectors[0], eig.vectors[2]);

    let mut rotations: Vec<Mat3> = Vec::with_capacity(2);
    if l3 - l1 <= tol.mid_eig_tol {
        // C = I: G itself is a rotation.
        rotations.push(polar(&g)?.0);
    } else {
        let one_minus_l1 = (1.0 - l1).max(0.0);
        let l3_minus_one = (l3 - 1.0).max(0.0);
        for kappa in [1.0, -1.0] {
            let a = e1 * (l3 * one_minus_l1 / (l3 - l1)).sqrt() + e3 * (kappa * (l1 * l3_minus_one / (l3 - l1)).sqrt());
            let rho = (l3.sqrt() - l1.sqrt()) / (l3 - l1).sqrt();
            let n = (e1 * (-one_minus_l1.sqrt()) + e3 * (kappa * l3_minus_one.sqrt())) * rho;
            let shear = Mat3::IDENTITY + a.outer(&n);
            let inv = shear.inverse().ok_or_else(|| Error::HypothesisFailed("singular twinning shear".into()))?;
            rotations.push(polar(&(g * inv))?.0);
        }
        if (rotations[0] - rotations[1]).norm() <= 1e-9 {
            rotations.pop();
        }
    }

    let mut solutions = Vec::with_capacity(rotations.len());
    for r in rotations {
        let diff = target - r * *f2;
        let (b, m) = rank_one_factor(&diff);
        let residual = (diff - b.outer(&m)).norm();
        let bound = tol.residual_tol * target.norm().max(1.0);
        if residual > bound {
            return Err(Error::Residual { residual, tol: bound, context: "rank-one connection".into() });
        }
        solutions.push(RankOneSolution { r, b, m });
    }
    solutions.sort_by(|x, y| x.angle().total_cmp(&y.angle()));
    Ok(Connections { solutions, middle_eigenvalue: lambda2, rescaled })
}

/// Minimum rotation angle (degrees) needed to make `F₁` and `F₂` rank-one
/// connected. Middle eigenvalues within the approximate band are handled by
/// rescaling, and the result says so.
pub fn incompatibility_angle(f1: &Mat3, f2: &Mat3, tol: &Tolerances) -> Result<IncompatibilityAngle> {
    if rank_le_one(&(*f1 - *f2), tol) {
        return Err(Error::Precondition("F1 - F2 already has rank at most one".into()));
    }
    let c = connections(f1, f2, tol, true)?;
    let first = c.solutions.first().ok_or_else(|| Error::HypothesisFailed("no rank-one connection".into()))?;
    Ok(IncompatibilityAngle {
        degrees: first.angle().to_degrees(),
        middle_eigenvalue: c.middle_eigenvalue,
        rescaled: c.rescaled,
    })
}

/// Reflection `2ê⊗ê − I`.
pub fn reflection(e: &Vec3) -> Mat3 {
    e.outer(e) * 2.0 - Mat3::IDENTITY
}

/// Unit two-fold axes of a point group, in canonical order: first nonzero
/// component positive, fewer nonzero components first, then descending
/// lexicographic.
pub fn twofold_axes(point_group: &[Mat3]) -> Vec<Vec3> {
    let mut axes: Vec<Vec3> = Vec::new();
    for q in point_group {
        if (q.trace() + 1.0).abs() > 1e-9 || (q.transpose() * *q - Mat3::IDENTITY).norm() > 1e-9 {
            continue;
        }
        // (Q + I)/2 = ê⊗ê for a half turn.
        let p = (*q + Mat3::IDENTITY) * 0.5;
        let k = (0..3).max_by(|&i, &j| p[(i, i)].total_cmp(&p[(j, j)])).unwrap_or(0);
        let e = p.col(k).normalized().sign_normalized(1e-12);
        if !axes.iter().any(|x| (*x - e).norm() < 1e-9) {
            axes.push(e);
        }
    }
    let nonzero = |v: &Vec3| v.0.iter().filter(|c| c.abs() > 1e-12).count();
    axes.sort_by(|x, y| {
        nonzero(x).cmp(&nonzero(y)).then_with(|| {
            for i in 0..3 {
                let c = y[i].total_cmp(&x[i]);
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });
    axes
}

/// First two-fold axis ê of the group with `U₁ = (2ê⊗ê−I) U₂ (2ê⊗ê−I)`.
pub fn find_twin_axis(u1: &Mat3, u2: &Mat3, point_group: &[Mat3]) -> Option<Vec3> {
    let bound = Tolerances::default().residual_tol * u1.norm().max(1.0);
    twofold_axes(point_group).into_iter().find(|e| {
        let q = reflection(e);
        (*u1 - q * *u2 * q).norm() <= bound
    })
}

/// Both twinning solutions for the axis `ê`.
pub fn twin_solutions(u1: &Mat3, u2: &Mat3, e_hat: &Vec3) -> Result<[TwinSolution; 2]> {
    let tol = Tolerances::default();
    let u1_inv = u1.inverse().ok_or(Error::NotOrientationPreserving { det: u1.det() })?;
    let u2_inv = u2.inverse().ok_or(Error::NotOrientationPreserving { det: u2.det() })?;
    let e = *e_hat;
    let ui_e = u1_inv * e;
    let u_e = *u1 * e;

    let b1 = (ui_e * (1.0 / ui_e.norm_sq()) - u_e) * 2.0;
    let m1 = e;
    let b2 = u_e;
    let m2 = (e - (*u1 * u_e) * (1.0 / u_e.norm_sq())) * 2.0;

    let bound = tol.residual_tol * u1.norm().max(1.0);
    let build = |b: Vec3, m: Vec3, branch: TwinBranch| -> Result<TwinSolution> {
        let target = *u1 + b.outer(&m);
        let (r, _) = polar(&(target * u2_inv))?;
        let residual = (r * *u2 - target).norm();
        if residual > bound {
            return Err(Error::Residual { residual, tol: bound, context: format!("twin branch {branch:?}") });
        }
        let det_term = (u1_inv * m).dot(&b);
        if det_term.abs() > bound {
            return Err(Error::Residual { residual: det_term.abs(), tol: bound, context: "U1^-1 m . b".into() });
        }
        Ok(TwinSolution { variants: None, e_hat: e, r, b, m, branch })
    };
    Ok([build(b1, m1, TwinBranch::I)?, build(b2, m2, TwinBranch::II)?])
}
