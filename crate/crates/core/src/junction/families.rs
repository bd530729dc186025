//! Solution families between the two plates of variant 1, which rule out
//! rigid junctions for that pair.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{shear_problem, solve_shear_amounts, ShearSolution, LAMBDA_MAX};
use crate::crystal::{habit_plate, HabitPlate, PlateId, Sign, SlipFamily, SlipSystem};
use crate::error::{Error, Result};
use crate::linalg::{rank_one_factor, rotation_axis_angle, Mat3, Tolerances, Vec3};

/// Slip-system pairs with a non-isolated solution set. The systems are
/// I: φ=(−1,1,1), ψ=(2,1,1); II: φ=(1,1,1), ψ=(−2,1,1);
/// III: φ=(1,−1,1), ψ=(0,1,1); IV: φ=(1,1,−1), ψ=(0,1,1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyCase {
    II,
    IIII,
    III,
    IIIIV,
}

impl FamilyCase {
    pub const ALL: [FamilyCase; 4] = [FamilyCase::II, FamilyCase::IIII, FamilyCase::III, FamilyCase::IIIIV];

    pub fn label(self) -> &'static str {
        match self {
            FamilyCase::II => "(I,I)",
            FamilyCase::IIII => "(II,II)",
            FamilyCase::III => "(I,II)",
            FamilyCase::IIIIV => "(III,IV)",
        }
    }

    fn slips(self) -> (SlipSystem, SlipSystem) {
        let sys = |phi: [i32; 3], psi: [i32; 3], family| SlipSystem { family, psi, phi };
        let s1 = sys([-1, 1, 1], [2, 1, 1], SlipFamily::F112);
        let s2 = sys([1, 1, 1], [-2, 1, 1], SlipFamily::F112);
        let s3 = sys([1, -1, 1], [0, 1, 1], SlipFamily::F110);
        let s4 = sys([1, 1, -1], [0, 1, 1], SlipFamily::F110);
        match self {
            FamilyCase::II => (s1, s1),
            FamilyCase::IIII => (s2, s2),
            FamilyCase::III => (s1, s2),
            FamilyCase::IIIIV => (s3, s4),
        }
    }
}

/// One verified point of a family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySample {
    /// Free parameter: `s₂` for the line families, the rotation angle θ otherwise.
    pub parameter: f64,
    pub t1: f64,
    pub t2: f64,
    /// `‖R F₁(t₁) − F₂(t₂) − b⊗m‖`.
    pub residual: f64,
    /// Distance (`|m × m_expected|`) to the closed-form normal, where one exists.
    pub normal_defect: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub case: FamilyCase,
    pub lambda: f64,
    /// Closed-form value of the family constant: the line offset for (I,I) and
    /// (II,II), `s₂` at θ = 0 for (III,IV), unused for (I,II).
    pub expected: Option<f64>,
    /// The same constant as recovered by the solver.
    pub measured: Option<f64>,
    pub samples: Vec<FamilySample>,
    /// Largest sample residual.
    pub max_residual: f64,
    pub verified: bool,
}

fn plates(lambda: f64) -> Result<(HabitPlate, HabitPlate)> {
    let d = 1.0 / lambda;
    Ok((habit_plate(lambda, d, PlateId::new(1, Sign::Plus))?, habit_plate(lambda, d, PlateId::new(1, Sign::Minus))?))
}

fn junction_residual(r: &Mat3, p1: &HabitPlate, p2: &HabitPlate, s1: &SlipSystem, s2: &SlipSystem, t1: f64, t2: f64) -> (f64, Vec3) {
    let diff = *r * p1.gradient() * s1.shear(t1) - p2.gradient() * s2.shear(t2);
    let (b, m) = rank_one_factor(&diff);
    ((diff - b.outer(&m)).norm(), m)
}

/// Verify one of the four families at `λ` by sampling its parameter and
/// checking the rank-one residual at every sample.
pub fn nonrigid_family_check(lambda: f64, case: FamilyCase, tol: &Tolerances) -> Result<FamilyReport> {
    if !(lambda > 1.0 && lambda < LAMBDA_MAX) {
        return Err(Error::OutOfRange(format!("lambda = {lambda} must lie in (1, sqrt 2)")));
    }
    let (p1, p2) = plates(lambda)?;
    let (s1, s2) = case.slips();
    let l = lambda;
    let l4 = l.powi(4);
    let line = l * (l * l - 1.0) / (SQRT_2 * (2.0 * l4 + 1.0));
    let mut samples = Vec::new();
    let (expected, measured) = match case {
        FamilyCase::II | FamilyCase::IIII => {
            let sign = if case == FamilyCase::II { 1.0 } else { -1.0 };
            let coeffs = match solve_shear_amounts(&shear_problem(&p1, &p2, &s1, &s2), tol)? {
                ShearSolution::Family(c) => c,
                other => return Err(Error::HypothesisFailed(format!("expected a family, solver gave {other:?}"))),
            };
            // 1 = c₁(s₂ + c) + c₂s₂ with c₂ = −c₁ gives the offset 1/c₁.
            let offset = if (coeffs.c1 + coeffs.c2).abs() <= 1e-9 * coeffs.c1.abs() && coeffs.c12.abs() <= 1e-9 * coeffs.c1.abs() {
                Some(1.0 / coeffs.c1)
            } else {
                None
            };
            for s in [-0.1, -0.05, 0.0, 0.05, 0.2] {
                let t1 = s + sign * line;
                let (residual, m) = junction_residual(&Mat3::IDENTITY, &p1, &p2, &s1, &s2, t1, s);
                let den = 4.0 * l4 * (2.0 * s + 1.0) + sign * (SQRT_2 * l * l * l - SQRT_2 * l) + 4.0 * s;
                let x = sign * (2.0 - 4.0 * (2.0 * l4 + 1.0) / den);
                let expected_m = Vec3::new(x, 1.0, 1.0).normalized();
                samples.push(FamilySample { parameter: s, t1, t2: s, residual, normal_defect: Some(m.cross(&expected_m).norm()) });
            }
            (Some(sign * line), offset)
        }
        FamilyCase::IIIIV => {
            let base = l * (l * l - 1.0) / (2.0 * SQRT_2);
            let measured = match super::junction_shears(&p1, &p2, &s1, &s2, tol).as_slice() {
                [(a, b)] if (a + b).abs() <= 1e-9 * b.abs() => Some(*b),
                _ => None,
            };
            let axis = -(p1.n.cross(&p2.n).normalized());
            for th in [-0.2, -0.05, 0.0, 0.05, 0.2] {
                let (sh, ch) = (0.5 * th as f64).sin_cos();
                let t2 = l * l * ((l * l - 1.0) * ch - 2.0 * l * sh) / (SQRT_2 * ((l * l - 1.0) * sh + 2.0 * l * ch));
                let r = rotation_axis_angle(&axis, th)?;
                let (residual, m) = junction_residual(&r, &p1, &p2, &s1, &s2, -t2, t2);
                let defect = (th == 0.0).then(|| m.cross(&Vec3::unit(0)).norm());
                samples.push(FamilySample { parameter: th, t1: -t2, t2, residual, normal_defect: defect });
            }
            (Some(base), measured)
        }
        FamilyCase::III => {
            let coeffs = match solve_shear_amounts(&shear_problem(&p1, &p2, &s1, &s2), tol)? {
                ShearSolution::Family(c) => c,
                other => return Err(Error::HypothesisFailed(format!("expected a family, solver gave {other:?}"))),
            };
            let t2 = 0.01;
            let t1 = coeffs.s1_for(t2).ok_or(Error::DegenerateDenominator)?;
            let (_, m) = junction_residual(&Mat3::IDENTITY, &p1, &p2, &s1, &s2, t1, t2);
            let axis = p1.n.cross(&p2.n).normalized();
            let v = m.cross(&axis);
            let (a, b) = (p1.gradient(), p2.gradient());
            let (phi1, psi1, phi2, psi2) = (s1.phi_vec(), s1.psi_vec(), s2.phi_vec(), s2.psi_vec());
            for th in [-0.02, -0.01, 0.0, 0.01, 0.02] {
                let r = rotation_axis_angle(&axis, th)?;
                // R A (I + t₁P₁) v = B (I + t₂P₂) v, linear in (t₁, t₂).
                let c1 = r * (a * phi1) * psi1.dot(&v);
                let c2 = -((b * phi2) * psi2.dot(&v));
                let rhs = b * v - r * (a * v);
                let (g11, g12, g22) = (c1.dot(&c1), c1.dot(&c2), c2.dot(&c2));
                let det = g11 * g22 - g12 * g12;
                let (h1, h2) = (c1.dot(&rhs), c2.dot(&rhs));
                let x1 = (h1 * g22 - h2 * g12) / det;
                let x2 = (h2 * g11 - h1 * g12) / det;
                let (residual, _) = junction_residual(&r, &p1, &p2, &s1, &s2, x1, x2);
                samples.push(FamilySample { parameter: th, t1: x1, t2: x2, residual, normal_defect: None });
            }
            (None, None)
        }
    };
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    let constant_ok = match (expected, measured, case) {
        (_, _, FamilyCase::III) => true,
        (Some(e), Some(m), _) => (e - m).abs() <= 1e-9 * (1.0 + e.abs()),
        _ => false,
    };
    let normals_ok = samples.iter().all(|s| s.normal_defect.map_or(true, |d| d <= 1e-9));
    let verified = constant_ok && normals_ok && max_residual <= tol.residual_tol;
    Ok(FamilyReport { case, lambda, expected, measured, samples, max_residual, verified })
}
