//! Closed forms for the four junction cases of base plate (1,+): shear
//! amounts η, ξ and the junction normals built from the M± polynomials.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{PlasticJunction, LAMBDA_MAX};
use crate::crystal::{PlateId, Sign};
use crate::error::{Error, Result};
use crate::linalg::{Mat3, Vec3};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 1.0 && lambda < LAMBDA_MAX) {
        return Err(Error::OutOfRange(format!("lambda = {lambda} must lie in (1, sqrt 2)")));
    }
    Ok(())
}

/// `(η₁, η₂, ξ₁, ξ₂)`.
pub fn eta_xi(lambda: f64) -> Result<(f64, f64, f64, f64)> {
    check_lambda(lambda)?;
    let l = lambda;
    let (l2, l3, l4) = (l * l, l * l * l, l * l * l * l);
    let r = SQRT_2;
    let den_eta = 2.0 * (2.0 * l4 + 5.0 * r * l3 - 4.0 * l2 + 3.0 * r * l + 2.0);
    let den_xi = 2.0 * (2.0 * l4 - 5.0 * r * l3 - 4.0 * l2 - 3.0 * r * l + 2.0);
    let eta1 = (2.0 * l4 + 5.0 * r * l3 + 4.0 * l2 - 5.0 * r * l - 6.0) / den_eta;
    let eta2 = (2.0 * l4 + r * l3 - 4.0 * l2 - r * l + 2.0) / den_eta;
    let xi1 = -(2.0 * l4 - 5.0 * r * l3 + 4.0 * l2 + 5.0 * r * l - 6.0) / den_xi;
    let xi2 = (2.0 * l4 - r * l3 - 4.0 * l2 + r * l + 2.0) / den_xi;
    Ok((eta1, eta2, xi1, xi2))
}

/// `(M₁⁺, M₂⁺, M₃⁺)`.
pub fn m_plus(lambda: f64) -> [f64; 3] {
    let l = lambda;
    let r = SQRT_2;
    let p = |c: &[f64]| c.iter().rev().fold(0.0, |acc, &x| acc * l + x);
    [
        p(&[-2.0, 3.0 * r, 2.0, 7.0 * r, -8.0, -2.0 * r]),
        p(&[6.0, r, -16.0, 7.0 * r, 2.0]),
        -2.0 * l * p(&[r, 3.0, -2.0 * r, 5.0, r]),
    ]
}

/// `(M₁⁻, M₂⁻, M₃⁻)` as the component polynomials are printed. Note that the
/// junction normal for the ξ cases is not `(M₁⁻, M₂⁻, M₃⁻)` itself; see
/// [`junction_normal_closed_form`].
pub fn m_minus_printed(lambda: f64) -> [f64; 3] {
    let l = lambda;
    let r = SQRT_2;
    let p = |c: &[f64]| c.iter().rev().fold(0.0, |acc, &x| acc * l + x);
    [
        -p(&[6.0, -r, -16.0, -7.0 * r, 2.0]),
        p(&[-2.0, -3.0 * r, 2.0, -7.0 * r, -8.0, 2.0 * r]),
        2.0 * l * p(&[r, -3.0, -2.0 * r, -5.0, r]),
    ]
}

/// The four cases, labelled (a)–(d).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ThmCase {
    A,
    B,
    C,
    D,
}

/// Slip data of one option of a case, with the signs of the closed form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseOption {
    pub psi: [i32; 3],
    pub phi1: [i32; 3],
    pub phi2: [i32; 3],
    pub t1: f64,
    pub t2: f64,
}

impl ThmCase {
    pub const ALL: [ThmCase; 4] = [ThmCase::A, ThmCase::B, ThmCase::C, ThmCase::D];

    pub fn label(self) -> char {
        match self {
            ThmCase::A => 'a',
            ThmCase::B => 'b',
            ThmCase::C => 'c',
            ThmCase::D => 'd',
        }
    }

    pub fn partner(self) -> PlateId {
        match self {
            ThmCase::A => PlateId::new(3, Sign::Plus),
            ThmCase::B => PlateId::new(4, Sign::Minus),
            ThmCase::C => PlateId::new(5, Sign::Plus),
            ThmCase::D => PlateId::new(6, Sign::Minus),
        }
    }

    pub fn psi(self) -> [i32; 3] {
        match self {
            ThmCase::A => [-1, 1, 0],
            ThmCase::B => [1, 1, 0],
            ThmCase::C => [-1, 0, 1],
            ThmCase::D => [1, 0, 1],
        }
    }

    /// `(φ₁, φ₂)` of option 1.
    pub fn phis(self) -> ([i32; 3], [i32; 3]) {
        match self {
            ThmCase::A => ([-1, -1, -1], [1, 1, -1]),
            ThmCase::B => ([-1, 1, 1], [-1, 1, -1]),
            ThmCase::C => ([-1, -1, -1], [1, -1, 1]),
            ThmCase::D => ([-1, 1, 1], [-1, -1, 1]),
        }
    }

    /// True for the cases whose shear amounts are η, false for ξ.
    pub fn uses_eta(self) -> bool {
        matches!(self, ThmCase::A | ThmCase::C)
    }

    /// Option 1 or 2. Option 2 exchanges the slip directions and maps
    /// `(t̄₁, t̄₂) ↦ (−t̄₂, −t̄₁)`.
    pub fn option(self, option: u8, lambda: f64) -> Result<CaseOption> {
        let (e1, e2, x1, x2) = eta_xi(lambda)?;
        let (t1, t2) = if self.uses_eta() { (e1, e2) } else { (x1, x2) };
        let (phi1, phi2) = self.phis();
        match option {
            1 => Ok(CaseOption { psi: self.psi(), phi1, phi2, t1, t2 }),
            2 => Ok(CaseOption { psi: self.psi(), phi1: phi2, phi2: phi1, t1: -t2, t2: -t1 }),
            _ => Err(Error::OutOfRange(format!("option {option} (expected 1 or 2)"))),
        }
    }
}

fn shear(t: f64, phi: [i32; 3], psi: [i32; 3]) -> Mat3 {
    Mat3::IDENTITY + Vec3::from_ints(phi).outer(&Vec3::from_ints(psi)) * t
}

/// Junction normal (unit, first nonzero component positive) from the closed
/// form. For the ξ cases the components of the printed M⁻ polynomials enter as
/// `(M₂⁻, M₁⁻, −M₃⁻)` for (b) and `(M₂⁻, −M₃⁻, M₁⁻)` for (d); this is the
/// arrangement that matches the rank-one solver.
pub fn junction_normal_closed_form(case: ThmCase, option: u8, lambda: f64) -> Result<Vec3> {
    check_lambda(lambda)?;
    let [p1, p2, p3] = m_plus(lambda);
    let [q1, q2, q3] = m_minus_printed(lambda);
    let m1 = match case {
        ThmCase::A => Vec3::new(p1, p2, p3),
        ThmCase::B => Vec3::new(q2, q1, -q3),
        ThmCase::C => Vec3::new(p1, p3, p2),
        ThmCase::D => Vec3::new(q2, -q3, q1),
    };
    let m = match option {
        1 => m1,
        2 => {
            let o = case.option(1, lambda)?;
            let s1 = shear(o.t1, o.phi1, o.psi).inverse().ok_or(Error::NotOrientationPreserving { det: 0.0 })?;
            let s2 = shear(o.t2, o.phi2, o.psi).inverse().ok_or(Error::NotOrientationPreserving { det: 0.0 })?;
            s2.transpose() * (s1.transpose() * m1)
        }
        _ => return Err(Error::OutOfRange(format!("option {option} (expected 1 or 2)"))),
    };
    Ok(m.normalized().sign_normalized(1e-12))
}

/// How a solver junction corresponds to a closed-form case.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseMatch {
    pub case: ThmCase,
    pub option: u8,
    /// Shear amounts with the closed form's slip-direction signs.
    pub t1: f64,
    pub t2: f64,
}

/// Identify a junction from base (1,+) with a case and option, by partner and
/// slip data. Slip directions are matched up to sign, and the shear amounts
/// are converted to the closed form's signs.
pub fn match_case(j: &PlasticJunction) -> Option<CaseMatch> {
    if j.plate1.id != PlateId::new(1, Sign::Plus) {
        return None;
    }
    let case = ThmCase::ALL.into_iter().find(|c| c.partner() == j.plate2.id)?;
    if j.slip1.psi != case.psi() || j.slip2.psi != case.psi() {
        return None;
    }
    let sign = |catalog: [i32; 3], closed: [i32; 3]| -> Option<f64> {
        if catalog == closed {
            Some(1.0)
        } else if catalog == closed.map(|x| -x) {
            Some(-1.0)
        } else {
            None
        }
    };
    let (a, b) = case.phis();
    for (option, (p1, p2)) in [(1u8, (a, b)), (2u8, (b, a))] {
        if let (Some(g1), Some(g2)) = (sign(j.slip1.phi, p1), sign(j.slip2.phi, p2)) {
            return Some(CaseMatch { case, option, t1: j.t1 * g1, t2: j.t2 * g2 });
        }
    }
    None
}
