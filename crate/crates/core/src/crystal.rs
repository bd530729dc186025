//! Cubic-to-orthorhombic variants, habit-plane plates, the cubic point group
//! and the BCC slip-system catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{polar, Mat3, Tolerances, Vec3};

/// One of the six stretch tensors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Variant {
    /// 1..=6.
    pub index: u8,
    pub u: Mat3,
    pub lambda: f64,
    pub d: f64,
}

/// Plate sign σ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Plate label `(i, σ)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlateId {
    pub variant: u8,
    pub sign: Sign,
}

impl PlateId {
    pub const fn new(variant: u8, sign: Sign) -> Self {
        PlateId { variant, sign }
    }

    /// All twelve labels in canonical order (1,+), (1,−), (2,+), ….
    pub fn all() -> Vec<PlateId> {
        (1..=6).flat_map(|i| [PlateId::new(i, Sign::Plus), PlateId::new(i, Sign::Minus)]).collect()
    }

    /// Position in [`PlateId::all`].
    pub fn ordinal(&self) -> usize {
        2 * (self.variant as usize - 1) + usize::from(self.sign == Sign::Minus)
    }
}

impl fmt::Display for PlateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.variant, self.sign)
    }
}

impl FromStr for PlateId {
    type Err = Error;

    /// Accepts `3+`, `3,-`, `(3,+)`, `3 -`.
    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !matches!(c, '(' | ')' | ',' | ' ')).collect();
        let bad = || Error::OutOfRange(format!("plate label {s:?} (expected e.g. 1,+ or 4-)"));
        let (num, sign) = t.split_at(t.len().checked_sub(1).ok_or_else(bad)?);
        let sign = match sign {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return Err(bad()),
        };
        let variant: u8 = num.parse().map_err(|_| bad())?;
        if !(1..=6).contains(&variant) {
            return Err(bad());
        }
        Ok(PlateId::new(variant, sign))
    }
}

/// A martensite plate rank-one connected to austenite: `I + a⊗n = R U_i`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HabitPlate {
    pub id: PlateId,
    /// Unnormalized, as in the closed-form list (`a = α(−γ,1,1)` etc.).
    pub a: Vec3,
    /// Unnormalized, e.g. `n = (β,1,1)`.
    pub n: Vec3,
    pub r: Mat3,
}

impl HabitPlate {
    /// `I + a⊗n`.
    pub fn gradient(&self) -> Mat3 {
        Mat3::IDENTITY + self.a.outer(&self.n)
    }

    /// Unit habit-plane normal.
    pub fn unit_normal(&self) -> Vec3 {
        self.n.normalized()
    }
}

fn check_positive(lambda: f64, d: f64) -> Result<()> {
    if !(lambda.is_finite() && d.is_finite() && lambda > 0.0 && d > 0.0) {
        return Err(Error::OutOfRange(format!("lambda = {lambda}, d = {d} must be positive")));
    }
    Ok(())
}

/// The six stretch tensors for lattice parameters `(λ, d)`.
pub fn variants(lambda: f64, d: f64) -> Result<[Variant; 6]> {
    check_positive(lambda, d)?;
    let p = 0.5 * (1.0 + lambda);
    let q = 0.5 * (lambda - 1.0);
    let mats = [
        Mat3([[d, 0.0, 0.0], [0.0, p, q], [0.0, q, p]]),
        Mat3([[d, 0.0, 0.0], [0.0, p, -q], [0.0, -q, p]]),
        Mat3([[p, 0.0, q], [0.0, d, 0.0], [q, 0.0, p]]),
        Mat3([[p, 0.0, -q], [0.0, d, 0.0], [-q, 0.0, p]]),
        Mat3([[p, q, 0.0], [q, p, 0.0], [0.0, 0.0, d]]),
        Mat3([[p, -q, 0.0], [-q, p, 0.0], [0.0, 0.0, d]]),
    ];
    Ok(std::array::from_fn(|i| Variant { index: i as u8 + 1, u: mats[i], lambda, d }))
}

/// The scalars (α, β, γ) of the habit-plane formulas.
pub fn plate_scalars(lambda: f64, d: f64) -> Result<(f64, f64, f64)> {
    check_positive(lambda, d)?;
    if !(d < 1.0 && lambda > 1.0) {
        return Err(Error::OutOfRange(format!("habit plates need 0 < d < 1 < lambda (got lambda = {lambda}, d = {d})")));
    }
    let root = (2.0 * (1.0 - d * d)).sqrt() / (lambda * lambda - 1.0).sqrt();
    let alpha = d * (lambda * lambda - 1.0) / (2.0 * (d + lambda));
    Ok((alpha, -root, -(lambda / d) * root))
}

/// Unnormalized `(a/α, n)` templates for a plate label.
fn plate_template(id: PlateId, beta: f64, gamma: f64) -> (Vec3, Vec3) {
    let s = id.sign.as_f64();
    let (g, b) = (-s * gamma, s * beta);
    let v = Vec3::new;
    match id.variant {
        1 => (v(g, 1.0, 1.0), v(b, 1.0, 1.0)),
        2 => (v(g, -1.0, 1.0), v(b, -1.0, 1.0)),
        3 => (v(1.0, g, 1.0), v(1.0, b, 1.0)),
        4 => (v(-1.0, g, 1.0), v(-1.0, b, 1.0)),
        5 => (v(1.0, 1.0, g), v(1.0, 1.0, b)),
        _ => (v(-1.0, 1.0, g), v(-1.0, 1.0, b)),
    }
}

/// One plate, with its rotation recovered by polar decomposition.
pub fn habit_plate(lambda: f64, d: f64, id: PlateId) -> Result<HabitPlate> {
    let (alpha, beta, gamma) = plate_scalars(lambda, d)?;
    let (a_dir, n) = plate_template(id, beta, gamma);
    let a = a_dir * alpha;
    let f = Mat3::IDENTITY + a.outer(&n);
    let (r, _) = polar(&f)?;
    let u = variants(lambda, d)?[id.variant as usize - 1].u;
    let res = (f - r * u).norm();
    let tol = Tolerances::default().residual_tol * f.norm();
    if res > tol {
        return Err(Error::Residual { residual: res, tol, context: format!("habit plate {id}") });
    }
    Ok(HabitPlate { id, a, n, r })
}

/// All twelve plates in canonical order.
pub fn habit_plates(lambda: f64, d: f64) -> Result<Vec<HabitPlate>> {
    PlateId::all().into_iter().map(|id| habit_plate(lambda, d, id)).collect()
}

/// Slip-plane family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SlipFamily {
    #[serde(rename = "110")]
    F110,
    #[serde(rename = "112")]
    F112,
    #[serde(rename = "123")]
    F123,
}

/// A slip system: direction φ in ⟨111⟩ and plane normal ψ, with φ·ψ = 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SlipSystem {
    pub family: SlipFamily,
    pub psi: [i32; 3],
    pub phi: [i32; 3],
}

impl SlipSystem {
    pub fn phi_vec(&self) -> Vec3 {
        Vec3::from_ints(self.phi)
    }

    pub fn psi_vec(&self) -> Vec3 {
        Vec3::from_ints(self.psi)
    }

    /// `φ⊗ψ`.
    pub fn tensor(&self) -> Mat3 {
        self.phi_vec().outer(&self.psi_vec())
    }

    /// `I + t φ⊗ψ`.
    pub fn shear(&self, t: f64) -> Mat3 {
        Mat3::IDENTITY + self.tensor() * t
    }
}

impl fmt::Display for SlipSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.phi;
        let [x, y, z] = self.psi;
        write!(f, "phi=({a},{b},{c}) psi=({x},{y},{z})")
    }
}

fn canonical_first(v: [i32; 3]) -> [i32; 3] {
    match v.iter().find(|&&c| c != 0) {
        Some(&c) if c < 0 => v.map(|x| -x),
        _ => v,
    }
}

fn canonical_last(v: [i32; 3]) -> [i32; 3] {
    match v.iter().rev().find(|&&c| c != 0) {
        Some(&c) if c < 0 => v.map(|x| -x),
        _ => v,
    }
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn planes(base: [i32; 3]) -> Vec<[i32; 3]> {
    let mut out = Vec::new();
    for p in PERMS {
        for signs in 0..8 {
            let v: [i32; 3] = std::array::from_fn(|k| {
                let s = if signs >> k & 1 == 1 { -1 } else { 1 };
                s * base[p[k]]
            });
            out.push(canonical_last(v));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The 48 BCC slip systems: 6 {110} planes × 2 directions, 12 {112} and 24
/// {123} planes × 1 direction. Ordered by family, then ψ, then φ
/// (lexicographic). φ has its first nonzero component positive, ψ its last.
pub fn bcc_slip_systems() -> Vec<SlipSystem> {
    let mut dirs: Vec<[i32; 3]> = (0..8)
        .map(|s| canonical_first(std::array::from_fn(|k| if s >> k & 1 == 1 { -1 } else { 1 })))
        .collect();
    dirs.sort();
    dirs.dedup();
    let mut out = Vec::with_capacity(48);
    for (family, base) in [(SlipFamily::F110, [1, 1, 0]), (SlipFamily::F112, [1, 1, 2]), (SlipFamily::F123, [1, 2, 3])] {
        for psi in planes(base) {
            for phi in &dirs {
                if phi[0] * psi[0] + phi[1] * psi[1] + phi[2] * psi[2] == 0 {
                    out.push(SlipSystem { family, psi, phi: *phi });
                }
            }
        }
    }
    out
}

/// The 24 proper rotations of the cube (signed permutation matrices with
/// determinant one), in a fixed order starting with the identity.
pub fn cubic_point_group() -> Vec<Mat3> {
    let mut out = Vec::with_capacity(24);
    for p in PERMS {
        for signs in 0..8 {
            let mut m = Mat3::ZERO;
            for (i, &j) in p.iter().enumerate() {
                m[(i, j)] = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
            }
            if m.det() > 0.0 {
                out.push(m);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::sym_eigen;

    #[test]
    fn unit_lattice_gives_identity_variants() {
        for v in variants(1.0, 1.0).unwrap() {
            assert_eq!(v.u, Mat3::IDENTITY);
        }
    }

    #[test]
    fn variant_eigenvalues_and_determinant() {
        let (l, d) = (1.2, 0.9);
        for v in variants(l, d).unwrap() {
            let e = sym_eigen(&v.u).unwrap().values;
            assert!((e[0] - d).abs() < 1e-12 && (e[1] - 1.0).abs() < 1e-12 && (e[2] - l).abs() < 1e-12);
            assert!((v.u.det() - l * d).abs() < 1e-12);
        }
        assert!(variants(-1.0, 1.0).is_err());
    }

    #[test]
    fn plates_reproduce_stretches() {
        let l = 1.2;
        let us = variants(l, 1.0 / l).unwrap();
        for p in habit_plates(l, 1.0 / l).unwrap() {
            let f = p.gradient();
            let u = us[p.id.variant as usize - 1].u;
            assert!((f.transpose() * f - u * u).norm() < 1e-14);
            assert!((f - p.r * u).norm() < 1e-12);
        }
    }

    #[test]
    fn plates_need_the_regime() {
        assert!(habit_plates(0.9, 0.95).is_err());
        assert!(habit_plates(1.1, 1.0).is_err());
    }

    #[test]
    fn catalog_shape() {
        let c = bcc_slip_systems();
        assert_eq!(c.len(), 48);
        assert_eq!(c.iter().filter(|s| s.family == SlipFamily::F110).count(), 12);
        assert_eq!(c.iter().filter(|s| s.family == SlipFamily::F112).count(), 12);
        assert_eq!(c.iter().filter(|s| s.family == SlipFamily::F123).count(), 24);
        let mut sorted = c.clone();
        sorted.sort();
        assert_eq!(sorted, c);
    }

    #[test]
    fn cubic_group_has_nine_twofold_axes() {
        let g = cubic_point_group();
        assert_eq!(g.len(), 24);
        assert_eq!(g[0], Mat3::IDENTITY);
        assert_eq!(g.iter().filter(|r| (r.trace() + 1.0).abs() < 1e-12).count(), 9);
    }

    #[test]
    fn plate_labels_parse() {
        assert_eq!("4-".parse::<PlateId>().unwrap(), PlateId::new(4, Sign::Minus));
        assert_eq!("(1,+)".parse::<PlateId>().unwrap(), PlateId::new(1, Sign::Plus));
        assert_eq!("6,-".parse::<PlateId>().unwrap().ordinal(), 11);
        assert!("7+".parse::<PlateId>().is_err());
        assert!("".parse::<PlateId>().is_err());
    }
}
