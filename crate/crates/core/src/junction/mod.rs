//! Plastic junctions: two sheared plates made rank-one compatible by slip.
//!
//! Shear amounts multiply the unnormalized integer slip tensor φ⊗ψ. To
//! convert to a unit-vector slip magnitude multiply by |φ||ψ|.

mod cases;
mod families;
mod rigidity;
mod separation;
mod wedge;

pub use cases::{
    eta_xi, junction_normal_closed_form, m_minus_printed, m_plus, match_case, CaseMatch, CaseOption, ThmCase,
};
pub use families::{nonrigid_family_check, FamilyCase, FamilyReport, FamilySample};
pub use rigidity::{local_rigidity, local_rigidity_geometry, RigidityMethod, RigidityReport};
pub use separation::{
    separation_margin, separation_margin_general, shear_well_distance, Competitor, SeparationReport,
};
pub use wedge::{
    build_vii_wedges, build_vii_wedges_geometry, dislocation_density_norm, stability_check, StabilityReport,
    WedgeGeometry,
};

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::crystal::{variants, HabitPlate, SlipSystem};
use crate::error::{Error, Result};
use crate::linalg::{cofactor, rank_le_one, rank_one_factor, Mat3, Tolerances, Vec3};

/// Upper end of the admissible λ range.
pub const LAMBDA_MAX: f64 = std::f64::consts::SQRT_2;

/// Shear amounts below this magnitude count as "no slip".
pub const ZERO_SHEAR: f64 = 1e-10;

/// Two sheared plates with `F₁(t̄₁) − F₂(t̄₂) = b⊗m`, where
/// `Fᵢ(s) = (I + aᵢ⊗nᵢ)(I + s φᵢ⊗ψᵢ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlasticJunction {
    pub plate1: HabitPlate,
    pub plate2: HabitPlate,
    pub slip1: SlipSystem,
    pub slip2: SlipSystem,
    pub t1: f64,
    pub t2: f64,
    pub b: Vec3,
    /// Unit junction normal, first nonzero component positive.
    pub m: Vec3,
    /// `‖F₁(t̄₁) − F₂(t̄₂) − b⊗m‖`.
    pub residual: f64,
    pub lambda: f64,
    pub d: f64,
}

impl PlasticJunction {
    /// The sheared gradients `(F̄₁, F̄₂)`.
    pub fn gradients(&self) -> (Mat3, Mat3) {
        (
            self.plate1.gradient() * self.slip1.shear(self.t1),
            self.plate2.gradient() * self.slip2.shear(self.t2),
        )
    }

    /// Frame-free view used by the rigidity, wedge and density routines.
    pub fn geometry(&self) -> JunctionGeometry {
        let v = variants(self.lambda, self.d).expect("junction parameters were validated");
        JunctionGeometry {
            f1: self.plate1.gradient(),
            f2: self.plate2.gradient(),
            u1: v[self.plate1.id.variant as usize - 1].u,
            u2: v[self.plate2.id.variant as usize - 1].u,
            n1: self.plate1.n,
            n2: self.plate2.n,
            phi1: self.slip1.phi_vec(),
            psi1: self.slip1.psi_vec(),
            phi2: self.slip2.phi_vec(),
            psi2: self.slip2.psi_vec(),
            t1: self.t1,
            t2: self.t2,
            b: self.b,
            m: self.m,
        }
    }
}

/// Real-valued description of a junction, closed under rotations of the
/// reference frame.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JunctionGeometry {
    /// `R₁V₁`.
    pub f1: Mat3,
    /// `R₂V₂`.
    pub f2: Mat3,
    /// `V₁`.
    pub u1: Mat3,
    /// `V₂`.
    pub u2: Mat3,
    pub n1: Vec3,
    pub n2: Vec3,
    pub phi1: Vec3,
    pub psi1: Vec3,
    pub phi2: Vec3,
    pub psi2: Vec3,
    pub t1: f64,
    pub t2: f64,
    pub b: Vec3,
    pub m: Vec3,
}

impl JunctionGeometry {
    pub fn sheared(&self, t1: f64, t2: f64) -> (Mat3, Mat3) {
        (
            self.f1 * (Mat3::IDENTITY + self.phi1.outer(&self.psi1) * t1),
            self.f2 * (Mat3::IDENTITY + self.phi2.outer(&self.psi2) * t2),
        )
    }

    pub fn gradients(&self) -> (Mat3, Mat3) {
        self.sheared(self.t1, self.t2)
    }

    /// Conjugate everything by `Q`: matrices become `Q X Qᵀ`, vectors `Q x`.
    pub fn rotated(&self, q: &Mat3) -> JunctionGeometry {
        let c = |x: &Mat3| *q * *x * q.transpose();
        let r = |x: &Vec3| *q * *x;
        JunctionGeometry {
            f1: c(&self.f1),
            f2: c(&self.f2),
            u1: c(&self.u1),
            u2: c(&self.u2),
            n1: r(&self.n1),
            n2: r(&self.n2),
            phi1: r(&self.phi1),
            psi1: r(&self.psi1),
            phi2: r(&self.phi2),
            psi2: r(&self.psi2),
            t1: self.t1,
            t2: self.t2,
            b: r(&self.b),
            m: r(&self.m),
        }
    }

    /// Unit vector along `n₁ × n₂`.
    pub fn m_hat(&self) -> Vec3 {
        self.n1.cross(&self.n2).normalized()
    }
}

/// The eight vectors entering the shear-amount problem
/// `rank(a₁⊗n₁ − a₂⊗n₂ + s₁φ̂₁⊗ψ₁ − s₂φ̂₂⊗ψ₂) ≤ 1`, where φ̂ᵢ = Fᵢφᵢ.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearProblem {
    pub a1: Vec3,
    pub a2: Vec3,
    pub phi1: Vec3,
    pub phi2: Vec3,
    pub n1: Vec3,
    pub n2: Vec3,
    pub psi1: Vec3,
    pub psi2: Vec3,
}

impl ShearProblem {
    /// `a₁⊗n₁ − a₂⊗n₂`.
    pub fn base(&self) -> Mat3 {
        self.a1.outer(&self.n1) - self.a2.outer(&self.n2)
    }

    /// The full matrix at `(s₁, s₂)`.
    pub fn matrix(&self, s1: f64, s2: f64) -> Mat3 {
        self.base() + self.phi1.outer(&self.psi1) * s1 - self.phi2.outer(&self.psi2) * s2
    }

    fn check_rank_two(&self, tol: &Tolerances) -> Result<()> {
        let aa = self.a1.cross(&self.a2).norm();
        let nn = self.n1.cross(&self.n2).norm();
        if aa <= tol.rank_tol * self.a1.norm() * self.a2.norm() || nn <= tol.rank_tol * self.n1.norm() * self.n2.norm() {
            return Err(Error::Precondition("a1 (x) n1 - a2 (x) n2 must have rank two".into()));
        }
        Ok(())
    }

    /// Relative cofactor residual `‖cof M‖ / ‖M‖²`.
    pub fn residual(&self, s1: f64, s2: f64) -> f64 {
        let m = self.matrix(s1, s2);
        let n = m.norm();
        if n == 0.0 {
            0.0
        } else {
            cofactor(&m).norm() / (n * n)
        }
    }
}

/// One of the four alternatives of the necessary condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Disjunct {
    /// φ̂₁·(a₁×a₂) = φ̂₂·(a₁×a₂) = 0.
    D1,
    /// φ̂₁·(a₁×a₂) = ψ₁·(n₁×n₂) = 0.
    D2,
    /// φ̂₂·(a₁×a₂) = ψ₂·(n₁×n₂) = 0.
    D3,
    /// ψ₁·(n₁×n₂) = ψ₂·(n₁×n₂) = 0.
    D4,
}

fn vanishes(x: &Vec3, axis: &Vec3, tol: &Tolerances) -> bool {
    x.dot(axis).abs() <= tol.rank_tol * x.norm() * axis.norm()
}

/// Which alternatives of the necessary condition hold.
pub fn necessary_conditions(p: &ShearProblem, tol: &Tolerances) -> Result<BTreeSet<Disjunct>> {
    p.check_rank_two(tol)?;
    let aa = p.a1.cross(&p.a2);
    let nn = p.n1.cross(&p.n2);
    let f1 = vanishes(&p.phi1, &aa, tol);
    let f2 = vanishes(&p.phi2, &aa, tol);
    let g1 = vanishes(&p.psi1, &nn, tol);
    let g2 = vanishes(&p.psi2, &nn, tol);
    let mut out = BTreeSet::new();
    if f1 && f2 {
        out.insert(Disjunct::D1);
    }
    if f1 && g1 {
        out.insert(Disjunct::D2);
    }
    if f2 && g2 {
        out.insert(Disjunct::D3);
    }
    if g1 && g2 {
        out.insert(Disjunct::D4);
    }
    Ok(out)
}

/// Which span hypothesis produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// ψ₁, ψ₂ ∈ span{n₁, n₂}.
    A,
    /// φ̂₁, φ̂₂ ∈ span{a₁, a₂}.
    B,
    /// Both.
    C,
}

/// Coefficients of the family `1 = c₁s₁ + c₂s₂ + c₁₂s₁s₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyCoefficients {
    pub c1: f64,
    pub c2: f64,
    pub c12: f64,
}

impl FamilyCoefficients {
    /// `s₁` on the family for a given `s₂`, when defined.
    pub fn s1_for(&self, s2: f64) -> Option<f64> {
        let den = self.c1 + self.c12 * s2;
        (den != 0.0).then(|| (1.0 - self.c2 * s2) / den)
    }
}

/// Outcome of the shear-amount solver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum ShearSolution {
    Unique { s1: f64, s2: f64, branch: Branch },
    Family(FamilyCoefficients),
    /// The span hypotheses hold but no `(s₁, s₂)` works.
    None,
}

/// Coefficients of `x` in the basis {p, q}, or `None` if `x` is off the plane.
fn plane_coords(x: &Vec3, p: &Vec3, q: &Vec3, tol: &Tolerances) -> Option<(f64, f64)> {
    if !vanishes(x, &p.cross(q), tol) {
        return None;
    }
    let (pp, pq, qq) = (p.dot(p), p.dot(q), q.dot(q));
    let (xp, xq) = (x.dot(p), x.dot(q));
    let det = pp * qq - pq * pq;
    Some(((xp * qq - xq * pq) / det, (xq * pp - xp * pq) / det))
}

/// Closed-form shear amounts under the span hypotheses.
pub fn solve_shear_amounts(p: &ShearProblem, tol: &Tolerances) -> Result<ShearSolution> {
    p.check_rank_two(tol)?;
    let alpha = plane_coords(&p.psi1, &p.n1, &p.n2, tol);
    let beta = plane_coords(&p.psi2, &p.n1, &p.n2, tol);
    let gamma = plane_coords(&p.phi1, &p.a1, &p.a2, tol);
    let delta = plane_coords(&p.phi2, &p.a1, &p.a2, tol);
    let span_a = alpha.zip(beta);
    let span_b = gamma.zip(delta);

    match (span_a, span_b) {
        (Some(((a1, a2), (b1, b2))), Some(((g1, g2), (d1, d2)))) => {
            let coeffs = FamilyCoefficients {
                c1: a2 * g2 - a1 * g1,
                c2: -(b2 * d2 - b1 * d1),
                c12: -(a1 * b2 - a2 * b1) * (g1 * d2 - g2 * d1),
            };
            let size = coeffs.c1.abs().max(coeffs.c2.abs()).max(coeffs.c12.abs());
            if size <= 1e-14 {
                return Ok(ShearSolution::None);
            }
            Ok(ShearSolution::Family(coeffs))
        }
        (Some(((a1, a2), (b1, b2))), None) => {
            let aa = p.a1.cross(&p.a2);
            let ff = p.phi1.cross(&p.phi2);
            let num1 = aa.dot(&p.phi2);
            let num2 = aa.dot(&p.phi1);
            if vanishes(&p.phi2, &aa, tol) && vanishes(&p.phi1, &aa, tol) {
                return Err(Error::NoBranch);
            }
            let den1 = (p.a1 * a2 + p.a2 * a1).dot(&ff);
            let den2 = (p.a1 * b2 + p.a2 * b1).dot(&ff);
            finish_unique(p, num1, den1, num2, den2, Branch::A, tol)
        }
        (None, Some(((g1, g2), (d1, d2)))) => {
            let nn = p.n1.cross(&p.n2);
            let gg = p.psi1.cross(&p.psi2);
            let num1 = nn.dot(&p.psi2);
            let num2 = nn.dot(&p.psi1);
            if vanishes(&p.psi2, &nn, tol) && vanishes(&p.psi1, &nn, tol) {
                return Err(Error::NoBranch);
            }
            let den1 = (p.n1 * g2 + p.n2 * g1).dot(&gg);
            let den2 = (p.n1 * d2 + p.n2 * d1).dot(&gg);
            finish_unique(p, num1, den1, num2, den2, Branch::B, tol)
        }
        (None, None) => Err(Error::NoBranch),
    }
}

fn finish_unique(
    p: &ShearProblem,
    num1: f64,
    den1: f64,
    num2: f64,
    den2: f64,
    branch: Branch,
    tol: &Tolerances,
) -> Result<ShearSolution> {
    let scale = |num: f64| num.abs().max(1e-300);
    if den1.abs() <= 1e-12 * scale(num1) || den2.abs() <= 1e-12 * scale(num2) || den1 == 0.0 || den2 == 0.0 {
        return Err(Error::DegenerateDenominator);
    }
    let (s1, s2) = (num1 / den1, num2 / den2);
    verify_solution(p, s1, s2, tol)?;
    Ok(ShearSolution::Unique { s1, s2, branch })
}

fn verify_solution(p: &ShearProblem, s1: f64, s2: f64, tol: &Tolerances) -> Result<()> {
    let m = p.matrix(s1, s2);
    let res = p.residual(s1, s2);
    if !rank_le_one(&m, tol) || res > tol.residual_tol {
        return Err(Error::Residual { residual: res, tol: tol.residual_tol, context: "shear amounts".into() });
    }
    Ok(())
}

/// All solutions of the rank-one problem without span hypotheses.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BilinearSolutions {
    /// Isolated verified roots `(s₁, s₂)`.
    pub unique: Vec<(f64, f64)>,
    /// `true` when a continuum of solutions exists.
    pub family: bool,
}

/// General solver: `cof(D + s₁X₁ − s₂X₂) = c + s₁x + s₂y + s₁s₂z` is bilinear
/// because X₁, X₂ are rank one, so the nine components vanish together only
/// at common roots of the 2×2 minors of (c + s₂y, x + s₂z).
pub fn solve_bilinear(p: &ShearProblem, tol: &Tolerances) -> BilinearSolutions {
    let d = p.base();
    let x1 = p.phi1.outer(&p.psi1);
    let x2 = p.phi2.outer(&p.psi2);
    let c = cofactor(&d);
    let x = cofactor(&(d + x1)) - c;
    let y = cofactor(&(d - x2)) - c;
    let z = cofactor(&(d + x1 - x2)) - c - x - y;
    let flat = |m: &Mat3| -> [f64; 9] { std::array::from_fn(|k| m.0[k / 3][k % 3]) };
    let (cf, xf, yf, zf) = (flat(&c), flat(&x), flat(&y), flat(&z));
    let scale = c.norm() + x.norm() + y.norm() + z.norm();
    let mut out = BilinearSolutions::default();
    if scale == 0.0 {
        out.family = true;
        return out;
    }

    // Minor (i,j) is q0 + q1 s + q2 s².
    let mut best = [0.0; 3];
    let mut best_norm = 0.0;
    for i in 0..9 {
        for j in i + 1..9 {
            let q0 = cf[i] * xf[j] - cf[j] * xf[i];
            let q1 = cf[i] * zf[j] + yf[i] * xf[j] - cf[j] * zf[i] - yf[j] * xf[i];
            let q2 = yf[i] * zf[j] - yf[j] * zf[i];
            let n = q0.abs().max(q1.abs()).max(q2.abs());
            if n > best_norm {
                best_norm = n;
                best = [q0, q1, q2];
            }
        }
    }
    if best_norm <= 1e-13 * scale * scale {
        out.family = true;
        return out;
    }

    for s2 in quadratic_roots(best[2], best[1], best[0]) {
        let u = c + y * s2;
        let w = x + z * s2;
        if w.norm() <= 1e-12 * scale {
            if u.norm() <= 1e-10 * scale {
                out.family = true;
            }
            continue;
        }
        let s1 = -u.ddot(&w) / w.ddot(&w);
        let (s1, s2) = polish_bilinear(&c, &x, &y, &z, s1, s2);
        if verify_solution(p, s1, s2, tol).is_ok()
            && !out.unique.iter().any(|&(a, b)| (a - s1).abs() + (b - s2).abs() <= 1e-9 * (1.0 + s1.abs() + s2.abs()))
        {
            out.unique.push((s1, s2));
        }
    }
    out.unique.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}

/// Real roots of `a s² + b s + c`, with near-double roots kept.
fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let size = a.abs().max(b.abs()).max(c.abs());
    if a.abs() <= 1e-14 * size {
        if b.abs() <= 1e-14 * size {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let disc = b * b - 4.0 * a * c;
    if disc < -1e-12 * b * b.max(size * size) {
        return Vec::new();
    }
    let sq = disc.max(0.0).sqrt();
    let q = -0.5 * (b + b.signum() * sq);
    if q == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    let mut r = vec![q / a, c / q];
    r.sort_by(f64::total_cmp);
    r
}

/// Gauss–Newton polish of `c + s₁x + s₂y + s₁s₂z = 0`.
fn polish_bilinear(c: &Mat3, x: &Mat3, y: &Mat3, z: &Mat3, mut s1: f64, mut s2: f64) -> (f64, f64) {
    for _ in 0..4 {
        let r = *c + *x * s1 + *y * s2 + *z * (s1 * s2);
        let j1 = *x + *z * s2;
        let j2 = *y + *z * s1;
        let (a11, a12, a22) = (j1.ddot(&j1), j1.ddot(&j2), j2.ddot(&j2));
        let (g1, g2) = (j1.ddot(&r), j2.ddot(&r));
        let det = a11 * a22 - a12 * a12;
        if det.abs() <= 1e-30 * (a11 * a22).max(1e-300) {
            break;
        }
        let d1 = (g1 * a22 - g2 * a12) / det;
        let d2 = (g2 * a11 - g1 * a12) / det;
        if !(d1.is_finite() && d2.is_finite()) {
            break;
        }
        s1 -= d1;
        s2 -= d2;
    }
    (s1, s2)
}

/// The shear problem for a plate pair and slip pair, in direct form.
pub fn shear_problem(plate1: &HabitPlate, plate2: &HabitPlate, slip1: &SlipSystem, slip2: &SlipSystem) -> ShearProblem {
    ShearProblem {
        a1: plate1.a,
        a2: plate2.a,
        phi1: plate1.gradient() * slip1.phi_vec(),
        phi2: plate2.gradient() * slip2.phi_vec(),
        n1: plate1.n,
        n2: plate2.n,
        psi1: slip1.psi_vec(),
        psi2: slip2.psi_vec(),
    }
}

fn check_regime(lambda: f64, d: f64) -> Result<()> {
    if !(lambda > 1.0 && lambda < LAMBDA_MAX) {
        return Err(Error::OutOfRange(format!("lambda = {lambda} must lie in (1, sqrt 2)")));
    }
    if !(d > 0.0 && d < 1.0) {
        return Err(Error::OutOfRange(format!("d = {d} must lie in (0, 1)")));
    }
    Ok(())
}

/// Isolated shear-amount pairs `(t₁, t₂)` for one plate pair and slip pair.
///
/// When both slips share a plane the problem is first post-multiplied by the
/// inverse shears, which swaps the roles of the two slip directions; the
/// closed form is then applied to the swapped problem and mapped back.
pub fn junction_shears(
    plate1: &HabitPlate,
    plate2: &HabitPlate,
    slip1: &SlipSystem,
    slip2: &SlipSystem,
    tol: &Tolerances,
) -> Vec<(f64, f64)> {
    let direct = shear_problem(plate1, plate2, slip1, slip2);
    match necessary_conditions(&direct, tol) {
        Ok(c) if !c.is_empty() => {}
        _ => return Vec::new(),
    }
    let swapped = slip1.psi == slip2.psi;
    let closed = if swapped {
        let p = ShearProblem {
            phi1: plate1.gradient() * slip2.phi_vec(),
            phi2: plate2.gradient() * slip1.phi_vec(),
            ..direct
        };
        solve_shear_amounts(&p, tol).map(|s| match s {
            ShearSolution::Unique { s1, s2, branch } => ShearSolution::Unique { s1: -s2, s2: -s1, branch },
            other => other,
        })
    } else {
        solve_shear_amounts(&direct, tol)
    };
    match closed {
        Ok(ShearSolution::Unique { s1, s2, .. }) => vec![(s1, s2)],
        Ok(_) => Vec::new(),
        Err(_) => solve_bilinear(&direct, tol).unique,
    }
}

/// Every verified plastic junction between `base` and the partners, over all
/// ordered slip pairs. Ordered by partner, then slip indices, then `t̄₁`.
pub fn find_plastic_junctions(
    lambda: f64,
    d: f64,
    base: &HabitPlate,
    partners: &[HabitPlate],
    slips: &[SlipSystem],
    tol: &Tolerances,
) -> Result<Vec<PlasticJunction>> {
    check_regime(lambda, d)?;
    tol.validate()?;
    let mut out = Vec::new();
    for partner in partners {
        if partner.id == base.id {
            continue;
        }
        for slip1 in slips {
            for slip2 in slips {
                let mut shears = junction_shears(base, partner, slip1, slip2, tol);
                shears.sort_by(|a, b| a.0.total_cmp(&b.0));
                for (t1, t2) in shears {
                    if t1.abs() <= ZERO_SHEAR || t2.abs() <= ZERO_SHEAR {
                        continue;
                    }
                    if let Some(j) = assemble(lambda, d, base, partner, slip1, slip2, t1, t2, tol) {
                        out.push(j);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    lambda: f64,
    d: f64,
    plate1: &HabitPlate,
    plate2: &HabitPlate,
    slip1: &SlipSystem,
    slip2: &SlipSystem,
    t1: f64,
    t2: f64,
    tol: &Tolerances,
) -> Option<PlasticJunction> {
    let diff = plate1.gradient() * slip1.shear(t1) - plate2.gradient() * slip2.shear(t2);
    if !rank_le_one(&diff, tol) {
        return None;
    }
    let (b, m) = rank_one_factor(&diff);
    let residual = (diff - b.outer(&m)).norm();
    if residual > tol.residual_tol {
        return None;
    }
    Some(PlasticJunction { plate1: *plate1, plate2: *plate2, slip1: *slip1, slip2: *slip2, t1, t2, b, m, residual, lambda, d })
}

/// V_II classification of a junction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ViiClass {
    /// ψ₁, ψ₂ ⊥ m̂ with m̂ ∥ n₁ × n₂.
    pub psi_perp: bool,
    pub rigidity: RigidityReport,
}

impl ViiClass {
    pub fn admissible(&self) -> bool {
        self.psi_perp && self.rigidity.rigid
    }
}

/// Whether the slip planes contain the junction axis and the junction is
/// locally rigid.
pub fn classify_vii(j: &PlasticJunction, tol: &Tolerances) -> Result<ViiClass> {
    let g = j.geometry();
    let mh = g.m_hat();
    let perp = |x: &Vec3| x.dot(&mh).abs() <= 1e-9 * x.norm();
    let rigidity = local_rigidity(j, tol)?;
    Ok(ViiClass { psi_perp: perp(&g.psi1) && perp(&g.psi2), rigidity })
}

/// Junctions of [`find_plastic_junctions`] that pass [`classify_vii`].
pub fn vii_candidates(junctions: &[PlasticJunction], tol: &Tolerances) -> Result<Vec<PlasticJunction>> {
    let mut out = Vec::new();
    for j in junctions {
        if classify_vii(j, tol)?.admissible() {
            out.push(*j);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots_cover_degenerate_cases() {
        assert_eq!(quadratic_roots(0.0, 2.0, -4.0), vec![2.0]);
        assert_eq!(quadratic_roots(1.0, -3.0, 2.0), vec![1.0, 2.0]);
        assert!(quadratic_roots(1.0, 0.0, 1.0).is_empty());
        assert!(quadratic_roots(0.0, 0.0, 1.0).is_empty());
    }

    #[test]
    fn generic_triple_products_give_no_condition() {
        let p = ShearProblem {
            a1: Vec3::new(0.1, 0.2, 0.3),
            a2: Vec3::new(-0.3, 0.1, 0.2),
            phi1: Vec3::new(1.0, 0.3, -0.2),
            phi2: Vec3::new(0.4, -1.0, 0.5),
            n1: Vec3::new(0.2, 1.0, 0.9),
            n2: Vec3::new(1.0, -0.1, 0.4),
            psi1: Vec3::new(0.3, 0.7, -1.0),
            psi2: Vec3::new(-0.6, 0.2, 0.8),
        };
        assert!(necessary_conditions(&p, &Tolerances::default()).unwrap().is_empty());
    }

    #[test]
    fn parallel_plates_violate_precondition() {
        let v = Vec3::new(1.0, 0.0, 0.0);
        let p = ShearProblem { a1: v, a2: v * 2.0, phi1: v, phi2: v, n1: v, n2: v, psi1: v, psi2: v };
        assert!(matches!(necessary_conditions(&p, &Tolerances::default()), Err(Error::Precondition(_))));
    }
}
