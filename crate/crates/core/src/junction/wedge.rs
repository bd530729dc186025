//! Wedge geometry around the junction axis and the stability check built on
//! it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{check_regime, local_rigidity, separation_margin, JunctionGeometry, PlasticJunction, RigidityReport,
    SeparationReport};
use crate::error::{Error, Result};
use crate::linalg::{rank_le_one, Mat3, Tolerances, Vec3};

/// Five wedges meeting along the axis m̂: austenite, plate 2, the two sheared
/// plates and plate 1, swept in that angular order.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WedgeGeometry {
    pub axis: Vec3,
    /// Signed angles of the interface half-planes, measured about `axis` from
    /// the austenite/plate-1 interface. All share one sign.
    pub theta_psi1: f64,
    pub theta_m: f64,
    pub theta_psi2: f64,
    pub theta_n2: f64,
    /// `[F̄₁, F̄₂, R₁V₁, R₂V₂, I]`.
    pub regions: [Mat3; 5],
}

/// Wedges for a junction with oriented habit normals `n₁`, `n₂`.
pub fn build_vii_wedges(j: &PlasticJunction, n1: &Vec3, n2: &Vec3, tol: &Tolerances) -> Result<WedgeGeometry> {
    build_vii_wedges_geometry(&j.geometry(), n1, n2, tol)
}

/// [`build_vii_wedges`] on frame-free data. `n₁`, `n₂` replace the geometry's
/// plate normals, and their signs matter.
pub fn build_vii_wedges_geometry(g: &JunctionGeometry, n1: &Vec3, n2: &Vec3, tol: &Tolerances) -> Result<WedgeGeometry> {
    for f in [&g.f1, &g.f2] {
        if !rank_le_one(&(*f - Mat3::IDENTITY), tol) {
            return Err(Error::Precondition("plate gradient minus identity must be rank one".into()));
        }
    }
    let cross = n1.cross(n2);
    if cross.norm() <= tol.rank_tol * n1.norm() * n2.norm() {
        return Err(Error::Precondition("n1 and n2 are parallel".into()));
    }
    let mh = cross.normalized();
    let perp = |x: &Vec3| x.dot(&mh).abs() <= 1e-9 * x.norm();
    if ![g.psi1, g.psi2, g.m].iter().all(perp) {
        return Err(Error::OrthogonalityFailed);
    }

    let (f1b, f2b) = g.gradients();
    let regions = [f1b, f2b, g.f1, g.f2, Mat3::IDENTITY];
    let jumps = [
        (g.f1 - Mat3::IDENTITY, *n1),
        (f1b - g.f1, g.psi1),
        (f1b - f2b, g.m),
        (f2b - g.f2, g.psi2),
        (g.f2 - Mat3::IDENTITY, *n2),
    ];
    for (d, nu) in jumps {
        let nu = nu.normalized();
        let res = (d - (d * nu).outer(&nu)).norm();
        if res > tol.residual_tol * (1.0 + d.norm()) {
            return Err(Error::Residual { residual: res, tol: tol.residual_tol, context: "wedge interface jump".into() });
        }
    }

    // Reference ray: the n₁ interface half-plane on the side of n₂.
    let mut r1 = mh.cross(n1);
    if r1.dot(n2) < 0.0 {
        r1 = -r1;
    }
    let r1 = r1.normalized();
    let ey = mh.cross(&r1);
    let s = if ey.dot(n1) < 0.0 { 1.0 } else { -1.0 };
    let two_pi = 2.0 * PI;
    let ang = |u: &Vec3| (u.dot(&ey).atan2(u.dot(&r1)) * s).rem_euclid(two_pi);
    let mut r2 = mh.cross(n2);
    if r2.dot(n1) < 0.0 {
        r2 = -r2;
    }
    let tn2 = ang(&r2);
    let cands = |nu: &Vec3| -> Vec<f64> {
        let a = ang(&mh.cross(nu));
        let mut c: Vec<f64> =
            [a, (a + PI).rem_euclid(two_pi)].into_iter().filter(|&x| x > 1e-12 && x < tn2 - 1e-12).collect();
        c.sort_by(f64::total_cmp);
        c
    };
    let (c1, cm, c2) = (cands(&g.psi1), cands(&g.m), cands(&g.psi2));
    for &x in &c1 {
        for &y in &cm {
            for &z in &c2 {
                if x < y && y < z {
                    return Ok(WedgeGeometry {
                        axis: mh,
                        theta_psi1: s * x,
                        theta_m: s * y,
                        theta_psi2: s * z,
                        theta_n2: s * tn2,
                        regions,
                    });
                }
            }
        }
    }
    Err(Error::OrderingFailed)
}

/// Sufficient conditions for local stability, clause by clause.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub stable: bool,
    /// One entry per failed clause.
    pub reasons: Vec<String>,
    pub rigidity: Option<RigidityReport>,
    pub separation: Vec<SeparationReport>,
    /// `(Vᵢ²φᵢ × ψᵢ)·m / (|Vᵢ²φᵢ||ψᵢ|)` for i = 1, 2.
    pub transversality: [f64; 2],
    pub wedge: Option<WedgeGeometry>,
}

/// Checks rigidity, separation of both sheared gradients, the transversality
/// clause `(Vᵢ²φᵢ × ψᵢ)·m ≠ 0` and wedge constructibility. A failed clause is
/// reported as "not verified", never as instability.
pub fn stability_check(j: &PlasticJunction, n1: &Vec3, n2: &Vec3, tol: &Tolerances) -> Result<StabilityReport> {
    check_regime(j.lambda, j.d)?;
    let mut reasons = Vec::new();
    let rigidity = match local_rigidity(j, tol) {
        Ok(r) => {
            if !r.rigid {
                reasons.push("not locally rigid".to_string());
            }
            Some(r)
        }
        Err(e) => {
            reasons.push(format!("rigidity not certified: {e}"));
            None
        }
    };

    let (f1, f2) = j.gradients();
    let mut separation = Vec::with_capacity(2);
    for (f, plate, slip) in [(f1, &j.plate1, &j.slip1), (f2, &j.plate2, &j.slip2)] {
        let rep = separation_margin(&f, plate.id.variant, Some(slip), j.lambda, j.d, tol)?;
        if !(rep.margin > 0.0) {
            reasons.push(format!("separation margin of plate {} is not positive", plate.id));
        }
        separation.push(rep);
    }

    let g = j.geometry();
    let trans = |u: &Mat3, phi: &Vec3, psi: &Vec3| {
        let x = *u * (*u * *phi);
        x.cross(psi).dot(&g.m) / (x.norm() * psi.norm())
    };
    let transversality = [trans(&g.u1, &g.phi1, &g.psi1), trans(&g.u2, &g.phi2, &g.psi2)];
    for (i, t) in transversality.iter().enumerate() {
        if t.abs() <= tol.rigidity_tol {
            reasons.push(format!("transversality clause fails for plate {}", i + 1));
        }
    }

    let wedge = match build_vii_wedges(j, n1, n2, tol) {
        Ok(w) => Some(w),
        Err(e) => {
            reasons.push(format!("wedge geometry not constructible: {e}"));
            None
        }
    };
    Ok(StabilityReport { stable: reasons.is_empty(), reasons, rigidity, separation, transversality, wedge })
}

/// `‖(t̄₁φ₁⊗ψ₁ − t̄₂φ₂⊗ψ₂) ×_row m‖`, the surface density of the curl of the
/// plastic strain on the junction plane.
pub fn dislocation_density_norm(j: &PlasticJunction) -> f64 {
    let jump = j.slip1.tensor() * j.t1 - j.slip2.tensor() * j.t2;
    jump.cross_rows(&j.m).norm()
}
