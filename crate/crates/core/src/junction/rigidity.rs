//! Local rigidity of a plastic junction.
//!
//! Near `(θ, t₁, t₂) = (0, t̄₁, t̄₂)` the junction persists under a rotation of
//! plate 1 about its image of m̂ iff the map
//! `Φ(θ,t₁,t₂) = R(θ)R₁V₁(I+t₁P₁)v − R₂V₂(I+t₂P₂)v`, `v = m×m̂`, has a
//! one-parameter zero set. Its Jacobian is nonsingular iff the triple product
//! `f = (R₁V₁m̂ × R₁V₁w)·(R₁V₁φ₁ × R₂V₂φ₂)` does not vanish.

use serde::{Deserialize, Serialize};

use super::{JunctionGeometry, PlasticJunction};
use crate::error::{Error, Result};
use crate::linalg::{jacobi_svd, orthonormal_complement, rodrigues, rotation_vector, Mat3, Tolerances, Vec3};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RigidityMethod {
    /// Triple product and 3×3 Jacobian.
    Analytic,
    /// Rank of the full 6×5 Jacobian, with family tracing.
    Fallback,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub rigid: bool,
    pub method: RigidityMethod,
    pub f_value: f64,
    /// `f / (|R₁V₁m̂||R₁V₁w||R₁V₁φ₁||R₂V₂φ₂|)`.
    pub f_normalized: f64,
    pub jacobian: Mat3,
    pub det_jacobian: f64,
    /// `det J` divided by the product of its column norms.
    pub det_normalized: f64,
    /// `min(|f_normalized|, |det_normalized|)`.
    pub min_abs_det: f64,
    /// Relative distance between the analytic and central-difference Jacobians.
    pub fd_rel_error: f64,
    pub family: Option<String>,
}

/// Rigidity certificate of a junction.
pub fn local_rigidity(j: &PlasticJunction, tol: &Tolerances) -> Result<RigidityReport> {
    local_rigidity_geometry(&j.geometry(), tol)
}

struct Parts {
    f_value: f64,
    f_normalized: f64,
    jacobian: Mat3,
    k: Vec3,
    v: Vec3,
}

fn analytic_parts(g: &JunctionGeometry, mh: &Vec3) -> Parts {
    let (a, b) = (g.f1, g.f2);
    let v = g.m.cross(mh);
    let w = v + g.phi1 * (g.t1 * g.psi1.dot(&v));
    let am = a * *mh;
    let aw = a * w;
    let ap = a * g.phi1;
    let bp = b * g.phi2;
    let f_value = am.cross(&aw).dot(&ap.cross(&bp));
    let scale = am.norm() * aw.norm() * ap.norm() * bp.norm();
    let f_normalized = if scale > 0.0 { f_value / scale } else { 0.0 };
    let k = am.normalized();
    let jacobian = Mat3::from_cols(k.cross(&aw), ap * g.psi1.dot(&v), -(bp * g.psi2.dot(&v)));
    Parts { f_value, f_normalized, jacobian, k, v }
}

fn fd_jacobian(g: &JunctionGeometry, k: &Vec3, v: &Vec3) -> Mat3 {
    let phi = |th: f64, u1: f64, u2: f64| -> Vec3 {
        let (f1, f2) = g.sheared(u1, u2);
        rodrigues(k, th) * (f1 * *v) - f2 * *v
    };
    let h = 1e-6;
    let x0 = [0.0, g.t1, g.t2];
    let col = |i: usize| {
        let mut p = x0;
        let mut m = x0;
        p[i] += h;
        m[i] -= h;
        (phi(p[0], p[1], p[2]) - phi(m[0], m[1], m[2])) * (0.5 / h)
    };
    Mat3::from_cols(col(0), col(1), col(2))
}

fn normalized_det(j: &Mat3) -> f64 {
    let s = j.col(0).norm() * j.col(1).norm() * j.col(2).norm();
    if s > 0.0 {
        j.det() / s
    } else {
        0.0
    }
}

/// Rigidity certificate from frame-free junction data.
///
/// When m̂ is not orthogonal to m, ψ₁, ψ₂ the reduced map does not apply and
/// the full problem on m⊥ is examined instead: it is rigid iff its 6×5
/// Jacobian has rank five, otherwise a solution family is traced numerically.
pub fn local_rigidity_geometry(g: &JunctionGeometry, tol: &Tolerances) -> Result<RigidityReport> {
    let mh = g.m_hat();
    let perp = |x: &Vec3| x.dot(&mh).abs() <= 1e-9 * x.norm();
    let parts = analytic_parts(g, &mh);
    let fd = fd_jacobian(g, &parts.k, &parts.v);
    let jn = parts.jacobian.norm();
    let fd_rel_error = if jn > 0.0 { (parts.jacobian - fd).norm() / jn } else { fd.norm() };
    let det_normalized = normalized_det(&parts.jacobian);

    let mut report = RigidityReport {
        rigid: false,
        method: RigidityMethod::Analytic,
        f_value: parts.f_value,
        f_normalized: parts.f_normalized,
        jacobian: parts.jacobian,
        det_jacobian: parts.jacobian.det(),
        det_normalized,
        min_abs_det: parts.f_normalized.abs().min(det_normalized.abs()),
        fd_rel_error,
        family: None,
    };

    if !(perp(&g.m) && perp(&g.psi1) && perp(&g.psi2)) {
        report.method = RigidityMethod::Fallback;
        let (rigid, family) = fallback(g, tol);
        report.rigid = rigid;
        report.family = family;
        return Ok(report);
    }

    if fd_rel_error > 1e-6 {
        return Err(Error::Residual {
            residual: fd_rel_error,
            tol: 1e-6,
            context: "analytic vs finite-difference rigidity Jacobian".into(),
        });
    }
    let by_f = parts.f_normalized.abs() > tol.rigidity_tol;
    let by_det = det_normalized.abs() > tol.rigidity_tol;
    if by_f != by_det {
        return Err(Error::HypothesisFailed(format!(
            "triple product ({:.3e}) and Jacobian determinant ({:.3e}) disagree on rigidity",
            parts.f_normalized, det_normalized
        )));
    }
    report.rigid = by_f;
    if !report.rigid {
        report.family = Some(
            "one-parameter family: rotating plate 1 about its image of the junction axis is compensated by the shears"
                .into(),
        );
    }
    Ok(report)
}

/// `(R(ω)F₁(t₁) − F₂(t₂))` applied to an orthonormal basis of m⊥, stacked.
fn residual6(g: &JunctionGeometry, basis: &[Vec3; 2], x: &[f64; 5]) -> [f64; 6] {
    let (f1, f2) = g.sheared(x[3], x[4]);
    let r = rotation_vector(&Vec3::new(x[0], x[1], x[2]));
    let d = r * f1 - f2;
    let (p, q) = (d * basis[0], d * basis[1]);
    [p.0[0], p.0[1], p.0[2], q.0[0], q.0[1], q.0[2]]
}

fn jacobian6(g: &JunctionGeometry, basis: &[Vec3; 2], x: &[f64; 5]) -> Vec<Vec<f64>> {
    let h = 1e-7;
    (0..5)
        .map(|i| {
            let mut p = *x;
            let mut m = *x;
            p[i] += h;
            m[i] -= h;
            let (rp, rm) = (residual6(g, basis, &p), residual6(g, basis, &m));
            (0..6).map(|k| (rp[k] - rm[k]) / (2.0 * h)).collect()
        })
        .collect()
}

fn fallback(g: &JunctionGeometry, tol: &Tolerances) -> (bool, Option<String>) {
    let (p, q) = orthonormal_complement(&g.m.normalized());
    let basis = [p, q];
    let x0 = [0.0, 0.0, 0.0, g.t1, g.t2];
    let cols = jacobian6(g, &basis, &x0);
    let norms: Vec<f64> = cols.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt()).collect();
    let scaled: Vec<Vec<f64>> =
        cols.iter().zip(&norms).map(|(c, &n)| c.iter().map(|x| if n > 0.0 { x / n } else { 0.0 }).collect()).collect();
    let svd = jacobi_svd(scaled);
    let smin = *svd.sigma.last().unwrap_or(&0.0);
    if smin > 1e-7 * svd.sigma[0] {
        return (true, None);
    }

    // Trace the null direction (unscaled coordinates).
    let nv: Vec<f64> = svd.v[4].iter().zip(&norms).map(|(x, &n)| if n > 0.0 { x / n } else { *x }).collect();
    let nn = nv.iter().map(|x| x * x).sum::<f64>().sqrt();
    let eps = 1e-3 * (1.0 + g.t1.abs().max(g.t2.abs()));
    let mut x: [f64; 5] = std::array::from_fn(|i| x0[i] + eps * nv[i] / nn);
    let scale = (g.f1.norm() + g.f2.norm()).max(1.0);
    for _ in 0..30 {
        let r = residual6(g, &basis, &x);
        let rn = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rn <= tol.residual_tol * scale {
            let moved = x.iter().zip(&x0).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            if moved >= 0.5 * eps {
                return (
                    false,
                    Some(format!("solution family found numerically at distance {moved:.3e} from the junction")),
                );
            }
            return (false, None);
        }
        // Minimum-norm Gauss-Newton step through the SVD.
        let j = jacobian6(g, &basis, &x);
        let s = jacobi_svd(j.clone());
        let mut step = [0.0; 5];
        for k in 0..5 {
            if s.sigma[k] <= 1e-10 * s.sigma[0] {
                continue;
            }
            // u_k = J v_k / σ_k.
            let jv: Vec<f64> = (0..6).map(|row| (0..5).map(|c| j[c][row] * s.v[k][c]).sum()).collect();
            let coef = jv.iter().zip(&r).map(|(a, b)| a * b).sum::<f64>() / (s.sigma[k] * s.sigma[k]);
            for c in 0..5 {
                step[c] -= coef * s.v[k][c];
            }
        }
        for c in 0..5 {
            x[c] += step[c];
        }
    }
    (false, None)
}
