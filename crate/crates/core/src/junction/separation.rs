//! Distance of a sheared gradient from the competing (variant, slip) branches,
//! measured on the right Cauchy–Green tensor.

use serde::{Deserialize, Serialize};

use crate::crystal::{bcc_slip_systems, variants, SlipSystem};
use crate::error::{Error, Result};
use crate::linalg::{Mat3, Tolerances};

/// The closest competitor.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Competitor {
    /// 1-based variant index.
    pub variant: u8,
    /// Index into the slip catalog, `None` for the slip-free well.
    pub slip: Option<usize>,
    pub t: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    /// `√(min over competitors of min_t g(t))`.
    pub margin: f64,
    pub argmin: Competitor,
    /// Number of competitor branches examined.
    pub competitors: usize,
}

/// Real roots of `c3 t³ + c2 t² + c1 t + c0`, each polished by one Newton step.
pub(crate) fn cubic_roots(c3: f64, c2: f64, c1: f64, c0: f64) -> Vec<f64> {
    let size = c3.abs().max(c2.abs()).max(c1.abs()).max(c0.abs());
    if size == 0.0 {
        return vec![0.0];
    }
    let mut roots = if c3.abs() <= 1e-14 * size {
        if c2.abs() <= 1e-14 * size {
            if c1.abs() <= 1e-14 * size {
                Vec::new()
            } else {
                vec![-c0 / c1]
            }
        } else {
            let disc = c1 * c1 - 4.0 * c2 * c0;
            if disc < 0.0 {
                Vec::new()
            } else {
                let q = -0.5 * (c1 + c1.signum() * disc.sqrt());
                if q == 0.0 {
                    vec![0.0]
                } else {
                    vec![q / c2, c0 / q]
                }
            }
        }
    } else {
        let (a, b, c) = (c2 / c3, c1 / c3, c0 / c3);
        let p = b - a * a / 3.0;
        let q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
        let shift = -a / 3.0;
        let disc = 0.25 * q * q + p * p * p / 27.0;
        if disc > 0.0 {
            let u = (-0.5 * q - q.signum() * disc.sqrt()).cbrt();
            let x = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
            vec![x + shift]
        } else if p == 0.0 {
            vec![shift]
        } else {
            let r = 2.0 * (-p / 3.0).sqrt();
            let arg = (3.0 * q / (p * r)).clamp(-1.0, 1.0);
            let phi = arg.acos() / 3.0;
            (0..3).map(|k| r * (phi - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos() + shift).collect()
        }
    };
    for t in roots.iter_mut() {
        let f = ((c3 * *t + c2) * *t + c1) * *t + c0;
        let df = (3.0 * c3 * *t + 2.0 * c2) * *t + c1;
        if df != 0.0 {
            let next = *t - f / df;
            if next.is_finite() {
                *t = next;
            }
        }
    }
    roots
}

/// `min_t ‖C − (I+tP)ᵀ U² (I+tP)‖²` and its minimizer.
pub fn shear_well_distance(c: &Mat3, u_sq: &Mat3, p: &Mat3) -> (f64, f64) {
    let a = *c - *u_sq;
    let b = p.transpose() * *u_sq + *u_sq * *p;
    let d = p.transpose() * *u_sq * *p;
    let g = |t: f64| (a - b * t - d * (t * t)).ddot(&(a - b * t - d * (t * t)));
    let roots = cubic_roots(4.0 * d.ddot(&d), 6.0 * b.ddot(&d), 2.0 * (b.ddot(&b) - 2.0 * a.ddot(&d)), -2.0 * a.ddot(&b));
    let mut best = (g(0.0), 0.0);
    for t in roots {
        let v = g(t);
        if v < best.0 {
            best = (v, t);
        }
    }
    best
}

/// Margin of `F` against wells `Uⱼ²` and slip tensors `Pₗ`.
///
/// `own_variant` is 0-based. With `own_slip = Some(l)` only the branch
/// `(own_variant, l)` is excluded; with `None` the gradient sits on every
/// branch of its own variant at `t = 0`, so all of them are excluded. The
/// slip-free wells of the other variants are always included.
pub fn separation_margin_general(
    f: &Mat3,
    wells_sq: &[Mat3],
    tensors: &[Mat3],
    own_variant: usize,
    own_slip: Option<usize>,
) -> SeparationReport {
    let c = f.transpose() * *f;
    let mut best = (f64::INFINITY, Competitor { variant: 0, slip: None, t: 0.0 });
    let mut count = 0;
    for (j, u_sq) in wells_sq.iter().enumerate() {
        let variant = (j + 1) as u8;
        if j != own_variant {
            count += 1;
            let v = (c - *u_sq).ddot(&(c - *u_sq));
            if v < best.0 {
                best = (v, Competitor { variant, slip: None, t: 0.0 });
            }
        }
        for (l, p) in tensors.iter().enumerate() {
            if j == own_variant && own_slip.map_or(true, |o| o == l) {
                continue;
            }
            count += 1;
            let (v, t) = shear_well_distance(&c, u_sq, p);
            if v < best.0 {
                best = (v, Competitor { variant, slip: Some(l), t });
            }
        }
    }
    SeparationReport { margin: best.0.max(0.0).sqrt(), argmin: best.1, competitors: count }
}

/// Separation margin of `F` against the six variants and 48 BCC slip systems.
pub fn separation_margin(
    f: &Mat3,
    own_variant: u8,
    own_slip: Option<&SlipSystem>,
    lambda: f64,
    d: f64,
    tol: &Tolerances,
) -> Result<SeparationReport> {
    tol.validate()?;
    if !(1..=6).contains(&own_variant) {
        return Err(Error::OutOfRange(format!("variant {own_variant} (expected 1..=6)")));
    }
    if !f.is_finite() {
        return Err(Error::NonFinite);
    }
    let wells: Vec<Mat3> = variants(lambda, d)?.iter().map(|v| v.u * v.u).collect();
    let catalog = bcc_slip_systems();
    let tensors: Vec<Mat3> = catalog.iter().map(SlipSystem::tensor).collect();
    let own = match own_slip {
        Some(s) => Some(
            catalog
                .iter()
                .position(|x| x == s)
                .ok_or_else(|| Error::OutOfRange(format!("slip system {s} is not in the catalog")))?,
        ),
        None => None,
    };
    Ok(separation_margin_general(f, &wells, &tensors, own_variant as usize - 1, own))
}
