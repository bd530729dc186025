//! Fixed-size 3×3 linear algebra.
//!
//! Everything here is a pure function of its inputs. The eigensolver is
//! closed-form (trigonometric) with a Newton polish, so results do not depend
//! on iteration counts of an external library.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A 3-vector.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vec3(pub [f64; 3]);

/// A dense 3×3 matrix stored row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Vec3 {
    pub const ZERO: Vec3 = Vec3([0.0; 3]);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3([x, y, z])
    }

    /// Unit coordinate vector `e_i` (0-based).
    pub fn unit(i: usize) -> Self {
        let mut v = [0.0; 3];
        v[i] = 1.0;
        Vec3(v)
    }

    pub fn from_ints(v: [i32; 3]) -> Self {
        Vec3([v[0] as f64, v[1] as f64, v[2] as f64])
    }

    pub fn dot(&self, o: &Vec3) -> f64 {
        self.0[0] * o.0[0] + self.0[1] * o.0[1] + self.0[2] * o.0[2]
    }

    pub fn cross(&self, o: &Vec3) -> Vec3 {
        let [a, b, c] = self.0;
        let [x, y, z] = o.0;
        Vec3([b * z - c * y, c * x - a * z, a * y - b * x])
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    /// `self / |self|`. The zero vector is returned unchanged.
    pub fn normalized(&self) -> Vec3 {
        let n = self.norm();
        if n == 0.0 {
            *self
        } else {
            *self * (1.0 / n)
        }
    }

    /// Tensor product `self ⊗ o`, i.e. the matrix with entries `self_i o_j`.
    pub fn outer(&self, o: &Vec3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i] * o.0[j];
            }
        }
        Mat3(m)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    /// Flip the sign so the first component with |c| > `eps` is positive.
    pub fn sign_normalized(&self, eps: f64) -> Vec3 {
        for &c in &self.0 {
            if c.abs() > eps {
                return if c < 0.0 { -*self } else { *self };
            }
        }
        *self
    }

    /// Norm of `self × o` after normalizing both; 0 means parallel.
    pub fn parallel_defect(&self, o: &Vec3) -> f64 {
        self.normalized().cross(&o.normalized()).norm()
    }
}

impl Mat3 {
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn identity() -> Self {
        Self::IDENTITY
    }

    pub fn diag(a: f64, b: f64, c: f64) -> Self {
        Mat3([[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]])
    }

    pub fn from_rows(r0: Vec3, r1: Vec3, r2: Vec3) -> Self {
        Mat3([r0.0, r1.0, r2.0])
    }

    pub fn from_cols(c0: Vec3, c1: Vec3, c2: Vec3) -> Self {
        Self::from_rows(c0, c1, c2).transpose()
    }

    pub fn row(&self, i: usize) -> Vec3 {
        Vec3(self.0[i])
    }

    pub fn col(&self, j: usize) -> Vec3 {
        Vec3([self.0[0][j], self.0[1][j], self.0[2][j]])
    }

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        self.row(0).dot(&self.row(1).cross(&self.row(2)))
    }

    /// Frobenius inner product `A : B`.
    pub fn ddot(&self, o: &Mat3) -> f64 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += self.0[i][j] * o.0[i][j];
            }
        }
        s
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.ddot(self).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |a, x| a.max(x.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    pub fn symmetric_part(&self) -> Mat3 {
        (*self + self.transpose()) * 0.5
    }

    /// Inverse via the cofactor matrix; `None` when `det` is exactly zero or
    /// negligible relative to the entry scale.
    pub fn inverse(&self) -> Option<Mat3> {
        let det = self.det();
        let s = self.max_abs();
        if det == 0.0 || !det.is_finite() || det.abs() <= 1e-300 || det.abs() <= 1e-15 * s * s * s {
            return None;
        }
        Some(cofactor(self).transpose() * (1.0 / det))
    }

    /// Row-wise cross product: row `i` of the result is `row_i × v`.
    pub fn cross_rows(&self, v: &Vec3) -> Mat3 {
        Mat3::from_rows(self.row(0).cross(v), self.row(1).cross(v), self.row(2).cross(v))
    }

    /// Skew matrix `[w]×` with `[w]× x = w × x`.
    pub fn skew(w: &Vec3) -> Mat3 {
        let [x, y, z] = w.0;
        Mat3([[0.0, -z, y], [z, 0.0, -x], [-y, x, 0.0]])
    }
}

impl Index<usize> for Vec3 {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for Vec3 {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

impl Index<(usize, usize)> for Mat3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl IndexMut<(usize, usize)> for Mat3 {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.0[i][j]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3([self.0[0] - o.0[0], self.0[1] - o.0[1], self.0[2] - o.0[2]])
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut m = self.0;
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e += o.0[i][j];
            }
        }
        Mat3(m)
    }
}

impl AddAssign for Mat3 {
    fn add_assign(&mut self, o: Mat3) {
        *self = *self + o;
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + (-o)
    }
}

impl SubAssign for Mat3 {
    fn sub_assign(&mut self, o: Mat3) {
        *self = *self - o;
    }
}

impl Neg for Mat3 {
    type Output = Mat3;
    fn neg(self) -> Mat3 {
        self * -1.0
    }
}

impl Mul<f64> for Mat3 {
    type Output = Mat3;
    fn mul(self, s: f64) -> Mat3 {
        let mut m = self.0;
        m.iter_mut().flatten().for_each(|e| *e *= s);
        Mat3(m)
    }
}

impl Mul<Mat3> for f64 {
    type Output = Mat3;
    fn mul(self, m: Mat3) -> Mat3 {
        m * self
    }
}

impl Mul<Vec3> for Mat3 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3([self.row(0).dot(&v), self.row(1).dot(&v), self.row(2).dot(&v)])
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j];
            }
        }
        Mat3(m)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}; {}]", self.row(0), self.row(1), self.row(2))
    }
}

/// Numerical tolerances shared by every module.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative singular-value ratio σ₂/σ₁ below which a matrix counts as rank ≤ 1.
    pub rank_tol: f64,
    /// Bound on |λ₂ − 1| for exact rank-one connections.
    pub mid_eig_tol: f64,
    /// Bound on |λ₂ − 1| for the rescaled "approximate compatibility" path.
    pub mid_eig_approx_tol: f64,
    /// Relative matrix-norm residual bound.
    pub residual_tol: f64,
    /// Threshold on scale-normalized rigidity determinants.
    pub rigidity_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            rank_tol: 1e-9,
            mid_eig_tol: 1e-7,
            mid_eig_approx_tol: 1e-3,
            residual_tol: 1e-10,
            rigidity_tol: 1e-12,
        }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 5] =
        ["rank_tol", "mid_eig_tol", "mid_eig_approx_tol", "residual_tol", "rigidity_tol"];

    pub fn validate(&self) -> Result<()> {
        for key in Self::KEYS {
            let v = self.get(key).unwrap_or(f64::NAN);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidTolerance { key: key.to_string(), value: v });
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "rank_tol" => self.rank_tol,
            "mid_eig_tol" => self.mid_eig_tol,
            "mid_eig_approx_tol" => self.mid_eig_approx_tol,
            "residual_tol" => self.residual_tol,
            "rigidity_tol" => self.rigidity_tol,
            _ => return None,
        })
    }

    /// Override one field by name. Rejects unknown keys and non-positive values.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidTolerance { key: key.to_string(), value });
        }
        let slot = match key {
            "rank_tol" => &mut self.rank_tol,
            "mid_eig_tol" => &mut self.mid_eig_tol,
            "mid_eig_approx_tol" => &mut self.mid_eig_approx_tol,
            "residual_tol" => &mut self.residual_tol,
            "rigidity_tol" => &mut self.rigidity_tol,
            _ => return Err(Error::InvalidTolerance { key: key.to_string(), value }),
        };
        *slot = value;
        Ok(())
    }
}

/// Cofactor matrix, so that `M · cof(M)ᵀ = det(M) I`.
pub fn cofactor(m: &Mat3) -> Mat3 {
    let c0 = m.col(0);
    let c1 = m.col(1);
    let c2 = m.col(2);
    // Column j of cof(M) is the cross product of the other two columns.
    Mat3::from_cols(c1.cross(&c2), c2.cross(&c0), c0.cross(&c1))
}

/// Eigen-decomposition of a symmetric 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymEigen {
    /// Ascending eigenvalues.
    pub values: [f64; 3],
    /// Orthonormal eigenvectors, `vectors[i]` belongs to `values[i]`.
    pub vectors: [Vec3; 3],
}

impl SymEigen {
    /// `Σ f(λᵢ) eᵢ⊗eᵢ`.
    pub fn recompose(&self, f: impl Fn(f64) -> f64) -> Mat3 {
        let mut out = Mat3::ZERO;
        for i in 0..3 {
            out += self.vectors[i].outer(&self.vectors[i]) * f(self.values[i]);
        }
        out
    }
}

/// Closed-form symmetric eigensolver.
pub fn sym_eigen(s: &Mat3) -> Result<SymEigen> {
    let norm = s.norm();
    if !s.is_finite() {
        return Err(Error::NonFinite);
    }
    let asym = (*s - s.transpose()).norm();
    if asym > Tolerances::default().residual_tol * norm {
        return Err(Error::NonSymmetric { asymmetry: asym });
    }
    if norm == 0.0 {
        return Ok(SymEigen { values: [0.0; 3], vectors: [Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)] });
    }
    let scale = s.max_abs();
    let a = s.symmetric_part() * (1.0 / scale);

    let q = a.trace() / 3.0;
    let b = a - Mat3::IDENTITY * q;
    let bb = b.ddot(&b);
    let p = (bb / 6.0).sqrt();
    if p <= 1e-15 {
        let v = q * scale;
        return Ok(SymEigen { values: [v; 3], vectors: [Vec3::unit(0), Vec3::unit(1), Vec3::unit(2)] });
    }
    let r = (b.det() / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let mu_hi = 2.0 * p * phi.cos();
    let mu_lo = 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
    let mu_mid = -mu_hi - mu_lo;

    // The eigenvalue farthest from the other two has the best-conditioned
    // eigenvector; the remaining pair comes from an exact 2×2 rotation.
    let isolated = if mu_mid - mu_lo > mu_hi - mu_mid { mu_lo } else { mu_hi };
    let mu = newton_char(isolated, bb, b.det());

    let shifted = b - Mat3::IDENTITY * mu;
    let v0 = match null_vector(&shifted) {
        Some(v) => v,
        None => Vec3::unit(0),
    };
    let (u, w) = orthonormal_complement(&v0);
    let a11 = u.dot(&(b * u));
    let a22 = w.dot(&(b * w));
    let a12 = u.dot(&(b * w));
    let (l1, e1, l2, e2) = sym2(a11, a12, a22, u, w);

    let mut pairs = [(mu, v0), (l1, e1), (l2, e2)];
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let values = [
        (pairs[0].0 + q) * scale,
        (pairs[1].0 + q) * scale,
        (pairs[2].0 + q) * scale,
    ];
    Ok(SymEigen { values, vectors: [pairs[0].1, pairs[1].1, pairs[2].1] })
}

/// One Newton step on the characteristic polynomial of a traceless symmetric
/// matrix, χ(μ) = −μ³ + ½|B|²μ + det B.
fn newton_char(mu: f64, bb: f64, det: f64) -> f64 {
    let chi = -mu * mu * mu + 0.5 * bb * mu + det;
    let dchi = -3.0 * mu * mu + 0.5 * bb;
    if dchi.abs() > 1e-12 * bb.max(1e-300) {
        let next = mu - chi / dchi;
        if next.is_finite() {
            return next;
        }
    }
    mu
}

/// Unit vector spanning the kernel of a (numerically) rank-2 matrix, taken as
/// the largest cross product of its rows.
fn null_vector(m: &Mat3) -> Option<Vec3> {
    let r = [m.row(0), m.row(1), m.row(2)];
    let cands = [r[0].cross(&r[1]), r[0].cross(&r[2]), r[1].cross(&r[2])];
    let best = cands.iter().copied().max_by(|x, y| x.norm_sq().total_cmp(&y.norm_sq()))?;
    let n = best.norm();
    if n <= 1e-300 {
        None
    } else {
        Some(best * (1.0 / n))
    }
}

/// Two unit vectors completing `v` (unit) to a right-handed orthonormal frame.
pub fn orthonormal_complement(v: &Vec3) -> (Vec3, Vec3) {
    let k = (0..3).min_by(|&i, &j| v.0[i].abs().total_cmp(&v.0[j].abs())).unwrap_or(0);
    let u = v.cross(&Vec3::unit(k)).normalized();
    let w = v.cross(&u);
    (u, w)
}

/// Exact eigenpairs of the 2×2 block `[[a11, a12], [a12, a22]]` in basis (u, w).
fn sym2(a11: f64, a12: f64, a22: f64, u: Vec3, w: Vec3) -> (f64, Vec3, f64, Vec3) {
    if a12 == 0.0 {
        return (a11, u, a22, w);
    }
    let theta = 0.5 * (2.0 * a12).atan2(a11 - a22);
    let (s, c) = theta.sin_cos();
    let e1 = u * c + w * s;
    let e2 = u * (-s) + w * c;
    let l1 = a11 * c * c + 2.0 * a12 * c * s + a22 * s * s;
    let l2 = a11 * s * s - 2.0 * a12 * c * s + a22 * c * c;
    (l1, e1, l2, e2)
}

/// Right polar decomposition `F = R V`.
pub fn polar(f: &Mat3) -> Result<(Mat3, Mat3)> {
    if !f.is_finite() {
        return Err(Error::NonFinite);
    }
    let det = f.det();
    let s = f.max_abs();
    if det <= 0.0 || det <= 1e-14 * s * s * s {
        return Err(Error::NotOrientationPreserving { det });
    }
    let eig = sym_eigen(&(f.transpose() * *f))?;
    if eig.values[0] <= 0.0 {
        return Err(Error::NotOrientationPreserving { det });
    }
    let v_inv = eig.recompose(|l| 1.0 / l.sqrt());
    let mut r = *f * v_inv;
    // One Newton step for the orthogonal factor removes eigensolver round-off.
    if let Some(ri) = r.inverse() {
        r = (r + ri.transpose()) * 0.5;
    }
    let v = (r.transpose() * *f).symmetric_part();
    Ok((r, v))
}

/// Singular values in descending order.
pub fn singular_values(m: &Mat3) -> [f64; 3] {
    let cols = vec![m.col(0).0.to_vec(), m.col(1).0.to_vec(), m.col(2).0.to_vec()];
    let svd = jacobi_svd(cols);
    [svd.sigma[0], svd.sigma[1], svd.sigma[2]]
}

/// `true` iff σ₂ ≤ rank_tol·σ₁ (the zero matrix has rank 0).
pub fn rank_le_one(m: &Mat3, tol: &Tolerances) -> bool {
    let s = singular_values(m);
    if s[0] == 0.0 {
        return true;
    }
    s[1] <= tol.rank_tol * s[0]
}

/// Rodrigues rotation about a unit axis.
pub fn rotation_axis_angle(axis: &Vec3, theta: f64) -> Result<Mat3> {
    let n = axis.norm();
    if !((n - 1.0).abs() <= 1e-12) {
        return Err(Error::NonUnitAxis { norm: n });
    }
    Ok(rodrigues(axis, theta))
}

pub(crate) fn rodrigues(k: &Vec3, theta: f64) -> Mat3 {
    let (s, c) = theta.sin_cos();
    Mat3::IDENTITY * c + Mat3::skew(k) * s + k.outer(k) * (1.0 - c)
}

/// Rotation for a rotation vector `ω` (axis ω/|ω|, angle |ω|).
pub fn rotation_vector(omega: &Vec3) -> Mat3 {
    let th = omega.norm();
    if th == 0.0 {
        Mat3::IDENTITY
    } else {
        rodrigues(&(*omega * (1.0 / th)), th)
    }
}

/// Rotation angle of a rotation matrix, in [0, π].
pub fn rotation_angle(r: &Mat3) -> f64 {
    let w = Vec3([r[(2, 1)] - r[(1, 2)], r[(0, 2)] - r[(2, 0)], r[(1, 0)] - r[(0, 1)]]);
    let sin = 0.5 * w.norm();
    let cos = 0.5 * (r.trace() - 1.0);
    sin.atan2(cos)
}

/// Result of a one-sided Jacobi SVD of a column-stored m×n matrix.
#[derive(Clone, Debug)]
pub struct Svd {
    /// Descending singular values.
    pub sigma: Vec<f64>,
    /// Right singular vectors, `v[k]` belongs to `sigma[k]`.
    pub v: Vec<Vec<f64>>,
}

/// One-sided Jacobi SVD. `cols` holds the matrix column by column.
pub fn jacobi_svd(mut cols: Vec<Vec<f64>>) -> Svd {
    let n = cols.len();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    for _ in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha = dot(&cols[p], &cols[p]);
                let beta = dot(&cols[q], &cols[q]);
                let gamma = dot(&cols[p], &cols[q]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for k in 0..cols[p].len() {
                    let x = cols[p][k];
                    let y = cols[q][k];
                    cols[p][k] = c * x - s * y;
                    cols[q][k] = s * x + c * y;
                }
                for row in v.iter_mut() {
                    let x = row[p];
                    let y = row[q];
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut order: Vec<(f64, usize)> = cols.iter().enumerate().map(|(i, c)| (dot(c, c).sqrt(), i)).collect();
    order.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    Svd {
        sigma: order.iter().map(|o| o.0).collect(),
        v: order.iter().map(|o| v.iter().map(|row| row[o.1]).collect()).collect(),
    }
}

/// Best rank-one factorization `M ≈ b⊗m` with |m| = 1 and the first
/// component of `m` above 1e-12 positive. The zero matrix gives `(0, e₁)`.
pub fn rank_one_factor(m: &Mat3) -> (Vec3, Vec3) {
    let cols = vec![m.col(0).0.to_vec(), m.col(1).0.to_vec(), m.col(2).0.to_vec()];
    let svd = jacobi_svd(cols);
    if svd.sigma[0] == 0.0 {
        return (Vec3::ZERO, Vec3::unit(0));
    }
    let dir = Vec3([svd.v[0][0], svd.v[0][1], svd.v[0][2]]).normalized().sign_normalized(1e-12);
    (*m * dir, dir)
}
