#![allow(dead_code)]

use junctions_core::linalg::{rotation_vector, Mat3, Vec3};
use proptest::prelude::*;

pub fn vec3(range: f64) -> impl Strategy<Value = Vec3> {
    prop::array::uniform3(-range..range).prop_map(Vec3)
}

pub fn mat3(range: f64) -> impl Strategy<Value = Mat3> {
    prop::array::uniform3(prop::array::uniform3(-range..range)).prop_map(Mat3)
}

/// Rotation from a rotation vector of length up to π.
pub fn rotation() -> impl Strategy<Value = Mat3> {
    (vec3(1.0), 0.0..std::f64::consts::PI).prop_filter_map("axis too short", |(v, th)| {
        (v.norm() > 1e-3).then(|| rotation_vector(&(v.normalized() * th)))
    })
}

/// Symmetric positive-definite matrix `QᵀDQ` with eigenvalues in [0.5, 2].
pub fn spd() -> impl Strategy<Value = Mat3> {
    (rotation(), prop::array::uniform3(0.5..2.0f64)).prop_map(|(q, e)| q.transpose() * Mat3::diag(e[0], e[1], e[2]) * q)
}

pub fn close(a: &Mat3, b: &Mat3, tol: f64) -> bool {
    (*a - *b).norm() <= tol
}
