//! Kelvin's fundamental solution of the homogeneous isotropic Lamé system
//! in free space.
//!
//! `Γ(x, y) = [(x−y)⊗(x−y)/|x−y|² + (3−4ν) I] / (16πμ(1−ν)|x−y|)`, the
//! displacement at `x` produced by a unit point force at `y` (column `j` for
//! force `e_j`).

use std::f64::consts::PI;

use serde::Serialize;

use crate::materials::LameMaterial;
use crate::{column_gradient, Error, Grad3, Mat3, Result, Vec3};

/// Separations below this are rejected as coincident.
pub const MIN_SEPARATION: f64 = 1e-12;

/// Displacement matrix and its spatial gradient at one `(x, y)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GreenEvaluation {
    pub matrix: Mat3,
    /// `gradient[k][(i, j)] = ∂/∂x_k matrix(i, j)`.
    pub gradient: Grad3,
}

fn separation(x: &Vec3, y: &Vec3) -> Result<(Vec3, f64)> {
    let d = x - y;
    let r = d.norm();
    if !(r >= MIN_SEPARATION) {
        return Err(Error::CoincidentPoints(r));
    }
    Ok((d, r))
}

fn prefactor(mat: &LameMaterial) -> (f64, f64) {
    let nu = mat.poisson_ratio();
    (1.0 / (16.0 * PI * mat.mu() * (1.0 - nu)), 3.0 - 4.0 * nu)
}

pub fn kelvin_matrix(x: &Vec3, y: &Vec3, mat: &LameMaterial) -> Result<Mat3> {
    let (d, r) = separation(x, y)?;
    let (a, k) = prefactor(mat);
    Ok((d * d.transpose() / (r * r) + Mat3::identity() * k) * (a / r))
}

pub fn kelvin_gradient(x: &Vec3, y: &Vec3, mat: &LameMaterial) -> Result<Grad3> {
    let (d, r) = separation(x, y)?;
    let (a, k) = prefactor(mat);
    let r3 = r * r * r;
    let r5 = r3 * r * r;
    Ok(std::array::from_fn(|m| {
        Mat3::from_fn(|i, j| {
            let dij = if i == j { 1.0 } else { 0.0 };
            let dim = if i == m { 1.0 } else { 0.0 };
            let djm = if j == m { 1.0 } else { 0.0 };
            a * (-k * dij * d[m] / r3 + (dim * d[j] + djm * d[i]) / r3 - 3.0 * d[i] * d[j] * d[m] / r5)
        })
    }))
}

pub fn kelvin(x: &Vec3, y: &Vec3, mat: &LameMaterial) -> Result<GreenEvaluation> {
    Ok(GreenEvaluation {
        matrix: kelvin_matrix(x, y, mat)?,
        gradient: kelvin_gradient(x, y, mat)?,
    })
}

/// Traction `(C ∇u) n` for every column `u = M e_j` of a gradient field.
pub fn traction_from_gradient(grad: &Grad3, n: &Vec3, mat: &LameMaterial) -> Mat3 {
    let mut out = Mat3::zeros();
    for j in 0..3 {
        let stress = mat.apply(&column_gradient(grad, j));
        out.set_column(j, &(stress * n));
    }
    out
}

pub(crate) fn check_unit(n: &Vec3) -> Result<()> {
    let len = n.norm();
    if !((len - 1.0).abs() <= 1e-12) {
        return Err(Error::NonUnitNormal(len));
    }
    Ok(())
}

/// Column `j` is the traction on a surface with normal `n` produced by a unit
/// force `e_j` at `y`.
pub fn kelvin_traction(x: &Vec3, y: &Vec3, n: &Vec3, mat: &LameMaterial) -> Result<Mat3> {
    check_unit(n)?;
    Ok(traction_from_gradient(&kelvin_gradient(x, y, mat)?, n, mat))
}
