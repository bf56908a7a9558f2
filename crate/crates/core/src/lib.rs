//! Elastostatic fundamental solutions for piecewise-constant isotropic Lamé
//! coefficients.
//!
//! The crate provides
//!
//! * closed-form Kelvin ([`kelvin`]) and bonded half-space ([`bimaterial`])
//!   Green's matrices with analytic gradients,
//! * the degeneracy algebra of the gap matrix Γ⁺ − Γ in exact rational
//!   arithmetic ([`gap_analysis`], [`poly`]),
//! * quadrature checks of the half-space transmission identity
//!   ([`identities`]),
//! * a desk-scale finite-difference transmission solver used as an
//!   independent oracle ([`fd_oracle`]),
//! * Hausdorff-type distances between voxelized inclusions ([`geometry`]),
//! * the named verification suites driven by the CLI ([`verify`]).
//!
//! All lengths are measured in units of the normalization length ρ0 = 1.
//!
//! Data-parallel loops go through [`par`], which runs on rayon when the
//! `parallel` feature is enabled and sequentially otherwise. Reductions use a
//! fixed chunking so results do not depend on the thread count.

pub mod bimaterial;
pub mod config;
pub mod dataset;
pub mod error;
pub mod fd_oracle;
pub mod gap_analysis;
pub mod geometry;
pub mod identities;
pub mod jet;
pub mod kelvin;
pub mod materials;
pub mod numfmt;
pub mod par;
pub mod poly;
pub mod quadrature;
pub mod verify;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};

/// A point or vector in R³.
pub type Vec3 = nalgebra::Vector3<f64>;
/// A 3×3 matrix.
pub type Mat3 = nalgebra::Matrix3<f64>;
/// Spatial gradient of a matrix-valued field: `grad[k][(i, j)] = ∂_k M_ij`.
pub type Grad3 = [Mat3; 3];

/// Returns the zero gradient.
pub fn zero_grad() -> Grad3 {
    [Mat3::zeros(); 3]
}

/// Displacement gradient of column `j`: `G[(i, k)] = ∂_k M_ij`.
pub fn column_gradient(grad: &Grad3, j: usize) -> Mat3 {
    Mat3::from_fn(|i, k| grad[k][(i, j)])
}

/// Gradient of `M l`: `G[(i, k)] = Σ_j ∂_k M_ij l_j`.
pub fn directional_gradient(grad: &Grad3, l: &Vec3) -> Mat3 {
    Mat3::from_fn(|i, k| (0..3).map(|j| grad[k][(i, j)] * l[j]).sum())
}
