//! Quadrature checks of integral identities for the bonded half-spaces.
//!
//! The sensitivity integral
//!
//! `I(l, m) = ∫_{x3>0, |x−o|<ρ} (C^I − C)∇(Γ⁺(x, y0) l) : ∇(Γ(x, w0) m) dx`
//!
//! equals `(Γ − Γ⁺)(y0, w0) m · l` as `ρ → ∞`, with a truncation error of
//! order `1/ρ`. Both singular points lie below the interface, so the
//! integrand is smooth on the closed domain; the rule is a graded spherical
//! product rule centred at `o`, the interface point above the midpoint of
//! `y0` and `w0`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::bimaterial::{BimaterialGreen, Side};
use crate::kelvin::{kelvin_gradient, traction_from_gradient};
use crate::materials::{LameMaterial, MaterialPair};
use crate::quadrature::{sphere_rule, GaussLegendre};
use crate::{column_gradient, par, Error, Mat3, Result, Vec3};

/// Truncated half-ball product rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HalfSpaceQuadrature {
    /// Truncation radius ρ.
    pub rho: f64,
    /// Radial nodes `R_k = ρ (k/N)^grading`.
    pub grading: f64,
    /// Gauss–Legendre points per cell and direction.
    pub order: usize,
    /// Target absolute error of each matrix entry.
    pub tolerance: f64,
    /// Radial cells at the coarsest level.
    pub radial_cells: usize,
    /// Polar cells on `[0, π/2]` at the coarsest level.
    pub polar_cells: usize,
    /// Number of refinements (each halving every cell) before giving up.
    pub max_refinements: usize,
}

impl Default for HalfSpaceQuadrature {
    fn default() -> Self {
        Self { rho: 50.0, grading: 3.0, order: 6, tolerance: 1e-4, radial_cells: 12, polar_cells: 4, max_refinements: 2 }
    }
}

impl HalfSpaceQuadrature {
    pub fn with_rho(rho: f64) -> Self {
        Self { rho, ..Self::default() }
    }

    pub fn validate(&self, y0: &Vec3, w0: &Vec3) -> Result<()> {
        if !(self.grading >= 2.0) {
            return Err(Error::InvalidQuadrature(format!("grading exponent {} < 2", self.grading)));
        }
        if !(2..=16).contains(&self.order) {
            return Err(Error::InvalidQuadrature(format!("order {} not in [2, 16]", self.order)));
        }
        if self.radial_cells == 0 || self.polar_cells == 0 || !(self.tolerance > 0.0) {
            return Err(Error::InvalidQuadrature("cell counts and tolerance must be positive".into()));
        }
        let reach = 4.0 * y0.norm().max(w0.norm());
        if !(self.rho >= reach) {
            return Err(Error::InvalidQuadrature(format!("rho = {} below 4·max(|y0|, |w0|) = {reach}", self.rho)));
        }
        Ok(())
    }
}

/// Integral of every `(l, m) = (e_a, e_b)` combination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SensitivityMatrix {
    /// `value[(a, b)] = I(e_a, e_b)`.
    pub value: Mat3,
    /// `|I_fine − I_coarse|` per entry.
    pub error: Mat3,
    pub refinements: usize,
    pub evaluations: usize,
}

impl SensitivityMatrix {
    pub fn contract(&self, l: &Vec3, m: &Vec3) -> QuadratureValue {
        QuadratureValue {
            value: l.dot(&(self.value * m)),
            error_estimate: l.abs().dot(&(self.error * m.abs())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureValue {
    pub value: f64,
    pub error_estimate: f64,
}

fn check_sources(y0: &Vec3, w0: &Vec3) -> Result<()> {
    for p in [y0, w0] {
        if !(p.z < 0.0) {
            return Err(Error::SourceOnWrongSide(p.z));
        }
    }
    let sep = (y0 - w0).norm();
    if !(sep >= crate::kelvin::MIN_SEPARATION) {
        return Err(Error::CoincidentPoints(sep));
    }
    Ok(())
}

/// All nine integrand values `(C^I − C)∇(Γ⁺ e_a) : ∇(Γ e_b)` at `x`.
pub fn sensitivity_integrand(green: &BimaterialGreen, x: &Vec3, y0: &Vec3, w0: &Vec3) -> Result<Mat3> {
    let jump = green.pair().jump();
    let gp = green.gradient(x, y0, Some(Side::Inclusion))?;
    let gk = kelvin_gradient(x, w0, &green.pair().host)?;
    let a: [Mat3; 3] = std::array::from_fn(|j| column_gradient(&gp, j));
    let b: [Mat3; 3] = std::array::from_fn(|j| column_gradient(&gk, j));
    Ok(Mat3::from_fn(|i, j| jump.contract(&a[i], &b[j])))
}

fn integrate_level(
    green: &BimaterialGreen,
    y0: &Vec3,
    w0: &Vec3,
    quad: &HalfSpaceQuadrature,
    level: usize,
) -> Result<(Mat3, usize)> {
    let scale = 1usize << level;
    let nr = quad.radial_cells * scale;
    let np = quad.polar_cells * scale;
    let naz = 4 * quad.order * scale;
    let gl = GaussLegendre::new(quad.order);
    let mid = 0.5 * (y0 + w0);
    let origin = Vec3::new(mid.x, mid.y, 0.0);
    let edge = |k: usize| quad.rho * (k as f64 / nr as f64).powf(quad.grading);
    let dphi = 2.0 * PI / naz as f64;
    let dtheta = 0.5 * PI / np as f64;
    let trig: Vec<(f64, f64)> = (0..naz).map(|k| ((k as f64 + 0.5) * dphi).sin_cos()).collect();
    let cells = nr * np;
    let partial = par::map_range(cells, |c| -> Result<Mat3> {
        let (ir, ip) = (c / np, c % np);
        let mut acc = Mat3::zeros();
        for (r, wr) in gl.mapped(edge(ir), edge(ir + 1)) {
            for (th, wt) in gl.mapped(ip as f64 * dtheta, (ip + 1) as f64 * dtheta) {
                let (st, ct) = th.sin_cos();
                let w = wr * wt * r * r * st * dphi;
                let mut ring = Mat3::zeros();
                for &(sp, cp) in &trig {
                    let x = origin + Vec3::new(r * st * cp, r * st * sp, r * ct);
                    ring += sensitivity_integrand(green, &x, y0, w0)?;
                }
                acc += ring * w;
            }
        }
        Ok(acc)
    });
    let mut total = Mat3::zeros();
    for p in partial {
        total += p?;
    }
    Ok((total, cells * quad.order * quad.order * naz))
}

/// The integral for all `(e_a, e_b)` with an error estimate from one
/// refinement of every cell.
pub fn halfspace_sensitivity_matrix(
    y0: &Vec3,
    w0: &Vec3,
    pair: &MaterialPair,
    quad: &HalfSpaceQuadrature,
) -> Result<SensitivityMatrix> {
    check_sources(y0, w0)?;
    quad.validate(y0, w0)?;
    let green = BimaterialGreen::new(*pair);
    let (mut coarse, mut evaluations) = integrate_level(&green, y0, w0, quad, 0)?;
    let mut estimate = f64::INFINITY;
    for level in 1..=quad.max_refinements.max(1) {
        let (fine, n) = integrate_level(&green, y0, w0, quad, level)?;
        evaluations += n;
        let error = (fine - coarse).abs();
        estimate = error.max();
        if estimate <= quad.tolerance {
            return Ok(SensitivityMatrix { value: fine, error, refinements: level, evaluations });
        }
        coarse = fine;
    }
    Err(Error::QuadratureNotConverged { estimate, tolerance: quad.tolerance })
}

pub fn halfspace_sensitivity_integral(
    y0: &Vec3,
    w0: &Vec3,
    l: &Vec3,
    m: &Vec3,
    pair: &MaterialPair,
    quad: &HalfSpaceQuadrature,
) -> Result<QuadratureValue> {
    Ok(halfspace_sensitivity_matrix(y0, w0, pair, quad)?.contract(l, m))
}

/// `(Γ − Γ⁺)(y0, w0) m · l`.
pub fn transmission_closed_form(y0: &Vec3, w0: &Vec3, l: &Vec3, m: &Vec3, pair: &MaterialPair) -> Result<f64> {
    let gap = BimaterialGreen::new(*pair).gap(y0, w0)?;
    Ok(-l.dot(&(gap * m)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransmissionReport {
    pub integral: f64,
    pub closed_form: f64,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub rho: f64,
    /// `log2(|residual(ρ/2)| / |residual(ρ)|)`, ≈ 1 for a `C/ρ` tail.
    pub tail_rate: f64,
    /// Fitted `C` in `|residual| ≈ C/ρ`.
    pub tail_constant: f64,
    pub error_estimate: f64,
}

pub fn verify_transmission_identity(
    y0: &Vec3,
    w0: &Vec3,
    l: &Vec3,
    m: &Vec3,
    pair: &MaterialPair,
    quad: &HalfSpaceQuadrature,
) -> Result<TransmissionReport> {
    let closed_form = transmission_closed_form(y0, w0, l, m, pair)?;
    let full = halfspace_sensitivity_integral(y0, w0, l, m, pair, quad)?;
    let half = halfspace_sensitivity_integral(y0, w0, l, m, pair, &HalfSpaceQuadrature { rho: quad.rho / 2.0, ..*quad })?;
    let abs_residual = (full.value - closed_form).abs();
    let half_residual = (half.value - closed_form).abs();
    let rel_residual = if closed_form == 0.0 { abs_residual } else { abs_residual / closed_form.abs() };
    let tail_rate = if abs_residual == 0.0 { 0.0 } else { (half_residual / abs_residual).log2() };
    Ok(TransmissionReport {
        integral: full.value,
        closed_form,
        abs_residual,
        rel_residual,
        rho: quad.rho,
        tail_rate,
        tail_constant: abs_residual * quad.rho,
        error_estimate: full.error_estimate,
    })
}

/// Green's matrix whose delta identity is checked.
#[derive(Debug, Clone, Copy)]
pub enum EquilibriumGreen<'a> {
    Kelvin(LameMaterial),
    Bimaterial(&'a BimaterialGreen),
}

/// `∫_{∂B_r(y)} (C∇Γ e_j) n dσ + e_j` for each column `j`.
///
/// The rule is a product Gauss rule of the given order in `cos θ`, split at
/// the interface latitude in the bimaterial case.
pub fn equilibrium_check(green: EquilibriumGreen<'_>, y: &Vec3, r: f64, order: usize) -> Result<Mat3> {
    if !(r > 0.0) {
        return Err(Error::OutOfBounds(format!("radius {r} must be positive")));
    }
    let splits = match green {
        EquilibriumGreen::Kelvin(_) => vec![],
        EquilibriumGreen::Bimaterial(_) => vec![-y.z / r],
    };
    let rule = sphere_rule(order, 2 * order, &splits);
    let parts = par::map_range(rule.len(), |k| -> Result<Mat3> {
        let (n, w) = rule[k];
        let x = y + n * r;
        let t = match green {
            EquilibriumGreen::Kelvin(mat) => traction_from_gradient(&kelvin_gradient(&x, y, &mat)?, &n, &mat),
            EquilibriumGreen::Bimaterial(g) => {
                let side = Side::of_x3(x.z).unwrap_or(Side::Host);
                traction_from_gradient(&g.gradient(&x, y, Some(side))?, &n, &g.material_at(x.z, Some(side)))
            }
        };
        Ok(t * (w * r * r))
    });
    let mut total = Mat3::identity();
    for p in parts {
        total += p?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::loglog_slope;
    use crate::materials::material_from_poisson;
    use approx::assert_relative_eq;

    fn pair(mu: f64, nu: f64, mu_i: f64, nu_i: f64) -> MaterialPair {
        MaterialPair::unchecked(material_from_poisson(mu, nu).unwrap(), material_from_poisson(mu_i, nu_i).unwrap())
    }

    fn reference() -> (Vec3, Vec3, MaterialPair) {
        (Vec3::new(0.0, 0.0, -1.0), Vec3::new(0.0, 0.0, -0.75), pair(1.0, 0.25, 2.0, 1.0 / 3.0))
    }

    #[test]
    fn equal_materials_integrate_to_zero() {
        let (y0, w0, _) = reference();
        let mat = material_from_poisson(1.0, 0.25).unwrap();
        let r = halfspace_sensitivity_matrix(&y0, &w0, &MaterialPair::homogeneous(mat), &HalfSpaceQuadrature::default())
            .unwrap();
        assert_eq!(r.value, Mat3::zeros());
    }

    #[test]
    fn bilinear_in_directions() {
        let (y0, w0, p) = reference();
        let quad = HalfSpaceQuadrature { rho: 8.0, radial_cells: 6, tolerance: 1.0, max_refinements: 1, ..Default::default() };
        let m = halfspace_sensitivity_matrix(&y0, &w0, &p, &quad).unwrap();
        let (l, d) = (Vec3::new(0.6, 0.0, 0.8), Vec3::new(0.0, 1.0, 0.0));
        let a = m.contract(&l, &d).value;
        assert_eq!(m.contract(&(-l), &d).value, -a);
        let direct = halfspace_sensitivity_integral(&y0, &w0, &l, &d, &p, &quad).unwrap().value;
        assert_relative_eq!(direct, a, max_relative = 1e-12, epsilon = 1e-15);
    }

    #[test]
    fn reference_configuration_matches_closed_form() {
        let (y0, w0, p) = reference();
        let e3 = Vec3::new(0.0, 0.0, 1.0);
        let report = verify_transmission_identity(&y0, &w0, &e3, &e3, &p, &HalfSpaceQuadrature::default()).unwrap();
        assert!(report.rel_residual <= 5e-2, "{report:?}");
        assert!(report.error_estimate <= 1e-4);
        assert!((0.7..=1.3).contains(&report.tail_rate), "{report:?}");
    }

    #[test]
    fn argument_validation() {
        let (y0, w0, p) = reference();
        let q = HalfSpaceQuadrature::default();
        let up = Vec3::new(0.0, 0.0, 0.5);
        assert!(matches!(halfspace_sensitivity_matrix(&up, &w0, &p, &q), Err(Error::SourceOnWrongSide(_))));
        assert!(matches!(halfspace_sensitivity_matrix(&y0, &y0, &p, &q), Err(Error::CoincidentPoints(_))));
        for bad in [
            HalfSpaceQuadrature { order: 1, ..q },
            HalfSpaceQuadrature { order: 17, ..q },
            HalfSpaceQuadrature { grading: 1.5, ..q },
            HalfSpaceQuadrature { rho: 3.0, ..q },
        ] {
            assert!(matches!(halfspace_sensitivity_matrix(&y0, &w0, &p, &bad), Err(Error::InvalidQuadrature(_))));
        }
        let strict = HalfSpaceQuadrature { tolerance: 1e-30, max_refinements: 1, radial_cells: 4, ..q };
        assert!(matches!(
            halfspace_sensitivity_matrix(&y0, &w0, &p, &strict),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }

    #[test]
    fn scaling_identity() {
        let (y0, w0, p) = reference();
        let quad = HalfSpaceQuadrature { rho: 10.0, ..Default::default() };
        let base = halfspace_sensitivity_matrix(&y0, &w0, &p, &quad).unwrap();
        for h in [0.5, 0.25] {
            let q = HalfSpaceQuadrature { rho: quad.rho * h, tolerance: quad.tolerance / h, ..quad };
            let s = halfspace_sensitivity_matrix(&(y0 * h), &(w0 * h), &p, &q).unwrap();
            assert!((s.value * h - base.value).abs().max() <= 2.0 * quad.tolerance);
            let g = BimaterialGreen::new(p);
            assert!((g.gap(&(y0 * h), &(w0 * h)).unwrap() * h - g.gap(&y0, &w0).unwrap()).norm() <= 1e-14);
        }
    }

    #[test]
    fn far_field_decay_exponent() {
        let (y0, w0, p) = reference();
        let g = BimaterialGreen::new(p);
        for dir in [Vec3::new(1.0, 0.0, 1.0), Vec3::new(0.3, -0.4, 0.5), Vec3::new(0.0, 0.0, 1.0)] {
            let dir = dir.normalize();
            let pts: Vec<(f64, f64)> = (0..=10)
                .map(|k| {
                    let r = 10.0 * 10f64.powf(k as f64 / 10.0);
                    (r, sensitivity_integrand(&g, &(dir * r), &y0, &w0).unwrap()[(2, 2)])
                })
                .collect();
            let slope = loglog_slope(&pts);
            assert!((-4.2..=-3.8).contains(&slope), "{slope}");
        }
    }

    #[test]
    fn low_order_refinement_gains_factor_four() {
        let (y0, w0, p) = reference();
        let g = BimaterialGreen::new(p);
        let quad = HalfSpaceQuadrature { rho: 8.0, order: 2, radial_cells: 8, ..Default::default() };
        let levels: Vec<Mat3> = (0..3).map(|l| integrate_level(&g, &y0, &w0, &quad, l).unwrap().0).collect();
        let e1 = (levels[1] - levels[0]).abs().max();
        let e2 = (levels[2] - levels[1]).abs().max();
        assert!(e1 >= 4.0 * e2, "{e1} {e2}");
    }

    #[test]
    fn kelvin_delta_identity() {
        let mat = material_from_poisson(1.3, 0.3).unwrap();
        let y = Vec3::new(0.2, -0.1, 0.4);
        for r in [0.1, 1.0, 10.0] {
            let d = equilibrium_check(EquilibriumGreen::Kelvin(mat), &y, r, 32).unwrap();
            assert!(d.norm() <= 1e-8, "r={r}: {}", d.norm());
        }
    }

    #[test]
    fn bimaterial_delta_identity_across_interface() {
        let g = BimaterialGreen::new(pair(1.0, 0.3, 3.0, 0.2));
        let y = Vec3::new(0.0, 0.1, -0.4);
        for r in [0.2, 1.0, 3.0] {
            let d = equilibrium_check(EquilibriumGreen::Bimaterial(&g), &y, r, 32).unwrap();
            assert!(d.norm() <= 1e-6, "r={r}: {}", d.norm());
        }
    }
}
