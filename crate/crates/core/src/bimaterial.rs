//! Fundamental solution Γ⁺ of two perfectly bonded isotropic half-spaces.
//!
//! Internally the field is evaluated in Rongved's frame: the half-space
//! `z > 0` carries the host moduli `(μ, ν)` and contains the source
//! `(0, 0, c)`, the half-space `z < 0` carries the inclusion moduli
//! `(μ^I, ν^I)`. Each force case is written in Papkovich–Neuber form
//!
//! `u = B − ∇(β + x B_x + z B_z) / (4(1 − ν_side))`
//!
//! with harmonic potentials `B_x`, `B_z`, `β`. The potentials are evaluated
//! on [`Jet`]s so their first and second derivatives (hence `u` and `∇u`)
//! come out exactly. The `y`-force case is the `x`-force case conjugated by
//! the quarter turn about `e_z`.
//!
//! The public API uses the frame `e1 = e_y`, `e2 = e_x`, `e3 = −e_z`, in which
//! the inclusion occupies `x3 > 0` and sources sit in `x3 < 0`.

use std::f64::consts::PI;

use crate::jet::Jet;
use crate::kelvin::{self, traction_from_gradient, GreenEvaluation, MIN_SEPARATION};
use crate::materials::{LameMaterial, MaterialPair};
use crate::{Error, Grad3, Mat3, Result, Vec3};

/// Which material a point (or a one-sided limit) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `x3 < 0` in the public frame (`z > 0` in Rongved's frame).
    Host,
    /// `x3 > 0` in the public frame (`z < 0` in Rongved's frame).
    Inclusion,
}

impl Side {
    pub fn of_x3(x3: f64) -> Option<Side> {
        if x3 < 0.0 {
            Some(Side::Host)
        } else if x3 > 0.0 {
            Some(Side::Inclusion)
        } else {
            None
        }
    }

    fn flipped(self) -> Side {
        match self {
            Side::Host => Side::Inclusion,
            Side::Inclusion => Side::Host,
        }
    }
}

/// Force direction in Rongved's frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForceAxis {
    X,
    Y,
    Z,
}

/// Orientation of a coordinate description.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BimaterialFrame {
    Rongved,
    Public,
}

/// The rotation `[[0,1,0],[1,0,0],[0,0,−1]]` between the two frames (an
/// involution).
pub fn frame_rotation() -> Mat3 {
    Mat3::new(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, -1.0)
}

/// Material-dependent constants shared by all evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RongvedCoefficients {
    host: LameMaterial,
    mu: f64,
    nu: f64,
    mu_i: f64,
    nu_i: f64,
    /// `μ + μ^I(3 − 4ν)`
    k_host: f64,
    /// `μ^I + μ(3 − 4ν^I)`
    k_incl: f64,
    gamma: f64,
    a_star: f64,
}

impl RongvedCoefficients {
    pub fn new(pair: &MaterialPair) -> Self {
        let (mu, nu) = (pair.host.mu(), pair.host.poisson_ratio());
        let (mu_i, nu_i) = (pair.inclusion.mu(), pair.inclusion.poisson_ratio());
        let k_host = mu + mu_i * (3.0 - 4.0 * nu);
        let k_incl = mu_i + mu * (3.0 - 4.0 * nu_i);
        let gamma = (mu * (1.0 - 2.0 * nu) * (3.0 - 4.0 * nu_i) - mu_i * (1.0 - 2.0 * nu_i) * (3.0 - 4.0 * nu)) / k_incl;
        let a_star = ((mu - mu_i)
            * (1.0 - 2.0 * nu)
            * (mu_i * (3.0 - 4.0 * nu) * (1.0 - 2.0 * nu_i) - mu * (3.0 - 4.0 * nu_i) * (1.0 - 2.0 * nu))
            - 2.0 * mu_i * (nu - nu_i) * k_host)
            / k_incl;
        Self { host: pair.host, mu, nu, mu_i, nu_i, k_host, k_incl, gamma, a_star }
    }

    /// γ = [μ(1−2ν)(3−4ν^I) − μ^I(1−2ν^I)(3−4ν)] / [μ^I + μ(3−4ν^I)].
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// The constant A* of the tangential-force potentials.
    pub fn a_star(&self) -> f64 {
        self.a_star
    }

    pub fn b1(&self, c: f64) -> f64 {
        c * (1.0 - self.nu) / (PI * self.k_host)
    }

    pub fn b2(&self) -> f64 {
        (1.0 - self.nu) / (PI * self.k_host) * self.gamma
    }
}

/// Which terms of the host-side field to include.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    /// Kelvin term plus image terms.
    Full,
    /// Image terms only, i.e. Γ⁺ − Γ.
    Image,
}

/// Displacement and its gradient `G[(i, k)] = ∂_k u_i` for one force.
type Column = (Vec3, Mat3);

fn papkovich(bx: Option<Jet>, bz: Jet, phi: Jet, f: f64) -> Column {
    let b = [bx, None, Some(bz)];
    let u = Vec3::from_fn(|i, _| b[i].map_or(0.0, |j| j.v) - f * phi.g[i]);
    let g = Mat3::from_fn(|i, k| b[i].map_or(0.0, |j| j.g[k]) - f * phi.hess(i, k));
    (u, g)
}

fn z_force_host_image(co: &RongvedCoefficients, p: &Vec3, c: f64) -> Column {
    let [x, y, z] = Jet::coordinates([p.x, p.y, p.z]);
    let zc = z + c;
    let r2 = (x * x + y * y + zc * zc).sqrt();
    let kk = (co.mu - co.mu_i) / co.k_host;
    let s = 3.0 - 4.0 * co.nu;
    let bz = (s * r2.recip() + 2.0 * c * zc / r2.powi(3)) * (kk / (4.0 * PI * co.mu));
    let beta = r2.recip() * (-kk * c * s / (4.0 * PI * co.mu))
        + (r2 + zc).ln() * ((1.0 - co.nu) * co.gamma / (PI * co.k_host));
    let phi = beta + z * bz;
    papkovich(None, bz, phi, 1.0 / (4.0 * (1.0 - co.nu)))
}

fn z_force_inclusion(co: &RongvedCoefficients, p: &Vec3, c: f64) -> Column {
    let [x, y, z] = Jet::coordinates([p.x, p.y, p.z]);
    let zc = z - c;
    let r1 = (x * x + y * y + zc * zc).sqrt();
    let bz = r1.recip() * ((1.0 - co.nu_i) / (PI * co.k_incl));
    let beta = (r1.recip() * (-c) + (r1 - zc).ln() * co.gamma) * ((1.0 - co.nu_i) / (PI * co.k_host));
    let phi = beta + z * bz;
    papkovich(None, bz, phi, 1.0 / (4.0 * (1.0 - co.nu_i)))
}

fn x_force_host_image(co: &RongvedCoefficients, p: &Vec3, c: f64) -> Column {
    let [x, y, z] = Jet::coordinates([p.x, p.y, p.z]);
    let (mu, mu_i, nu) = (co.mu, co.mu_i, co.nu);
    let zc = z + c;
    let r2 = (x * x + y * y + zc * zc).sqrt();
    let lift = (r2 + zc).recip();
    let bx = r2.recip() * ((mu - mu_i) / (mu + mu_i) / (4.0 * PI * mu));
    let bz = (x / r2.powi(3) * (-c / mu) + x / r2 * lift * ((1.0 - 2.0 * nu) / (mu + mu_i)))
        * ((mu - mu_i) / (2.0 * PI * co.k_host));
    let beta = (x / r2 * lift * ((1.0 - 2.0 * nu) * (mu - mu_i) * c) + x * lift * co.a_star)
        * (1.0 / (2.0 * PI * (mu + mu_i) * co.k_host));
    let phi = beta + x * bx + z * bz;
    papkovich(Some(bx), bz, phi, 1.0 / (4.0 * (1.0 - nu)))
}

fn x_force_inclusion(co: &RongvedCoefficients, p: &Vec3, c: f64) -> Column {
    let [x, y, z] = Jet::coordinates([p.x, p.y, p.z]);
    let (mu, mu_i, nu, nu_i) = (co.mu, co.mu_i, co.nu, co.nu_i);
    let zc = z - c;
    let r1 = (x * x + y * y + zc * zc).sqrt();
    let lift = (r1 - zc).recip();
    let bx = r1.recip() * (1.0 / (2.0 * PI * (mu + mu_i)));
    let bz = x / r1 * lift * ((1.0 - 2.0 * nu_i) * (mu - mu_i) / (2.0 * PI * (mu + mu_i) * co.k_incl));
    let e = (nu - nu_i) * co.k_host / (1.0 - nu_i);
    let beta = (x / r1 * lift * (((1.0 - 2.0 * nu) * (mu - mu_i) + e) * c) + x * lift * (co.a_star + e))
        * ((1.0 - nu_i) / (2.0 * PI * (1.0 - nu) * (mu + mu_i) * co.k_host));
    let phi = beta + x * bx + z * bz;
    papkovich(Some(bx), bz, phi, 1.0 / (4.0 * (1.0 - nu_i)))
}

/// Quarter turn about `e_z`, mapping `e_x` to `e_y`.
fn quarter_turn() -> Mat3 {
    Mat3::new(0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0)
}

fn x_force(co: &RongvedCoefficients, p: &Vec3, c: f64, side: Side, part: Part) -> Column {
    match side {
        Side::Host => {
            let (mut u, mut g) = x_force_host_image(co, p, c);
            if part == Part::Full {
                let src = Vec3::new(0.0, 0.0, c);
                u += kelvin_column(co, p, &src, 0).0;
                g += kelvin_column(co, p, &src, 0).1;
            }
            (u, g)
        }
        Side::Inclusion => x_force_inclusion(co, p, c),
    }
}

fn y_force(co: &RongvedCoefficients, p: &Vec3, c: f64, side: Side, part: Part) -> Column {
    let q = quarter_turn();
    let (u, g) = x_force(co, &(q.transpose() * p), c, side, part);
    (q * u, q * g * q.transpose())
}

fn z_force(co: &RongvedCoefficients, p: &Vec3, c: f64, side: Side, part: Part) -> Column {
    match side {
        Side::Host => {
            let (mut u, mut g) = z_force_host_image(co, p, c);
            if part == Part::Full {
                let (ku, kg) = kelvin_column(co, p, &Vec3::new(0.0, 0.0, c), 2);
                u += ku;
                g += kg;
            }
            (u, g)
        }
        Side::Inclusion => z_force_inclusion(co, p, c),
    }
}

fn kelvin_column(co: &RongvedCoefficients, p: &Vec3, src: &Vec3, j: usize) -> Column {
    // callers guarantee a positive separation
    let m = kelvin::kelvin_matrix(p, src, &co.host).expect("separated points");
    let g = kelvin::kelvin_gradient(p, src, &co.host).expect("separated points");
    (m.column(j).into_owned(), crate::column_gradient(&g, j))
}

/// Full response in Rongved's frame: columns are the x-, y- and z-forces.
fn rongved_response(co: &RongvedCoefficients, p: &Vec3, c: f64, side: Side, part: Part) -> (Mat3, Grad3) {
    let cols = [
        x_force(co, p, c, side, part),
        y_force(co, p, c, side, part),
        z_force(co, p, c, side, part),
    ];
    let m = Mat3::from_fn(|i, j| cols[j].0[i]);
    let grad = std::array::from_fn(|k| Mat3::from_fn(|i, j| cols[j].1[(i, k)]));
    (m, grad)
}

/// Displacement and gradient in Rongved's frame for one force direction.
///
/// `x` is the evaluation point, the source is `(0, 0, c)`. The branch is
/// chosen by the sign of `x.z`; `z = 0` is evaluated as the limit from
/// `z > 0`.
pub fn gamma_plus_rongved(x: &Vec3, c: f64, pair: &MaterialPair, force: ForceAxis) -> Result<(Vec3, Mat3)> {
    if !(c > 0.0) {
        return Err(Error::NonPositiveSourceHeight(c));
    }
    let sep = (x - Vec3::new(0.0, 0.0, c)).norm();
    if sep < MIN_SEPARATION {
        return Err(Error::CoincidentPoints(sep));
    }
    let co = RongvedCoefficients::new(pair);
    let side = if x.z >= 0.0 { Side::Host } else { Side::Inclusion };
    Ok(match force {
        ForceAxis::X => x_force(&co, x, c, side, Part::Full),
        ForceAxis::Y => y_force(&co, x, c, side, Part::Full),
        ForceAxis::Z => z_force(&co, x, c, side, Part::Full),
    })
}

/// Γ⁺ for a fixed material pair, in the public frame.
#[derive(Debug, Clone, Copy)]
pub struct BimaterialGreen {
    pair: MaterialPair,
    coefficients: RongvedCoefficients,
    reflected: Option<RongvedCoefficients>,
}

impl BimaterialGreen {
    pub fn new(pair: MaterialPair) -> Self {
        Self { pair, coefficients: RongvedCoefficients::new(&pair), reflected: None }
    }

    /// Also accept sources with `x3 > 0` through the swap-and-reflect
    /// construction `Γ(x, y) = S Γ^{swap}(Sx, Sy) S`, `S = diag(1, 1, −1)`.
    pub fn with_reflected_sources(mut self) -> Self {
        self.reflected = Some(RongvedCoefficients::new(&self.pair.swapped()));
        self
    }

    pub fn pair(&self) -> &MaterialPair {
        &self.pair
    }

    pub fn coefficients(&self) -> &RongvedCoefficients {
        &self.coefficients
    }

    /// Material at a point (host side for `x3 ≤ 0`).
    pub fn material_at(&self, x3: f64, side: Option<Side>) -> LameMaterial {
        match side.or(Side::of_x3(x3)).unwrap_or(Side::Host) {
            Side::Host => self.pair.host,
            Side::Inclusion => self.pair.inclusion,
        }
    }

    fn locate(x: &Vec3, y: &Vec3) -> Result<(Vec3, f64)> {
        let sep = (x - y).norm();
        if !(sep >= MIN_SEPARATION) {
            return Err(Error::CoincidentPoints(sep));
        }
        Ok((Vec3::new(x.y - y.y, x.x - y.x, -x.z), -y.z))
    }

    fn to_public(m: Mat3, grad: Grad3) -> (Mat3, Grad3) {
        let r = frame_rotation();
        let gp = [r * grad[1] * r, r * grad[0] * r, -(r * grad[2] * r)];
        (r * m * r, gp)
    }

    fn evaluate_inner(&self, x: &Vec3, y: &Vec3, side: Side) -> Result<(Mat3, Grad3)> {
        if y.z < 0.0 {
            let (p, c) = Self::locate(x, y)?;
            let (m, g) = rongved_response(&self.coefficients, &p, c, side, Part::Full);
            return Ok(Self::to_public(m, g));
        }
        match (&self.reflected, y.z > 0.0) {
            (Some(co), true) => {
                let s = Mat3::from_diagonal(&Vec3::new(1.0, 1.0, -1.0));
                let (xs, ys) = (s * x, s * y);
                let (p, c) = Self::locate(&xs, &ys)?;
                let (m, g) = rongved_response(co, &p, c, side.flipped(), Part::Full);
                let (m, g) = Self::to_public(m, g);
                Ok((s * m * s, [s * g[0] * s, s * g[1] * s, -(s * g[2] * s)]))
            }
            _ => Err(Error::SourceOnWrongSide(y.z)),
        }
    }

    /// Γ⁺(x, y). On the interface the host-side limit is returned.
    pub fn matrix(&self, x: &Vec3, y: &Vec3) -> Result<Mat3> {
        let side = Side::of_x3(x.z).unwrap_or(Side::Host);
        Ok(self.evaluate_inner(x, y, side)?.0)
    }

    /// Γ⁺ and its gradient; points on the interface need an explicit side.
    pub fn evaluate(&self, x: &Vec3, y: &Vec3, side: Option<Side>) -> Result<GreenEvaluation> {
        let side = side.or(Side::of_x3(x.z)).ok_or(Error::AmbiguousSide)?;
        let (matrix, gradient) = self.evaluate_inner(x, y, side)?;
        Ok(GreenEvaluation { matrix, gradient })
    }

    pub fn gradient(&self, x: &Vec3, y: &Vec3, side: Option<Side>) -> Result<Grad3> {
        Ok(self.evaluate(x, y, side)?.gradient)
    }

    /// Γ⁺(y, w) − Γ(y, w) for `y`, `w` on the host side, computed from the
    /// image terms alone. It stays finite as `y → w`.
    pub fn gap(&self, y: &Vec3, w: &Vec3) -> Result<Mat3> {
        Ok(self.gap_with_gradient(y, w)?.0)
    }

    /// Gap matrix and its gradient in the first argument.
    pub fn gap_with_gradient(&self, y: &Vec3, w: &Vec3) -> Result<(Mat3, Grad3)> {
        if !(w.z < 0.0) {
            return Err(Error::SourceOnWrongSide(w.z));
        }
        if y.z > 0.0 {
            return Err(Error::SourceOnWrongSide(y.z));
        }
        let p = Vec3::new(y.y - w.y, y.x - w.x, -y.z);
        let (m, g) = rongved_response(&self.coefficients, &p, -w.z, Side::Host, Part::Image);
        Ok(Self::to_public(m, g))
    }

    /// Traction `(C ∇u) n` for every column, with the material of `side`.
    pub fn traction(&self, x: &Vec3, y: &Vec3, n: &Vec3, side: Option<Side>) -> Result<Mat3> {
        kelvin::check_unit(n)?;
        let side = side.or(Side::of_x3(x.z)).ok_or(Error::AmbiguousSide)?;
        let grad = self.gradient(x, y, Some(side))?;
        Ok(traction_from_gradient(&grad, n, &self.material_at(x.z, Some(side))))
    }
}

pub fn gamma_plus(x: &Vec3, y: &Vec3, pair: &MaterialPair) -> Result<Mat3> {
    BimaterialGreen::new(*pair).matrix(x, y)
}

/// Gradient of Γ⁺ in `x`; fails with [`Error::AmbiguousSide`] on the interface.
pub fn gamma_plus_gradient(x: &Vec3, y: &Vec3, pair: &MaterialPair) -> Result<Grad3> {
    BimaterialGreen::new(*pair).gradient(x, y, None)
}

pub fn gamma_plus_gradient_sided(x: &Vec3, y: &Vec3, pair: &MaterialPair, side: Side) -> Result<Grad3> {
    BimaterialGreen::new(*pair).gradient(x, y, Some(side))
}

pub fn gap_matrix(y: &Vec3, w: &Vec3, pair: &MaterialPair) -> Result<Mat3> {
    BimaterialGreen::new(*pair).gap(y, w)
}

/// Relative mismatch of displacement and normal traction across the
/// interface at `(x1, x2, 0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterfaceMismatch {
    pub displacement: f64,
    pub traction: f64,
}

pub fn interface_mismatch(green: &BimaterialGreen, x1: f64, x2: f64, y: &Vec3) -> Result<InterfaceMismatch> {
    let x = Vec3::new(x1, x2, 0.0);
    let host = green.evaluate_inner(&x, y, Side::Host)?;
    let incl = green.evaluate_inner(&x, y, Side::Inclusion)?;
    let n = Vec3::new(0.0, 0.0, 1.0);
    let t_host = traction_from_gradient(&host.1, &n, &green.pair.host);
    let t_incl = traction_from_gradient(&incl.1, &n, &green.pair.inclusion);
    Ok(InterfaceMismatch {
        displacement: (host.0 - incl.0).norm() / host.0.norm(),
        traction: (t_host - t_incl).norm() / t_host.norm().max(t_incl.norm()),
    })
}
