//! Degeneracy algebra of the diagonal gap entries `(Γ⁺ − Γ)_ii` on the
//! symmetry axis.
//!
//! For `y = (0, 0, −1)` and `w = (0, 0, −c)` the normal entry is
//! `P(t) / (4πμ(1−ν) t³ K)` with `t = 1 + c`, `K = μ + μ^I(3−4ν)`, and the
//! tangential entries are `P̃(t) / (16π(1−ν) t³)`; both numerators are
//! quadratics `αt² + β(t − 1)`. At `w = y` (`t = 2`) they reduce, after
//! clearing denominators and setting `s = μ/μ^I`, to the polynomials
//! `Q2(ν, ν^I, s)` handled exactly here.
//!
//! Coefficient formulas are generic over [`GapScalar`], so the same code
//! runs on `f64` and on exact [`BigRational`]s.

use std::f64::consts::PI;
use std::fmt;
use std::ops::Neg;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Zero};
use serde::Serialize;

use crate::bimaterial::BimaterialGreen;
use crate::dataset::{loglog_slope, ScanDataset, ScanKind};
use crate::materials::MaterialPair;
use crate::poly::{int, to_f64, MultiPoly};
use crate::{par, Error, Result, Vec3};

pub trait GapScalar: Num + Neg<Output = Self> + Clone + FromPrimitive + fmt::Debug {}
impl<T: Num + Neg<Output = T> + Clone + FromPrimitive + fmt::Debug> GapScalar for T {}

fn k<T: GapScalar>(n: i64) -> T {
    T::from_i64(n).expect("small integer")
}

/// Which diagonal entry: `zz` is the normal (`i = 3`) entry, `xx` a
/// tangential one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GapCase {
    Zz,
    Xx,
}

impl GapCase {
    pub fn as_str(&self) -> &'static str {
        match self {
            GapCase::Zz => "zz",
            GapCase::Xx => "xx",
        }
    }

    /// Case for a public-frame axis (1-based).
    pub fn for_axis(axis: usize) -> Result<Self> {
        match axis {
            1 | 2 => Ok(GapCase::Xx),
            3 => Ok(GapCase::Zz),
            _ => Err(Error::OutOfBounds(format!("axis {axis} not in 1..=3"))),
        }
    }
}

impl fmt::Display for GapCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GapCase {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zz" => Ok(GapCase::Zz),
            "xx" => Ok(GapCase::Xx),
            _ => Err(Error::ConfigParse(format!("unknown case {s:?}, expected zz or xx"))),
        }
    }
}

/// Moduli `(μ, ν, μ^I, ν^I)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapParams<T> {
    pub mu: T,
    pub nu: T,
    pub mu_i: T,
    pub nu_i: T,
}

impl GapParams<f64> {
    pub fn from_pair(pair: &MaterialPair) -> Self {
        Self {
            mu: pair.host.mu(),
            nu: pair.host.poisson_ratio(),
            mu_i: pair.inclusion.mu(),
            nu_i: pair.inclusion.poisson_ratio(),
        }
    }
}

impl GapParams<BigRational> {
    pub fn to_f64(&self) -> GapParams<f64> {
        GapParams { mu: to_f64(&self.mu), nu: to_f64(&self.nu), mu_i: to_f64(&self.mu_i), nu_i: to_f64(&self.nu_i) }
    }
}

impl<T: GapScalar> GapParams<T> {
    /// `μ + μ^I(3 − 4ν)`
    pub fn k_host(&self) -> T {
        self.mu.clone() + self.mu_i.clone() * (k::<T>(3) - k::<T>(4) * self.nu.clone())
    }

    /// `μ^I + μ(3 − 4ν^I)`
    pub fn k_incl(&self) -> T {
        self.mu_i.clone() + self.mu.clone() * (k::<T>(3) - k::<T>(4) * self.nu_i.clone())
    }

    pub fn gamma(&self) -> T {
        let (mu, nu, mu_i, nu_i) = (self.mu.clone(), self.nu.clone(), self.mu_i.clone(), self.nu_i.clone());
        let one = k::<T>(1);
        let num = mu * (one.clone() - k::<T>(2) * nu.clone()) * (k::<T>(3) - k::<T>(4) * nu_i.clone())
            - mu_i * (one - k::<T>(2) * nu_i) * (k::<T>(3) - k::<T>(4) * nu);
        num / self.k_incl()
    }

    pub fn a_star(&self) -> T {
        let (mu, nu, mu_i, nu_i) = (self.mu.clone(), self.nu.clone(), self.mu_i.clone(), self.nu_i.clone());
        let one = k::<T>(1);
        let three = k::<T>(3);
        let four = k::<T>(4);
        let two = k::<T>(2);
        let inner = mu_i.clone() * (three.clone() - four.clone() * nu.clone()) * (one.clone() - two.clone() * nu_i.clone())
            - mu.clone() * (three - four * nu_i.clone()) * (one.clone() - two.clone() * nu.clone());
        let num = (mu - mu_i.clone()) * (one - two.clone() * nu.clone()) * inner - two * mu_i * (nu - nu_i) * self.k_host();
        num / self.k_incl()
    }
}

/// `P(t) = α t² + β t + γ_c` together with the constant part of the
/// prefactor: the gap entry equals `P(t) · scale / (π t³)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GapPolynomial<T> {
    pub case: GapCase,
    /// `[α, β, γ_c]`
    pub coefficients: [T; 3],
    pub scale: T,
}

impl<T: GapScalar> GapPolynomial<T> {
    fn from_parts(case: GapCase, alpha: T, beta: T, scale: T) -> Self {
        Self { case, coefficients: [alpha, beta.clone(), -beta], scale }
    }

    /// Normal entry, `P(t) = (1−ν)[(μ−μ^I)(3−4ν) − γμ] t² + (μ−μ^I)(t−1)`.
    pub fn zz(p: &GapParams<T>) -> Self {
        Self::zz_with_sign(p, k(1))
    }

    /// The normal-entry polynomial with the opposite sign on the `(t − 1)`
    /// term. It does not reproduce the gap matrix; it is the polynomial whose
    /// value at `t = 2` gives the classical `Q`, see [`q_polynomial`].
    pub fn zz_as_printed(p: &GapParams<T>) -> Self {
        Self::zz_with_sign(p, k(-1))
    }

    fn zz_with_sign(p: &GapParams<T>, sign: T) -> Self {
        let one = k::<T>(1);
        let dmu = p.mu.clone() - p.mu_i.clone();
        let alpha = (one.clone() - p.nu.clone())
            * (dmu.clone() * (k::<T>(3) - k::<T>(4) * p.nu.clone()) - p.gamma() * p.mu.clone());
        let scale = one.clone() / (k::<T>(4) * p.mu.clone() * (one - p.nu.clone()) * p.k_host());
        Self::from_parts(GapCase::Zz, alpha, sign * dmu, scale)
    }

    /// Tangential entry (coefficients multiplied by 4π).
    pub fn xx(p: &GapParams<T>) -> Self {
        let one = k::<T>(1);
        let dmu = p.mu.clone() - p.mu_i.clone();
        let smu = p.mu.clone() + p.mu_i.clone();
        let kh = p.k_host();
        let alpha = (k::<T>(3) - k::<T>(4) * p.nu.clone()) * dmu.clone() / (p.mu.clone() * smu.clone())
            - (one.clone() - k::<T>(2) * p.nu.clone()) * dmu.clone() / (smu.clone() * kh.clone())
            - p.a_star() / (smu * kh.clone());
        let beta = k::<T>(2) * dmu / (p.mu.clone() * kh);
        let scale = one.clone() / (k::<T>(16) * (one - p.nu.clone()));
        Self::from_parts(GapCase::Xx, alpha, beta, scale)
    }

    pub fn for_case(case: GapCase, p: &GapParams<T>) -> Self {
        match case {
            GapCase::Zz => Self::zz(p),
            GapCase::Xx => Self::xx(p),
        }
    }

    pub fn eval(&self, t: &T) -> T {
        let [a, b, c] = &self.coefficients;
        (a.clone() * t.clone() + b.clone()) * t.clone() + c.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(Zero::is_zero)
    }
}

impl GapPolynomial<f64> {
    /// The gap entry at `y = (0,0,−1)`, `w = (0,0,1−t)`.
    pub fn gap_value(&self, t: f64) -> f64 {
        self.eval(&t) * self.scale / (PI * t * t * t)
    }
}

pub fn p_poly_zz(pair: &MaterialPair) -> GapPolynomial<f64> {
    GapPolynomial::zz(&GapParams::from_pair(pair))
}

pub fn p_poly_xx(pair: &MaterialPair) -> GapPolynomial<f64> {
    GapPolynomial::xx(&GapParams::from_pair(pair))
}

// Variable order: (μ, ν, μ^I, ν^I) for Q, (ν, ν^I, s) for Q2.
const Q_ZZ: &[(i64, &[u32])] = &[
    (32, &[2, 2, 0, 1]),
    (-32, &[1, 2, 1, 1]),
    (-24, &[2, 2, 0, 0]),
    (-64, &[2, 1, 0, 1]),
    (16, &[1, 2, 1, 0]),
    (56, &[1, 1, 1, 1]),
    (16, &[0, 2, 2, 0]),
    (48, &[2, 1, 0, 0]),
    (28, &[2, 0, 0, 1]),
    (-28, &[1, 1, 1, 0]),
    (-20, &[1, 0, 1, 1]),
    (-28, &[0, 1, 2, 0]),
    (-21, &[2, 0, 0, 0]),
    (10, &[1, 0, 1, 0]),
    (11, &[0, 0, 2, 0]),
];

const Q2_ZZ: &[(i64, &[u32])] = &[
    (32, &[2, 1, 2]),
    (-32, &[2, 1, 1]),
    (-24, &[2, 0, 2]),
    (-64, &[1, 1, 2]),
    (16, &[2, 0, 1]),
    (56, &[1, 1, 1]),
    (48, &[1, 0, 2]),
    (28, &[0, 1, 2]),
    (16, &[2, 0, 0]),
    (-28, &[1, 0, 1]),
    (-20, &[0, 1, 1]),
    (-21, &[0, 0, 2]),
    (-28, &[1, 0, 0]),
    (10, &[0, 0, 1]),
    (11, &[0, 0, 0]),
];

const Q_XX: &[(i64, &[u32])] = &[
    (32, &[3, 2, 0, 1]),
    (64, &[2, 2, 1, 1]),
    (-96, &[1, 2, 2, 1]),
    (-24, &[3, 2, 0, 0]),
    (-48, &[3, 1, 0, 1]),
    (-56, &[2, 2, 1, 0]),
    (-104, &[2, 1, 1, 1]),
    (64, &[1, 2, 2, 0]),
    (136, &[1, 1, 2, 1]),
    (32, &[0, 2, 3, 0]),
    (36, &[3, 1, 0, 0]),
    (28, &[3, 0, 0, 1]),
    (88, &[2, 1, 1, 0]),
    (40, &[2, 0, 1, 1]),
    (-92, &[1, 1, 2, 0]),
    (-52, &[1, 0, 2, 1]),
    (-48, &[0, 1, 3, 0]),
    (-21, &[3, 0, 0, 0]),
    (-35, &[2, 0, 1, 0]),
    (37, &[1, 0, 2, 0]),
    (19, &[0, 0, 3, 0]),
];

const Q2_XX: &[(i64, &[u32])] = &[
    (32, &[2, 1, 3]),
    (64, &[2, 1, 2]),
    (-24, &[2, 0, 3]),
    (-48, &[1, 1, 3]),
    (-96, &[2, 1, 1]),
    (-56, &[2, 0, 2]),
    (-104, &[1, 1, 2]),
    (36, &[1, 0, 3]),
    (28, &[0, 1, 3]),
    (64, &[2, 0, 1]),
    (136, &[1, 1, 1]),
    (88, &[1, 0, 2]),
    (40, &[0, 1, 2]),
    (32, &[2, 0, 0]),
    (-21, &[0, 0, 3]),
    (-92, &[1, 0, 1]),
    (-52, &[0, 1, 1]),
    (-35, &[0, 0, 2]),
    (-48, &[1, 0, 0]),
    (37, &[0, 0, 1]),
    (19, &[0, 0, 0]),
];

/// Coincident-point numerator `Q(μ, ν, μ^I, ν^I)`, homogeneous of degree 2
/// (zz) or 3 (xx) in the shear moduli.
///
/// For zz, `Q = −P(2)·(μ^I + μ(3−4ν^I))` with the classical sign convention
/// of [`GapPolynomial::zz_as_printed`]; for xx, `Q = 2·P(2)·R` with
/// `R = −πμ(μ+μ^I)KD` and `P` the unscaled tangential numerator.
pub fn q_polynomial(case: GapCase) -> MultiPoly {
    match case {
        GapCase::Zz => MultiPoly::from_terms(4, Q_ZZ),
        GapCase::Xx => MultiPoly::from_terms(4, Q_XX),
    }
}

/// `Q2(ν, ν^I, s) = Q(s μ^I, ν, μ^I, ν^I) / (μ^I)^deg`.
pub fn q2_polynomial(case: GapCase) -> MultiPoly {
    match case {
        GapCase::Zz => MultiPoly::from_terms(3, Q2_ZZ),
        GapCase::Xx => MultiPoly::from_terms(3, Q2_XX),
    }
}

pub fn q2_value(case: GapCase, nu: &BigRational, nu_i: &BigRational, s: &BigRational) -> BigRational {
    q2_polynomial(case).eval(&[nu.clone(), nu_i.clone(), s.clone()])
}

/// `P(2)·(μ^I + μ(3−4ν^I))` for the normal entry as it follows from the
/// closed-form gap (a polynomial in `(μ, ν, μ^I, ν^I)`).
pub fn q_true_zz() -> MultiPoly {
    let v = |i| MultiPoly::var(4, i);
    let c = |x: i64| MultiPoly::constant(4, int(x));
    let (mu, nu, mu_i, nu_i) = (v(0), v(1), v(2), v(3));
    let d = &mu_i + &(&mu * &(&c(3) - &(&c(4) * &nu_i)));
    let gamma_num = &(&(&mu * &(&c(1) - &(&c(2) * &nu))) * &(&c(3) - &(&c(4) * &nu_i)))
        - &(&(&mu_i * &(&c(1) - &(&c(2) * &nu_i))) * &(&c(3) - &(&c(4) * &nu)));
    let dmu = &mu - &mu_i;
    let bracket = &(&(&dmu * &(&c(3) - &(&c(4) * &nu))) * &d) - &(&gamma_num * &mu);
    &(&(&c(4) * &(&c(1) - &nu)) * &bracket) + &(&dmu * &d)
}

/// Dimensionless form of [`q_true_zz`] in `(ν, ν^I, s)`.
pub fn q2_true_zz() -> MultiPoly {
    let v = |i| MultiPoly::var(3, i);
    q_true_zz().compose(&[v(2), v(0), MultiPoly::constant(3, int(1)), v(1)])
}

/// `Q(μ,ν,μ^I,ν^I) − (μ^I)^d Q2(ν, ν^I, μ/μ^I)` as a polynomial.
pub fn dimensional_reduction_residual(q: &MultiPoly, q2: &MultiPoly, degree: u32) -> MultiPoly {
    let mut lifted = MultiPoly::zero(4);
    for (e, c) in q2.terms() {
        let mut t = MultiPoly::constant(4, c.clone());
        t = &t * &MultiPoly::var(4, 1).pow(e[0]);
        t = &t * &MultiPoly::var(4, 3).pow(e[1]);
        t = &t * &MultiPoly::var(4, 0).pow(e[2]);
        t = &t * &MultiPoly::var(4, 2).pow(degree - e[2]);
        lifted = &lifted + &t;
    }
    q - &lifted
}

/// Named polynomial identities; every residual must be the zero polynomial.
pub fn factorization_residuals() -> Vec<(&'static str, MultiPoly)> {
    let v = |i| MultiPoly::var(3, i);
    let c = |x: i64| MultiPoly::constant(3, int(x));
    let (nu, nu_i, s) = (v(0), v(1), v(2));
    let q2z = q2_polynomial(GapCase::Zz);
    let q2x = q2_polynomial(GapCase::Xx);
    let at_s1 = |q: &MultiPoly| q.compose(&[v(0), v(1), c(1)]);
    let on_diag = |q: &MultiPoly| q.compose(&[v(0), v(0), v(2)]);
    let nu_minus = &(&nu - &c(1)) * &(&nu - &nu_i);
    let p = |terms: &[(i64, &[u32])]| MultiPoly::from_terms(3, terms);
    // cofactors of (s − 1) on the ν = ν^I slice
    let zz_curve = p(&[
        (32, &[3, 0, 1]),
        (-88, &[2, 0, 1]),
        (76, &[1, 0, 1]),
        (-21, &[0, 0, 1]),
        (-16, &[2, 0, 0]),
        (28, &[1, 0, 0]),
        (-11, &[0, 0, 0]),
    ]);
    let xx_curve = p(&[
        (32, &[3, 0, 2]),
        (96, &[3, 0, 1]),
        (-72, &[2, 0, 2]),
        (-232, &[2, 0, 1]),
        (64, &[1, 0, 2]),
        (-32, &[2, 0, 0]),
        (192, &[1, 0, 1]),
        (-21, &[0, 0, 2]),
        (48, &[1, 0, 0]),
        (-56, &[0, 0, 1]),
        (-19, &[0, 0, 0]),
    ]);
    let s1 = &s - &c(1);
    vec![
        ("zz_s_equals_1", &at_s1(&q2z) - &(&c(8) * &nu_minus)),
        ("xx_s_equals_1", &at_s1(&q2x) - &(&c(16) * &nu_minus)),
        ("zz_equal_poisson", &on_diag(&q2z) - &(&s1 * &zz_curve)),
        ("xx_equal_poisson", &on_diag(&q2x) - &(&s1 * &xx_curve)),
        ("zz_dimensional_reduction", dimensional_reduction_residual(&q_polynomial(GapCase::Zz), &q2z, 2)),
        ("xx_dimensional_reduction", dimensional_reduction_residual(&q_polynomial(GapCase::Xx), &q2x, 3)),
    ]
}

/// Solves the (linear in ν^I) equation `q2(ν, ν^I, s) = 0` for ν^I.
pub fn solve_nu_i(q2: &MultiPoly, nu: &BigRational, s: &BigRational) -> Result<BigRational> {
    let fixed = q2.substitute(0, nu).substitute(2, s);
    let coeffs = fixed.coefficients_in(1);
    if coeffs.len() != 2 {
        return Err(Error::DegenerateDenominator);
    }
    let zero = int(0);
    let point = [zero.clone(), zero.clone(), zero];
    let (a, b) = (coeffs[0].eval(&point), coeffs[1].eval(&point));
    if b.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok(-a / b)
}

/// The ν^I on `Q2 = 0` from the closed solution formulas.
pub fn nu_i_on_zero_locus(case: GapCase, nu: &BigRational, s: &BigRational) -> Result<BigRational> {
    let c = int;
    let (n, s) = (nu.clone(), s.clone());
    let n2 = &n * &n;
    let (num, den) = match case {
        GapCase::Zz => {
            let a = &c(8) * &n2 - &c(16) * &n + c(7);
            let b = &c(8) * &n2 - &c(14) * &n + c(5);
            let num = c(3) * &a * &s * &s - c(2) * &b * &s - c(16) * &n2 + c(28) * &n - c(11);
            let den = c(4) * (&a * &s * &s - &b * &s);
            (num, den)
        }
        GapCase::Xx => {
            let s2 = &s * &s;
            let s3 = &s2 * &s;
            let num = c(3) * (c(8) * &n2 - c(12) * &n + c(7)) * &s3 + (c(56) * &n2 - c(88) * &n + c(35)) * &s2
                - (c(64) * &n2 - c(92) * &n + c(37)) * &s
                - c(32) * &n2
                + c(48) * &n
                - c(19);
            let den = c(4)
                * ((c(8) * &n2 - c(12) * &n + c(7)) * &s3 + c(2) * (c(8) * &n2 - c(13) * &n + c(5)) * &s2
                    - (c(24) * &n2 - c(34) * &n + c(13)) * &s);
            (num, den)
        }
    };
    if den.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    Ok(num / den)
}

/// The ν^I at which the normal gap entry vanishes at coincident points.
pub fn nu_i_on_true_zero_locus(nu: &BigRational, s: &BigRational) -> Result<BigRational> {
    solve_nu_i(&q2_true_zz(), nu, s)
}

/// Candidate ratios `λ_w = |w3| / |y3|`.
pub const LAMBDA_W_CANDIDATES: [f64; 3] = [2.0 / 3.0, 3.0 / 4.0, 4.0 / 5.0];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LambdaChoice {
    pub axis: usize,
    pub lambda_w: f64,
    /// Gap entry `(i, i)` at the chosen candidate.
    pub value: f64,
    /// `(λ_w, gap entry)` for every candidate.
    pub candidates: [(f64, f64); 3],
}

fn axis_index(axis: usize) -> Result<usize> {
    if (1..=3).contains(&axis) {
        Ok(axis - 1)
    } else {
        Err(Error::OutOfBounds(format!("axis {axis} not in 1..=3")))
    }
}

/// Gap entry `(i, i)` at `y = (0,0,−h)`, `w = (0,0,−λ_w h)`.
pub fn axis_gap(green: &BimaterialGreen, axis: usize, lambda_w: f64, h: f64) -> Result<f64> {
    let i = axis_index(axis)?;
    let g = green.gap(&Vec3::new(0.0, 0.0, -h), &Vec3::new(0.0, 0.0, -lambda_w * h))?;
    Ok(g[(i, i)])
}

/// Picks the candidate with the largest `|gap_ii|`, ties to the smaller λ_w.
pub fn select_lambda_w(pair: &MaterialPair, axis: usize) -> Result<LambdaChoice> {
    let green = BimaterialGreen::new(*pair);
    let i = axis_index(axis)?;
    let mut candidates = [(0.0, 0.0); 3];
    let mut best = 0;
    let mut zero = true;
    for (n, &lw) in LAMBDA_W_CANDIDATES.iter().enumerate() {
        let y = Vec3::new(0.0, 0.0, -1.0);
        let w = Vec3::new(0.0, 0.0, -lw);
        let v = green.gap(&y, &w)?[(i, i)];
        let kelvin = crate::kelvin::kelvin_matrix(&y, &w, &pair.host)?[(i, i)];
        if v.abs() > 1e-13 * kelvin.abs() {
            zero = false;
        }
        candidates[n] = (lw, v);
        if v.abs() > candidates[best].1.abs() {
            best = n;
        }
    }
    if zero {
        return Err(Error::AllCandidatesZero(axis));
    }
    Ok(LambdaChoice { axis, lambda_w: candidates[best].0, value: candidates[best].1, candidates })
}

/// Inclusive sampling range `lo..=hi` with `n ≥ 2` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SampleRange {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl SampleRange {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self> {
        if n < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::OutOfBounds(format!("bad range {lo}:{hi}:{n}")));
        }
        Ok(Self { lo, hi, n })
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.point(i)).collect()
    }
}

impl FromStr for SampleRange {
    type Err = Error;
    /// `lo:hi:n`
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::ConfigParse(format!("expected lo:hi:n, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo = parts[0].trim().parse().map_err(|_| bad())?;
        let hi = parts[1].trim().parse().map_err(|_| bad())?;
        let n = parts[2].trim().parse().map_err(|_| bad())?;
        Self::new(lo, hi, n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NuISampling {
    Range(SampleRange),
    /// The slice `ν^I = ν`.
    EqualNu,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanGrid {
    pub nu: SampleRange,
    pub nu_i: NuISampling,
    pub s: SampleRange,
}

/// Sampled `Q2` values and the bracketed zero crossings in `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroLocusScan {
    pub samples: ScanDataset,
    pub crossings: ScanDataset,
}

/// Tolerance in `s` for bisected zero crossings.
pub const CROSSING_TOLERANCE: f64 = 1e-10;

struct FloatPoly(Vec<(f64, [i32; 3])>);

impl FloatPoly {
    fn new(p: &MultiPoly) -> Self {
        Self(p.terms().map(|(e, c)| (to_f64(c), [e[0] as i32, e[1] as i32, e[2] as i32])).collect())
    }

    fn eval(&self, x: [f64; 3]) -> f64 {
        self.0.iter().map(|(c, e)| c * x[0].powi(e[0]) * x[1].powi(e[1]) * x[2].powi(e[2])).sum()
    }
}

fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > CROSSING_TOLERANCE {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

pub fn zero_locus_scan(case: GapCase, grid: &ScanGrid) -> ZeroLocusScan {
    let q = FloatPoly::new(&q2_polynomial(case));
    let nus = grid.nu.points();
    let pairs: Vec<(f64, f64)> = match grid.nu_i {
        NuISampling::EqualNu => nus.iter().map(|&n| (n, n)).collect(),
        NuISampling::Range(r) => nus.iter().flat_map(|&n| r.points().into_iter().map(move |m| (n, m))).collect(),
    };
    let ss = grid.s.points();
    let per_pair = par::map_range(pairs.len(), |k| {
        let (nu, nu_i) = pairs[k];
        let f = |s: f64| q.eval([nu, nu_i, s]);
        let vals: Vec<f64> = ss.iter().map(|&s| f(s)).collect();
        let mut roots = Vec::new();
        for j in 0..ss.len() {
            if vals[j] == 0.0 {
                roots.push(ss[j]);
            } else if j + 1 < ss.len() && vals[j + 1] != 0.0 && (vals[j] < 0.0) != (vals[j + 1] < 0.0) {
                roots.push(bisect(f, ss[j], ss[j + 1], vals[j]));
            }
        }
        let crossings: Vec<(f64, f64)> = roots.into_iter().map(|s| (s, f(s))).collect();
        (vals, crossings)
    });
    let mut samples = ScanDataset::new(ScanKind::ZeroLocus);
    let mut crossings = ScanDataset::new(ScanKind::ZeroCrossings);
    let row = |nu: f64, nu_i: f64, s: f64, v: f64| vec![case.as_str().into(), nu.into(), nu_i.into(), s.into(), v.into()];
    for ((nu, nu_i), (vals, roots)) in pairs.iter().zip(per_pair) {
        for (s, v) in ss.iter().zip(vals) {
            samples.push(row(*nu, *nu_i, *s, v));
        }
        for (s, v) in roots {
            crossings.push(row(*nu, *nu_i, s, v));
        }
    }
    ZeroLocusScan { samples, crossings }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupProfile {
    pub axis: usize,
    pub lambda_w: f64,
    /// `(h, |gap_ii|)`
    pub rows: Vec<(f64, f64)>,
}

impl BlowupProfile {
    pub fn slope(&self) -> f64 {
        loglog_slope(&self.rows)
    }

    pub fn to_dataset(&self) -> ScanDataset {
        let mut d = ScanDataset::new(ScanKind::Blowup);
        for &(h, g) in &self.rows {
            d.push(vec![h.into(), g.into(), self.axis.into(), self.lambda_w.into()]);
        }
        d
    }
}

/// `|gap_ii|` at `y = (0,0,−h)`, `w = (0,0,−λ_w h)` over the given heights.
pub fn blowup_profile(pair: &MaterialPair, axis: usize, lambda_w: f64, h_list: &[f64]) -> Result<BlowupProfile> {
    if !(lambda_w > 0.0 && lambda_w < 1.0) {
        return Err(Error::OutOfBounds(format!("lambda_w = {lambda_w} not in (0, 1)")));
    }
    if let Some(h) = h_list.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
        return Err(Error::OutOfBounds(format!("height {h} must be positive")));
    }
    if h_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::OutOfBounds("heights must be strictly decreasing".into()));
    }
    let green = BimaterialGreen::new(*pair);
    let rows = h_list
        .iter()
        .map(|&h| Ok((h, axis_gap(&green, axis, lambda_w, h)?.abs())))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlowupProfile { axis, lambda_w, rows })
}

/// Logarithmically spaced heights from `hi` down to `lo`, `per_decade`
/// points per decade.
pub fn log_heights(hi: f64, lo: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round().max(1.0) as usize;
    (0..=n).map(|k| hi * (lo / hi).powf(k as f64 / n as f64)).collect()
}
