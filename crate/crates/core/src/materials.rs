//! Isotropic elastic constants and admissibility checks for host/inclusion
//! pairs.

use serde::{Deserialize, Serialize};

use crate::{Error, Mat3, Result};

/// Bounds that every admissible material has to respect.
///
/// `rho0` is the length normalization and is fixed to 1; `m0`, `m1` and
/// `alpha` describe the interface regularity and are only carried along for
/// the geometry and oracle modules.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AprioriData {
    pub alpha0: f64,
    pub gamma0: f64,
    pub mu_bar: f64,
    pub lambda_bar: f64,
    pub eta0: f64,
    pub rho0: f64,
    pub m0: f64,
    pub m1: f64,
    pub alpha: f64,
}

impl Default for AprioriData {
    fn default() -> Self {
        Self {
            alpha0: 1e-6,
            gamma0: 1e-6,
            mu_bar: 1e6,
            lambda_bar: 1e6,
            eta0: 1e-3,
            rho0: 1.0,
            m0: 1.0,
            m1: 1.0,
            alpha: 0.5,
        }
    }
}

impl AprioriData {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("alpha0", self.alpha0),
            ("gamma0", self.gamma0),
            ("mu_bar", self.mu_bar),
            ("eta0", self.eta0),
            ("rho0", self.rho0),
            ("m0", self.m0),
            ("m1", self.m1),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidApriori(format!("{name} must be positive, got {v}")));
            }
        }
        if !self.lambda_bar.is_finite() {
            return Err(Error::InvalidApriori("lambda_bar must be finite".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidApriori(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        Ok(())
    }

    /// Ellipticity constant ξ0 = min{2·alpha0, gamma0}.
    pub fn ellipticity(&self) -> f64 {
        (2.0 * self.alpha0).min(self.gamma0)
    }
}

/// A validated isotropic material `(μ, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LameMaterial {
    mu: f64,
    lambda: f64,
}

impl LameMaterial {
    /// Builds a material and checks strong convexity and the upper bounds.
    pub fn new(mu: f64, lambda: f64, apriori: &AprioriData) -> Result<Self> {
        if !(mu.is_finite() && lambda.is_finite()) {
            return Err(Error::OutOfBounds(format!("non-finite moduli ({mu}, {lambda})")));
        }
        let bulk = 2.0 * mu + 3.0 * lambda;
        if mu < apriori.alpha0 || bulk < apriori.gamma0 {
            return Err(Error::NotStronglyConvex { mu, bulk });
        }
        if mu > apriori.mu_bar {
            return Err(Error::OutOfBounds(format!("mu = {mu} > mu_bar = {}", apriori.mu_bar)));
        }
        if lambda > apriori.lambda_bar {
            return Err(Error::OutOfBounds(format!(
                "lambda = {lambda} > lambda_bar = {}",
                apriori.lambda_bar
            )));
        }
        Ok(Self { mu, lambda })
    }

    /// Builds a material from shear modulus and Poisson ratio, validated
    /// against the default a-priori data.
    pub fn from_poisson(mu: f64, nu: f64) -> Result<Self> {
        Self::from_poisson_with(mu, nu, &AprioriData::default())
    }

    pub fn from_poisson_with(mu: f64, nu: f64, apriori: &AprioriData) -> Result<Self> {
        if !(nu > -1.0 && nu < 0.5) {
            return Err(Error::PoissonOutOfRange(nu));
        }
        Self::new(mu, 2.0 * mu * nu / (1.0 - 2.0 * nu), apriori)
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// ν = λ / (2(λ + μ)).
    pub fn poisson_ratio(&self) -> f64 {
        self.lambda / (2.0 * (self.lambda + self.mu))
    }

    /// `(C A)_ij = λ tr(A) δ_ij + μ (A_ij + A_ji)`.
    pub fn apply(&self, a: &Mat3) -> Mat3 {
        Mat3::identity() * (self.lambda * a.trace()) + (a + a.transpose()) * self.mu
    }

    /// Component `C_ijkl = λ δ_ij δ_kl + μ (δ_ki δ_lj + δ_li δ_kj)`.
    pub fn component(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
        self.lambda * d(i, j) * d(k, l) + self.mu * (d(k, i) * d(l, j) + d(l, i) * d(k, j))
    }

    /// Lower bound of `C A · A / |A|²` over symmetric `A`.
    pub fn ellipticity(&self) -> f64 {
        (2.0 * self.mu).min(2.0 * self.mu + 3.0 * self.lambda)
    }
}

/// Free-function form of [`LameMaterial::new`].
pub fn make_material(mu: f64, lambda: f64, apriori: &AprioriData) -> Result<LameMaterial> {
    LameMaterial::new(mu, lambda, apriori)
}

/// Free-function form of [`LameMaterial::from_poisson`].
pub fn material_from_poisson(mu: f64, nu: f64) -> Result<LameMaterial> {
    LameMaterial::from_poisson(mu, nu)
}

pub fn poisson_ratio(mat: &LameMaterial) -> f64 {
    mat.poisson_ratio()
}

pub fn apply_isotropic_tensor(mat: &LameMaterial, a: &Mat3) -> Mat3 {
    mat.apply(a)
}

/// Difference of two isotropic tensors, `C^I − C`, acting on matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TensorJump {
    pub d_lambda: f64,
    pub d_mu: f64,
}

impl TensorJump {
    pub fn apply(&self, a: &Mat3) -> Mat3 {
        Mat3::identity() * (self.d_lambda * a.trace()) + (a + a.transpose()) * self.d_mu
    }

    /// `(ΔC A) · B` for arbitrary (not necessarily symmetric) gradients.
    pub fn contract(&self, a: &Mat3, b: &Mat3) -> f64 {
        self.d_lambda * a.trace() * b.trace() + self.d_mu * (a + a.transpose()).dot(b)
    }
}

/// Host (background) and inclusion materials.
///
/// In the half-space setting the host fills `x3 < 0` and the inclusion
/// fills `x3 > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaterialPair {
    pub host: LameMaterial,
    pub inclusion: LameMaterial,
}

impl MaterialPair {
    /// Pairs two materials without the minimum-jump check. Used for the
    /// homogeneous limit and by the swap-and-reflect construction.
    pub fn unchecked(host: LameMaterial, inclusion: LameMaterial) -> Self {
        Self { host, inclusion }
    }

    pub fn homogeneous(mat: LameMaterial) -> Self {
        Self::unchecked(mat, mat)
    }

    pub fn swapped(&self) -> Self {
        Self::unchecked(self.inclusion, self.host)
    }

    /// `((λ−λ^I)² + (μ−μ^I)²)^{1/2}`.
    pub fn lame_jump(&self) -> f64 {
        (self.host.lambda - self.inclusion.lambda).hypot(self.host.mu - self.inclusion.mu)
    }

    /// `((ν−ν^I)² + (μ−μ^I)²)^{1/2}`.
    pub fn poisson_jump(&self) -> f64 {
        (self.host.poisson_ratio() - self.inclusion.poisson_ratio()).hypot(self.host.mu - self.inclusion.mu)
    }

    /// `C^I − C`.
    pub fn jump(&self) -> TensorJump {
        TensorJump {
            d_lambda: self.inclusion.lambda - self.host.lambda,
            d_mu: self.inclusion.mu - self.host.mu,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.host == self.inclusion
    }
}

/// Checks the minimum-jump condition and returns the pair.
pub fn validate_pair(host: LameMaterial, inclusion: LameMaterial, apriori: &AprioriData) -> Result<MaterialPair> {
    let pair = MaterialPair::unchecked(host, inclusion);
    let jump = pair.lame_jump();
    if jump < apriori.eta0 {
        return Err(Error::JumpTooSmall { jump, eta0: apriori.eta0 });
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn defaults() -> AprioriData {
        AprioriData::default()
    }

    #[test]
    fn make_material_examples() {
        let m = make_material(1.0, 1.0, &defaults()).unwrap();
        assert_eq!(m.poisson_ratio(), 0.25);
        let strict = AprioriData { gamma0: 0.5, ..defaults() };
        assert!(matches!(
            make_material(1.0, -1.0, &strict),
            Err(Error::NotStronglyConvex { .. })
        ));
        let m = make_material(2.0, 0.5, &defaults()).unwrap();
        assert_relative_eq!(m.poisson_ratio(), 0.1, max_relative = 1e-15);
        assert!(matches!(make_material(2e6, 0.0, &defaults()), Err(Error::OutOfBounds(_))));
        assert!(matches!(make_material(1.0, 2e6, &defaults()), Err(Error::OutOfBounds(_))));
        assert!(make_material(f64::NAN, 0.0, &defaults()).is_err());
    }

    #[test]
    fn from_poisson_examples() {
        assert_eq!(material_from_poisson(1.0, 0.25).unwrap().lambda(), 1.0);
        assert_eq!(material_from_poisson(1.0, 0.0).unwrap().lambda(), 0.0);
        assert_relative_eq!(material_from_poisson(3.0, 1.0 / 3.0).unwrap().lambda(), 6.0, max_relative = 1e-14);
        assert!(matches!(material_from_poisson(1.0, 0.5), Err(Error::PoissonOutOfRange(_))));
        assert!(matches!(material_from_poisson(1.0, -1.0), Err(Error::PoissonOutOfRange(_))));
    }

    #[test]
    fn poisson_examples() {
        let apr = defaults();
        assert_eq!(make_material(1.0, 0.0, &apr).unwrap().poisson_ratio(), 0.0);
        assert_relative_eq!(make_material(1.0, 4.0, &apr).unwrap().poisson_ratio(), 0.4, max_relative = 1e-15);
    }

    #[test]
    fn poisson_round_trip_grid() {
        for k in 0..=139 {
            let nu = -0.9 + 0.01 * k as f64;
            let m = material_from_poisson(1.7, nu).unwrap();
            let back = m.poisson_ratio();
            if nu == 0.0 {
                assert_eq!(back, 0.0);
            } else {
                assert!(((back - nu) / nu).abs() <= 1e-14, "nu={nu} back={back}");
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let m = make_material(1.0, 1.0, &defaults()).unwrap();
        assert_eq!(m.apply(&Mat3::identity()), Mat3::identity() * 5.0);
        let anti = Mat3::new(0.0, 1.0, -2.0, -1.0, 0.0, 3.0, 2.0, -3.0, 0.0);
        assert_eq!(m.apply(&anti), Mat3::zeros());
        let m = make_material(2.0, 0.0, &defaults()).unwrap();
        let mut e12 = Mat3::zeros();
        e12[(0, 1)] = 1.0;
        let mut expect = Mat3::zeros();
        expect[(0, 1)] = 2.0;
        expect[(1, 0)] = 2.0;
        assert_eq!(m.apply(&e12), expect);
    }

    #[test]
    fn tensor_symmetries_on_basis() {
        let m = make_material(1.3, -0.4, &defaults()).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                let mut basis = Mat3::zeros();
                basis[(k, l)] = 1.0;
                let image = m.apply(&basis);
                for i in 0..3 {
                    for j in 0..3 {
                        let c = m.component(i, j, k, l);
                        assert_eq!(image[(i, j)], c);
                        assert_eq!(c, m.component(k, l, i, j));
                        assert_eq!(c, m.component(l, k, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn pair_validation() {
        let apr = AprioriData { eta0: 0.5, ..defaults() };
        let a = make_material(1.0, 1.0, &apr).unwrap();
        assert!(matches!(validate_pair(a, a, &apr), Err(Error::JumpTooSmall { .. })));
        let b = make_material(2.0, 1.0, &apr).unwrap();
        let p = validate_pair(a, b, &apr).unwrap();
        assert_eq!(p.lame_jump(), 1.0);
        let apr = AprioriData { eta0: 0.1, ..defaults() };
        let c = make_material(1.05, 1.05, &apr).unwrap();
        match validate_pair(a, c, &apr) {
            Err(Error::JumpTooSmall { jump, .. }) => assert_relative_eq!(jump, 0.05 * 2f64.sqrt(), max_relative = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ellipticity_on_symmetric_matrices(
            mu in 0.01f64..10.0,
            lam_frac in -0.66f64..5.0,
            entries in proptest::array::uniform6(-1.0f64..1.0),
        ) {
            let m = make_material(mu, lam_frac * mu, &defaults()).unwrap();
            let [a, b, c, d, e, f] = entries;
            let s = Mat3::new(a, d, e, d, b, f, e, f, c);
            let lhs = m.apply(&s).dot(&s);
            prop_assert!(lhs >= m.ellipticity() * s.norm_squared() - 1e-12);
        }
    }
}
