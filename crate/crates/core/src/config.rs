//! JSON material configuration.
//!
//! ```json
//! {"host": {"mu": 1.0, "nu": 0.3}, "inclusion": {"mu": 3.0, "lambda": 2.0},
//!  "apriori": {"eta0": 1e-2}}
//! ```
//!
//! Each material gives `mu` and exactly one of `lambda` or `nu`. The
//! `apriori` block is optional and overrides individual default bounds.

use std::path::Path;

use serde::{Deserialize, Deserializer, Serialize};

use crate::materials::{validate_pair, AprioriData, LameMaterial, MaterialPair};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(untagged)]
pub enum MaterialSpec {
    Lame { mu: f64, lambda: f64 },
    Poisson { mu: f64, nu: f64 },
}

impl<'de> Deserialize<'de> for MaterialSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            mu: f64,
            lambda: Option<f64>,
            nu: Option<f64>,
        }
        let r = Raw::deserialize(d)?;
        match (r.lambda, r.nu) {
            (Some(lambda), None) => Ok(MaterialSpec::Lame { mu: r.mu, lambda }),
            (None, Some(nu)) => Ok(MaterialSpec::Poisson { mu: r.mu, nu }),
            (Some(_), Some(_)) => Err(serde::de::Error::custom("give exactly one of lambda and nu, not both")),
            (None, None) => Err(serde::de::Error::custom("one of lambda or nu is required")),
        }
    }
}

impl MaterialSpec {
    pub fn build(&self, apriori: &AprioriData) -> Result<LameMaterial> {
        match *self {
            MaterialSpec::Lame { mu, lambda } => LameMaterial::new(mu, lambda, apriori),
            MaterialSpec::Poisson { mu, nu } => LameMaterial::from_poisson_with(mu, nu, apriori),
        }
    }
}

impl From<LameMaterial> for MaterialSpec {
    fn from(m: LameMaterial) -> Self {
        MaterialSpec::Lame { mu: m.mu(), lambda: m.lambda() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialConfig {
    pub host: MaterialSpec,
    pub inclusion: MaterialSpec,
    #[serde(default)]
    pub apriori: AprioriData,
}

impl MaterialConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
        cfg.apriori.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_pair(pair: &MaterialPair) -> Self {
        Self { host: pair.host.into(), inclusion: pair.inclusion.into(), apriori: AprioriData::default() }
    }

    /// Materials checked against the bounds and the minimum jump.
    pub fn pair(&self) -> Result<MaterialPair> {
        validate_pair(self.host.build(&self.apriori)?, self.inclusion.build(&self.apriori)?, &self.apriori)
    }

    /// Materials checked against the bounds only; equal materials allowed.
    pub fn pair_allowing_homogeneous(&self) -> Result<MaterialPair> {
        Ok(MaterialPair::unchecked(self.host.build(&self.apriori)?, self.inclusion.build(&self.apriori)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_parametrizations() {
        let c = MaterialConfig::from_json(
            r#"{"host": {"mu": 1.0, "nu": 0.25}, "inclusion": {"mu": 2.0, "lambda": 2.0}, "apriori": {"eta0": 0.5}}"#,
        )
        .unwrap();
        let p = c.pair().unwrap();
        assert_eq!(p.host.lambda(), 1.0);
        assert_eq!(p.inclusion.poisson_ratio(), 0.25);
        assert_eq!(c.apriori.eta0, 0.5);
        assert_eq!(c.apriori.mu_bar, AprioriData::default().mu_bar);
    }

    #[test]
    fn rejects_ambiguous_or_incomplete_materials() {
        for bad in [
            r#"{"host": {"mu": 1.0, "nu": 0.25, "lambda": 1.0}, "inclusion": {"mu": 2.0, "nu": 0.2}}"#,
            r#"{"host": {"mu": 1.0}, "inclusion": {"mu": 2.0, "nu": 0.2}}"#,
            r#"{"host": {"mu": 1.0, "nu": 0.25}, "inclusion": {"mu": 2.0, "nu": 0.2}, "extra": 1}"#,
            r#"{"host": {"mu": 1.0, "nu": 0.25}, "inclusion": {"mu": 2.0, "nu": 0.2}, "apriori": {"eta": 1}}"#,
            "not json",
        ] {
            assert!(matches!(MaterialConfig::from_json(bad), Err(Error::ConfigParse(_))), "{bad}");
        }
    }

    #[test]
    fn validation_errors_surface() {
        let same = r#"{"host": {"mu": 1.0, "nu": 0.25}, "inclusion": {"mu": 1.0, "nu": 0.25}}"#;
        let c = MaterialConfig::from_json(same).unwrap();
        assert!(matches!(c.pair(), Err(Error::JumpTooSmall { .. })));
        assert!(c.pair_allowing_homogeneous().unwrap().is_homogeneous());
        let bad_nu = r#"{"host": {"mu": 1.0, "nu": 0.5}, "inclusion": {"mu": 1.0, "nu": 0.25}}"#;
        assert!(matches!(MaterialConfig::from_json(bad_nu).unwrap().pair(), Err(Error::PoissonOutOfRange(_))));
        let bad_apriori = r#"{"host": {"mu": 1.0, "nu": 0.2}, "inclusion": {"mu": 2.0, "nu": 0.2}, "apriori": {"alpha": 2.0}}"#;
        assert!(matches!(MaterialConfig::from_json(bad_apriori), Err(Error::InvalidApriori(_))));
    }

    #[test]
    fn round_trips_through_json() {
        let c = MaterialConfig::from_json(r#"{"host": {"mu": 1.0, "nu": 0.25}, "inclusion": {"mu": 2.0, "lambda": 2.0}}"#)
            .unwrap();
        let back = MaterialConfig::from_json(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
    }
}
