//! Analysis configuration: JSON file values merged with command-line overrides.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::indices::{Rope, Thresholds};
use crate::posterior::MIN_GRID_POINTS;
use crate::ttest::{Alternative, CauchyPrior, Hypotheses, PriorPreset};

/// Partially specified configuration, as read from a JSON file or assembled
/// from flags. Unknown keys are rejected.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigLayer {
    pub prior_scale: Option<f64>,
    pub prior_preset: Option<PriorPreset>,
    pub rope: Option<Rope>,
    pub hpd_mass: Option<f64>,
    pub null_value: Option<f64>,
    pub alternative: Option<Alternative>,
    pub grid_size: Option<usize>,
    pub thresholds: Option<Thresholds>,
    pub seed: Option<u64>,
}

impl ConfigLayer {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        ConfigLayer::from_json(&text)
    }

    fn check_prior_exclusive(&self, source: &str) -> Result<()> {
        if self.prior_scale.is_some() && self.prior_preset.is_some() {
            return Err(Error::Config(format!(
                "{source} sets both prior_scale and prior_preset; use one"
            )));
        }
        Ok(())
    }

    /// `over` wins wherever it sets a value. Setting either prior key in
    /// `over` replaces both prior keys of `self`.
    pub fn merge(self, over: ConfigLayer) -> Result<Self> {
        self.check_prior_exclusive("config file")?;
        over.check_prior_exclusive("command line")?;
        let (prior_scale, prior_preset) =
            if over.prior_scale.is_some() || over.prior_preset.is_some() {
                (over.prior_scale, over.prior_preset)
            } else {
                (self.prior_scale, self.prior_preset)
            };
        Ok(ConfigLayer {
            prior_scale,
            prior_preset,
            rope: over.rope.or(self.rope),
            hpd_mass: over.hpd_mass.or(self.hpd_mass),
            null_value: over.null_value.or(self.null_value),
            alternative: over.alternative.or(self.alternative),
            grid_size: over.grid_size.or(self.grid_size),
            thresholds: over.thresholds.or(self.thresholds),
            seed: over.seed.or(self.seed),
        })
    }

    pub fn resolve(self) -> Result<AnalysisConfig> {
        self.check_prior_exclusive("configuration")?;
        let prior_scale = match (self.prior_scale, self.prior_preset) {
            (_, Some(p)) => p.scale(),
            (Some(s), None) => s,
            (None, None) => 1.0,
        };
        let config = AnalysisConfig {
            prior_scale,
            prior_preset: self.prior_preset,
            rope: self.rope.unwrap_or_default(),
            hpd_mass: self.hpd_mass.unwrap_or(0.95),
            null_value: self.null_value.unwrap_or(0.0),
            alternative: self.alternative.unwrap_or_default(),
            grid_size: self.grid_size.unwrap_or(DEFAULT_GRID_SIZE),
            thresholds: self.thresholds.unwrap_or_default(),
            seed: self.seed,
        };
        config.validate()?;
        Ok(config)
    }
}

pub const DEFAULT_GRID_SIZE: usize = 4096;

/// Fully resolved settings for one analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisConfig {
    pub prior_scale: f64,
    pub prior_preset: Option<PriorPreset>,
    pub rope: Rope,
    pub hpd_mass: f64,
    pub null_value: f64,
    pub alternative: Alternative,
    pub grid_size: usize,
    pub thresholds: Thresholds,
    pub seed: Option<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        ConfigLayer::default()
            .resolve()
            .expect("defaults are valid")
    }
}

fn unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "{name} must lie strictly between 0 and 1, got {v}"
        )))
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.prior_scale > 0.0) || !self.prior_scale.is_finite() {
            return Err(Error::Config(format!(
                "prior_scale must be positive, got {}",
                self.prior_scale
            )));
        }
        unit_open("hpd_mass", self.hpd_mass)?;
        unit_open("thresholds.pd", self.thresholds.pd)?;
        unit_open("thresholds.p_map", self.thresholds.p_map)?;
        unit_open("thresholds.ev", self.thresholds.ev)?;
        if !self.null_value.is_finite() {
            return Err(Error::Config("null_value must be finite".into()));
        }
        if !self.rope.contains(self.null_value) {
            return Err(Error::Config(format!(
                "rope [{}, {}] does not contain null_value {}",
                self.rope.lower(),
                self.rope.upper(),
                self.null_value
            )));
        }
        if self.grid_size < MIN_GRID_POINTS {
            return Err(Error::Config(format!(
                "grid_size must be at least {MIN_GRID_POINTS}, got {}",
                self.grid_size
            )));
        }
        Ok(())
    }

    pub fn prior(&self) -> Result<CauchyPrior> {
        CauchyPrior::new(self.prior_scale)
    }

    pub fn hypotheses(&self) -> Hypotheses {
        Hypotheses {
            null_value: self.null_value,
            alternative: self.alternative,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let c = AnalysisConfig::default();
        assert_eq!(c.prior_scale, 1.0);
        assert_eq!(c.rope, Rope::effect_size_default());
        assert_eq!(c.hpd_mass, 0.95);
        assert_eq!(c.grid_size, 4096);
        assert_eq!(c.alternative, Alternative::TwoSided);
        assert_eq!(c.thresholds, Thresholds::default());
        assert_eq!(c.seed, None);
    }

    #[test]
    fn parses_full_file() {
        let c = ConfigLayer::from_json(
            r#"{"prior_preset": "ultrawide", "rope": {"lower": -0.2, "upper": 0.2},
                "hpd_mass": 0.9, "null_value": 0.0, "alternative": "greater",
                "grid_size": 2048, "thresholds": {"pd": 0.975}, "seed": 4}"#,
        )
        .unwrap()
        .resolve()
        .unwrap();
        assert_eq!(c.prior_scale, std::f64::consts::SQRT_2);
        assert_eq!(c.alternative, Alternative::Greater);
        assert_eq!(c.thresholds.pd, 0.975);
        assert_eq!(c.thresholds.p_map, 0.05);
        assert_eq!(c.seed, Some(4));
    }

    #[test]
    fn unknown_key_is_named() {
        let err = ConfigLayer::from_json(r#"{"prior_scal": 1.0}"#).unwrap_err();
        assert!(err.to_string().contains("prior_scal"), "{err}");
        let err = ConfigLayer::from_json(r#"{"thresholds": {"bf": 3}}"#).unwrap_err();
        assert!(err.to_string().contains("bf"), "{err}");
    }

    #[test]
    fn preset_and_scale_are_exclusive() {
        let both =
            ConfigLayer::from_json(r#"{"prior_scale": 1.0, "prior_preset": "wide"}"#).unwrap();
        assert!(both.clone().resolve().is_err());
        assert!(ConfigLayer::default().merge(both).is_err());
    }

    #[test]
    fn flags_override_file() {
        let file =
            ConfigLayer::from_json(r#"{"prior_preset": "medium", "hpd_mass": 0.9}"#).unwrap();
        let flags = ConfigLayer {
            prior_scale: Some(2.0),
            ..ConfigLayer::default()
        };
        let c = file.merge(flags).unwrap().resolve().unwrap();
        assert_eq!(c.prior_scale, 2.0);
        assert_eq!(c.prior_preset, None);
        assert_eq!(c.hpd_mass, 0.9);
    }

    #[test]
    fn invalid_values() {
        assert!(ConfigLayer::from_json(r#"{"rope": {"lower": 0.1, "upper": -0.1}}"#).is_err());
        for bad in [
            r#"{"hpd_mass": 1.5}"#,
            r#"{"grid_size": 10}"#,
            r#"{"prior_scale": -1}"#,
            r#"{"null_value": 0.5}"#,
        ] {
            assert!(
                ConfigLayer::from_json(bad)
                    .and_then(|c| c.resolve())
                    .is_err(),
                "{bad} should fail"
            );
        }
    }
}
