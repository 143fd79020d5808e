//! Serializable configuration for potentials, shared by file-based runs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Potential, PotentialFamily};

/// Potential keys of a run configuration.
///
/// ```toml
/// family = "gaussian"   # or "table", "zero", "free"
/// amplitude = 0.1
/// width = 5.0
/// dimension = 1
/// # samples = [[0.0, 1.0], [2.0, 0.0]]   # table family only
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialConfig {
    pub family: String,
    #[serde(default)]
    pub amplitude: Option<f64>,
    #[serde(default)]
    pub width: Option<f64>,
    #[serde(default)]
    pub dimension: Option<usize>,
    #[serde(default)]
    pub samples: Option<Vec<(f64, f64)>>,
}

impl PotentialConfig {
    /// Builds the potential; `dimension` falls back to `default_dim`.
    pub fn build(&self, default_dim: usize) -> Result<Potential> {
        let dim = self.dimension.unwrap_or(default_dim);
        let need = |v: Option<f64>, name: &'static str| {
            v.ok_or_else(|| Error::param(name, format!("required for family {:?}", self.family)))
        };
        match self.family.as_str() {
            "gaussian" => Potential::gaussian(need(self.amplitude, "amplitude")?, need(self.width, "width")?, dim),
            "zero" => Potential::zero_mode(need(self.amplitude, "amplitude")?, dim),
            "free" => Ok(Potential::free(dim)),
            "table" => Potential::table(
                self.samples
                    .clone()
                    .ok_or_else(|| Error::param("samples", "required for family \"table\""))?,
                dim,
            ),
            other => Err(Error::param("family", format!("unknown family {other:?}"))),
        }
    }

    pub fn from_potential(pot: &Potential) -> Self {
        let mut cfg = Self {
            family: String::new(),
            amplitude: None,
            width: None,
            dimension: Some(pot.dim()),
            samples: None,
        };
        match pot.family() {
            PotentialFamily::Gaussian { amplitude, .. } if *amplitude == 0.0 => cfg.family = "free".into(),
            PotentialFamily::Gaussian { amplitude, width } => {
                cfg.family = "gaussian".into();
                cfg.amplitude = Some(*amplitude);
                cfg.width = Some(*width);
            }
            PotentialFamily::ZeroMode { amplitude } => {
                cfg.family = "zero".into();
                cfg.amplitude = Some(*amplitude);
            }
            PotentialFamily::Table { samples } => {
                cfg.family = "table".into();
                cfg.samples = Some(samples.clone());
            }
        }
        cfg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        for pot in [
            Potential::gaussian(7.5, 2.0, 2).unwrap(),
            Potential::zero_mode(0.3, 1).unwrap(),
            Potential::free(3),
            Potential::table(vec![(0.0, 1.0), (1.0, 0.0)], 1).unwrap(),
        ] {
            assert_eq!(PotentialConfig::from_potential(&pot).build(1).unwrap(), pot);
        }
    }

    #[test]
    fn missing_key_names_it() {
        let cfg = PotentialConfig {
            family: "gaussian".into(),
            amplitude: Some(1.0),
            width: None,
            dimension: None,
            samples: None,
        };
        match cfg.build(1) {
            Err(Error::InvalidParameter { name, .. }) => assert_eq!(name, "width"),
            other => panic!("{other:?}"),
        }
    }
}
