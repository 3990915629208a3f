//! TOML run configuration.
//!
//! Scenario keys live at the top level; command-specific keys live in a
//! table named after the command. Command-line flags override the file.
//!
//! ```toml
//! gamma = 1.4
//! geometry = "cylindrical"
//! h = 0.05
//! k = 1.0
//! x_end = 1000.0
//! rtol = 1e-10
//!
//! [evolve]
//! samples = 200
//! regime = "case1"
//!
//! [fit_shock]
//! pulse = "half-sine"
//! v0 = 0.1
//! tau0 = 1.0
//!
//! [ccw]
//! mach0 = 1.05
//! variant = "generalized"
//!
//! [compare]
//! h = 0.05
//! x_lo = 1e3
//! x_hi = 1e5
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;
use weakshock::ccw::CcwVariant;
use weakshock::compare::CompareConfig;
use weakshock::transport::Regime;
use weakshock::Geometry;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub gamma: Option<f64>,
    pub geometry: Option<Geometry>,
    pub h: Option<f64>,
    pub k: Option<f64>,
    pub x_end: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub out: Option<PathBuf>,
    pub evolve: EvolveSection,
    pub asymptote: EvolveSection,
    pub fit_shock: FitSection,
    pub ccw: CcwSection,
    pub compare: Option<CompareConfig>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveSection {
    pub samples: Option<usize>,
    pub regime: Option<Regime>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PulseKind {
    HalfSine,
    Ramp,
    Table,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSection {
    pub pulse: Option<PulseKind>,
    pub v0: Option<f64>,
    pub tau0: Option<f64>,
    /// Ramp slope `m`.
    pub slope: Option<f64>,
    /// Two-column `tau,v` CSV, relative paths resolved against the config file.
    pub file: Option<PathBuf>,
    pub x_start: Option<f64>,
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CcwSection {
    pub mach0: Option<f64>,
    pub variant: Option<CcwVariant>,
    pub samples: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut cfg: FileConfig =
            toml::from_str(&text).map_err(|e| format!("config {}: {e}", path.display()))?;
        if let (Some(f), Some(dir)) = (&cfg.fit_shock.file, path.parent()) {
            if f.is_relative() {
                cfg.fit_shock.file = Some(dir.join(f));
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_documented_example() {
        let text = r#"
            gamma = 1.4
            geometry = "cylindrical"
            h = 0.05
            k = 1.0
            x_end = 1000.0

            [evolve]
            samples = 200
            regime = "case1"

            [fit_shock]
            pulse = "half-sine"
            v0 = 0.1
            tau0 = 1.0

            [ccw]
            mach0 = 1.05
            variant = "generalized"

            [compare]
            h = 0.05
            x_lo = 1e3
        "#;
        let cfg: FileConfig = toml::from_str(text).unwrap();
        assert_eq!(cfg.geometry, Some(Geometry::Cylindrical));
        assert_eq!(cfg.fit_shock.pulse, Some(PulseKind::HalfSine));
        assert_eq!(cfg.ccw.variant, Some(CcwVariant::Generalized));
        assert_eq!(cfg.compare.unwrap().x_hi, 1e5);
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = toml::from_str::<FileConfig>("gama = 1.4\n").unwrap_err();
        assert!(err.to_string().contains("gama"));
    }
}
