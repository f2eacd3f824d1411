//! TOML run configuration.
//!
//! Every key is optional; an empty file is the reference configuration.
//! Unknown keys are rejected. Rates, Rabi frequencies and detunings are in
//! units of γ, the density in m⁻³, the wavelength in nm and phases in
//! multiples of π.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::atomic::{ClosedFormOptions, DecayRates, Repairs, DEFAULT_DENOMINATOR_FLOOR};
use crate::constitutive::MediumConfig;
use crate::model::ModelSetup;
use crate::sweep::{Grid, Scenario, SweepPlan};

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub medium: MediumSection,
    pub drive: DriveSection,
    pub sweep: SweepSection,
    pub output: OutputSection,
    pub figures: FiguresSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MediumSection {
    pub atom_density: f64,
    pub wavelength_nm: f64,
    pub gamma_scale: f64,
    pub gamma21: f64,
    pub gamma31: f64,
    pub gamma42: f64,
    pub gamma43: f64,
    pub gamma_c: f64,
    pub paper_literal_mapping: bool,
    pub gamma6_includes_dephasing: bool,
    pub denominator_floor: f64,
    pub repairs: Repairs,
}

impl Default for MediumSection {
    fn default() -> Self {
        let rates = DecayRates::reference();
        let medium = MediumConfig::default();
        Self {
            atom_density: medium.atom_density,
            wavelength_nm: 600.0,
            gamma_scale: rates.gamma_scale,
            gamma21: rates.gamma21,
            gamma31: rates.gamma31,
            gamma42: rates.gamma42,
            gamma43: rates.gamma43,
            gamma_c: rates.gamma_c,
            paper_literal_mapping: medium.paper_literal_mapping,
            gamma6_includes_dephasing: false,
            denominator_floor: DEFAULT_DENOMINATOR_FLOOR,
            repairs: Repairs::PRINTED,
        }
    }
}

/// Curves sharing a phase, compared with each other.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveGroup {
    pub name: String,
    /// θ / π.
    pub theta_pi: f64,
    pub omega_c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DriveSection {
    pub omega_s: f64,
    pub delta_c: f64,
    pub delta_m: f64,
    pub delta_s: f64,
    pub groups: Vec<DriveGroup>,
}

impl Default for DriveSection {
    fn default() -> Self {
        Self {
            omega_s: 20.0,
            delta_c: 0.001,
            delta_m: 0.001,
            delta_s: 0.0,
            groups: vec![
                DriveGroup { name: "fig3a".into(), theta_pi: 0.2, omega_c: vec![0.4, 0.8, 1.3] },
                DriveGroup { name: "fig3b".into(), theta_pi: 1.5, omega_c: vec![1.0, 1.4, 1.8] },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub oracle_stride: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        let g = Grid::default();
        Self { start: g.start, stop: g.stop, count: g.count, oracle_stride: 50 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    /// Output directory; relative paths resolve against the output root.
    pub dir: PathBuf,
    pub formats: BTreeSet<Format>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), formats: [Format::Csv, Format::Json, Format::Svg].into() }
    }
}

impl OutputSection {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

/// Drive point for the chirality and ε/μ figures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FiguresSection {
    pub theta_pi: f64,
    pub omega_c: f64,
}

impl Default for FiguresSection {
    fn default() -> Self {
        Self { theta_pi: 0.2, omega_c: 1.3 }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: toml::de::Error },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text)
            .map_err(|source| ConfigError::Parse { path: PathBuf::from("<string>"), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| ConfigError::Io { path: path.to_path_buf(), source })?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|source| ConfigError::Parse { path: path.to_path_buf(), source })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.drive.groups.is_empty() {
            return Err(ConfigError::Invalid("drive.groups is empty".into()));
        }
        let mut labels = BTreeSet::new();
        for g in &self.drive.groups {
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
                return Err(ConfigError::Invalid(format!(
                    "group name {:?} must be non-empty ASCII letters, digits, '_' or '-'",
                    g.name
                )));
            }
            if g.omega_c.is_empty() {
                return Err(ConfigError::Invalid(format!("group {}: omega_c is empty", g.name)));
            }
            for s in self.group_scenarios(g) {
                if !labels.insert(s.label()) {
                    return Err(ConfigError::Invalid(format!("duplicate scenario {}", s.label())));
                }
            }
        }
        self.plan().validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let f = &self.figures;
        if !(f.theta_pi.is_finite() && f.omega_c.is_finite() && f.omega_c >= 0.0) {
            return Err(ConfigError::Invalid("figures drive point is invalid".into()));
        }
        Ok(())
    }

    pub fn setup(&self) -> ModelSetup {
        let m = &self.medium;
        ModelSetup {
            rates: DecayRates {
                gamma_scale: m.gamma_scale,
                gamma21: m.gamma21,
                gamma31: m.gamma31,
                gamma42: m.gamma42,
                gamma43: m.gamma43,
                gamma_c: m.gamma_c,
            },
            medium: MediumConfig {
                atom_density: m.atom_density,
                wavelength: m.wavelength_nm / 1e9,
                paper_literal_mapping: m.paper_literal_mapping,
            },
            gamma6_includes_dephasing: m.gamma6_includes_dephasing,
            closed_form: ClosedFormOptions {
                repairs: m.repairs,
                denominator_floor: m.denominator_floor,
            },
        }
    }

    fn group_scenarios(&self, g: &DriveGroup) -> Vec<Scenario> {
        g.omega_c.iter().map(|&oc| Scenario::new(&g.name, g.theta_pi * PI, oc)).collect()
    }

    /// All drive groups as one plan, scenarios in file order.
    pub fn plan(&self) -> SweepPlan {
        self.plan_for(self.drive.groups.iter().flat_map(|g| self.group_scenarios(g)).collect())
    }

    pub fn plan_for(&self, scenarios: Vec<Scenario>) -> SweepPlan {
        SweepPlan {
            grid: Grid { start: self.sweep.start, stop: self.sweep.stop, count: self.sweep.count },
            scenarios,
            setup: self.setup(),
            omega_s: self.drive.omega_s,
            delta_c: self.drive.delta_c,
            delta_m: self.drive.delta_m,
            delta_s: self.drive.delta_s,
            oracle_stride: self.sweep.oracle_stride,
        }
    }

    pub fn figure_scenario(&self) -> Scenario {
        Scenario::new("figure", self.figures.theta_pi * PI, self.figures.omega_c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_reference_configuration() {
        let cfg = RunConfig::from_toml_str("").unwrap();
        assert_eq!(cfg, RunConfig::default());
        let plan = cfg.plan();
        assert_eq!(plan.setup, ModelSetup::default());
        assert_eq!(plan.scenarios.len(), 6);
        let fig3a: Vec<_> = plan.scenarios[..3].to_vec();
        assert_eq!(fig3a, SweepPlan::default().scenarios);
        assert_eq!(plan.grid, Grid::default());
    }

    #[test]
    fn unknown_keys_are_rejected_with_location() {
        let err = RunConfig::from_toml_str("[medium]\natom_densty = 1e24\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("atom_densty"), "{msg}");
        assert!(msg.contains("line 2"), "{msg}");
        assert!(RunConfig::from_toml_str("[medium.repairs]\nall = true\n").is_err());
        assert!(RunConfig::from_toml_str("[plot]\n").is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        for text in [
            "[sweep]\ncount = 1\n",
            "[medium]\ngamma31 = -1.0\n",
            "[medium]\nwavelength_nm = 0.0\n",
            "[drive]\ngroups = []\n",
            "[[drive.groups]]\nname = \"a\"\ntheta_pi = 0.0\nomega_c = [1.0, 1.0]\n",
            "[[drive.groups]]\nname = \"a/b\"\ntheta_pi = 0.0\nomega_c = [1.0]\n",
            "[output]\nformats = [\"png\"]\n",
        ] {
            assert!(RunConfig::from_toml_str(text).is_err(), "{text}");
        }
    }

    #[test]
    fn units_convert_once() {
        let cfg = RunConfig::from_toml_str("[medium]\nwavelength_nm = 780.0\n").unwrap();
        assert_eq!(cfg.setup().medium.wavelength, 780e-9);
    }
}
