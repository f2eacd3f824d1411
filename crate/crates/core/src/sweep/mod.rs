//! Detuning sweeps of the full pipeline, negative-index band detection and
//! per-scenario metrics.

mod bands;
mod metrics;

pub use bands::{antisymmetry_in_range, detect_negative_bands, is_non_decreasing, Band, BandReport, SignCensus};
pub use metrics::{summarize_group, summarize_metrics, GroupSummary, ScenarioMetrics};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::atomic::{DetuningSet, DriveConfig};
use crate::constitutive::ChiralConstitutive;
use crate::error::{Error, Result};
use crate::model::{evaluate_point, ModelSetup};
use crate::oracle::{check_point, OracleCheckPoint};

/// Uniform Δ_p grid, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { start: -5.0, stop: 5.0, count: 2001 }
    }
}

impl Grid {
    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::InvalidPlan("grid bounds must be finite".into()));
        }
        if self.count < 2 {
            return Err(Error::InvalidPlan(format!("grid count {} < 2", self.count)));
        }
        if !(self.stop > self.start) {
            return Err(Error::InvalidPlan("grid must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.stop - self.start) / (self.count - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let last = self.count - 1;
        (0..self.count)
            .map(|k| {
                if k == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * (k as f64 / last as f64)
                }
            })
            .collect()
    }
}

/// One (θ, Ω_c) curve. `group` ties curves that are compared with each
/// other (one figure panel).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub group: String,
    pub theta: f64,
    pub omega_c: f64,
}

impl Scenario {
    pub fn new(group: &str, theta: f64, omega_c: f64) -> Self {
        Self { group: group.to_string(), theta, omega_c }
    }

    /// File-stem label, e.g. `fig3a_omega_c_0.4`.
    pub fn label(&self) -> String {
        format!("{}_omega_c_{:?}", self.group, self.omega_c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepPlan {
    pub grid: Grid,
    pub scenarios: Vec<Scenario>,
    pub setup: ModelSetup,
    pub omega_s: f64,
    pub delta_c: f64,
    pub delta_m: f64,
    pub delta_s: f64,
    /// Run the oracle on every k-th grid point.
    pub oracle_stride: usize,
}

impl Default for SweepPlan {
    fn default() -> Self {
        let theta = 0.2 * std::f64::consts::PI;
        Self {
            grid: Grid::default(),
            scenarios: [0.4, 0.8, 1.3].iter().map(|&oc| Scenario::new("fig3a", theta, oc)).collect(),
            setup: ModelSetup::default(),
            omega_s: 20.0,
            delta_c: 0.001,
            delta_m: 0.001,
            delta_s: 0.0,
            oracle_stride: 50,
        }
    }
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.setup.validate().map_err(|e| Error::InvalidPlan(e.to_string()))?;
        if self.oracle_stride == 0 {
            return Err(Error::InvalidPlan("oracle stride must be >= 1".into()));
        }
        for s in &self.scenarios {
            self.drive(s).validate().map_err(|e| Error::InvalidPlan(format!("{}: {e}", s.label())))?;
        }
        self.detunings(0.0).validate().map_err(|e| Error::InvalidPlan(e.to_string()))?;
        Ok(())
    }

    pub fn drive(&self, scenario: &Scenario) -> DriveConfig {
        DriveConfig { omega_c: scenario.omega_c, omega_s: self.omega_s, theta: scenario.theta }
    }

    pub fn detunings(&self, delta_p: f64) -> DetuningSet {
        DetuningSet { delta_p, delta_c: self.delta_c, delta_s: self.delta_s, delta_m: self.delta_m }
    }

    /// Grid indices visited by the oracle.
    pub fn oracle_indices(&self) -> Vec<usize> {
        (0..self.grid.count).step_by(self.oracle_stride.max(1)).collect()
    }
}

/// Why a grid point carries no values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointFlag {
    /// Closed-form denominator below its floor.
    Pole,
    /// Local-field determinant below its floor.
    LocalFieldSingular,
}

impl PointFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            PointFlag::Pole => "pole",
            PointFlag::LocalFieldSingular => "local_field_singular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRecord {
    pub delta_p: f64,
    pub value: std::result::Result<ChiralConstitutive, PointFlag>,
}

impl SpectrumRecord {
    pub fn constitutive(&self) -> Option<&ChiralConstitutive> {
        self.value.as_ref().ok()
    }

    pub fn flag(&self) -> Option<PointFlag> {
        self.value.err()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpectrum {
    pub scenario: Scenario,
    pub records: Vec<SpectrumRecord>,
}

fn evaluate(plan: &SweepPlan, drive: &DriveConfig, delta_p: f64) -> Result<SpectrumRecord> {
    let value = match evaluate_point(&plan.setup, drive, &plan.detunings(delta_p)) {
        Ok(p) => Ok(p.constitutive),
        Err(Error::SingularDenominator { .. }) => Err(PointFlag::Pole),
        Err(Error::LocalFieldSingular { .. }) => Err(PointFlag::LocalFieldSingular),
        Err(e) => return Err(e),
    };
    Ok(SpectrumRecord { delta_p, value })
}

/// Evaluate one scenario at arbitrary detunings, in the order given.
pub fn run_scenario_on(
    plan: &SweepPlan,
    scenario: &Scenario,
    points: &[f64],
) -> Result<Vec<SpectrumRecord>> {
    let drive = plan.drive(scenario);
    points.par_iter().map(|&dp| evaluate(plan, &drive, dp)).collect()
}

/// One record per grid point per scenario, in grid order and plan order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<ScenarioSpectrum>> {
    plan.validate()?;
    let points = plan.grid.points();
    plan.scenarios
        .iter()
        .map(|s| {
            Ok(ScenarioSpectrum { scenario: s.clone(), records: run_scenario_on(plan, s, &points)? })
        })
        .collect()
}

/// Oracle comparison at every `oracle_stride`-th grid point of a scenario.
pub fn run_oracle_checks(plan: &SweepPlan, scenario: &Scenario) -> Result<Vec<OracleCheckPoint>> {
    plan.validate()?;
    let points = plan.grid.points();
    let drive = plan.drive(scenario);
    plan.oracle_indices()
        .par_iter()
        .map(|&k| check_point(&plan.setup, &drive, &plan.detunings(points[k])))
        .collect()
}
