use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{oracle_alpha_set, RotatingFrameModel};
use crate::atomic::{alpha_diagnostics, DetuningSet, DriveConfig, ReducedAlphas, Repairs};
use crate::error::Result;
use crate::model::ModelSetup;

/// Target agreement between closed form and oracle.
pub const FORMULA_TOLERANCE: f64 = 1e-6;
/// Maximum relative residual accepted from an oracle linear solve.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coefficient {
    #[serde(rename = "alpha_EE")]
    Ee,
    #[serde(rename = "alpha_EH")]
    Eh,
    #[serde(rename = "alpha_HE")]
    He,
    #[serde(rename = "alpha_HH")]
    Hh,
}

impl Coefficient {
    pub const ALL: [Coefficient; 4] =
        [Coefficient::Ee, Coefficient::Eh, Coefficient::He, Coefficient::Hh];

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::Ee => "alpha_EE",
            Coefficient::Eh => "alpha_EH",
            Coefficient::He => "alpha_HE",
            Coefficient::Hh => "alpha_HH",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl std::fmt::Display for Coefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Complex relative deviation |closed − oracle| / |oracle| per coefficient,
/// in `Coefficient::ALL` order. Two exact zeros count as agreement; a
/// nonzero closed value against an oracle zero reports its absolute size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaComparison {
    pub deviation: [f64; 4],
}

impl AlphaComparison {
    pub fn get(&self, c: Coefficient) -> f64 {
        self.deviation[c.index()]
    }

    pub fn max(&self) -> f64 {
        self.deviation.iter().copied().fold(0.0, f64::max)
    }
}

fn relative_deviation(closed: Complex64, oracle: Complex64) -> f64 {
    let diff = (closed - oracle).norm();
    if diff == 0.0 {
        0.0
    } else if oracle.norm() == 0.0 {
        diff
    } else {
        diff / oracle.norm()
    }
}

pub fn compare_alpha(oracle: &ReducedAlphas, closed: &ReducedAlphas) -> AlphaComparison {
    let (o, c) = (oracle.as_array(), closed.as_array());
    AlphaComparison { deviation: std::array::from_fn(|k| relative_deviation(c[k], o[k])) }
}

/// A correction to the printed expressions, with the human-readable
/// location of the suspected misprint.
struct Suspect {
    label: &'static str,
    toggle: fn(&mut Repairs),
}

const SUSPECTS: [Suspect; 3] = [
    Suspect {
        label: "A11 damping factor in alpha_EE (Gamma_1 printed, Gamma_2 required)",
        toggle: |r| r.a11_control_damping = false,
    },
    Suspect {
        label: "loop phase factor of alpha_HE (e^{i theta} printed, e^{-i theta} required)",
        toggle: |r| r.he_conjugate_phase = false,
    },
    Suspect {
        label: "rho23 detuning (Delta_c - Delta_p printed, Delta_c - Delta_m required) in A12, A13, A23, A33, A41, A42, A43, D0, D2",
        toggle: |r| r.rho23_magnetic_detuning = false,
    },
];

/// Oracle versus closed form at one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleCheckPoint {
    pub delta_p: f64,
    pub oracle: ReducedAlphas,
    pub printed: ReducedAlphas,
    /// Printed closed forms against the oracle.
    pub printed_deviation: AlphaComparison,
    /// Closed forms with every known correction applied.
    pub repaired_deviation: AlphaComparison,
    pub residual: f64,
    /// Per coefficient, the corrections whose removal alone pushes the
    /// repaired form above tolerance.
    pub implicated: [Vec<String>; 4],
}

impl OracleCheckPoint {
    pub fn residual_ok(&self) -> bool {
        self.residual < RESIDUAL_TOLERANCE
    }
}

/// Evaluate oracle and closed forms at one point and attribute any
/// disagreement by leaving out one correction at a time.
pub fn check_point(
    setup: &ModelSetup,
    drive: &DriveConfig,
    det: &DetuningSet,
) -> Result<OracleCheckPoint> {
    let model =
        RotatingFrameModel::new(&setup.rates, drive, det, setup.gamma6_includes_dephasing)?;
    let oracle = oracle_alpha_set(&model)?;
    let dampings = setup.dampings()?;
    let closed_with = |repairs: Repairs| {
        let mut options = setup.closed_form;
        options.repairs = repairs;
        alpha_diagnostics(&dampings, drive, det, &setup.rates, &options).map(|d| d.alphas)
    };
    let printed = closed_with(Repairs::PRINTED)?;
    let printed_deviation = compare_alpha(&oracle.alphas, &printed);
    let repaired_deviation = compare_alpha(&oracle.alphas, &closed_with(Repairs::ALL)?);

    let mut implicated: [Vec<String>; 4] = Default::default();
    for suspect in &SUSPECTS {
        let mut repairs = Repairs::ALL;
        (suspect.toggle)(&mut repairs);
        let partial = compare_alpha(&oracle.alphas, &closed_with(repairs)?);
        for c in Coefficient::ALL {
            if partial.get(c) > FORMULA_TOLERANCE && printed_deviation.get(c) > FORMULA_TOLERANCE {
                implicated[c.index()].push(suspect.label.to_string());
            }
        }
    }

    Ok(OracleCheckPoint {
        delta_p: det.delta_p,
        oracle: oracle.alphas,
        printed,
        printed_deviation,
        repaired_deviation,
        residual: oracle.max_residual,
        implicated,
    })
}

/// Structured record of a printed coefficient that disagrees with the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrataFinding {
    pub coefficient: Coefficient,
    pub max_deviation: f64,
    pub at_delta_p: f64,
    pub points_above_tolerance: usize,
    pub implicated: Vec<String>,
    pub repaired_max_deviation: f64,
}

/// One finding per coefficient whose printed form exceeds the formula
/// tolerance anywhere in `points`.
pub fn summarize_errata(points: &[OracleCheckPoint]) -> Vec<ErrataFinding> {
    let mut out = Vec::new();
    for c in Coefficient::ALL {
        let mut worst: Option<(f64, f64)> = None;
        let mut count = 0;
        let mut implicated: Vec<String> = Vec::new();
        let mut repaired = 0.0_f64;
        for p in points {
            let d = p.printed_deviation.get(c);
            repaired = repaired.max(p.repaired_deviation.get(c));
            if d > FORMULA_TOLERANCE {
                count += 1;
                if worst.is_none_or(|(w, _)| d > w) {
                    worst = Some((d, p.delta_p));
                }
                for label in &p.implicated[c.index()] {
                    if !implicated.contains(label) {
                        implicated.push(label.clone());
                    }
                }
            }
        }
        if let Some((max_deviation, at_delta_p)) = worst {
            out.push(ErrataFinding {
                coefficient: c,
                max_deviation,
                at_delta_p,
                points_above_tolerance: count,
                implicated,
                repaired_max_deviation: repaired,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deviation_conventions() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(relative_deviation(z, z), 0.0);
        assert_eq!(relative_deviation(one * 2.0, one), 1.0);
        assert_eq!(relative_deviation(one * 0.5, z), 0.5);
    }

    #[test]
    fn errata_are_found_and_attributed() {
        let setup = ModelSetup::default();
        let drive = DriveConfig { omega_c: 1.3, omega_s: 20.0, theta: std::f64::consts::PI / 5.0 };
        let det = DetuningSet { delta_p: 0.5, delta_c: 0.001, delta_s: 0.0, delta_m: 0.001 };
        let p = check_point(&setup, &drive, &det).unwrap();
        assert!(p.residual_ok());
        assert!(p.repaired_deviation.max() < FORMULA_TOLERANCE, "{:?}", p.repaired_deviation);
        assert!(p.printed_deviation.get(Coefficient::He) > FORMULA_TOLERANCE);
        assert!(p.implicated[Coefficient::He.index()].iter().any(|l| l.contains("phase")));
        assert!(p.implicated[Coefficient::Ee.index()].iter().any(|l| l.contains("A11")));
        let findings = summarize_errata(&[p]);
        assert!(findings.iter().all(|f| f.repaired_max_deviation < FORMULA_TOLERANCE));
        assert!(!findings.is_empty());
    }
}
