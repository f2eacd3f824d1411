//! Direct transcription of the printed closed-form response coefficients.
//!
//! Intermediates keep their printed names (`a0`, `a11` … `a43`, `d0` … `d2`)
//! so each line can be checked against the printed rational expressions.
//! Everything here is in reduced units; see [`ReducedAlphas`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AlphaSet, CoherenceDampings, DecayRates, DetuningSet, DriveConfig, ReducedAlphas};
use crate::constitutive::DipoleMoments;
use crate::error::{ensure_non_negative, Error, Result};

/// Floor on |D₀D₁ + D₂Ω_s² + Ω_s⁴| (reduced units) below which a point is a pole.
pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-30;

/// Corrections to the printed expressions that the Liouville oracle
/// identifies. All off reproduces the printed forms exactly; all on agrees
/// with the oracle to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Repairs {
    /// Use the control-coherence damping Γ₂ (not Γ₁) in the second term of A₁₁.
    #[serde(default)]
    pub a11_control_damping: bool,
    /// Give α_HE the loop phase e^{-iθ} instead of e^{iθ}.
    #[serde(default)]
    pub he_conjugate_phase: bool,
    /// Detune the ρ23 coherence by Δ_m − Δ_c instead of Δ_p − Δ_c.
    #[serde(default)]
    pub rho23_magnetic_detuning: bool,
}

impl Repairs {
    pub const PRINTED: Repairs = Repairs {
        a11_control_damping: false,
        he_conjugate_phase: false,
        rho23_magnetic_detuning: false,
    };

    pub const ALL: Repairs = Repairs {
        a11_control_damping: true,
        he_conjugate_phase: true,
        rho23_magnetic_detuning: true,
    };

    pub fn is_printed(&self) -> bool {
        *self == Self::PRINTED
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormOptions {
    pub repairs: Repairs,
    pub denominator_floor: f64,
}

impl Default for ClosedFormOptions {
    fn default() -> Self {
        Self { repairs: Repairs::PRINTED, denominator_floor: DEFAULT_DENOMINATOR_FLOOR }
    }
}

/// Every intermediate of the closed-form evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaDiagnostics {
    pub a0: Complex64,
    pub a11: Complex64,
    pub a12: Complex64,
    pub a13: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
    pub a23: Complex64,
    pub a31: Complex64,
    pub a32: Complex64,
    pub a33: Complex64,
    pub a41: Complex64,
    pub a42: Complex64,
    pub a43: Complex64,
    pub d0: Complex64,
    pub d1: Complex64,
    pub d2: Complex64,
    /// D₀D₁ + D₂Ω_s² + Ω_s⁴
    pub denominator: Complex64,
    pub alphas: ReducedAlphas,
}

fn validate_dampings(d: &CoherenceDampings) -> Result<()> {
    ensure_non_negative("Gamma1", d.rho21)?;
    ensure_non_negative("Gamma2", d.rho31)?;
    ensure_non_negative("Gamma3", d.rho41)?;
    ensure_non_negative("Gamma4", d.rho42)?;
    ensure_non_negative("Gamma5", d.rho43)?;
    ensure_non_negative("Gamma6", d.rho32)
}

/// Evaluate the closed forms and return all intermediates.
pub fn alpha_diagnostics(
    dampings: &CoherenceDampings,
    drive: &DriveConfig,
    det: &DetuningSet,
    rates: &DecayRates,
    options: &ClosedFormOptions,
) -> Result<AlphaDiagnostics> {
    validate_dampings(dampings)?;
    rates.validate()?;
    drive.validate()?;
    det.validate()?;

    let i = Complex64::i();
    let re = |x: f64| Complex64::new(x, 0.0);
    let repairs = options.repairs;

    let g1 = dampings.rho21;
    let g2 = dampings.rho31;
    let g3 = dampings.rho41;
    let g5 = dampings.rho43;
    let g6 = dampings.rho32;
    let g31 = rates.gamma31;
    let (dp, dc, dm) = (det.delta_p, det.delta_c, det.delta_m);
    // probe detuning seen by the ρ23 coherence
    let d23 = if repairs.rho23_magnetic_detuning { dm } else { dp };
    let (oc, os) = (drive.omega_c, drive.omega_s);
    let oc2 = oc * oc;
    let os2 = os * os;

    let a0_den = g2 * g2 * g31 + g31 * dc * dc + 4.0 * g2 * oc2;
    if !(a0_den > 0.0) {
        return Err(Error::SingularDenominator { magnitude: a0_den.abs(), floor: 0.0 });
    }
    let a0 = i / a0_den;

    let a11_damping = if repairs.a11_control_damping { g2 } else { g1 };
    let a11 = g31 * (g2 - i * dc) + 2.0 * a11_damping * (g3 + i * (dc + dp));
    let a12 = (g1 + i * dm) * (g6 - i * (dc - d23)) + oc2;
    let a13 = os2 * (i * g31 * dc - g2 * (g31 - 2.0 * g6 + 2.0 * i * dc - 2.0 * i * d23));
    let a21 = (g2 - i * dc) * (g3 + g6 + i * (dp + d23)) * (g2 * g31 + i * g31 * dc + oc2);
    let a23 = g3 - g31 + g6 + i * (dp + d23);
    let a22 = g31 * (g1 + i * dm) * (-g3 - i * (dc + dp));
    let a31 = -g2 * g31 - i * g31 * dc - oc2;
    let a32 = g3 + i * (dc + dp);
    let a33 = g6 + i * (d23 - dc);
    let a41 = g3 + g6 + i * (dp + d23);
    let a42 = g3 + g31 + i * (dc + dp);
    let a43 = g31 * (dp - i * g5) + i * oc2;

    let d0 = (g1 + i * dm) * (g6 - i * (dc - d23)) + oc2;
    let d1 = (g5 + i * dp) * (g3 + i * (dc + dp)) + oc2;
    let d2 = (i * g6 + dc - d23) * (dp - i * g5) + (g1 + i * dm) * (g3 + i * (dc + dp))
        - 2.0 * oc2;

    let denominator = d0 * d1 + d2 * os2 + re(os2 * os2);
    if !(denominator.norm() >= options.denominator_floor) {
        return Err(Error::SingularDenominator {
            magnitude: denominator.norm(),
            floor: options.denominator_floor,
        });
    }

    let phase = drive.loop_phasor();
    let he_phase = if repairs.he_conjugate_phase { phase.conj() } else { phase };

    let ee = a0 * oc2 * (a11 * a12 + a13) / denominator;
    let eh = phase * a0 * oc * os * (a21 - (g2 + i * dc) * (a22 - a23 * oc2 - g31 * os2))
        / denominator;
    let he = he_phase
        * a0
        * oc
        * os
        * (a41 * (g2 + i * dc) * oc2
            + (i * dc - g2) * (g31 * os2 - a42 * oc2 + (i * g6 + dc - d23) * a43))
        / denominator;
    let common = (g5 + i * dp) * a32 + oc2;
    let hh = a0 * a31 * (i * dc - g2) * (a33 * common + a32 * os2) / denominator
        - a0 * oc2 * (g2 + i * dc) * ((g31 - a33) * common - (a32 + g31) * os2) / denominator;

    Ok(AlphaDiagnostics {
        a0,
        a11,
        a12,
        a13,
        a21,
        a22,
        a23,
        a31,
        a32,
        a33,
        a41,
        a42,
        a43,
        d0,
        d1,
        d2,
        denominator,
        alphas: ReducedAlphas { ee, eh, he, hh },
    })
}

/// SI response coefficients from the closed forms.
pub fn alpha_coefficients(
    dampings: &CoherenceDampings,
    drive: &DriveConfig,
    det: &DetuningSet,
    dipoles: &DipoleMoments,
    rates: &DecayRates,
    options: &ClosedFormOptions,
) -> Result<AlphaSet> {
    let diag = alpha_diagnostics(dampings, drive, det, rates, options)?;
    let alphas = diag.alphas.to_si(dipoles, rates.gamma_scale);
    if !alphas.is_finite() {
        return Err(Error::SingularDenominator {
            magnitude: diag.denominator.norm(),
            floor: options.denominator_floor,
        });
    }
    Ok(alphas)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::derive_dampings;
    use std::f64::consts::PI;

    fn fig2_point(delta_p: f64) -> (CoherenceDampings, DriveConfig, DetuningSet, DecayRates) {
        let rates = DecayRates::reference();
        let dampings = derive_dampings(&rates, false).unwrap();
        let drive = DriveConfig { omega_c: 1.3, omega_s: 20.0, theta: PI / 5.0 };
        let det = DetuningSet { delta_p, delta_c: 0.001, delta_s: 0.0, delta_m: 0.001 };
        (dampings, drive, det, rates)
    }

    fn reduced(
        dampings: &CoherenceDampings,
        drive: &DriveConfig,
        det: &DetuningSet,
        rates: &DecayRates,
    ) -> ReducedAlphas {
        alpha_diagnostics(dampings, drive, det, rates, &ClosedFormOptions::default())
            .unwrap()
            .alphas
    }

    #[test]
    fn no_control_field_kills_three_coefficients() {
        let (d, mut drive, det, rates) = fig2_point(0.5);
        drive.omega_c = 0.0;
        let a = reduced(&d, &drive, &det, &rates);
        assert_eq!(a.ee.norm(), 0.0);
        assert_eq!(a.eh.norm(), 0.0);
        assert_eq!(a.he.norm(), 0.0);
        assert!(a.hh.norm() > 0.0);
    }

    #[test]
    fn no_signal_field_kills_cross_coupling() {
        let (d, mut drive, det, rates) = fig2_point(0.5);
        drive.omega_s = 0.0;
        let a = reduced(&d, &drive, &det, &rates);
        assert_eq!(a.eh.norm(), 0.0);
        assert_eq!(a.he.norm(), 0.0);
        assert!(a.ee.norm() > 0.0 && a.hh.norm() > 0.0);
    }

    #[test]
    fn theta_is_two_pi_periodic() {
        let (d, drive, det, rates) = fig2_point(0.7);
        let a = reduced(&d, &drive, &det, &rates);
        let shifted = DriveConfig { theta: drive.theta + 2.0 * PI, ..drive };
        let b = reduced(&d, &shifted, &det, &rates);
        for (x, y) in a.as_array().iter().zip(b.as_array()) {
            assert!((x - y).norm() <= 1e-14 * x.norm());
        }
    }

    #[test]
    fn cross_coefficients_rotate_with_theta() {
        let (d, drive, det, rates) = fig2_point(0.3);
        let base = reduced(&d, &DriveConfig { theta: 0.0, ..drive }, &det, &rates);
        for theta in [0.4, 1.9, -2.5, 3.0] {
            let a = reduced(&d, &DriveConfig { theta, ..drive }, &det, &rates);
            let rot = Complex64::from_polar(1.0, theta);
            assert!((a.eh - base.eh * rot).norm() < 1e-14 * a.eh.norm());
            assert!((a.he - base.he * rot).norm() < 1e-14 * a.he.norm());
            assert_eq!(a.ee, base.ee);
            assert_eq!(a.hh, base.hh);
        }
    }

    #[test]
    fn repaired_he_phase_rotates_the_other_way() {
        let (d, drive, det, rates) = fig2_point(0.3);
        let opts = ClosedFormOptions {
            repairs: Repairs { he_conjugate_phase: true, ..Repairs::PRINTED },
            ..Default::default()
        };
        let a = alpha_diagnostics(&d, &drive, &det, &rates, &opts).unwrap().alphas;
        let b = reduced(&d, &drive, &det, &rates);
        let ratio = a.he / b.he;
        assert!((ratio - Complex64::from_polar(1.0, -2.0 * drive.theta)).norm() < 1e-14);
    }

    #[test]
    fn singular_denominator_is_reported() {
        let rates = DecayRates { gamma21: 0.0, gamma_c: 0.0, ..DecayRates::reference() };
        let d = derive_dampings(&rates, false).unwrap();
        let drive = DriveConfig { omega_c: 0.0, omega_s: 0.0, theta: 0.0 };
        let det = DetuningSet::default();
        let err = alpha_diagnostics(&d, &drive, &det, &rates, &ClosedFormOptions::default());
        assert!(matches!(err, Err(Error::SingularDenominator { .. })));
    }

    #[test]
    fn non_finite_input_is_rejected() {
        let (d, drive, mut det, rates) = fig2_point(0.3);
        det.delta_c = f64::NAN;
        let err = alpha_diagnostics(&d, &drive, &det, &rates, &ClosedFormOptions::default());
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn shared_intermediates_coincide() {
        // A12 and D0 are the same printed expression
        let (d, drive, det, rates) = fig2_point(1.1);
        let diag =
            alpha_diagnostics(&d, &drive, &det, &rates, &ClosedFormOptions::default()).unwrap();
        assert_eq!(diag.a12, diag.d0);
        assert_eq!(diag.a41 - rates.gamma31, diag.a23);
    }

    #[test]
    fn si_scaling_uses_matching_dipoles() {
        let (d, drive, det, rates) = fig2_point(0.5);
        let dip = DipoleMoments { d34: 2.0e-29, mu12: 5.0e-23 };
        let si = alpha_coefficients(&d, &drive, &det, &dip, &rates, &Default::default()).unwrap();
        let r = reduced(&d, &drive, &det, &rates);
        let k = 1.0 / (crate::constants::HBAR * rates.gamma_scale);
        assert!((si.ee - r.ee * dip.d34 * k).norm() <= 1e-15 * si.ee.norm());
        assert!((si.eh - r.eh * dip.mu12 * k).norm() <= 1e-15 * si.eh.norm());
        assert!((si.he - r.he * dip.d34 * k).norm() <= 1e-15 * si.he.norm());
        assert!((si.hh - r.hh * dip.mu12 * k).norm() <= 1e-15 * si.hh.norm());
    }
}
