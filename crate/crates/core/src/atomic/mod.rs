//! Closed-form first-order response of the four-level loop.
//!
//! Levels |1⟩, |2⟩, |3⟩ share parity, |4⟩ has the opposite parity. The probe
//! magnetic field drives |1⟩–|2⟩, the probe electric field drives |3⟩–|4⟩,
//! a two-photon control field drives |1⟩–|3⟩ and the signal field drives
//! |2⟩–|4⟩. The linear response is expressed through four coefficients:
//!
//! ```text
//! ρ43 = α_EE·E + α_EH·B
//! ρ21 = α_HE·E + α_HH·B
//! ```

mod closed_form;

pub use closed_form::{
    alpha_coefficients, alpha_diagnostics, AlphaDiagnostics, ClosedFormOptions, Repairs,
    DEFAULT_DENOMINATOR_FLOOR,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{FINE_STRUCTURE_INVERSE, HBAR};
use crate::constitutive::DipoleMoments;
use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Result};

/// Spontaneous-emission and dephasing rates, in units of `gamma_scale`.
///
/// `gamma_ij` is the population decay rate of |i⟩ into |j⟩. There is no
/// decay out of the ground state |1⟩ (the ground-state width γ₁ is zero).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayRates {
    /// Rate scale γ in s⁻¹.
    pub gamma_scale: f64,
    /// Magnetic-dipole decay |2⟩ → |1⟩.
    pub gamma21: f64,
    pub gamma31: f64,
    pub gamma42: f64,
    /// Electric-dipole decay |4⟩ → |3⟩.
    pub gamma43: f64,
    /// Collisional dephasing.
    pub gamma_c: f64,
}

impl DecayRates {
    /// Ground-state width.
    pub const GAMMA1: f64 = 0.0;

    /// Electric-dipole rates equal to γ and the magnetic-dipole rate
    /// suppressed by the square of the fine-structure constant.
    pub fn reference() -> Self {
        let gamma43 = 1.0;
        Self {
            gamma_scale: 1e8,
            gamma21: gamma43 / (FINE_STRUCTURE_INVERSE * FINE_STRUCTURE_INVERSE),
            gamma31: 1.0,
            gamma42: 1.0,
            gamma43,
            gamma_c: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("gamma_scale", self.gamma_scale)?;
        ensure_non_negative("gamma21", self.gamma21)?;
        ensure_non_negative("gamma31", self.gamma31)?;
        ensure_non_negative("gamma42", self.gamma42)?;
        ensure_non_negative("gamma43", self.gamma43)?;
        ensure_non_negative("gamma_c", self.gamma_c)?;
        Ok(())
    }
}

impl Default for DecayRates {
    fn default() -> Self {
        Self::reference()
    }
}

/// Damping rates of the six optical coherences, in units of `gamma_scale`.
///
/// Each field is named after the coherence it damps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceDampings {
    /// Γ₁, magnetic probe coherence ρ21.
    pub rho21: f64,
    /// Γ₂, control coherence ρ31.
    pub rho31: f64,
    /// Γ₃, two-step coherence ρ41.
    pub rho41: f64,
    /// Γ₄, signal coherence ρ42. Not needed at first order.
    pub rho42: f64,
    /// Γ₅, electric probe coherence ρ43.
    pub rho43: f64,
    /// Γ₆, Raman-like coherence ρ32.
    pub rho32: f64,
}

/// Coherence dampings from decay rates.
///
/// Γ₆ carries no collisional dephasing unless `gamma6_includes_dephasing`
/// is set.
pub fn derive_dampings(
    rates: &DecayRates,
    gamma6_includes_dephasing: bool,
) -> Result<CoherenceDampings> {
    rates.validate()?;
    let g1 = DecayRates::GAMMA1;
    let gc = rates.gamma_c;
    let upper = rates.gamma42 + rates.gamma43;
    Ok(CoherenceDampings {
        rho21: 0.5 * (g1 + rates.gamma21) + gc,
        rho31: 0.5 * (g1 + rates.gamma31) + gc,
        rho41: 0.5 * (g1 + upper) + gc,
        rho42: 0.5 * (rates.gamma21 + upper) + gc,
        rho43: 0.5 * (rates.gamma31 + upper) + gc,
        rho32: 0.5 * (rates.gamma31 + rates.gamma21) + if gamma6_includes_dephasing { gc } else { 0.0 },
    })
}

/// Rabi frequencies of the strong fields (units of γ) and the loop phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveConfig {
    /// Control Rabi frequency Ω_c.
    pub omega_c: f64,
    /// Signal Rabi frequency Ω_s.
    pub omega_s: f64,
    /// Loop phase θ = θ_c − θ_s in radians, taken modulo 2π.
    pub theta: f64,
}

impl DriveConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("omega_c", self.omega_c)?;
        ensure_non_negative("omega_s", self.omega_s)?;
        ensure_finite("theta", self.theta)
    }

    /// e^{iθ}
    pub fn loop_phasor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

/// Probe, control, signal and magnetic-probe detunings, in units of γ.
///
/// The four detunings are independent knobs; the probe detuning is the one
/// swept, the others are held fixed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DetuningSet {
    /// Δ_p, electric probe relative to |3⟩–|4⟩.
    pub delta_p: f64,
    /// Δ_c, two-photon control relative to |1⟩–|3⟩.
    pub delta_c: f64,
    /// Δ_s, signal relative to |2⟩–|4⟩.
    pub delta_s: f64,
    /// Δ_m, magnetic probe relative to |1⟩–|2⟩.
    pub delta_m: f64,
}

impl DetuningSet {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("delta_p", self.delta_p)?;
        ensure_finite("delta_c", self.delta_c)?;
        ensure_finite("delta_s", self.delta_s)?;
        ensure_finite("delta_m", self.delta_m)
    }
}

/// Response coefficients in reduced units: coherence per unit probe Rabi
/// frequency (Rabi frequency measured in units of γ).
///
/// Multiplying by `dipole / (ħγ)` gives the SI [`AlphaSet`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ReducedAlphas {
    pub ee: Complex64,
    pub eh: Complex64,
    pub he: Complex64,
    pub hh: Complex64,
}

impl ReducedAlphas {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.ee, self.eh, self.he, self.hh]
    }

    pub fn from_array(values: [Complex64; 4]) -> Self {
        let [ee, eh, he, hh] = values;
        Self { ee, eh, he, hh }
    }

    /// Scale to SI. The electric-field columns pick up `d34`, the magnetic
    /// columns `mu12`.
    pub fn to_si(&self, dipoles: &DipoleMoments, gamma_scale: f64) -> AlphaSet {
        let per_rate = 1.0 / (HBAR * gamma_scale);
        let e = dipoles.d34 * per_rate;
        let b = dipoles.mu12 * per_rate;
        AlphaSet { ee: self.ee * e, eh: self.eh * b, he: self.he * e, hh: self.hh * b }
    }
}

/// SI response coefficients.
///
/// `ee`, `he` are coherences per V/m of probe electric field; `eh`, `hh` are
/// coherences per tesla of probe magnetic flux density.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AlphaSet {
    pub ee: Complex64,
    pub eh: Complex64,
    pub he: Complex64,
    pub hh: Complex64,
}

impl AlphaSet {
    pub fn as_array(&self) -> [Complex64; 4] {
        [self.ee, self.eh, self.he, self.hh]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_rates() -> DecayRates {
        DecayRates {
            gamma_scale: 1e8,
            gamma21: 0.0,
            gamma31: 0.0,
            gamma42: 0.0,
            gamma43: 0.0,
            gamma_c: 0.0,
        }
    }

    #[test]
    fn zero_rates_give_zero_dampings() {
        let d = derive_dampings(&zero_rates(), false).unwrap();
        for g in [d.rho21, d.rho31, d.rho41, d.rho42, d.rho43, d.rho32] {
            assert_eq!(g, 0.0);
        }
    }

    #[test]
    fn reference_rates_dampings() {
        let d = derive_dampings(&DecayRates::reference(), false).unwrap();
        let mag = 1.0 / (137.0_f64 * 137.0);
        assert!((d.rho21 - (1.0 + 0.5 * mag)).abs() < 1e-15);
        assert!((d.rho21 - 1.000_026_6).abs() < 1e-7);
        assert_eq!(d.rho31, 1.5);
        assert_eq!(d.rho41, 2.0);
        assert!((d.rho42 - (2.0 + 0.5 * mag)).abs() < 1e-15);
        assert_eq!(d.rho43, 2.5);
        assert!((d.rho32 - 0.5 * (1.0 + mag)).abs() < 1e-15);
    }

    #[test]
    fn dephasing_shift_is_linear_and_skips_rho32() {
        let base = DecayRates::reference();
        let doubled = DecayRates { gamma_c: 2.0 * base.gamma_c, ..base };
        let a = derive_dampings(&base, false).unwrap();
        let b = derive_dampings(&doubled, false).unwrap();
        let shift = base.gamma_c;
        for (x, y) in [
            (a.rho21, b.rho21),
            (a.rho31, b.rho31),
            (a.rho41, b.rho41),
            (a.rho42, b.rho42),
            (a.rho43, b.rho43),
        ] {
            assert!((y - x - shift).abs() < 1e-15);
        }
        assert_eq!(a.rho32, b.rho32);
    }

    #[test]
    fn gamma6_flag_adds_dephasing() {
        let r = DecayRates::reference();
        let a = derive_dampings(&r, false).unwrap();
        let b = derive_dampings(&r, true).unwrap();
        assert!((b.rho32 - a.rho32 - r.gamma_c).abs() < 1e-15);
    }

    #[test]
    fn rejects_negative_and_non_finite_rates() {
        let r = DecayRates { gamma31: -1.0, ..DecayRates::reference() };
        assert!(derive_dampings(&r, false).is_err());
        let r = DecayRates { gamma_c: f64::NAN, ..DecayRates::reference() };
        assert!(derive_dampings(&r, false).is_err());
        let r = DecayRates { gamma43: f64::INFINITY, ..DecayRates::reference() };
        assert!(derive_dampings(&r, false).is_err());
    }
}
