//! End-to-end evaluation at one parameter point.

use serde::{Deserialize, Serialize};

use crate::atomic::{
    alpha_diagnostics, derive_dampings, AlphaSet, ClosedFormOptions, CoherenceDampings,
    DecayRates, DetuningSet, DriveConfig, ReducedAlphas,
};
use crate::constitutive::{
    coupling_coefficients, dipole_moments, local_field_solve, ChiralConstitutive,
    CouplingCoefficients, DipoleMoments, MediumConfig,
};
use crate::error::{Error, Result};

/// Everything that stays fixed while drives and detunings vary.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ModelSetup {
    pub rates: DecayRates,
    pub medium: MediumConfig,
    pub gamma6_includes_dephasing: bool,
    pub closed_form: ClosedFormOptions,
}

impl ModelSetup {
    pub fn dampings(&self) -> Result<CoherenceDampings> {
        derive_dampings(&self.rates, self.gamma6_includes_dephasing)
    }

    pub fn dipoles(&self) -> Result<DipoleMoments> {
        dipole_moments(&self.rates, self.medium.wavelength)
    }

    pub fn validate(&self) -> Result<()> {
        self.rates.validate()?;
        self.medium.validate()?;
        self.dipoles()?;
        if !(self.closed_form.denominator_floor >= 0.0) {
            return Err(Error::InvalidInput("denominator floor must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEvaluation {
    pub reduced: ReducedAlphas,
    pub alphas: AlphaSet,
    pub coupling: CouplingCoefficients,
    pub constitutive: ChiralConstitutive,
}

/// Closed-form coefficients → coupling coefficients → local-field solve →
/// refractive index.
pub fn evaluate_point(
    setup: &ModelSetup,
    drive: &DriveConfig,
    det: &DetuningSet,
) -> Result<PointEvaluation> {
    let dampings = setup.dampings()?;
    let dipoles = setup.dipoles()?;
    let diag = alpha_diagnostics(&dampings, drive, det, &setup.rates, &setup.closed_form)?;
    let alphas = diag.alphas.to_si(&dipoles, setup.rates.gamma_scale);
    if !alphas.is_finite() {
        return Err(Error::SingularDenominator {
            magnitude: diag.denominator.norm(),
            floor: setup.closed_form.denominator_floor,
        });
    }
    let coupling = coupling_coefficients(&alphas, &setup.medium, &dipoles)?;
    let constitutive = local_field_solve(&coupling)?.with_index()?;
    Ok(PointEvaluation { reduced: diag.alphas, alphas, coupling, constitutive })
}
