use thiserror::Error;

/// Errors raised by the response pipeline and the Liouville oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The shared closed-form denominator vanishes: the point sits on a
    /// resonance pole of the response coefficients.
    #[error("closed-form denominator |D| = {magnitude:e} is below the floor {floor:e}")]
    SingularDenominator { magnitude: f64, floor: f64 },

    /// Clausius–Mossotti type resonance of the local-field system.
    #[error("local-field determinant |det| = {magnitude:e} is below the floor {floor:e}")]
    LocalFieldSingular { magnitude: f64, floor: f64 },

    #[error("invalid rotating-frame model: {0}")]
    InvalidModel(String),

    #[error("zeroth-order generator has a {0}-dimensional kernel, expected 1")]
    DegenerateKernel(usize),

    #[error("first-order response system is singular at this probe detuning")]
    SingularShiftedGenerator,

    #[error("density matrix is not physical: {0}")]
    Unphysical(String),

    #[error("invalid sweep plan: {0}")]
    InvalidPlan(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(name: &str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value < 0.0 {
        return Err(Error::InvalidInput(format!("{name} must be >= 0, got {value}")));
    }
    Ok(())
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    ensure_finite(name, value)?;
    if value <= 0.0 {
        return Err(Error::InvalidInput(format!("{name} must be > 0, got {value}")));
    }
    Ok(())
}
