//! Weak-probe electromagnetic response of a closed-loop four-level atomic
//! medium.
//!
//! The probe's electric component drives the |3⟩–|4⟩ electric-dipole
//! transition while its magnetic component drives the |1⟩–|2⟩
//! magnetic-dipole transition. A two-photon control field (|1⟩–|3⟩) and a
//! strong signal field (|2⟩–|4⟩) close the loop, so each probe component
//! induces both coherences. The crate evaluates:
//!
//! * the closed-form first-order response coefficients ([`atomic`]),
//! * local-field corrected permittivity, permeability, the two chirality
//!   coefficients and the chiral refractive index ([`constitutive`]),
//! * an independent Liouville-equation linear-response solver used to
//!   verify the closed forms ([`oracle`]),
//! * detuning sweeps, negative-index band detection and figure metrics
//!   ([`sweep`]),
//! * the `chiral-nri` command-line surface ([`cli`], [`config`]).
//!
//! Rates, Rabi frequencies and detunings are dimensionless, in units of the
//! electric-dipole decay scale `gamma_scale` (1e8 s⁻¹ by default). SI units
//! appear only at the medium boundary (dipole moments, densities, fields).

pub mod atomic;
pub mod cli;
pub mod config;
pub mod constants;
pub mod constitutive;
mod error;
pub mod model;
pub mod oracle;
pub mod sweep;

pub use num_complex::Complex64;

pub use atomic::{
    alpha_coefficients, alpha_diagnostics, derive_dampings, AlphaDiagnostics, AlphaSet,
    ClosedFormOptions, CoherenceDampings, DecayRates, DetuningSet, DriveConfig, ReducedAlphas,
    Repairs,
};
pub use constitutive::{
    coupling_coefficients, dipole_moments, local_field_solve, printed_form_crosscheck,
    refractive_index, ChiralConstitutive, CouplingCoefficients, DipoleMoments, LocalFieldResponse,
    MediumConfig, PrintedFormReport,
};
pub use error::{Error, Result};
pub use model::{evaluate_point, ModelSetup, PointEvaluation};
