//! Macroscopic constitutive parameters of the driven vapour.
//!
//! The atomic coherences give the polarization and magnetization
//!
//! ```text
//! P = a1·E_L + a2·B_L        E_L = E + P/(3ε₀)
//! M = a3·E_L + a4·B_L        B_L = μ₀(H + M/3)
//! ```
//!
//! Eliminating the local fields leaves a 2×2 complex system whose solution
//! is compared term by term with the bi-anisotropic relations
//! `P = ε₀χ_e E + (ξ_EH/c) H`, `M = (ξ_HE/(cμ₀)) E + χ_m H`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::atomic::{AlphaSet, DecayRates};
use crate::constants::{EPSILON_0, HBAR, MU_0, SPEED_OF_LIGHT};
use crate::error::{ensure_finite, ensure_non_negative, ensure_positive, Error, Result};

/// Relative floor on the local-field determinant (its vacuum value is 1).
pub const LOCAL_FIELD_FLOOR: f64 = 1e-12;

/// Transition dipole moments of the two probe transitions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipoleMoments {
    /// |3⟩–|4⟩ electric dipole, C·m.
    pub d34: f64,
    /// |1⟩–|2⟩ magnetic dipole, A·m².
    pub mu12: f64,
}

/// Dipole moments implied by the radiative rates at `wavelength` (m).
///
/// Electric: d² = 3ε₀ħΓλ³/(8π²). Magnetic: μ² = 3ħΓλ³/(8π²μ₀).
pub fn dipole_moments(rates: &DecayRates, wavelength: f64) -> Result<DipoleMoments> {
    ensure_positive("wavelength", wavelength)?;
    ensure_positive("gamma_scale", rates.gamma_scale)?;
    ensure_positive("gamma43", rates.gamma43)?;
    ensure_positive("gamma21", rates.gamma21)?;
    let geometry = 3.0 * HBAR * wavelength.powi(3) / (8.0 * PI * PI);
    let electric_rate = rates.gamma43 * rates.gamma_scale;
    let magnetic_rate = rates.gamma21 * rates.gamma_scale;
    Ok(DipoleMoments {
        d34: (EPSILON_0 * geometry * electric_rate).sqrt(),
        mu12: (geometry * magnetic_rate / MU_0).sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumConfig {
    /// Atom number density N, m⁻³.
    pub atom_density: f64,
    /// Wavelength of both probe transitions, m.
    pub wavelength: f64,
    /// Use the printed assignment P = N·d₁₂·ρ21, M = N·μ₃₄·ρ43 (with the
    /// available moments standing in for d₁₂ and μ₃₄) instead of the
    /// parity-consistent P = N·d34·ρ43, M = N·mu12·ρ21.
    pub paper_literal_mapping: bool,
}

impl Default for MediumConfig {
    fn default() -> Self {
        Self { atom_density: 5e24, wavelength: 600e-9, paper_literal_mapping: false }
    }
}

impl MediumConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("atom_density", self.atom_density)?;
        ensure_positive("wavelength", self.wavelength)
    }
}

/// Linear maps from the local fields to P (C/m²) and M (A/m).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CouplingCoefficients {
    /// P per local E.
    pub a1: Complex64,
    /// P per local B.
    pub a2: Complex64,
    /// M per local E.
    pub a3: Complex64,
    /// M per local B.
    pub a4: Complex64,
}

pub fn coupling_coefficients(
    alphas: &AlphaSet,
    medium: &MediumConfig,
    dipoles: &DipoleMoments,
) -> Result<CouplingCoefficients> {
    medium.validate()?;
    if !alphas.is_finite() {
        return Err(Error::InvalidInput("response coefficients must be finite".into()));
    }
    let n = medium.atom_density;
    let electric = n * dipoles.d34;
    let magnetic = n * dipoles.mu12;
    Ok(if medium.paper_literal_mapping {
        CouplingCoefficients {
            a1: alphas.he * electric,
            a2: alphas.hh * electric,
            a3: alphas.ee * magnetic,
            a4: alphas.eh * magnetic,
        }
    } else {
        CouplingCoefficients {
            a1: alphas.ee * electric,
            a2: alphas.eh * electric,
            a3: alphas.he * magnetic,
            a4: alphas.hh * magnetic,
        }
    })
}

/// Solution of the local-field system, without the refractive index.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalFieldResponse {
    pub eps_r: Complex64,
    pub mu_r: Complex64,
    pub xi_eh: Complex64,
    pub xi_he: Complex64,
    /// ∂P/∂E, ∂P/∂H, ∂M/∂E, ∂M/∂H of the macroscopic response.
    pub p_per_e: Complex64,
    pub p_per_h: Complex64,
    pub m_per_e: Complex64,
    pub m_per_h: Complex64,
    pub determinant: Complex64,
}

impl LocalFieldResponse {
    pub fn with_index(&self) -> Result<ChiralConstitutive> {
        let n = refractive_index(self.eps_r, self.mu_r, self.xi_eh, self.xi_he)?;
        Ok(ChiralConstitutive {
            eps_r: self.eps_r,
            mu_r: self.mu_r,
            xi_eh: self.xi_eh,
            xi_he: self.xi_he,
            n,
        })
    }
}

/// Solve the 2×2 local-field system for P and M in terms of E and H.
pub fn local_field_solve(a: &CouplingCoefficients) -> Result<LocalFieldResponse> {
    for (name, z) in [("a1", a.a1), ("a2", a.a2), ("a3", a.a3), ("a4", a.a4)] {
        ensure_finite(name, z.re)?;
        ensure_finite(name, z.im)?;
    }
    let third_eps = 1.0 / (3.0 * EPSILON_0);
    let m11 = 1.0 - a.a1 * third_eps;
    let m12 = -a.a2 * MU_0 / 3.0;
    let m21 = -a.a3 * third_eps;
    let m22 = 1.0 - a.a4 * MU_0 / 3.0;
    let determinant = m11 * m22 - m12 * m21;
    if !(determinant.norm() >= LOCAL_FIELD_FLOOR) {
        return Err(Error::LocalFieldSingular {
            magnitude: determinant.norm(),
            floor: LOCAL_FIELD_FLOOR,
        });
    }
    let (r11, r12, r21, r22) = (a.a1, a.a2 * MU_0, a.a3, a.a4 * MU_0);
    let p_per_e = (m22 * r11 - m12 * r21) / determinant;
    let p_per_h = (m22 * r12 - m12 * r22) / determinant;
    let m_per_e = (m11 * r21 - m21 * r11) / determinant;
    let m_per_h = (m11 * r22 - m21 * r12) / determinant;
    Ok(LocalFieldResponse {
        eps_r: 1.0 + p_per_e / EPSILON_0,
        mu_r: 1.0 + m_per_h,
        xi_eh: p_per_h * SPEED_OF_LIGHT,
        xi_he: m_per_e * SPEED_OF_LIGHT * MU_0,
        p_per_e,
        p_per_h,
        m_per_e,
        m_per_h,
        determinant,
    })
}

/// Relative permittivity and permeability, chirality coefficients and the
/// refractive index for the chiral circular polarization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiralConstitutive {
    pub eps_r: Complex64,
    pub mu_r: Complex64,
    pub xi_eh: Complex64,
    pub xi_he: Complex64,
    pub n: Complex64,
}

impl ChiralConstitutive {
    pub const VACUUM: ChiralConstitutive = ChiralConstitutive {
        eps_r: Complex64::new(1.0, 0.0),
        mu_r: Complex64::new(1.0, 0.0),
        xi_eh: Complex64::new(0.0, 0.0),
        xi_he: Complex64::new(0.0, 0.0),
        n: Complex64::new(1.0, 0.0),
    };

    /// |ξ_EH + ξ_HE| / (|ξ_EH| + |ξ_HE|), `None` when both vanish.
    pub fn antisymmetry(&self) -> Option<f64> {
        let scale = self.xi_eh.norm() + self.xi_he.norm();
        (scale > 0.0).then(|| (self.xi_eh + self.xi_he).norm() / scale)
    }
}

/// n = √(εμ − (ξ_EH+ξ_HE)²/4) + (i/2)(ξ_EH − ξ_HE).
///
/// The root is taken with non-negative imaginary part, and non-negative
/// real part when the imaginary part vanishes.
pub fn refractive_index(
    eps_r: Complex64,
    mu_r: Complex64,
    xi_eh: Complex64,
    xi_he: Complex64,
) -> Result<Complex64> {
    for (name, z) in [("eps_r", eps_r), ("mu_r", mu_r), ("xi_eh", xi_eh), ("xi_he", xi_he)] {
        ensure_finite(name, z.re)?;
        ensure_finite(name, z.im)?;
    }
    let sum = xi_eh + xi_he;
    let mut root = (eps_r * mu_r - sum * sum / 4.0).sqrt();
    if root.im < 0.0 || (root.im == 0.0 && root.re < 0.0) {
        root = -root;
    }
    Ok(root + Complex64::new(0.0, 0.5) * (xi_eh - xi_he))
}

/// Side-by-side evaluation of the printed closed forms for ε, μ, ξ_EH, ξ_HE
/// against the canonical local-field solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrintedFormReport {
    /// Printed closed forms; `None` when their shared denominator is zero.
    pub printed: Option<[Complex64; 4]>,
    /// Canonical solve; `None` when the local-field system is singular.
    pub canonical: Option<[Complex64; 4]>,
    /// Complex relative deviation per quantity (ε, μ, ξ_EH, ξ_HE); NaN when
    /// either side is unavailable.
    pub deviation: [f64; 4],
}

/// |p − c| / max(|p|, |c|), zero when both are zero.
pub fn relative_deviation(p: Complex64, c: Complex64) -> f64 {
    let scale = p.norm().max(c.norm());
    if scale == 0.0 {
        0.0
    } else {
        (p - c).norm() / scale
    }
}

pub fn printed_form_crosscheck(a: &CouplingCoefficients) -> PrintedFormReport {
    let e0 = EPSILON_0;
    let (a1, a2, a3, a4) = (a.a1, a.a2, a.a3, a.a4);
    let den = -3.0 * a1 + MU_0 * (-a3 * a2 + a4 * (a1 - 3.0 * e0)) + 9.0 * e0;
    let printed = (den.norm() > 0.0).then(|| {
        [
            (6.0 * a1 + 9.0 * e0 + MU_0 * (2.0 * a3 * a2 - a4 * (2.0 * a1 + 3.0 * e0))) / den,
            (-3.0 * a1 + 2.0 * MU_0 * (a3 * a2 - a4 * (a1 - 3.0 * e0)) + 9.0 * e0) / den,
            9.0 * SPEED_OF_LIGHT * MU_0 * a2 * e0 / den,
            9.0 * SPEED_OF_LIGHT * MU_0 * a3 * e0 / den,
        ]
    });
    let canonical = local_field_solve(a).ok().map(|r| [r.eps_r, r.mu_r, r.xi_eh, r.xi_he]);
    let deviation = match (printed, canonical) {
        (Some(p), Some(c)) => std::array::from_fn(|k| relative_deviation(p[k], c[k])),
        _ => [f64::NAN; 4],
    };
    PrintedFormReport { printed, canonical, deviation }
}
