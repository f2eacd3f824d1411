//! Second, independently grouped evaluation of the four response
//! coefficients. Every coherence enters through its complex rate
//! z = Γ + iΔ and the numerators are nested around the shared products
//! D0, D1, D2, so no term is written the way the direct transcription
//! writes it.

use chiral_nri::{CoherenceDampings, Complex64, DecayRates, DetuningSet, DriveConfig, ReducedAlphas, Repairs};

pub fn regrouped_alphas(
    g: &CoherenceDampings,
    drive: &DriveConfig,
    det: &DetuningSet,
    rates: &DecayRates,
    repairs: Repairs,
) -> ReducedAlphas {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let g31 = rates.gamma31;
    let u = drive.omega_c * drive.omega_c;
    let v = drive.omega_s * drive.omega_s;
    let d23 = if repairs.rho23_magnetic_detuning { det.delta_m } else { det.delta_p };

    let z1 = c(g.rho21, det.delta_m);
    let z2 = c(g.rho31, det.delta_c);
    let z2c = z2.conj();
    let z3 = c(g.rho41, det.delta_c + det.delta_p);
    let z5 = c(g.rho43, det.delta_p);
    let z6 = c(g.rho32, d23 - det.delta_c);
    let w = z3 + z6;

    let a0 = Complex64::i() / (g31 * z2.norm_sqr() + 4.0 * g.rho31 * u);
    let d0 = z1 * z6 + u;
    let d1 = z5 * z3 + u;
    let d2 = z5 * z6 + z1 * z3 - 2.0 * u;
    let den = (d2 + v) * v + d0 * d1;

    let ga = if repairs.a11_control_damping { g.rho31 } else { g.rho21 };
    let n_ee = u * ((z2c * g31 + z3 * (2.0 * ga)) * d0 + v * (z6 * (2.0 * g.rho31) - z2c * g31));
    let n_eh = z2c * w * (z2 * g31 + u) + z2 * (z1 * z3 * g31 + (w - g31) * u + g31 * v);
    let n_he = w * z2 * u - z2c * (g31 * v - (z3 + g31 + z6) * u + z5 * z6 * g31);
    let n_hh = (z2 * g31 + u) * z2c * (z6 * d1 + z3 * v) - u * z2 * ((g31 - z6) * d1 - (z3 + g31) * v);

    let loop_amp = (u * v).sqrt();
    let phase = Complex64::from_polar(1.0, drive.theta);
    let he_phase = if repairs.he_conjugate_phase { phase.conj() } else { phase };
    let scale = a0 / den;
    ReducedAlphas {
        ee: scale * n_ee,
        eh: scale * phase * loop_amp * n_eh,
        he: scale * he_phase * loop_amp * n_he,
        hh: scale * n_hh,
    }
}
