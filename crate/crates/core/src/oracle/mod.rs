//! Brute-force linear-response oracle.
//!
//! Builds the optical Bloch equations of the four-level loop as a 16×16
//! Liouville superoperator, finds the zeroth-order steady state under the
//! control and signal fields, and solves the first-order equations for a
//! unit probe on either the electric or the magnetic channel. The resulting
//! coherences are independent numerical values of the four response
//! coefficients, used to audit the closed forms in [`crate::atomic`].
//!
//! Density matrices are vectorised row-major: element (i, j) sits at
//! index `4 i + j`.

mod compare;
mod solve;

pub use compare::{
    check_point, compare_alpha, summarize_errata, AlphaComparison, Coefficient, ErrataFinding,
    OracleCheckPoint, FORMULA_TOLERANCE, RESIDUAL_TOLERANCE,
};
pub use solve::{
    first_order_response, oracle_alpha_set, zeroth_steady_state, DensityState,
    FirstOrderResponse, OracleAlphaSet, ProbeDrive,
};

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;

use crate::atomic::{DecayRates, DetuningSet, DriveConfig};
use crate::error::{ensure_finite, Error, Result};

pub const DIM: usize = 4;
pub const SUPER_DIM: usize = DIM * DIM;

/// Atomic level |1⟩ … |4⟩.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Level(u8);

impl Level {
    pub const ONE: Level = Level(1);
    pub const TWO: Level = Level(2);
    pub const THREE: Level = Level(3);
    pub const FOUR: Level = Level(4);

    pub fn new(k: u8) -> Result<Level> {
        if (1..=4).contains(&k) {
            Ok(Level(k))
        } else {
            Err(Error::InvalidModel(format!("no level |{k}>")))
        }
    }

    /// Zero-based matrix index.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }
}

impl std::fmt::Display for Level {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "|{}>", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// Two-photon control, |1⟩–|3⟩.
    Control,
    /// Signal, |2⟩–|4⟩.
    Signal,
    /// Probe electric component, |3⟩–|4⟩.
    ProbeElectric,
    /// Probe magnetic component, |1⟩–|2⟩.
    ProbeMagnetic,
}

impl Field {
    /// The only (upper, lower) pair this field may couple.
    pub fn transition(self) -> (Level, Level) {
        match self {
            Field::Control => (Level::THREE, Level::ONE),
            Field::Signal => (Level::FOUR, Level::TWO),
            Field::ProbeElectric => (Level::FOUR, Level::THREE),
            Field::ProbeMagnetic => (Level::TWO, Level::ONE),
        }
    }

    pub fn is_probe(self) -> bool {
        matches!(self, Field::ProbeElectric | Field::ProbeMagnetic)
    }
}

/// Interaction term −Ω(e^{−iφ}|upper⟩⟨lower| + h.c.), Ω in units of γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub field: Field,
    pub upper: Level,
    pub lower: Level,
    pub rabi: f64,
    pub phase: f64,
}

impl Coupling {
    pub fn new(field: Field, rabi: f64, phase: f64) -> Self {
        let (upper, lower) = field.transition();
        Self { field, upper, lower, rabi, phase }
    }
}

/// Spontaneous decay `from` → `to` with population rate `rate`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayChannel {
    pub from: Level,
    pub to: Level,
    pub rate: f64,
}

/// Extra pure damping of the coherence between two levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dephasing {
    pub a: Level,
    pub b: Level,
    pub rate: f64,
}

/// Optical Bloch model in the frame where every field is static.
///
/// Frame energies are (0, Δ_m, Δ_c, Δ_c + Δ_p): the magnetic probe fixes
/// the frame of |2⟩, the control fixes |3⟩ and control plus electric probe
/// fix |4⟩. The signal detuning is then implied by the loop and does not
/// enter.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingFrameModel {
    pub frame_energies: [f64; DIM],
    pub couplings: Vec<Coupling>,
    pub decays: Vec<DecayChannel>,
    pub dephasing: Vec<Dephasing>,
}

impl RotatingFrameModel {
    /// Control and signal fields only (the zeroth-order problem).
    pub fn new(
        rates: &DecayRates,
        drive: &DriveConfig,
        det: &DetuningSet,
        gamma6_includes_dephasing: bool,
    ) -> Result<Self> {
        rates.validate()?;
        drive.validate()?;
        det.validate()?;
        let decays = vec![
            DecayChannel { from: Level::FOUR, to: Level::THREE, rate: rates.gamma43 },
            DecayChannel { from: Level::FOUR, to: Level::TWO, rate: rates.gamma42 },
            DecayChannel { from: Level::THREE, to: Level::ONE, rate: rates.gamma31 },
            DecayChannel { from: Level::TWO, to: Level::ONE, rate: rates.gamma21 },
        ];
        let mut pairs = vec![
            (Level::TWO, Level::ONE),
            (Level::THREE, Level::ONE),
            (Level::FOUR, Level::ONE),
            (Level::FOUR, Level::TWO),
            (Level::FOUR, Level::THREE),
        ];
        if gamma6_includes_dephasing {
            pairs.push((Level::THREE, Level::TWO));
        }
        let dephasing =
            pairs.into_iter().map(|(a, b)| Dephasing { a, b, rate: rates.gamma_c }).collect();
        Ok(Self {
            frame_energies: [0.0, det.delta_m, det.delta_c, det.delta_c + det.delta_p],
            couplings: vec![
                Coupling::new(Field::Control, drive.omega_c, drive.theta),
                Coupling::new(Field::Signal, drive.omega_s, 0.0),
            ],
            decays,
            dephasing,
        })
    }

    /// Copy of the model with probe couplings of the given Rabi amplitudes
    /// added, for finite-amplitude steady states.
    pub fn with_probe(&self, probe: ProbeDrive) -> Self {
        let mut out = self.clone();
        out.couplings.extend(probe.couplings());
        out
    }

    pub fn has_probe(&self) -> bool {
        self.couplings.iter().any(|c| c.field.is_probe())
    }

    pub fn validate(&self) -> Result<()> {
        for (k, e) in self.frame_energies.iter().enumerate() {
            ensure_finite(&format!("frame energy of level {}", k + 1), *e)?;
        }
        for c in &self.couplings {
            if (c.upper, c.lower) != c.field.transition() {
                return Err(Error::InvalidModel(format!(
                    "{:?} cannot couple {} and {}",
                    c.field, c.upper, c.lower
                )));
            }
            ensure_finite("Rabi frequency", c.rabi)?;
            ensure_finite("phase", c.phase)?;
        }
        for d in &self.decays {
            if d.from == d.to {
                return Err(Error::InvalidModel(format!("decay {} -> itself", d.from)));
            }
            if !(d.rate >= 0.0 && d.rate.is_finite()) {
                return Err(Error::InvalidModel(format!("decay rate {} invalid", d.rate)));
            }
        }
        for d in &self.dephasing {
            if d.a == d.b {
                return Err(Error::InvalidModel(format!("dephasing of population {}", d.a)));
            }
            if !(d.rate >= 0.0 && d.rate.is_finite()) {
                return Err(Error::InvalidModel(format!("dephasing rate {} invalid", d.rate)));
            }
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> Matrix4<Complex64> {
        hamiltonian_of(&self.frame_energies, &self.couplings)
    }
}

pub(crate) fn coupling_hamiltonian(couplings: &[Coupling]) -> Matrix4<Complex64> {
    hamiltonian_of(&[0.0; DIM], couplings)
}

fn hamiltonian_of(energies: &[f64; DIM], couplings: &[Coupling]) -> Matrix4<Complex64> {
    let mut h = Matrix4::<Complex64>::zeros();
    for (k, e) in energies.iter().enumerate() {
        h[(k, k)] = Complex64::new(*e, 0.0);
    }
    for c in couplings {
        let term = -Complex64::from_polar(c.rabi, -c.phase);
        let (u, l) = (c.upper.index(), c.lower.index());
        h[(u, l)] += term;
        h[(l, u)] += term.conj();
    }
    h
}

#[inline]
pub(crate) fn vec_index(i: usize, j: usize) -> usize {
    DIM * i + j
}

/// The time-independent generator L with dρ/dt = L ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub matrix: DMatrix<Complex64>,
}

impl Generator {
    /// max over columns of |Σ_k L[(k,k), col]|: zero for a trace-preserving
    /// generator.
    pub fn trace_defect(&self) -> f64 {
        (0..SUPER_DIM)
            .map(|col| {
                (0..DIM)
                    .map(|k| self.matrix[(vec_index(k, k), col)])
                    .sum::<Complex64>()
                    .norm()
            })
            .fold(0.0, f64::max)
    }

    /// Apply to a density matrix.
    pub fn apply(&self, rho: &Matrix4<Complex64>) -> Matrix4<Complex64> {
        let v = vectorize(rho);
        let out = &self.matrix * v;
        Matrix4::from_fn(|i, j| out[vec_index(i, j)])
    }
}

pub(crate) fn vectorize(rho: &Matrix4<Complex64>) -> nalgebra::DVector<Complex64> {
    nalgebra::DVector::from_fn(SUPER_DIM, |k, _| rho[(k / DIM, k % DIM)])
}

/// −i[H, ·] as a superoperator.
pub(crate) fn commutator_superoperator(h: &Matrix4<Complex64>) -> DMatrix<Complex64> {
    let i = Complex64::i();
    let mut l = DMatrix::<Complex64>::zeros(SUPER_DIM, SUPER_DIM);
    for a in 0..DIM {
        for b in 0..DIM {
            let row = vec_index(a, b);
            for k in 0..DIM {
                // (Hρ)_ab = Σ_k H_ak ρ_kb
                l[(row, vec_index(k, b))] -= i * h[(a, k)];
                // (ρH)_ab = Σ_k ρ_ak H_kb
                l[(row, vec_index(a, k))] += i * h[(k, b)];
            }
        }
    }
    l
}

/// Assemble the generator of the model: coherent part, spontaneous decay in
/// Lindblad form, and pure dephasing of the listed coherences.
pub fn build_zeroth_liouvillian(model: &RotatingFrameModel) -> Result<Generator> {
    model.validate()?;
    let mut l = commutator_superoperator(&model.hamiltonian());
    for d in &model.decays {
        let (from, to) = (d.from.index(), d.to.index());
        let rate = Complex64::new(d.rate, 0.0);
        // feeding term J ρ J†
        l[(vec_index(to, to), vec_index(from, from))] += rate;
        // −½{J†J, ρ}, J†J = |from⟩⟨from|
        for k in 0..DIM {
            l[(vec_index(from, k), vec_index(from, k))] -= rate * 0.5;
            l[(vec_index(k, from), vec_index(k, from))] -= rate * 0.5;
        }
    }
    for d in &model.dephasing {
        let (a, b) = (d.a.index(), d.b.index());
        let rate = Complex64::new(d.rate, 0.0);
        l[(vec_index(a, b), vec_index(a, b))] -= rate;
        l[(vec_index(b, a), vec_index(b, a))] -= rate;
    }
    Ok(Generator { matrix: l })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atomic::derive_dampings;

    fn zero_model() -> RotatingFrameModel {
        RotatingFrameModel {
            frame_energies: [0.0; 4],
            couplings: vec![
                Coupling::new(Field::Control, 0.0, 0.0),
                Coupling::new(Field::Signal, 0.0, 0.0),
            ],
            decays: vec![],
            dephasing: vec![],
        }
    }

    #[test]
    fn all_zero_model_gives_zero_generator() {
        let g = build_zeroth_liouvillian(&zero_model()).unwrap();
        assert!(g.matrix.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn forbidden_transition_is_rejected() {
        let mut m = zero_model();
        m.couplings.push(Coupling {
            field: Field::Control,
            upper: Level::FOUR,
            lower: Level::ONE,
            rabi: 1.0,
            phase: 0.0,
        });
        assert!(matches!(build_zeroth_liouvillian(&m), Err(Error::InvalidModel(_))));
        assert!(Level::new(5).is_err());
    }

    #[test]
    fn decoupled_blocks_without_signal() {
        let rates = DecayRates::reference();
        let drive = DriveConfig { omega_c: 1.2, omega_s: 0.0, theta: 0.4 };
        let det = DetuningSet { delta_p: 0.3, delta_c: 0.1, delta_s: 0.0, delta_m: -0.2 };
        let m = RotatingFrameModel::new(&rates, &drive, &det, false).unwrap();
        let g = build_zeroth_liouvillian(&m).unwrap();
        // no matrix element links the {|1>,|3>} block to {|2>,|4>} coherences
        let in_13 = |k: usize| {
            let (i, j) = (k / 4, k % 4);
            [0, 2].contains(&i) && [0, 2].contains(&j)
        };
        let in_24 = |k: usize| {
            let (i, j) = (k / 4, k % 4);
            [1, 3].contains(&i) && [1, 3].contains(&j)
        };
        for r in 0..16 {
            for c in 0..16 {
                let coherent_cross = (in_13(r) && in_24(c) && r % 5 != 0)
                    || (in_24(r) && in_13(c) && c % 5 != 0);
                if coherent_cross {
                    assert_eq!(g.matrix[(r, c)].norm(), 0.0, "({r},{c})");
                }
            }
        }
    }

    #[test]
    fn coherence_dampings_match_the_damping_table() {
        let rates = DecayRates { gamma21: 0.013, gamma31: 0.7, gamma42: 0.4, gamma43: 1.3, gamma_c: 0.25, gamma_scale: 1e8 };
        let drive = DriveConfig { omega_c: 0.0, omega_s: 0.0, theta: 0.0 };
        let det = DetuningSet::default();
        for flag in [false, true] {
            let m = RotatingFrameModel::new(&rates, &drive, &det, flag).unwrap();
            let g = build_zeroth_liouvillian(&m).unwrap();
            let d = derive_dampings(&rates, flag).unwrap();
            let diag = |i: usize, j: usize| -g.matrix[(vec_index(i, j), vec_index(i, j))].re;
            let close = |a: f64, b: f64| (a - b).abs() < 1e-15;
            assert!(close(diag(1, 0), d.rho21));
            assert!(close(diag(2, 0), d.rho31));
            assert!(close(diag(3, 0), d.rho41));
            assert!(close(diag(3, 1), d.rho42));
            assert!(close(diag(3, 2), d.rho43));
            assert!(close(diag(2, 1), d.rho32));
        }
    }
}
