use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    build_zeroth_liouvillian, commutator_superoperator, coupling_hamiltonian, vec_index,
    vectorize, Coupling, Field, Generator, RotatingFrameModel, DIM, SUPER_DIM,
};
use crate::atomic::ReducedAlphas;
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest count as kernel.
const KERNEL_TOLERANCE: f64 = 1e-10;

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
const EIGENVALUE_FLOOR: f64 = -1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    matrix: Matrix4<Complex64>,
}

impl DensityState {
    pub fn new(matrix: Matrix4<Complex64>) -> Result<Self> {
        let hermitian_defect = (matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if hermitian_defect > HERMITIAN_TOLERANCE {
            return Err(Error::Unphysical(format!("not Hermitian (defect {hermitian_defect:e})")));
        }
        let trace = matrix.trace();
        if (trace - 1.0).norm() > TRACE_TOLERANCE {
            return Err(Error::Unphysical(format!("trace {trace}")));
        }
        let hermitian_part = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = hermitian_part.symmetric_eigenvalues().iter().copied().fold(f64::INFINITY, f64::min);
        if min_eig < EIGENVALUE_FLOOR {
            return Err(Error::Unphysical(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.matrix
    }

    /// ρ_ij with one-based level labels.
    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i - 1, j - 1)]
    }

    pub fn population(&self, level: usize) -> f64 {
        self.element(level, level).re
    }
}

/// Replace the first row of `l` with the trace functional.
fn bordered(l: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut a = l.clone();
    for col in 0..SUPER_DIM {
        a[(0, col)] = Complex64::new(0.0, 0.0);
    }
    for k in 0..DIM {
        a[(0, vec_index(k, k))] = Complex64::new(1.0, 0.0);
    }
    a
}

fn kernel_dimension(l: &DMatrix<Complex64>) -> usize {
    let sv = l.clone().singular_values();
    let largest = sv.iter().copied().fold(0.0, f64::max);
    if largest == 0.0 {
        return SUPER_DIM;
    }
    sv.iter().filter(|s| **s <= KERNEL_TOLERANCE * largest).count()
}

/// Unique steady state of the generator, normalised to unit trace.
///
/// Solved as a bordered linear system in which the first equation is
/// replaced by the trace condition.
pub fn zeroth_steady_state(generator: &Generator) -> Result<DensityState> {
    let dim = kernel_dimension(&generator.matrix);
    if dim != 1 {
        return Err(Error::DegenerateKernel(dim));
    }
    let mut rhs = DVector::<Complex64>::zeros(SUPER_DIM);
    rhs[0] = Complex64::new(1.0, 0.0);
    let x = bordered(&generator.matrix).lu().solve(&rhs).ok_or(Error::DegenerateKernel(0))?;
    DensityState::new(Matrix4::from_fn(|i, j| x[vec_index(i, j)]))
}

/// Probe Rabi amplitudes (units of γ) on the electric and magnetic channels.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ProbeDrive {
    pub electric: f64,
    pub magnetic: f64,
}

impl ProbeDrive {
    pub const ELECTRIC: ProbeDrive = ProbeDrive { electric: 1.0, magnetic: 0.0 };
    pub const MAGNETIC: ProbeDrive = ProbeDrive { electric: 0.0, magnetic: 1.0 };

    pub fn couplings(&self) -> Vec<Coupling> {
        vec![
            Coupling::new(Field::ProbeElectric, self.electric, 0.0),
            Coupling::new(Field::ProbeMagnetic, self.magnetic, 0.0),
        ]
    }
}

/// First-order density-matrix correction per the probe amplitudes given.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstOrderResponse {
    pub sigma: Matrix4<Complex64>,
    /// ‖Lσ − b‖∞ / ‖b‖∞ of the unbordered system.
    pub residual: f64,
}

impl FirstOrderResponse {
    /// Electric probe coherence σ43.
    pub fn sigma43(&self) -> Complex64 {
        self.sigma[(3, 2)]
    }

    /// Magnetic probe coherence σ21.
    pub fn sigma21(&self) -> Complex64 {
        self.sigma[(1, 0)]
    }
}

/// Solve L σ = −(−i[H₁, ρ₀]) with tr σ = 0, where L is the zeroth-order
/// generator of `model` and H₁ the probe coupling.
pub fn first_order_response(
    model: &RotatingFrameModel,
    rho0: &DensityState,
    probe: ProbeDrive,
) -> Result<FirstOrderResponse> {
    if model.has_probe() {
        return Err(Error::InvalidModel("zeroth-order model already contains a probe".into()));
    }
    let generator = build_zeroth_liouvillian(model)?;
    let h1 = coupling_hamiltonian(&probe.couplings());
    let drive = commutator_superoperator(&h1) * vectorize(rho0.matrix());
    let rhs = -drive;
    let mut bordered_rhs = rhs.clone();
    bordered_rhs[0] = Complex64::new(0.0, 0.0);
    let x = bordered(&generator.matrix)
        .lu()
        .solve(&bordered_rhs)
        .ok_or(Error::SingularShiftedGenerator)?;
    if x.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::SingularShiftedGenerator);
    }
    let defect = &generator.matrix * &x - &rhs;
    let defect_norm = defect.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = rhs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let residual = if scale > 0.0 { defect_norm / scale } else { defect_norm };
    Ok(FirstOrderResponse { sigma: Matrix4::from_fn(|i, j| x[vec_index(i, j)]), residual })
}

/// Oracle values of the four response coefficients, in reduced units.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleAlphaSet {
    pub alphas: ReducedAlphas,
    /// Largest relative residual of the two first-order solves.
    pub max_residual: f64,
    pub rho0: DensityState,
}

pub fn oracle_alpha_set(model: &RotatingFrameModel) -> Result<OracleAlphaSet> {
    let generator = build_zeroth_liouvillian(model)?;
    let rho0 = zeroth_steady_state(&generator)?;
    let e = first_order_response(model, &rho0, ProbeDrive::ELECTRIC)?;
    let b = first_order_response(model, &rho0, ProbeDrive::MAGNETIC)?;
    Ok(OracleAlphaSet {
        alphas: ReducedAlphas {
            ee: e.sigma43(),
            eh: b.sigma43(),
            he: e.sigma21(),
            hh: b.sigma21(),
        },
        max_residual: e.residual.max(b.residual),
        rho0,
    })
}
