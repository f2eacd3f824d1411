//! C ABI for the `chiral-nri` pipeline.
//!
//! A [`CnriModel`] handle holds the medium, rates and closed-form options.
//! Every entry point returns a [`CnriStatus`]; on failure a message for the
//! calling thread is available through [`cnri_last_error_message`]. Panics
//! never cross the boundary and are reported as `CNRI_STATUS_PANIC`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use chiral_nri::oracle::{oracle_alpha_set, RotatingFrameModel};
use chiral_nri::{
    evaluate_point, AlphaSet, ChiralConstitutive, Complex64, DecayRates, DetuningSet, DriveConfig,
    Error, MediumConfig, ModelSetup, ReducedAlphas, Repairs,
};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnriStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    SingularDenominator = 3,
    LocalFieldSingular = 4,
    DegenerateKernel = 5,
    SingularShiftedGenerator = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Use Γ₂ in A₁₁.
pub const CNRI_REPAIR_A11_CONTROL_DAMPING: u32 = 1;
/// Conjugate loop phase on α_HE.
pub const CNRI_REPAIR_HE_CONJUGATE_PHASE: u32 = 2;
/// Δ_m − Δ_c detuning for the ρ23 coherence.
pub const CNRI_REPAIR_RHO23_MAGNETIC_DETUNING: u32 = 4;

/// Per-point sweep flags.
pub const CNRI_POINT_OK: u8 = 0;
pub const CNRI_POINT_POLE: u8 = 1;
pub const CNRI_POINT_LOCAL_FIELD_SINGULAR: u8 = 2;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CnriComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for CnriComplex {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

const NAN_COMPLEX: CnriComplex = CnriComplex { re: f64::NAN, im: f64::NAN };

/// Rates in units of `gamma_scale` (s⁻¹).
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnriRates {
    pub gamma_scale: f64,
    pub gamma21: f64,
    pub gamma31: f64,
    pub gamma42: f64,
    pub gamma43: f64,
    pub gamma_c: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnriDrive {
    pub omega_c: f64,
    pub omega_s: f64,
    pub theta: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CnriDetunings {
    pub delta_p: f64,
    pub delta_c: f64,
    pub delta_s: f64,
    pub delta_m: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CnriAlphas {
    pub ee: CnriComplex,
    pub eh: CnriComplex,
    pub he: CnriComplex,
    pub hh: CnriComplex,
}

impl From<ReducedAlphas> for CnriAlphas {
    fn from(a: ReducedAlphas) -> Self {
        Self { ee: a.ee.into(), eh: a.eh.into(), he: a.he.into(), hh: a.hh.into() }
    }
}

impl From<AlphaSet> for CnriAlphas {
    fn from(a: AlphaSet) -> Self {
        Self { ee: a.ee.into(), eh: a.eh.into(), he: a.he.into(), hh: a.hh.into() }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CnriConstitutive {
    pub eps_r: CnriComplex,
    pub mu_r: CnriComplex,
    pub xi_eh: CnriComplex,
    pub xi_he: CnriComplex,
    pub n: CnriComplex,
}

impl From<ChiralConstitutive> for CnriConstitutive {
    fn from(c: ChiralConstitutive) -> Self {
        Self {
            eps_r: c.eps_r.into(),
            mu_r: c.mu_r.into(),
            xi_eh: c.xi_eh.into(),
            xi_he: c.xi_he.into(),
            n: c.n.into(),
        }
    }
}

/// Opaque model handle.
pub struct CnriModel {
    setup: ModelSetup,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CnriStatus {
    match e {
        Error::InvalidInput(_) | Error::InvalidModel(_) | Error::InvalidPlan(_) | Error::Unphysical(_) => {
            CnriStatus::InvalidInput
        }
        Error::SingularDenominator { .. } => CnriStatus::SingularDenominator,
        Error::LocalFieldSingular { .. } => CnriStatus::LocalFieldSingular,
        Error::DegenerateKernel(_) => CnriStatus::DegenerateKernel,
        Error::SingularShiftedGenerator => CnriStatus::SingularShiftedGenerator,
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard<F>(f: F) -> CnriStatus
where
    F: FnOnce() -> Result<(), (CnriStatus, String)>,
{
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CnriStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            CnriStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (CnriStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CnriStatus, String) {
    (CnriStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `p` must be null or point to a valid `T`.
unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, (CnriStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

fn drive_of(d: &CnriDrive) -> DriveConfig {
    DriveConfig { omega_c: d.omega_c, omega_s: d.omega_s, theta: d.theta }
}

fn detunings_of(d: &CnriDetunings) -> DetuningSet {
    DetuningSet { delta_p: d.delta_p, delta_c: d.delta_c, delta_s: d.delta_s, delta_m: d.delta_m }
}

/// New handle with the reference medium and rates. Free with
/// [`cnri_model_free`].
#[no_mangle]
pub extern "C" fn cnri_model_new() -> *mut CnriModel {
    Box::into_raw(Box::new(CnriModel { setup: ModelSetup::default() }))
}

/// # Safety
/// `model` must be null or a handle from [`cnri_model_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cnri_model_free(model: *mut CnriModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// # Safety
/// `model` and `rates` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cnri_model_set_rates(model: *mut CnriModel, rates: *const CnriRates) -> CnriStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        let r = read(rates, "rates")?;
        let mut setup = m.setup;
        setup.rates = DecayRates {
            gamma_scale: r.gamma_scale,
            gamma21: r.gamma21,
            gamma31: r.gamma31,
            gamma42: r.gamma42,
            gamma43: r.gamma43,
            gamma_c: r.gamma_c,
        };
        setup.validate().map_err(lib_err)?;
        m.setup = setup;
        Ok(())
    })
}

/// Density in m⁻³, wavelength in m.
///
/// # Safety
/// `model` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnri_model_set_medium(
    model: *mut CnriModel,
    atom_density: f64,
    wavelength: f64,
    paper_literal_mapping: bool,
) -> CnriStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        let mut setup = m.setup;
        setup.medium = MediumConfig { atom_density, wavelength, paper_literal_mapping };
        setup.validate().map_err(lib_err)?;
        m.setup = setup;
        Ok(())
    })
}

/// `repairs` is a bit set of `CNRI_REPAIR_*`.
///
/// # Safety
/// `model` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn cnri_model_set_options(
    model: *mut CnriModel,
    gamma6_includes_dephasing: bool,
    repairs: u32,
    denominator_floor: f64,
) -> CnriStatus {
    guard(|| {
        let m = model.as_mut().ok_or_else(|| null("model"))?;
        let known = CNRI_REPAIR_A11_CONTROL_DAMPING
            | CNRI_REPAIR_HE_CONJUGATE_PHASE
            | CNRI_REPAIR_RHO23_MAGNETIC_DETUNING;
        if repairs & !known != 0 {
            return Err((CnriStatus::InvalidInput, format!("unknown repair bits {repairs:#x}")));
        }
        let mut setup = m.setup;
        setup.gamma6_includes_dephasing = gamma6_includes_dephasing;
        setup.closed_form.repairs = Repairs {
            a11_control_damping: repairs & CNRI_REPAIR_A11_CONTROL_DAMPING != 0,
            he_conjugate_phase: repairs & CNRI_REPAIR_HE_CONJUGATE_PHASE != 0,
            rho23_magnetic_detuning: repairs & CNRI_REPAIR_RHO23_MAGNETIC_DETUNING != 0,
        };
        setup.closed_form.denominator_floor = denominator_floor;
        setup.validate().map_err(lib_err)?;
        m.setup = setup;
        Ok(())
    })
}

/// Closed-form response coefficients. `out_si` receives SI values;
/// `out_reduced` (may be null) the values per unit Rabi frequency.
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnri_alpha(
    model: *const CnriModel,
    drive: *const CnriDrive,
    det: *const CnriDetunings,
    out_si: *mut CnriAlphas,
    out_reduced: *mut CnriAlphas,
) -> CnriStatus {
    guard(|| {
        let m = read(model, "model")?;
        let (d, t) = (read(drive, "drive")?, read(det, "detunings")?);
        let out = out_si.as_mut().ok_or_else(|| null("out_si"))?;
        let setup = &m.setup;
        let diag = chiral_nri::alpha_diagnostics(
            &setup.dampings().map_err(lib_err)?,
            &drive_of(d),
            &detunings_of(t),
            &setup.rates,
            &setup.closed_form,
        )
        .map_err(lib_err)?;
        *out = diag.alphas.to_si(&setup.dipoles().map_err(lib_err)?, setup.rates.gamma_scale).into();
        if let Some(r) = out_reduced.as_mut() {
            *r = diag.alphas.into();
        }
        Ok(())
    })
}

/// Full pipeline at one point.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnri_constitutive(
    model: *const CnriModel,
    drive: *const CnriDrive,
    det: *const CnriDetunings,
    out: *mut CnriConstitutive,
) -> CnriStatus {
    guard(|| {
        let m = read(model, "model")?;
        let (d, t) = (read(drive, "drive")?, read(det, "detunings")?);
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let p = evaluate_point(&m.setup, &drive_of(d), &detunings_of(t)).map_err(lib_err)?;
        *out = p.constitutive.into();
        Ok(())
    })
}

/// Liouville-oracle coefficients per unit Rabi frequency and the largest
/// relative solve residual (`out_residual` may be null).
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn cnri_oracle_alpha(
    model: *const CnriModel,
    drive: *const CnriDrive,
    det: *const CnriDetunings,
    out_reduced: *mut CnriAlphas,
    out_residual: *mut f64,
) -> CnriStatus {
    guard(|| {
        let m = read(model, "model")?;
        let (d, t) = (read(drive, "drive")?, read(det, "detunings")?);
        let out = out_reduced.as_mut().ok_or_else(|| null("out_reduced"))?;
        let rf = RotatingFrameModel::new(
            &m.setup.rates,
            &drive_of(d),
            &detunings_of(t),
            m.setup.gamma6_includes_dephasing,
        )
        .map_err(lib_err)?;
        let o = oracle_alpha_set(&rf).map_err(lib_err)?;
        *out = o.alphas.into();
        if let Some(r) = out_residual.as_mut() {
            *r = o.max_residual;
        }
        Ok(())
    })
}

/// Evaluate `count` probe detunings; `det.delta_p` is ignored. Flagged
/// points get NaN values and a nonzero `CNRI_POINT_*` flag. Both output
/// buffers must hold `capacity >= count` entries.
///
/// # Safety
/// `delta_p` must point to `count` doubles; `out` and `flags` to
/// `capacity` elements each.
#[no_mangle]
pub unsafe extern "C" fn cnri_sweep(
    model: *const CnriModel,
    drive: *const CnriDrive,
    det: *const CnriDetunings,
    delta_p: *const f64,
    count: usize,
    out: *mut CnriConstitutive,
    flags: *mut u8,
    capacity: usize,
) -> CnriStatus {
    guard(|| {
        let m = read(model, "model")?;
        let (d, t) = (read(drive, "drive")?, read(det, "detunings")?);
        if count == 0 {
            return Ok(());
        }
        if delta_p.is_null() || out.is_null() || flags.is_null() {
            return Err(null("buffer"));
        }
        if capacity < count {
            return Err((
                CnriStatus::BufferTooSmall,
                format!("capacity {capacity} < count {count}"),
            ));
        }
        let xs = std::slice::from_raw_parts(delta_p, count);
        let out = std::slice::from_raw_parts_mut(out, count);
        let flags = std::slice::from_raw_parts_mut(flags, count);
        let drive = drive_of(d);
        let base = detunings_of(t);
        for k in 0..count {
            let det = DetuningSet { delta_p: xs[k], ..base };
            match evaluate_point(&m.setup, &drive, &det) {
                Ok(p) => {
                    out[k] = p.constitutive.into();
                    flags[k] = CNRI_POINT_OK;
                }
                Err(e @ (Error::SingularDenominator { .. } | Error::LocalFieldSingular { .. })) => {
                    out[k] = CnriConstitutive {
                        eps_r: NAN_COMPLEX,
                        mu_r: NAN_COMPLEX,
                        xi_eh: NAN_COMPLEX,
                        xi_he: NAN_COMPLEX,
                        n: NAN_COMPLEX,
                    };
                    flags[k] = if matches!(e, Error::SingularDenominator { .. }) {
                        CNRI_POINT_POLE
                    } else {
                        CNRI_POINT_LOCAL_FIELD_SINGULAR
                    };
                }
                Err(e) => return Err(lib_err(e)),
            }
        }
        Ok(())
    })
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cnri_status_message(status: CnriStatus) -> *const c_char {
    let s: &'static std::ffi::CStr = match status {
        CnriStatus::Ok => c"ok",
        CnriStatus::NullPointer => c"null pointer argument",
        CnriStatus::InvalidInput => c"invalid input",
        CnriStatus::SingularDenominator => c"closed-form denominator below floor (resonance pole)",
        CnriStatus::LocalFieldSingular => c"local-field system singular",
        CnriStatus::DegenerateKernel => c"steady state not unique",
        CnriStatus::SingularShiftedGenerator => c"first-order system singular",
        CnriStatus::BufferTooSmall => c"output buffer too small",
        CnriStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Copy the calling thread's last error message into `buf` (NUL
/// terminated, truncated to `len`). Returns the full message length
/// excluding the NUL, or 0 if there is none.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cnri_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}
