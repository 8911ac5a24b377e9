//! C ABI for `gaussinv`.
//!
//! States and unitaries cross the boundary as opaque handles created by the
//! `gi_*` constructors and released with [`gi_state_free`] /
//! [`gi_unitary_free`]. Every fallible call returns a [`GiStatus`]; on
//! failure [`gi_last_error_message`] describes the cause. Results are written
//! through out-pointers, which are left untouched on failure.
//!
//! Mode indices are zero-based.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gaussinv::covariance::{TOL_PHYS, TOL_PURE};
use gaussinv::{invariants, io, scenarios, Error, MomentMatrices, PassiveUnitary, StateSpec};

/// Opaque Gaussian state.
pub struct GiState(MomentMatrices);

/// Opaque passive unitary.
pub struct GiUnitary(PassiveUnitary);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GiStatus {
    Ok = 0,
    NullPointer = 1,
    MalformedState = 2,
    Unphysical = 3,
    DimensionMismatch = 4,
    InvalidParameter = 5,
    NotUnitary = 6,
    Numerical = 7,
    Parse = 8,
    InvalidUtf8 = 9,
    BufferSize = 10,
    Panic = 11,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(GiStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::MalformedState(_) => GiStatus::MalformedState,
            Error::Unphysical { .. } => GiStatus::Unphysical,
            Error::DimensionMismatch { .. } => GiStatus::DimensionMismatch,
            Error::InvalidParameter(_) => GiStatus::InvalidParameter,
            Error::NotUnitary { .. } => GiStatus::NotUnitary,
            Error::NumericalDegeneracy(_) | Error::NumericalDomain(_) | Error::NonFinite(_) => GiStatus::Numerical,
            Error::Parse(_) => GiStatus::Parse,
        };
        Failure(status, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Outcome) -> GiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GiStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            GiStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(GiStatus::NullPointer, format!("{what} is null")))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Outcome {
    if out.is_null() {
        return Err(Failure(GiStatus::NullPointer, format!("{what} is null")));
    }
    out.write(value);
    Ok(())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(Failure(GiStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(GiStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn slice_out<'a>(buf: *mut f64, len: usize, need: usize) -> Result<&'a mut [f64], Failure> {
    if buf.is_null() {
        return Err(Failure(GiStatus::NullPointer, "output buffer is null".into()));
    }
    if len < need {
        return Err(Failure(
            GiStatus::BufferSize,
            format!("buffer holds {len} values, {need} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(buf, need))
}

unsafe fn new_state(out: *mut *mut GiState, s: gaussinv::Result<MomentMatrices>) -> Outcome {
    if out.is_null() {
        return Err(Failure(GiStatus::NullPointer, "out is null".into()));
    }
    let s = s?;
    out.write(Box::into_raw(Box::new(GiState(s))));
    Ok(())
}

unsafe fn new_unitary(out: *mut *mut GiUnitary, u: gaussinv::Result<PassiveUnitary>) -> Outcome {
    if out.is_null() {
        return Err(Failure(GiStatus::NullPointer, "out is null".into()));
    }
    let u = u?;
    out.write(Box::into_raw(Box::new(GiUnitary(u))));
    Ok(())
}

/// Message for the last failed call on this thread, or null after a
/// successful one. Valid until the next `gi_*` call on the same thread.
#[no_mangle]
pub extern "C" fn gi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn gi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must come from a `gi_*` function returning an owned string, or be null.
#[no_mangle]
pub unsafe extern "C" fn gi_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---- states ----

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_vacuum(modes: usize, out: *mut *mut GiState) -> GiStatus {
    guard(|| new_state(out, MomentMatrices::vacuum(modes)))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_thermal(b: f64, out: *mut *mut GiState) -> GiStatus {
    guard(|| new_state(out, MomentMatrices::thermal(b)))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_squeezed_thermal(b_th: f64, r: f64, phi: f64, out: *mut *mut GiState) -> GiStatus {
    guard(|| new_state(out, MomentMatrices::squeezed_thermal(b_th, r, phi)))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_twin_beam(bp: f64, out: *mut *mut GiState) -> GiStatus {
    guard(|| new_state(out, MomentMatrices::twin_beam(bp)))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_noisy_twin_beam(bp: f64, bn1: f64, bn2: f64, out: *mut *mut GiState) -> GiStatus {
    guard(|| new_state(out, MomentMatrices::noisy_twin_beam(bp, bn1, bn2)))
}

/// Tensor product `first ⊗ second`; the inputs stay owned by the caller.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_product(
    first: *const GiState,
    second: *const GiState,
    out: *mut *mut GiState,
) -> GiStatus {
    guard(|| {
        let (a, b) = (deref(first, "first")?, deref(second, "second")?);
        new_state(out, MomentMatrices::product(&[a.0.clone(), b.0.clone()]))
    })
}

/// Builds a state from a constructor spec such as `"twin-beam:1+vacuum:1"`.
///
/// # Safety
/// `spec` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_from_spec(spec: *const c_char, out: *mut *mut GiState) -> GiStatus {
    guard(|| {
        let spec: StateSpec = text(spec, "spec")?.parse()?;
        new_state(out, MomentMatrices::make(&spec))
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_from_json(json: *const c_char, out: *mut *mut GiState) -> GiStatus {
    guard(|| new_state(out, io::state_from_json(text(json, "json")?)))
}

/// Full-form JSON of the state. Release the string with [`gi_string_free`].
///
/// # Safety
/// `state` must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_to_json(state: *const GiState, out: *mut *mut c_char) -> GiStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let json = CString::new(io::state_to_json(&s.0).to_string())
            .map_err(|e| Failure(GiStatus::Numerical, e.to_string()))?;
        put(out, json.into_raw(), "out")
    })
}

/// # Safety
/// `state` must come from a `gi_state_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn gi_state_free(state: *mut GiState) {
    if !state.is_null() {
        drop(Box::from_raw(state));
    }
}

/// Number of modes, or 0 for a null handle.
///
/// # Safety
/// `state` must be live or null.
#[no_mangle]
pub unsafe extern "C" fn gi_state_modes(state: *const GiState) -> usize {
    state.as_ref().map_or(0, |s| s.0.modes())
}

/// Reduced state on `keep[0..len]` (distinct zero-based indices, in order).
///
/// # Safety
/// `keep` must point to `len` values; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_state_reduce(
    state: *const GiState,
    keep: *const usize,
    len: usize,
    out: *mut *mut GiState,
) -> GiStatus {
    guard(|| {
        let s = deref(state, "state")?;
        if keep.is_null() {
            return Err(Failure(GiStatus::NullPointer, "keep is null".into()));
        }
        new_state(out, s.0.reduce(std::slice::from_raw_parts(keep, len)))
    })
}

/// Physicality test; a non-positive `tol` selects the library default.
///
/// # Safety
/// `state` must be live; out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gi_state_validate(
    state: *const GiState,
    tol: f64,
    physical: *mut bool,
    min_eig: *mut f64,
) -> GiStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let p = s.0.validate_physical(if tol > 0.0 { tol } else { TOL_PHYS });
        put(physical, p.physical, "physical")?;
        put(min_eig, p.min_eig, "min_eig")
    })
}

/// Purity test; a non-positive `tol` selects the library default.
///
/// # Safety
/// `state` must be live; `pure_out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gi_state_is_pure(state: *const GiState, tol: f64, pure_out: *mut bool) -> GiStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let pure = s.0.purity_check(if tol > 0.0 { tol } else { TOL_PURE })?;
        put(pure_out, pure, "pure_out")
    })
}

/// Writes the `modes` symplectic eigenvalues in ascending order.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gi_state_symplectic_eigenvalues(state: *const GiState, buf: *mut f64, len: usize) -> GiStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let nu = s.0.to_quadrature().symplectic_eigenvalues()?;
        slice_out(buf, len, nu.len())?.copy_from_slice(&nu);
        Ok(())
    })
}

/// Writes the 2n×2n quadrature covariance matrix, row-major, interleaved
/// `(x1, p1, x2, p2, …)` ordering.
///
/// # Safety
/// `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn gi_state_quadrature(state: *const GiState, buf: *mut f64, len: usize) -> GiStatus {
    guard(|| {
        let s = deref(state, "state")?;
        let q = s.0.to_quadrature();
        let m = q.matrix();
        let dst = slice_out(buf, len, m.len())?;
        for (k, v) in dst.iter_mut().enumerate() {
            *v = m[(k / m.ncols(), k % m.ncols())];
        }
        Ok(())
    })
}

// ---- unitaries ----

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_identity(modes: usize, out: *mut *mut GiUnitary) -> GiStatus {
    guard(|| new_unitary(out, Ok(PassiveUnitary::identity(modes))))
}

/// Beam splitter of transmissivity `t` on modes `i`, `j`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_beam_splitter(
    modes: usize,
    i: usize,
    j: usize,
    t: f64,
    phase: f64,
    out: *mut *mut GiUnitary,
) -> GiStatus {
    guard(|| new_unitary(out, PassiveUnitary::beam_splitter(modes, i, j, t, phase)))
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_phase_shifter(
    modes: usize,
    j: usize,
    theta: f64,
    out: *mut *mut GiUnitary,
) -> GiStatus {
    guard(|| new_unitary(out, PassiveUnitary::phase_shifter(modes, j, theta)))
}

/// Haar-random unitary, deterministic in `seed`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_haar(modes: usize, seed: u64, out: *mut *mut GiUnitary) -> GiStatus {
    guard(|| new_unitary(out, PassiveUnitary::haar_random(modes, seed)))
}

/// `second ∘ first`: the result applies `first`, then `second`.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_compose(
    second: *const GiUnitary,
    first: *const GiUnitary,
    out: *mut *mut GiUnitary,
) -> GiStatus {
    guard(|| {
        let (b, a) = (deref(second, "second")?, deref(first, "first")?);
        new_unitary(out, b.0.compose(&a.0))
    })
}

/// New state `U · state`; the input handle is not consumed.
///
/// # Safety
/// Handles must be live; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_apply(
    unitary: *const GiUnitary,
    state: *const GiState,
    out: *mut *mut GiState,
) -> GiStatus {
    guard(|| {
        let (u, s) = (deref(unitary, "unitary")?, deref(state, "state")?);
        new_state(out, u.0.apply(&s.0))
    })
}

/// # Safety
/// `unitary` must come from a `gi_unitary_*` constructor, or be null.
#[no_mangle]
pub unsafe extern "C" fn gi_unitary_free(unitary: *mut GiUnitary) {
    if !unitary.is_null() {
        drop(Box::from_raw(unitary));
    }
}

// ---- invariants ----

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GiReport2 {
    pub i1: f64,
    pub i2: f64,
    pub tau1: f64,
    pub tau2: f64,
    pub lni1: f64,
    pub lni2: f64,
    pub is1: f64,
    pub is2: f64,
    pub is3: f64,
    pub is4: f64,
    pub delta_tilde_s: f64,
    pub ei: f64,
    pub ppt_witness: f64,
    pub entangled: bool,
    pub d_minus: f64,
    pub e_n: f64,
    pub e_n_unclipped: f64,
    pub delta: f64,
    pub delta_s: f64,
    pub gni: f64,
}

/// Pair-indexed fields use the order (0,1), (0,2), (1,2).
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GiReport3 {
    pub lni: [f64; 3],
    pub ei_pair: [f64; 3],
    pub gni3: f64,
    pub delta3: f64,
    pub delta_s3: f64,
    pub k: f64,
    pub is_mode: [f64; 3],
    pub is_pair: [f64; 3],
}

/// Two-mode report. Fails with `Unphysical` or `DimensionMismatch`.
///
/// # Safety
/// `state` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gi_invariants2(state: *const GiState, out: *mut GiReport2) -> GiStatus {
    guard(|| {
        let r = invariants::gni_two_mode(&deref(state, "state")?.0)?;
        put(
            out,
            GiReport2 {
                i1: r.i1,
                i2: r.i2,
                tau1: r.tau1,
                tau2: r.tau2,
                lni1: r.lni1,
                lni2: r.lni2,
                is1: r.is1,
                is2: r.is2,
                is3: r.is3,
                is4: r.is4,
                delta_tilde_s: r.delta_tilde_s,
                ei: r.ei,
                ppt_witness: r.ppt_witness,
                entangled: r.entangled,
                d_minus: r.d_minus,
                e_n: r.e_n,
                e_n_unclipped: r.e_n_unclipped,
                delta: r.delta,
                delta_s: r.delta_s,
                gni: r.gni,
            },
            "out",
        )
    })
}

/// Three-mode report. Fails with `Unphysical` or `DimensionMismatch`.
///
/// # Safety
/// `state` must be live; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gi_invariants3(state: *const GiState, out: *mut GiReport3) -> GiStatus {
    guard(|| {
        let r = invariants::gni_three_mode(&deref(state, "state")?.0)?;
        put(
            out,
            GiReport3 {
                lni: r.lni,
                ei_pair: r.ei_pair,
                gni3: r.gni3,
                delta3: r.delta3,
                delta_s3: r.delta_s3,
                k: r.k,
                is_mode: r.is_mode,
                is_pair: r.is_pair,
            },
            "out",
        )
    })
}

// ---- scenarios ----

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GiTwinBeamBs {
    pub lni1: f64,
    pub lni2: f64,
    pub ei: f64,
    pub gni: f64,
    pub ncl_window_halfwidth: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct GiThreeModeScheme {
    pub lni: [f64; 3],
    pub ei_pair: [f64; 3],
    pub gni3: f64,
    pub asboth_estimate: f64,
}

/// Twin beam through a beam splitter; `simulate` selects the state pipeline
/// over the closed form.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gi_twin_beam_at_bs(bp: f64, t: f64, simulate: bool, out: *mut GiTwinBeamBs) -> GiStatus {
    guard(|| {
        let r = if simulate {
            scenarios::twin_beam_at_bs_simulated(bp, t)?
        } else {
            scenarios::twin_beam_at_bs(bp, t)?
        };
        put(
            out,
            GiTwinBeamBs {
                lni1: r.lni1,
                lni2: r.lni2,
                ei: r.ei,
                gni: r.gni,
                ncl_window_halfwidth: r.ncl_window_halfwidth,
            },
            "out",
        )
    })
}

/// Twin beam plus vacuum through the two-beam-splitter scheme.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn gi_three_mode_scheme(
    bp: f64,
    t: f64,
    simulate: bool,
    out: *mut GiThreeModeScheme,
) -> GiStatus {
    guard(|| {
        let r = if simulate {
            scenarios::three_mode_scheme(bp, t)?
        } else {
            scenarios::three_mode_scheme_closed_form(bp, t)?
        };
        put(
            out,
            GiThreeModeScheme {
                lni: r.lni,
                ei_pair: r.ei_pair,
                gni3: r.gni3,
                asboth_estimate: r.asboth_estimate,
            },
            "out",
        )
    })
}
