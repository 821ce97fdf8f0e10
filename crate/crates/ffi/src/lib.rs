// Copyright 2026 The relatherm Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI for relatherm.
//!
//! Objects are opaque handles created by `rt_*_new` and released with the
//! matching `rt_*_free`. Every fallible call returns an [`RtStatus`]; the
//! message of the last failure on the calling thread is available from
//! [`rt_last_error_message`]. Matrices cross the boundary as row-major
//! arrays of real and imaginary parts.

use std::cell::RefCell;
use std::ffi::{c_char, c_int};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_complex::Complex64;
use relatherm::dynamics::{evolve, stationary_state, DensityMatrix, EvolveOptions, Method};
use relatherm::kms::{hadamard_thermal, ImageSumSpec};
use relatherm::linalg::CMat;
use relatherm::liouville::{build_liouvillian, decompose_transitions, Liouvillian, SystemSpec, DEFAULT_OMEGA_TOL};
use relatherm::quad::QuadratureSpec;
use relatherm::spectral::{lamb_shift, BathSpec, Coupling};
use relatherm::thermo::heat_current;
use relatherm::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RtStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside the domain of the operation.
    Domain = 2,
    /// Quadrature, integrator or invariant failure.
    Numerical = 3,
    /// The stationary state is not unique.
    DegenerateStationary = 4,
    DimensionMismatch = 5,
    InvalidMatrix = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RtCoupling {
    Udw = 0,
    Td = 1,
}

/// Bath parameters.
pub struct RtBath(BathSpec);

/// Probe Hamiltonian and coupling operator.
pub struct RtSystem(SystemSpec);

/// Master-equation generator of a system in a bath.
pub struct RtGenerator(Liouvillian);

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> RtStatus {
    match err {
        Error::DegenerateNullSpace(_) => RtStatus::DegenerateStationary,
        Error::DimensionMismatch { .. } => RtStatus::DimensionMismatch,
        Error::InvalidMatrix(_) => RtStatus::InvalidMatrix,
        Error::Domain(_) | Error::MissingEpsilon | Error::Singularity(_) | Error::InsufficientDimension { .. } => {
            RtStatus::Domain
        }
        _ => RtStatus::Numerical,
    }
}

/// Runs `f`, recording errors and converting panics.
fn guard(f: impl FnOnce() -> Result<(), (RtStatus, String)>) -> RtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            RtStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside relatherm".into());
            RtStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (RtStatus, String) {
    (status_of(&e), e.to_string())
}

fn null() -> (RtStatus, String) {
    (RtStatus::NullPointer, "null pointer argument".into())
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), (RtStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, (RtStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn read_matrix(re: *const f64, im: *const f64, dim: usize) -> Result<CMat, (RtStatus, String)> {
    if re.is_null() {
        return Err(null());
    }
    let n = dim * dim;
    let re = std::slice::from_raw_parts(re, n);
    let im = if im.is_null() { None } else { Some(std::slice::from_raw_parts(im, n)) };
    Ok(CMat::from_fn(dim, dim, |i, j| Complex64::new(re[i * dim + j], im.map_or(0.0, |v| v[i * dim + j]))))
}

unsafe fn write_matrix(m: &CMat, re: *mut f64, im: *mut f64) -> Result<(), (RtStatus, String)> {
    if re.is_null() || im.is_null() {
        return Err(null());
    }
    let d = m.nrows();
    let re = std::slice::from_raw_parts_mut(re, d * d);
    let im = std::slice::from_raw_parts_mut(im, d * d);
    for i in 0..d {
        for j in 0..d {
            re[i * d + j] = m[(i, j)].re;
            im[i * d + j] = m[(i, j)].im;
        }
    }
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`) and returns the full message length in bytes.
///
/// # Safety
/// `buf` must be null or valid for `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn rt_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr(), buf.cast::<u8>(), n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn rt_bath_new(
    coupling: RtCoupling,
    beta: f64,
    u: f64,
    lambda: f64,
    out: *mut *mut RtBath,
) -> RtStatus {
    guard(|| {
        let c = match coupling {
            RtCoupling::Udw => Coupling::UdW,
            RtCoupling::Td => Coupling::TD,
        };
        let bath = BathSpec::new(c, beta, u, lambda).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(RtBath(bath))))
    })
}

/// # Safety
/// `bath` must be null or a handle from [`rt_bath_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn rt_bath_free(bath: *mut RtBath) {
    if !bath.is_null() {
        drop(Box::from_raw(bath));
    }
}

/// Effective occupation N(ω).
///
/// # Safety
/// `bath` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rt_bath_occupation(bath: *const RtBath, omega: f64, out: *mut f64) -> RtStatus {
    guard(|| put(out, handle(bath)?.0.occupation(omega).map_err(lib_err)?))
}

/// Vacuum decay rate γ(ω).
///
/// # Safety
/// `bath` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rt_bath_rate(bath: *const RtBath, omega: f64, out: *mut f64) -> RtStatus {
    guard(|| put(out, handle(bath)?.0.rate(omega).map_err(lib_err)?))
}

/// Energy shift Δ(ω) with short-time cutoff ε.
///
/// # Safety
/// `bath` must be a live handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rt_bath_lamb_shift(bath: *const RtBath, omega: f64, epsilon: f64, out: *mut f64) -> RtStatus {
    guard(|| {
        let b = handle(bath)?;
        put(out, lamb_shift(&b.0, omega, epsilon, &QuadratureSpec::default()).map_err(lib_err)?)
    })
}

/// System from row-major `dim`×`dim` matrices; a null imaginary part means zero.
///
/// # Safety
/// Non-null array arguments must hold `dim * dim` values; `out` must be
/// valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn rt_system_new(
    dim: usize,
    h_re: *const f64,
    h_im: *const f64,
    a_re: *const f64,
    a_im: *const f64,
    out: *mut *mut RtSystem,
) -> RtStatus {
    guard(|| {
        let h = read_matrix(h_re, h_im, dim)?;
        let a = read_matrix(a_re, a_im, dim)?;
        let sys = SystemSpec::new(h, a).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(RtSystem(sys))))
    })
}

/// Qubit h = ½Ω₀σ_z, A = σ_x in the basis (excited, ground).
///
/// # Safety
/// `out` must be valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn rt_system_qubit(omega0: f64, out: *mut *mut RtSystem) -> RtStatus {
    guard(|| {
        if omega0.is_nan() || omega0 <= 0.0 {
            return Err((RtStatus::Domain, format!("qubit frequency must be positive, got {omega0}")));
        }
        put(out, Box::into_raw(Box::new(RtSystem(relatherm::presets::qubit(omega0)))))
    })
}

/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_system_free(system: *mut RtSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// Hilbert-space dimension, or 0 for a null handle.
///
/// # Safety
/// `system` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_system_dim(system: *const RtSystem) -> usize {
    system.as_ref().map_or(0, |s| s.0.dim)
}

/// Generator of the master equation. `include_lamb` ≠ 0 adds the Lamb shift
/// with cutoff `epsilon`.
///
/// # Safety
/// `system` and `bath` must be live handles; `out` valid for writing a pointer.
#[no_mangle]
pub unsafe extern "C" fn rt_generator_new(
    system: *const RtSystem,
    bath: *const RtBath,
    include_lamb: c_int,
    epsilon: f64,
    out: *mut *mut RtGenerator,
) -> RtStatus {
    guard(|| {
        let sys = &handle(system)?.0;
        let bath = &handle(bath)?.0;
        let dec = decompose_transitions(sys, DEFAULT_OMEGA_TOL).map_err(lib_err)?;
        let eps = (include_lamb != 0).then_some(epsilon);
        let gen = build_liouvillian(sys, bath, &dec, include_lamb != 0, eps).map_err(lib_err)?;
        put(out, Box::into_raw(Box::new(RtGenerator(gen))))
    })
}

/// # Safety
/// `generator` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_generator_free(generator: *mut RtGenerator) {
    if !generator.is_null() {
        drop(Box::from_raw(generator));
    }
}

/// Unique stationary state, written as row-major real and imaginary parts.
///
/// # Safety
/// `generator` must be a live handle; `out_re`, `out_im` must hold dim² values.
#[no_mangle]
pub unsafe extern "C" fn rt_generator_stationary(
    generator: *const RtGenerator,
    tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RtStatus {
    guard(|| {
        let gen = &handle(generator)?.0;
        let rho = stationary_state(gen, tol).map_err(lib_err)?;
        write_matrix(rho.matrix(), out_re, out_im)
    })
}

/// Evolves ρ₀ to `t_final` with block matrix exponentials.
///
/// # Safety
/// `generator` must be a live handle; input and output arrays must hold
/// dim² values (`rho_im` may be null).
#[no_mangle]
pub unsafe extern "C" fn rt_generator_evolve(
    generator: *const RtGenerator,
    rho_re: *const f64,
    rho_im: *const f64,
    t_final: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RtStatus {
    guard(|| {
        let gen = &handle(generator)?.0;
        let rho0 = DensityMatrix::new(read_matrix(rho_re, rho_im, gen.dim)?).map_err(lib_err)?;
        let opts = EvolveOptions { method: Method::ExpStep, sample_every: Some(t_final), ..Default::default() };
        let traj = evolve(gen, &rho0, t_final, &opts).map_err(lib_err)?;
        write_matrix(traj.last(), out_re, out_im)
    })
}

/// Heat current q = Tr(ℒ[ρ] h).
///
/// # Safety
/// `generator` must be a live handle; arrays must hold dim² values
/// (`rho_im` may be null); `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rt_generator_heat_current(
    generator: *const RtGenerator,
    rho_re: *const f64,
    rho_im: *const f64,
    out: *mut f64,
) -> RtStatus {
    guard(|| {
        let gen = &handle(generator)?.0;
        let rho = read_matrix(rho_re, rho_im, gen.dim)?;
        put(out, heat_current(gen, &rho, &gen.system).map_err(lib_err)?)
    })
}

/// Thermal Hadamard function G_β(t, r) at complex time t from the image sum
/// truncated at `nmax`.
///
/// # Safety
/// `out_re` and `out_im` must be valid for writing.
#[no_mangle]
pub unsafe extern "C" fn rt_hadamard_thermal(
    beta: f64,
    nmax: usize,
    t_re: f64,
    t_im: f64,
    r: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> RtStatus {
    guard(|| {
        let spec = ImageSumSpec::new(beta, nmax, 0.0).map_err(lib_err)?;
        let g = hadamard_thermal(&spec, Complex64::new(t_re, t_im), r).map_err(lib_err)?.value;
        put(out_re, g.re)?;
        put(out_im, g.im)
    })
}
