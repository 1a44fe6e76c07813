//! C ABI over the `vandermonde` crate.
//!
//! Every function returns a [`VdmStatus`]. On failure a message for the
//! calling thread is available from [`vdm_last_error_message`]. Handles are
//! opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use vandermonde::hermite::{pn_from_hermite, solve_extrema, ExtremePointSet};
use vandermonde::limits::ratio_limit;
use vandermonde::optimizer::{equi_residual, maximize_vn, OptimizerConfig};
use vandermonde::viz::{grid_eval, SphereGrid};
use vandermonde::{det_vandermonde, grad_vn, Error, ExponentVector, LogBranch, NodeVector};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NumericalFailure = 3,
    BufferTooSmall = 4,
    IoError = 5,
    Panic = 6,
}

impl From<&Error> for VdmStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::RootFindingFailure { .. } | Error::MaxItersExceeded { .. } => VdmStatus::NumericalFailure,
            _ => VdmStatus::InvalidArgument,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Message describing the last failure on this thread; empty after success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn vdm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

struct Fail(VdmStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(VdmStatus::from(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> VdmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            VdmStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("panic inside vandermonde");
            VdmStatus::Panic
        }
    }
}

fn null() -> Fail {
    Fail(VdmStatus::NullPointer, "null pointer argument".into())
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn slice_mut<'a, T>(ptr: *mut T, len: usize) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if ptr.is_null() {
        return Err(null());
    }
    Ok(std::slice::from_raw_parts_mut(ptr, len))
}

unsafe fn out_ref<'a, T>(ptr: *mut T) -> Result<&'a mut T, Fail> {
    ptr.as_mut().ok_or_else(null)
}

fn copy_into(dst: &mut [f64], src: &[f64]) -> Result<(), Fail> {
    if dst.len() < src.len() {
        return Err(Fail(
            VdmStatus::BufferTooSmall,
            format!("buffer holds {} values, {} needed", dst.len(), src.len()),
        ));
    }
    dst[..src.len()].copy_from_slice(src);
    Ok(())
}

/// `v_n(x) = prod_{i<j} (x_j - x_i)`.
///
/// # Safety
/// `x` must point to `n` doubles and `out` to one writable double.
#[no_mangle]
pub unsafe extern "C" fn vdm_det(x: *const f64, n: usize, out: *mut f64) -> VdmStatus {
    guard(|| {
        let x = slice(x, n)?;
        let out = out_ref(out)?;
        if x.is_empty() {
            return Err(Error::EmptyVector.into());
        }
        *out = det_vandermonde(x);
        Ok(())
    })
}

/// Gradient of `v_n` at `x`, written to `grad[0..n]`.
///
/// # Safety
/// `x` and `grad` must each point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn vdm_grad(x: *const f64, n: usize, grad: *mut f64) -> VdmStatus {
    guard(|| {
        let g = grad_vn(slice(x, n)?)?;
        copy_into(slice_mut(grad, n)?, &g)
    })
}

/// Ascending coefficients of the monic extreme-point polynomial `P_n`;
/// needs `len >= n + 1`.
///
/// # Safety
/// `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn vdm_pn_coefficients(n: usize, out: *mut f64, len: usize) -> VdmStatus {
    guard(|| {
        let p = pn_from_hermite(n)?;
        copy_into(slice_mut(out, len)?, p.coeffs())
    })
}

/// `sum_{i<j} (x_j - x_i)^-2 - (n(n-1)/2)^2 / 2`, zero at the extreme points.
///
/// # Safety
/// `x` must point to `n` doubles and `out` to one writable double.
#[no_mangle]
pub unsafe extern "C" fn vdm_equi_residual(x: *const f64, n: usize, out: *mut f64) -> VdmStatus {
    guard(|| {
        let r = equi_residual(slice(x, n)?)?;
        *out_ref(out)? = r;
        Ok(())
    })
}

/// Certified extreme points for one dimension.
pub struct VdmExtrema {
    set: ExtremePointSet,
}

/// Solves and certifies the extreme points of `v_n`, `2 <= n <= 50`.
///
/// # Safety
/// `out` must point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn vdm_extrema_new(n: usize, out: *mut *mut VdmExtrema) -> VdmStatus {
    guard(|| {
        let slot = out_ref(out)?;
        let set = solve_extrema(n)?;
        *slot = Box::into_raw(Box::new(VdmExtrema { set }));
        Ok(())
    })
}

/// Number of roots, which is `n`.
///
/// # Safety
/// `h` must be a live handle; `out` a writable size.
#[no_mangle]
pub unsafe extern "C" fn vdm_extrema_len(h: *const VdmExtrema, out: *mut usize) -> VdmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        *out_ref(out)? = h.set.roots.len();
        Ok(())
    })
}

/// Ascending roots into `out[0..n]`.
///
/// # Safety
/// `h` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn vdm_extrema_roots(h: *const VdmExtrema, out: *mut f64, len: usize) -> VdmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        copy_into(slice_mut(out, len)?, &h.set.roots)
    })
}

/// `|v_n|` at the extreme points and its base-10 logarithm.
///
/// # Safety
/// `h` must be a live handle; `value` and `log10_value` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn vdm_extrema_value(h: *const VdmExtrema, value: *mut f64, log10_value: *mut f64) -> VdmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        *out_ref(value)? = h.set.extreme_value;
        *out_ref(log10_value)? = h.set.log10_extreme_value;
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`vdm_extrema_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vdm_extrema_free(h: *mut VdmExtrema) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Maximizes `|v_n|` on the unit sphere from `restarts` seeded starts.
///
/// # Safety
/// `point` must point to `n` writable doubles and `value` to one.
#[no_mangle]
pub unsafe extern "C" fn vdm_maximize(
    n: usize,
    seed: u64,
    restarts: usize,
    point: *mut f64,
    value: *mut f64,
) -> VdmStatus {
    guard(|| {
        let point = slice_mut(point, n)?;
        let value = out_ref(value)?;
        let cfg = OptimizerConfig {
            seed,
            restarts,
            ..OptimizerConfig::new(n)
        };
        let best = maximize_vn(&cfg)?;
        copy_into(point, &best.final_point)?;
        *value = best.final_value;
        Ok(())
    })
}

/// A `(theta, phi)` lattice of determinant values.
pub struct VdmGrid {
    grid: SphereGrid,
}

/// Evaluates `v_n` (`3 <= n <= 7`) on a `theta_count x phi_count` lattice.
/// `exponents` may be null; otherwise it holds three integer exponents and
/// `n` must be 3.
///
/// # Safety
/// `exponents` must be null or point to `exponents_len` values; `out` must
/// point to a writable handle slot.
#[no_mangle]
pub unsafe extern "C" fn vdm_grid_new(
    n: usize,
    theta_count: usize,
    phi_count: usize,
    exponents: *const u32,
    exponents_len: usize,
    out: *mut *mut VdmGrid,
) -> VdmStatus {
    guard(|| {
        let slot = out_ref(out)?;
        let a = if exponents.is_null() {
            None
        } else {
            Some(slice(exponents, exponents_len)?.to_vec())
        };
        let grid = grid_eval(n, theta_count, phi_count, a)?;
        *slot = Box::into_raw(Box::new(VdmGrid { grid }));
        Ok(())
    })
}

/// # Safety
/// `h` must be a live handle; `theta_count` and `phi_count` writable sizes.
#[no_mangle]
pub unsafe extern "C" fn vdm_grid_dims(h: *const VdmGrid, theta_count: *mut usize, phi_count: *mut usize) -> VdmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        *out_ref(theta_count)? = h.grid.theta_count;
        *out_ref(phi_count)? = h.grid.phi_count;
        Ok(())
    })
}

/// Values in row-major order (`phi` rows, `theta` columns).
///
/// # Safety
/// `h` must be a live handle; `out` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn vdm_grid_values(h: *const VdmGrid, out: *mut f64, len: usize) -> VdmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        copy_into(slice_mut(out, len)?, &h.grid.values)
    })
}

/// Writes the grid as CSV with header `theta,phi,value`.
///
/// # Safety
/// `h` must be a live handle; `path` a nul-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn vdm_grid_write_csv(h: *const VdmGrid, path: *const c_char) -> VdmStatus {
    guard(|| {
        let h = h.as_ref().ok_or_else(null)?;
        if path.is_null() {
            return Err(null());
        }
        let path = CStr::from_ptr(path)
            .to_str()
            .map_err(|_| Fail(VdmStatus::InvalidArgument, "path is not UTF-8".into()))?;
        std::fs::write(path, h.grid.to_csv()).map_err(|e| Fail(VdmStatus::IoError, e.to_string()))
    })
}

/// # Safety
/// `h` must come from [`vdm_grid_new`] and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn vdm_grid_free(h: *mut VdmGrid) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// `g_n(x, a t) / v_n(a t)` for real positive nodes, with its `t -> 0` limit
/// `prod 1/(k-1)! * v_n(log x)`. Real parts are returned.
///
/// # Safety
/// `x` and `a` must each point to `n` doubles; `ratio` and `limit` to one writable double each.
#[no_mangle]
pub unsafe extern "C" fn vdm_ratio_limit(
    x: *const f64,
    a: *const f64,
    n: usize,
    t: f64,
    ratio: *mut f64,
    limit: *mut f64,
) -> VdmStatus {
    guard(|| {
        let nodes = NodeVector::new(slice(x, n)?.to_vec())?.to_complex();
        let exps = ExponentVector::new(slice(a, n)?.to_vec())?.to_complex();
        let report = ratio_limit(&nodes, &exps, &[t], LogBranch::PRINCIPAL)?;
        *out_ref(ratio)? = report.rows[0].ratio.re;
        *out_ref(limit)? = report.rhs.re;
        Ok(())
    })
}
