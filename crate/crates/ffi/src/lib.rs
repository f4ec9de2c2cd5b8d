//! C interface to `bilinear-lab`.
//!
//! Objects are passed as opaque handles created by `bl_*_new`-style constructors and released
//! with the matching `bl_*_free`. Every fallible call returns a status code; `BL_OK` is 0 and the
//! message of the most recent failure on the calling thread is available via
//! `bl_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bilinear_lab::indices::{rational_to_f64, Classification, Exponent, IndexTuple, Q};
use bilinear_lab::operator::{apply_bilinear, tau_symbol};
use bilinear_lab::partitions::LpFamily;
use bilinear_lab::spaces::{bmo_norm, lebesgue_norm, local_hardy_norm, sobolev_norm};
use bilinear_lab::symbols::Symbol;
use bilinear_lab::torus::{GridFunction, TorusGrid};
use bilinear_lab::LabError;
use num_complex::Complex64;

pub const BL_OK: i32 = 0;
/// A required pointer argument was null or a length did not match.
pub const BL_ERR_ARGUMENT: i32 = 1;
pub const BL_ERR_INVALID_GRID: i32 = 2;
pub const BL_ERR_BAND_LIMIT: i32 = 3;
pub const BL_ERR_GRID_MISMATCH: i32 = 4;
pub const BL_ERR_OUTSIDE_WINDOW: i32 = 5;
pub const BL_ERR_INVALID_PARAMETER: i32 = 6;
pub const BL_ERR_DEGENERATE: i32 = 7;
pub const BL_ERR_LATTICE_ONLY: i32 = 8;
pub const BL_ERR_QUADRATURE: i32 = 9;
pub const BL_ERR_COVER_FAILURE: i32 = 10;
pub const BL_ERR_INSUFFICIENT_POINTS: i32 = 11;
pub const BL_ERR_CONFIG: i32 = 12;
/// The library panicked; the handle arguments are left untouched.
pub const BL_ERR_PANIC: i32 = 99;

pub const BL_BOUNDED: i32 = 1;
pub const BL_UNBOUNDED: i32 = -1;
pub const BL_UNDETERMINED: i32 = 0;

/// Torus grid handle.
pub struct BlGrid(TorusGrid);

/// Sampled band-limited function handle.
pub struct BlFunction(GridFunction);

/// Bilinear symbol handle.
pub struct BlSymbol(Symbol);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(code: i32, msg: impl Into<String>) -> i32 {
    set_error(msg.into());
    code
}

fn lab_fail(e: LabError) -> i32 {
    let code = e.code();
    fail(code, e.to_string())
}

/// Runs `body`, mapping errors and panics onto status codes.
fn guard(body: impl FnOnce() -> Result<(), i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BL_OK,
        Ok(Err(code)) => code,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(BL_ERR_PANIC, msg)
        }
    }
}

fn lab<T>(r: bilinear_lab::Result<T>) -> Result<T, i32> {
    r.map_err(lab_fail)
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, i32> {
    p.as_ref().ok_or_else(|| fail(BL_ERR_ARGUMENT, format!("{what} is null")))
}

unsafe fn store<T>(out: *mut *mut T, value: T) -> Result<(), i32> {
    if out.is_null() {
        return Err(fail(BL_ERR_ARGUMENT, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn exponent(recip_num: i64, recip_den: i64) -> Result<Exponent, i32> {
    if recip_den <= 0 {
        return Err(fail(BL_ERR_ARGUMENT, "exponent denominator must be positive"));
    }
    lab(Exponent::from_recip(Q::new(recip_num, recip_den)))
}

/// Length of the last error message on this thread, 0 if none was recorded.
#[no_mangle]
pub extern "C" fn bl_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |c| c.as_bytes().len()))
}

/// Copies the last error message, NUL-terminated and truncated to `capacity`.
/// Returns the full message length excluding the terminator.
///
/// # Safety
/// `buf` must be null or point to `capacity` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn bl_last_error_message(buf: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |c| c.as_bytes());
        if !buf.is_null() && capacity > 0 {
            let n = bytes.len().min(capacity - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Grid of `size^dim` points on `[0,2π)^dim` carrying frequencies `|k|_∞ ≤ band_limit`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn bl_grid_new(dim: usize, size: usize, band_limit: usize, out: *mut *mut BlGrid) -> i32 {
    guard(|| store(out, BlGrid(lab(TorusGrid::new(dim, size, band_limit))?)))
}

/// Number of sample points of the grid, 0 for a null handle.
///
/// # Safety
/// `grid` must be null or a live grid handle.
#[no_mangle]
pub unsafe extern "C" fn bl_grid_len(grid: *const BlGrid) -> usize {
    grid.as_ref().map_or(0, |g| g.0.len())
}

/// # Safety
/// `grid` must be null or a handle from `bl_grid_new` not already freed.
#[no_mangle]
pub unsafe extern "C" fn bl_grid_free(grid: *mut BlGrid) {
    if !grid.is_null() {
        drop(Box::from_raw(grid));
    }
}

/// Function from `len` complex samples in row-major order; `len` must equal the grid length.
/// Fails with `BL_ERR_BAND_LIMIT` when the samples carry frequencies beyond the band.
///
/// # Safety
/// `re` and `im` must point to `len` readable doubles; `im` may be null for real data.
#[no_mangle]
pub unsafe extern "C" fn bl_function_from_samples(
    grid: *const BlGrid,
    re: *const f64,
    im: *const f64,
    len: usize,
    out: *mut *mut BlFunction,
) -> i32 {
    guard(|| {
        let grid = deref(grid, "grid")?;
        if re.is_null() {
            return Err(fail(BL_ERR_ARGUMENT, "re is null"));
        }
        if len != grid.0.len() {
            return Err(fail(BL_ERR_ARGUMENT, format!("expected {} samples, got {len}", grid.0.len())));
        }
        let re = std::slice::from_raw_parts(re, len);
        let samples = if im.is_null() {
            re.iter().map(|&r| Complex64::new(r, 0.0)).collect()
        } else {
            let im = std::slice::from_raw_parts(im, len);
            re.iter().zip(im).map(|(&r, &i)| Complex64::new(r, i)).collect()
        };
        let f = lab(GridFunction::from_samples(grid.0.clone(), samples))?;
        lab(f.band_support())?;
        store(out, BlFunction(f))
    })
}

/// Copies the samples out; `len` must equal the grid length. Either output may be null.
///
/// # Safety
/// Non-null `re`/`im` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn bl_function_samples(f: *const BlFunction, re: *mut f64, im: *mut f64, len: usize) -> i32 {
    guard(|| {
        let f = deref(f, "function")?;
        let samples = f.0.samples();
        if len != samples.len() {
            return Err(fail(BL_ERR_ARGUMENT, format!("expected length {}, got {len}", samples.len())));
        }
        for (i, c) in samples.iter().enumerate() {
            if !re.is_null() {
                *re.add(i) = c.re;
            }
            if !im.is_null() {
                *im.add(i) = c.im;
            }
        }
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a live function handle.
#[no_mangle]
pub unsafe extern "C" fn bl_function_free(f: *mut BlFunction) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The constant symbol `re + i·im`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn bl_symbol_constant(dim: usize, re: f64, im: f64, out: *mut *mut BlSymbol) -> i32 {
    guard(|| store(out, BlSymbol(Symbol::constant(dim, Complex64::new(re, im)))))
}

/// `(1+|ξ_1|²+|ξ_2|²)^{m/2}`.
///
/// # Safety
/// `out` must be a valid pointer to a handle slot.
#[no_mangle]
pub unsafe extern "C" fn bl_symbol_bracket_power(dim: usize, m: f64, out: *mut *mut BlSymbol) -> i32 {
    guard(|| store(out, BlSymbol(Symbol::bracket_power(dim, m))))
}

/// `τ(σ) = ⟨ξ_1+ξ_2⟩^s σ ⟨ξ_1⟩^{-s_1} ⟨ξ_2⟩^{-s_2}`.
///
/// # Safety
/// `sigma` must be a live symbol handle and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn bl_symbol_tau(
    sigma: *const BlSymbol,
    s1: f64,
    s2: f64,
    s: f64,
    out: *mut *mut BlSymbol,
) -> i32 {
    guard(|| {
        let sigma = deref(sigma, "sigma")?;
        store(out, BlSymbol(lab(tau_symbol(&sigma.0, s1, s2, s))?))
    })
}

/// # Safety
/// `sigma` must be null or a live symbol handle.
#[no_mangle]
pub unsafe extern "C" fn bl_symbol_free(sigma: *mut BlSymbol) {
    if !sigma.is_null() {
        drop(Box::from_raw(sigma));
    }
}

/// `T_σ(f_1, f_2)` on the grid of the inputs.
///
/// # Safety
/// All handles must be live and `out` a valid handle slot.
#[no_mangle]
pub unsafe extern "C" fn bl_apply_bilinear(
    sigma: *const BlSymbol,
    f1: *const BlFunction,
    f2: *const BlFunction,
    out: *mut *mut BlFunction,
) -> i32 {
    guard(|| {
        let sigma = deref(sigma, "sigma")?;
        let f1 = deref(f1, "f1")?;
        let f2 = deref(f2, "f2")?;
        store(out, BlFunction(lab(apply_bilinear(&sigma.0, &f1.0, &f2.0))?))
    })
}

/// Norm selector for `bl_norm`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlSpace {
    Lebesgue = 0,
    Sobolev = 1,
    LocalHardy = 2,
    Bmo = 3,
}

/// Norm of `f` in the selected space. The exponent is given by its reciprocal
/// `recip_num/recip_den`, so `0/1` is `p = ∞`. `s` is ignored for `Lebesgue`, and the exponent
/// for `Bmo`.
///
/// # Safety
/// `f` must be a live function handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn bl_norm(
    f: *const BlFunction,
    space: BlSpace,
    recip_num: i64,
    recip_den: i64,
    s: f64,
    out: *mut f64,
) -> i32 {
    guard(|| {
        let f = deref(f, "function")?;
        if out.is_null() {
            return Err(fail(BL_ERR_ARGUMENT, "output pointer is null"));
        }
        let value = match space {
            BlSpace::Bmo => bmo_norm(&f.0, s),
            BlSpace::Lebesgue => lebesgue_norm(&f.0, exponent(recip_num, recip_den)?),
            BlSpace::Sobolev => sobolev_norm(&f.0, exponent(recip_num, recip_den)?, s),
            BlSpace::LocalHardy => {
                lab(local_hardy_norm(&f.0, exponent(recip_num, recip_den)?, s, &LpFamily::sharp()))?
            }
        };
        *out = value.value;
        Ok(())
    })
}

/// Index tuple in C form. Exponents are given by reciprocals `num/den` (`0/1` is `∞`);
/// smoothness indices and the order by `num/den`.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct BlIndexTuple {
    pub n: u32,
    pub p1: [i64; 2],
    pub p2: [i64; 2],
    pub p: [i64; 2],
    pub s1: [i64; 2],
    pub s2: [i64; 2],
    pub s: [i64; 2],
    pub m: [i64; 2],
}

fn rational(v: [i64; 2]) -> Result<Q, i32> {
    if v[1] == 0 {
        return Err(fail(BL_ERR_ARGUMENT, "zero denominator"));
    }
    Ok(Q::new(v[0], v[1]))
}

fn tuple(t: &BlIndexTuple) -> Result<IndexTuple, i32> {
    lab(IndexTuple::new(
        t.n,
        exponent(t.p1[0], t.p1[1])?,
        exponent(t.p2[0], t.p2[1])?,
        exponent(t.p[0], t.p[1])?,
        rational(t.s1)?,
        rational(t.s2)?,
        rational(t.s)?,
        rational(t.m)?,
    ))
}

/// Critical order of the tuple; the reduced fraction goes to `num`/`den`, which may be null.
///
/// # Safety
/// `t` must point to a valid tuple; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn bl_critical_order(t: *const BlIndexTuple, num: *mut i64, den: *mut i64, value: *mut f64) -> i32 {
    guard(|| {
        let t = tuple(deref(t, "tuple")?)?;
        let m = t.m_critical();
        if !num.is_null() {
            *num = *m.numer();
        }
        if !den.is_null() {
            *den = *m.denom();
        }
        if !value.is_null() {
            *value = rational_to_f64(m);
        }
        Ok(())
    })
}

/// Writes `BL_BOUNDED`, `BL_UNBOUNDED` or `BL_UNDETERMINED`.
///
/// # Safety
/// `t` must point to a valid tuple and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn bl_classify(t: *const BlIndexTuple, out: *mut i32) -> i32 {
    guard(|| {
        let t = tuple(deref(t, "tuple")?)?;
        if out.is_null() {
            return Err(fail(BL_ERR_ARGUMENT, "output pointer is null"));
        }
        *out = match t.classify() {
            Classification::BoundedByTheorem => BL_BOUNDED,
            Classification::UnboundedByTheorem => BL_UNBOUNDED,
            Classification::Undetermined => BL_UNDETERMINED,
        };
        Ok(())
    })
}
