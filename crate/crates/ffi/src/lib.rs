//! C ABI over `tsvf-lab`.
//!
//! Objects are opaque heap handles created by `*_new` style constructors and
//! released with the matching `*_free`. Every fallible call returns a
//! [`TsvfStatus`]; on failure a human-readable message is kept per thread and
//! can be copied out with [`tsvf_last_error_message`].
//!
//! Complex arrays are passed as separate real and imaginary arrays. Matrices
//! are row-major. Output arrays come with a capacity; when it is too small the
//! call fails with `TSVF_STATUS_BUFFER_TOO_SMALL` and still writes the
//! required length.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use tsvf_lab::pointer::{distribution_center, pointer_distribution, GridSpec, PointerConfig};
use tsvf_lab::qcore::{spin, Amplitude, HermitianOperator, StateVector};
use tsvf_lab::scenarios::{all_plus_tsv, box_projector, three_box, three_box_trivial};
use tsvf_lab::tsvf::{abl, element_of_reality, weak_value, OutcomeDistribution, TwoStateVector};
use tsvf_lab::worlds::{counterfactual, parse_world, World};
use tsvf_lab::Error;

/// Result code of every fallible call.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsvfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    BufferTooSmall = 3,
    InvalidArgument = 4,
    Panic = 5,
    DimensionMismatch = 10,
    Malformed = 11,
    NotHermitian = 12,
    NotConverged = 13,
    VanishingPostSelection = 14,
    OrthogonalSelections = 15,
    NoPostSelectedShots = 16,
    GridTooNarrow = 17,
    NoBracketingCompleteMeasurements = 18,
    InterveningRecord = 19,
    TimeCollision = 20,
    SyntaxError = 21,
    OutcomeNotEigenvalue = 22,
    DuplicateTimestamp = 23,
    UnknownObservable = 24,
    InvalidProtocol = 25,
    ValidationFailed = 26,
}

impl From<&Error> for TsvfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::DimensionMismatch { .. } => TsvfStatus::DimensionMismatch,
            Error::Malformed(_) => TsvfStatus::Malformed,
            Error::NotHermitian { .. } => TsvfStatus::NotHermitian,
            Error::NotConverged { .. } => TsvfStatus::NotConverged,
            Error::VanishingPostSelection { .. } => TsvfStatus::VanishingPostSelection,
            Error::OrthogonalSelections { .. } => TsvfStatus::OrthogonalSelections,
            Error::NoPostSelectedShots { .. } => TsvfStatus::NoPostSelectedShots,
            Error::GridTooNarrow { .. } => TsvfStatus::GridTooNarrow,
            Error::NoBracketingCompleteMeasurements { .. } => TsvfStatus::NoBracketingCompleteMeasurements,
            Error::InterveningRecord { .. } => TsvfStatus::InterveningRecord,
            Error::TimeCollision { .. } => TsvfStatus::TimeCollision,
            Error::Syntax { .. } => TsvfStatus::SyntaxError,
            Error::OutcomeNotEigenvalue { .. } => TsvfStatus::OutcomeNotEigenvalue,
            Error::DuplicateTimestamp { .. } => TsvfStatus::DuplicateTimestamp,
            Error::UnknownObservable(_) => TsvfStatus::UnknownObservable,
            Error::InvalidProtocol(_) => TsvfStatus::InvalidProtocol,
            Error::ValidationFailed(_) => TsvfStatus::ValidationFailed,
        }
    }
}

/// Hermitian operator handle.
pub struct TsvfOperator {
    inner: HermitianOperator,
}

/// Pre- and post-selected state pair.
pub struct TsvfTwoState {
    inner: TwoStateVector,
}

/// Parsed world file.
pub struct TsvfWorld {
    inner: World,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

struct Failure {
    status: TsvfStatus,
    message: String,
}

impl Failure {
    fn new(status: TsvfStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(TsvfStatus::from(&e), format!("{}: {e}", e.name()))
    }
}

type Outcome = std::result::Result<(), Failure>;

fn guard(f: impl FnOnce() -> Outcome) -> TsvfStatus {
    let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|payload| {
        let msg = payload
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| payload.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "panic".into());
        Err(Failure::new(TsvfStatus::Panic, msg))
    });
    match result {
        Ok(()) => {
            LAST_ERROR.with(|e| e.borrow_mut().clear());
            TsvfStatus::Ok
        }
        Err(f) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = f.message);
            f.status
        }
    }
}

fn null(what: &str) -> Failure {
    Failure::new(TsvfStatus::NullPointer, format!("{what} is null"))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn input<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn complex(re: *const f64, im: *const f64, len: usize) -> Result<Vec<Amplitude>, Failure> {
    let re = input(re, len, "real part")?;
    let im = input(im, len, "imaginary part")?;
    Ok(re.iter().zip(im).map(|(&r, &i)| Amplitude::new(r, i)).collect())
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure::new(TsvfStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn emit<T>(value: T, slot: *mut *mut T) -> Outcome {
    let slot = out(slot, "output handle")?;
    *slot = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_distribution(
    dist: &OutcomeDistribution,
    values: *mut f64,
    probabilities: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> Outcome {
    *out(len, "len")? = dist.len();
    if dist.len() > capacity {
        return Err(Failure::new(
            TsvfStatus::BufferTooSmall,
            format!("need room for {} outcomes, capacity is {capacity}", dist.len()),
        ));
    }
    if values.is_null() || probabilities.is_null() {
        return Err(null("output array"));
    }
    for (k, (v, p)) in dist.pairs().iter().enumerate() {
        *values.add(k) = *v;
        *probabilities.add(k) = *p;
    }
    Ok(())
}

/// Copies the calling thread's last error message, NUL-terminated and
/// truncated to `capacity`. Returns the full message length in bytes,
/// excluding the terminator; 0 when the last call succeeded.
///
/// # Safety
/// `buffer` must be null or valid for `capacity` bytes.
#[no_mangle]
pub unsafe extern "C" fn tsvf_last_error_message(buffer: *mut c_char, capacity: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buffer.is_null() && capacity > 0 {
            let n = msg.len().min(capacity - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buffer, n);
            *buffer.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a Hermitian operator from `dim * dim` row-major entries.
///
/// # Safety
/// `re` and `im` must each point to `dim * dim` doubles; `result` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_operator_new(
    dim: usize,
    re: *const f64,
    im: *const f64,
    result: *mut *mut TsvfOperator,
) -> TsvfStatus {
    guard(|| {
        let n = dim
            .checked_mul(dim)
            .ok_or_else(|| Failure::new(TsvfStatus::InvalidArgument, "dimension overflows"))?;
        let inner = HermitianOperator::new(dim, complex(re, im, n)?)?;
        emit(TsvfOperator { inner }, result)
    })
}

/// Built-in observables: `P_A`, `P_B`, `P_C` (dim 3) and `s_x`, `s_y`,
/// `s_z`, `s_xi` (dim 2).
///
/// # Safety
/// `name` must be a NUL-terminated string; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_operator_builtin(name: *const c_char, result: *mut *mut TsvfOperator) -> TsvfStatus {
    guard(|| {
        let inner = match text(name, "name")? {
            "P_A" => box_projector(0),
            "P_B" => box_projector(1),
            "P_C" => box_projector(2),
            "s_x" => spin::s_x(),
            "s_y" => spin::s_y(),
            "s_z" => spin::s_z(),
            "s_xi" => spin::s_xi(),
            other => return Err(Error::UnknownObservable(other.to_string()).into()),
        };
        emit(TsvfOperator { inner }, result)
    })
}

/// Lifts `op` onto factor `index` of a tensor product with the given factor
/// dimensions.
///
/// # Safety
/// `op` must be a live handle, `dims` must point to `n_dims` values and
/// `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_operator_embed(
    op: *const TsvfOperator,
    index: usize,
    dims: *const usize,
    n_dims: usize,
    result: *mut *mut TsvfOperator,
) -> TsvfStatus {
    guard(|| {
        let op = handle(op, "operator")?;
        let inner = op.inner.embed(index, input(dims, n_dims, "dims")?)?;
        emit(TsvfOperator { inner }, result)
    })
}

/// Dimension of the operator, or 0 for a null handle.
///
/// # Safety
/// `op` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsvf_operator_dim(op: *const TsvfOperator) -> usize {
    op.as_ref().map_or(0, |o| o.inner.dim())
}

/// # Safety
/// `op` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tsvf_operator_free(op: *mut TsvfOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Builds a two-state vector from unnormalized pre- and post-selected
/// amplitudes.
///
/// # Safety
/// All four arrays must hold `dim` doubles; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_two_state_new(
    dim: usize,
    pre_re: *const f64,
    pre_im: *const f64,
    post_re: *const f64,
    post_im: *const f64,
    result: *mut *mut TsvfTwoState,
) -> TsvfStatus {
    guard(|| {
        let pre = StateVector::new(complex(pre_re, pre_im, dim)?)?;
        let post = StateVector::new(complex(post_re, post_im, dim)?)?;
        emit(
            TsvfTwoState {
                inner: TwoStateVector::new(pre, post)?,
            },
            result,
        )
    })
}

/// Built-in two-state vectors: `three-box`, `three-box-trivial`, `all-plus`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_two_state_scenario(name: *const c_char, result: *mut *mut TsvfTwoState) -> TsvfStatus {
    guard(|| {
        let inner = match text(name, "name")? {
            "three-box" => three_box(),
            "three-box-trivial" => three_box_trivial(),
            "all-plus" => all_plus_tsv(),
            other => {
                return Err(Failure::new(
                    TsvfStatus::InvalidArgument,
                    format!("unknown scenario `{other}`"),
                ))
            }
        };
        emit(TsvfTwoState { inner }, result)
    })
}

/// Dimension of the two-state vector, or 0 for a null handle.
///
/// # Safety
/// `tsv` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsvf_two_state_dim(tsv: *const TsvfTwoState) -> usize {
    tsv.as_ref().map_or(0, |t| t.inner.dim())
}

/// # Safety
/// `tsv` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tsvf_two_state_free(tsv: *mut TsvfTwoState) {
    if !tsv.is_null() {
        drop(Box::from_raw(tsv));
    }
}

/// ABL outcome distribution: ascending distinct eigenvalues and their
/// probabilities.
///
/// # Safety
/// Handles must be live; `values` and `probabilities` must hold `capacity`
/// doubles; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_abl(
    tsv: *const TsvfTwoState,
    observable: *const TsvfOperator,
    values: *mut f64,
    probabilities: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> TsvfStatus {
    guard(|| {
        let dist = abl(
            &handle(tsv, "two-state")?.inner,
            &handle(observable, "observable")?.inner,
        )?;
        write_distribution(&dist, values, probabilities, capacity, len)
    })
}

/// Complex weak value `<post|op|pre> / <post|pre>`.
///
/// # Safety
/// Handles must be live; `re` and `im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_weak_value(
    tsv: *const TsvfTwoState,
    op: *const TsvfOperator,
    re: *mut f64,
    im: *mut f64,
) -> TsvfStatus {
    guard(|| {
        let w = weak_value(&handle(tsv, "two-state")?.inner, &handle(op, "operator")?.inner)?;
        *out(re, "re")? = w.re;
        *out(im, "im")? = w.im;
        Ok(())
    })
}

/// Sets `*found` and, when an outcome is certain within `tolerance`, writes
/// it to `*value`.
///
/// # Safety
/// Handles must be live; `found` and `value` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_element_of_reality(
    tsv: *const TsvfTwoState,
    observable: *const TsvfOperator,
    tolerance: f64,
    found: *mut bool,
    value: *mut f64,
) -> TsvfStatus {
    guard(|| {
        let certain = element_of_reality(
            &handle(tsv, "two-state")?.inner,
            &handle(observable, "observable")?.inner,
            tolerance,
        )?;
        *out(found, "found")? = certain.is_some();
        if let Some(c) = certain {
            *out(value, "value")? = c;
        }
        Ok(())
    })
}

/// Mean pointer position and post-selection probability for a Gaussian
/// pointer of spread `width` and coupling `coupling`, on an automatically
/// sized grid of `n_points`.
///
/// # Safety
/// Handles must be live; `center` and `post_selection_probability` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_pointer_center(
    tsv: *const TsvfTwoState,
    observable: *const TsvfOperator,
    width: f64,
    coupling: f64,
    n_points: usize,
    center: *mut f64,
    post_selection_probability: *mut f64,
) -> TsvfStatus {
    guard(|| {
        let tsv = &handle(tsv, "two-state")?.inner;
        let obs = &handle(observable, "observable")?.inner;
        let cfg = PointerConfig::new(width, coupling)?;
        let eigenvalues: Vec<f64> = obs.spectral()?.eigenvalues().collect();
        let grid = GridSpec::auto(&eigenvalues, &cfg, n_points)?;
        let density = pointer_distribution(tsv, obs, &cfg, &grid)?;
        *out(center, "center")? = distribution_center(&density);
        *out(post_selection_probability, "post_selection_probability")? = density.post_selection_probability;
        Ok(())
    })
}

/// Parses world-file text.
///
/// # Safety
/// `source` must be a NUL-terminated string; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_world_parse(source: *const c_char, result: *mut *mut TsvfWorld) -> TsvfStatus {
    guard(|| {
        let inner = parse_world(text(source, "source")?)?;
        emit(TsvfWorld { inner }, result)
    })
}

/// Outcome distribution of the named observable measured at `time`.
///
/// # Safety
/// `world` must be live; `observable` NUL-terminated; `values` and
/// `probabilities` must hold `capacity` doubles; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tsvf_world_counterfactual(
    world: *const TsvfWorld,
    time: i64,
    observable: *const c_char,
    values: *mut f64,
    probabilities: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> TsvfStatus {
    guard(|| {
        let world = &handle(world, "world")?.inner;
        let name = text(observable, "observable")?;
        let op = world
            .observable(name)
            .ok_or_else(|| Error::UnknownObservable(name.to_string()))?;
        let dist = counterfactual(world, time, op)?;
        write_distribution(&dist, values, probabilities, capacity, len)
    })
}

/// # Safety
/// `world` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tsvf_world_free(world: *mut TsvfWorld) {
    if !world.is_null() {
        drop(Box::from_raw(world));
    }
}
