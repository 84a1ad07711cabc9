//! C ABI over the `posets` library.
//!
//! Every fallible call returns a [`PosetsStatus`] and writes its result
//! through an out-pointer. On failure the message is kept per thread and
//! read back with [`posets_last_error_message`]. Strings handed out by the
//! library are released with [`posets_string_free`], posets with
//! [`posets_poset_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use posets::gadgets::{run_pipeline, Family, FnTable};
use posets::ideals::et_decompose;
use posets::interval_tree::count_intervals;
use posets::io::{cover_to_doc, poset_from_json, poset_to_json};
use posets::priority::{prio_run, PoolEvaluator};
use posets::separation::separate_down;
use posets::{Error, Poset};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PosetsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Schema = 4,
    NotAPartialOrder = 5,
    NotInCarrier = 6,
    Precondition = 7,
    Capped = 8,
    Overflow = 9,
    BufferTooSmall = 10,
    Internal = 11,
}

/// Opaque handle to a validated poset.
pub struct PosetsPoset {
    inner: Poset,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PosetsStatus {
    match e {
        Error::Json(_) => PosetsStatus::Parse,
        Error::Schema(_) | Error::Io(_) => PosetsStatus::Schema,
        Error::NotAPartialOrder(_) => PosetsStatus::NotAPartialOrder,
        Error::NotInCarrier(_) | Error::OutsideSubset(_) => PosetsStatus::NotInCarrier,
        Error::Precondition(_) | Error::NoAdmissiblePair { .. } | Error::NonMonotoneEvaluator { .. } => {
            PosetsStatus::Precondition
        }
        Error::Capped { .. } => PosetsStatus::Capped,
        Error::Overflow => PosetsStatus::Overflow,
        Error::Inconsistency(_) => PosetsStatus::Internal,
    }
}

struct Fail(PosetsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PosetsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PosetsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PosetsStatus::Ok,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("panic inside the library".into());
            PosetsStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(PosetsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn slice_arg<'a>(p: *const u64, len: usize, what: &str) -> Result<&'a [u64], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn poset_arg<'a>(p: *const PosetsPoset) -> Result<&'a Poset, Fail> {
    p.as_ref().map(|h| &h.inner).ok_or_else(|| null("poset"))
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(PosetsStatus::Internal, "nul in output".into()))?;
    *out = c.into_raw();
    Ok(())
}

fn json<T: serde::Serialize>(v: &T) -> Result<String, Fail> {
    Ok(serde_json::to_string(v).map_err(Error::from)?)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn posets_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parse a poset document (`{"elements": [...], "leq": [...]}`).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn posets_poset_from_json(json: *const c_char, out: *mut *mut PosetsPoset) -> PosetsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let p = poset_from_json(str_arg(json, "json")?)?;
        *out = Box::into_raw(Box::new(PosetsPoset { inner: p }));
        Ok(())
    })
}

/// # Safety
/// `p` must come from [`posets_poset_from_json`] and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn posets_poset_free(p: *mut PosetsPoset) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of elements, 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn posets_poset_len(p: *const PosetsPoset) -> usize {
    p.as_ref().map_or(0, |h| h.inner.len())
}

/// Whether `a ⪯ b`, by element id.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn posets_poset_leq(p: *const PosetsPoset, a: u64, b: u64, out: *mut bool) -> PosetsStatus {
    guard(|| {
        let p = poset_arg(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = p.leq(p.index(a)?, p.index(b)?);
        Ok(())
    })
}

/// Poset as a closed JSON document.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn posets_poset_to_json(p: *const PosetsPoset, out: *mut *mut c_char) -> PosetsStatus {
    guard(|| {
        let p = poset_arg(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        out_string(out, poset_to_json(p))
    })
}

/// Number of initial intervals. `POSETS_STATUS_OVERFLOW` if it does not fit.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn posets_count_intervals(p: *const PosetsPoset, out: *mut u64) -> PosetsStatus {
    guard(|| {
        let p = poset_arg(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = u64::try_from(count_intervals(p)?).map_err(|_| Error::Overflow)?;
        Ok(())
    })
}

/// Ids of a maximum strong antichain. `*len` is always set to its size; the
/// ids are written only when `cap` is large enough, otherwise the call
/// returns `POSETS_STATUS_BUFFER_TOO_SMALL`.
///
/// # Safety
/// `ids` must have room for `cap` values (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn posets_max_strong_antichain(
    p: *const PosetsPoset,
    ids: *mut u64,
    cap: usize,
    len: *mut usize,
) -> PosetsStatus {
    guard(|| {
        let p = poset_arg(p)?;
        if len.is_null() {
            return Err(null("len"));
        }
        let (_, w) = posets::antichains::max_strong_antichain(p);
        let w = p.ids_of(&w);
        *len = w.len();
        if w.len() > cap {
            return Err(Fail(
                PosetsStatus::BufferTooSmall,
                format!("need room for {} ids", w.len()),
            ));
        }
        if !w.is_empty() {
            if ids.is_null() {
                return Err(null("ids"));
            }
            ptr::copy_nonoverlapping(w.as_ptr(), ids, w.len());
        }
        Ok(())
    })
}

/// Ideal cover indexed by the maximal elements, as `{"parts", "witness"}`.
///
/// # Safety
/// `p` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn posets_decompose_json(p: *const PosetsPoset, out: *mut *mut c_char) -> PosetsStatus {
    guard(|| {
        let p = poset_arg(p)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let c = et_decompose(p)?;
        out_string(out, json(&cover_to_doc(p, &c))?)
    })
}

/// Initial interval containing `a` and disjoint from `b`, as a JSON id list.
///
/// # Safety
/// `a` and `b` must point at `na` and `nb` ids.
#[no_mangle]
pub unsafe extern "C" fn posets_separate_json(
    p: *const PosetsPoset,
    a: *const u64,
    na: usize,
    b: *const u64,
    nb: usize,
    out: *mut *mut c_char,
) -> PosetsStatus {
    guard(|| {
        let p = poset_arg(p)?;
        let (a, b) = (slice_arg(a, na, "a")?, slice_arg(b, nb, "b")?);
        if out.is_null() {
            return Err(null("out"));
        }
        let i = separate_down(p, &p.set_from_ids(a.iter().copied())?, &p.set_from_ids(b.iter().copied())?)?;
        out_string(out, json(&p.ids_of(&i))?)
    })
}

/// Build the named gadget from finite tables of `f` and `g`, run its
/// algorithm and return `{"poset": ..., "decoded": [...]}`.
///
/// # Safety
/// `family` must be a nul-terminated string, `f` and `g` must point at
/// `nf` and `ng` values.
#[no_mangle]
pub unsafe extern "C" fn posets_gadget_json(
    family: *const c_char,
    f: *const u64,
    nf: usize,
    g: *const u64,
    ng: usize,
    horizon: usize,
    out: *mut *mut c_char,
) -> PosetsStatus {
    guard(|| {
        let family: Family = str_arg(family, "family")?.parse()?;
        let f = FnTable::new(slice_arg(f, nf, "f")?.to_vec())?;
        let g = FnTable::new(slice_arg(g, ng, "g")?.to_vec())?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (inst, decoded) = run_pipeline(family, &f, &g, horizon)?;
        let poset: serde_json::Value = serde_json::from_str(&poset_to_json(&inst.poset)).map_err(Error::from)?;
        out_string(out, json(&serde_json::json!({ "poset": poset, "decoded": decoded }))?)
    })
}

/// Run the priority construction for `stages` stages against an evaluator
/// pool document and return the transcript.
///
/// # Safety
/// `pool` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn posets_priority_run_json(
    pool: *const c_char,
    horizon: usize,
    stages: usize,
    out: *mut *mut c_char,
) -> PosetsStatus {
    guard(|| {
        let pool = PoolEvaluator::from_json(str_arg(pool, "pool")?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let log = prio_run(horizon, stages, &pool)?;
        out_string(out, log.to_transcript())
    })
}

/// # Safety
/// `s` must be null or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn posets_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
