//! C ABI over the forensic-dl engine.
//!
//! Handles are opaque and owned by the caller once returned; release them
//! with the matching `*_free` function. Every fallible call returns an
//! [`FdlStatus`] and leaves a message for [`fdl_last_error`] on failure.
//! Strings returned through out-parameters are released with
//! [`fdl_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use forensic_dl::metrics::{prf, ContingencyTable};
use forensic_dl::model::{normalize_kb, KnowledgeBase};
use forensic_dl::ontology::{builtin_ontology, ingest_annotations, parse_annotations, OntologyOptions};
use forensic_dl::reasoner::{instance_of, is_consistent, materialize, ClosureABox};
use forensic_dl::text::{parse_concept, parse_kb, serialize_kb, SourceDocument};
use forensic_dl::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Syntax errors in a KB, concept or annotation stream.
    Parse = 3,
    /// Well-formed input the engine rejects (unsafe rule, unknown name, ...).
    Invalid = 4,
    ResourceLimit = 5,
    Panic = 6,
}

/// A parsed knowledge base.
pub struct FdlKb {
    kb: KnowledgeBase,
}

/// A materialized ABox together with the KB it was built from.
pub struct FdlClosure {
    kb: KnowledgeBase,
    closure: ClosureABox,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> FdlStatus {
    match e {
        Error::Parse { .. } | Error::Annotation { .. } | Error::Json(_) => FdlStatus::Parse,
        Error::ResourceLimit { .. } => FdlStatus::ResourceLimit,
        _ => FdlStatus::Invalid,
    }
}

fn describe(e: &Error) -> String {
    match e {
        Error::Parse { diagnostics, .. } => diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"),
        other => other.to_string(),
    }
}

fn guard(f: impl FnOnce() -> Result<(), FdlStatus>) -> FdlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdlStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            FdlStatus::Panic
        }
    }
}

fn fail(e: Error) -> FdlStatus {
    set_error(&describe(&e));
    status_of(&e)
}

fn null(what: &str) -> FdlStatus {
    set_error(&format!("{what} is null"));
    FdlStatus::NullPointer
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, FdlStatus> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error(&format!("{what} is not valid UTF-8"));
        FdlStatus::InvalidUtf8
    })
}

/// Message of the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn fdl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses `.fkb` text into a new KB handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fdl_kb_parse(text: *const c_char, out: *mut *mut FdlKb) -> FdlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let src = read_str(text, "text")?;
        let kb = parse_kb(&SourceDocument::new(src, "<ffi>")).map_err(fail)?;
        *out = Box::into_raw(Box::new(FdlKb { kb }));
        Ok(())
    })
}

/// The built-in forensic ontology. Never returns null.
#[no_mangle]
pub extern "C" fn fdl_kb_builtin(include_learned: bool, include_invented: bool) -> *mut FdlKb {
    let kb = builtin_ontology(OntologyOptions {
        include_learned_gcis: include_learned,
        include_invented_gcis: include_invented,
    });
    Box::into_raw(Box::new(FdlKb { kb }))
}

/// # Safety
/// `kb` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fdl_kb_free(kb: *mut FdlKb) {
    if !kb.is_null() {
        drop(Box::from_raw(kb));
    }
}

/// Writes the KB in `.fkb` syntax to `*out`.
///
/// # Safety
/// `kb` must be a live handle and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn fdl_kb_serialize(kb: *const FdlKb, out: *mut *mut c_char) -> FdlStatus {
    guard(|| {
        if kb.is_null() {
            return Err(null("kb"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = serialize_kb(&(*kb).kb);
        *out = CString::new(s).map_err(|_| FdlStatus::Panic)?.into_raw();
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn fdl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Ingests a JSONL annotation stream and materializes it under `kb`.
///
/// # Safety
/// `kb` must be a live handle, `jsonl` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fdl_materialize(
    kb: *const FdlKb,
    jsonl: *const c_char,
    out: *mut *mut FdlClosure,
) -> FdlStatus {
    guard(|| {
        if kb.is_null() {
            return Err(null("kb"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let stream = read_str(jsonl, "jsonl")?;
        let kb = &(*kb).kb;
        let records = parse_annotations(stream).map_err(fail)?;
        let assertions = ingest_annotations(&records).map_err(fail)?;
        let program = normalize_kb(kb).map_err(fail)?;
        let facts: Vec<_> = kb.assertions().cloned().chain(assertions).collect();
        let closure = materialize(&program, &facts).map_err(fail)?;
        let mut query_kb = kb.clone();
        for name in closure.individuals() {
            query_kb.declare_individual(name);
        }
        *out = Box::into_raw(Box::new(FdlClosure { kb: query_kb, closure }));
        Ok(())
    })
}

/// # Safety
/// `closure` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn fdl_closure_free(closure: *mut FdlClosure) {
    if !closure.is_null() {
        drop(Box::from_raw(closure));
    }
}

/// Sets `*out` to whether `individual` is an instance of the concept term
/// `concept` in the closure.
///
/// # Safety
/// `closure` must be a live handle, both strings NUL-terminated, `out`
/// writable.
#[no_mangle]
pub unsafe extern "C" fn fdl_closure_instance_of(
    closure: *const FdlClosure,
    individual: *const c_char,
    concept: *const c_char,
    out: *mut bool,
) -> FdlStatus {
    guard(|| {
        if closure.is_null() {
            return Err(null("closure"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let c = &*closure;
        let individual = read_str(individual, "individual")?;
        let q = parse_concept(read_str(concept, "concept")?, &c.kb).map_err(fail)?;
        *out = instance_of(&c.closure, individual, &q).map_err(fail)?;
        Ok(())
    })
}

/// Sets `*out` to whether the closure violates no disjointness or
/// negative constraint.
///
/// # Safety
/// `closure` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn fdl_closure_is_consistent(closure: *const FdlClosure, out: *mut bool) -> FdlStatus {
    guard(|| {
        if closure.is_null() {
            return Err(null("closure"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        *out = is_consistent(&(*closure).closure).consistent;
        Ok(())
    })
}

/// Precision, recall and F1 of a contingency table.
///
/// # Safety
/// The three out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdl_prf(
    tp: u64,
    fp: u64,
    false_neg: u64,
    precision: *mut f64,
    recall: *mut f64,
    f1: *mut f64,
) -> FdlStatus {
    if precision.is_null() || recall.is_null() || f1.is_null() {
        return null("output pointer");
    }
    let s = prf(&ContingencyTable::new(tp, fp, false_neg, 0));
    *precision = s.precision;
    *recall = s.recall;
    *f1 = s.f1;
    FdlStatus::Ok
}

/// Returns the crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fdl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
