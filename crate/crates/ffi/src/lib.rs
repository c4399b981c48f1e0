//! C interface. Every object crosses the boundary as an opaque pointer
//! released by its `_free` function; strings returned through `char **`
//! out-parameters belong to the caller and are released with
//! `rt_string_free`. Functions return an `RtStatus`; on failure the
//! message is available from `rt_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ribbon_tcft::algebra::{construct_hodge, validate_hodge};
use ribbon_tcft::cochain::{cochain_values, CochainEngine};
use ribbon_tcft::graphs::Complex;
use ribbon_tcft::{io, scalar, DgFrobeniusAlgebra, Error, HodgeDecomposition, Scalar};

/// Outcome of a call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RtStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Structural = 4,
    /// Validation ran and found violated axioms.
    AxiomViolation = 5,
    HodgeInfeasible = 6,
    Unstable = 7,
    ResourceBound = 8,
    Precondition = 9,
    Graph = 10,
    Panic = 11,
}

/// Cochain complex selector for `rt_cochain_values`.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RtComplex {
    Lcirc = 0,
    Linf = 1,
    Open = 2,
}

pub struct RtAlgebra(DgFrobeniusAlgebra);

pub struct RtHodge(HodgeDecomposition);

pub struct RtEngine(CochainEngine);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> RtStatus {
    match e {
        Error::Parse(_) => RtStatus::Parse,
        Error::Structural(_) | Error::SingularPairing | Error::Arity(_) => RtStatus::Structural,
        Error::HodgeInfeasible(_) => RtStatus::HodgeInfeasible,
        Error::Unstable(..) => RtStatus::Unstable,
        Error::ResourceBound(_) => RtStatus::ResourceBound,
        Error::Precondition(_) | Error::SlotMismatch(_) => RtStatus::Precondition,
        Error::UnknownEdge(_)
        | Error::AlreadyWhite(_)
        | Error::WhiteEdge(_)
        | Error::Disconnected => RtStatus::Graph,
    }
}

struct Fail(RtStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<RtStatus, Fail>) -> RtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fail(s, msg))) => {
            set_error(msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            RtStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(RtStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(RtStatus::InvalidUtf8, "argument is not UTF-8".into()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| Fail(RtStatus::NullPointer, "null handle".into()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<RtStatus, Fail> {
    if out.is_null() {
        return Err(Fail(RtStatus::NullPointer, "null out-pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(RtStatus::Ok)
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(RtStatus::NullPointer, "null out-pointer".into()));
    }
    *out = CString::new(s)
        .map_err(|_| Fail(RtStatus::Panic, "string with interior NUL".into()))?
        .into_raw();
    Ok(())
}

/// Message of the last failed call on this thread, or NULL. The caller
/// frees it with `rt_string_free`.
#[no_mangle]
pub extern "C" fn rt_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| {
        e.borrow()
            .as_ref()
            .map_or(ptr::null_mut(), |s| s.clone().into_raw())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn rt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn rt_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_algebra_from_json(
    json: *const c_char,
    out: *mut *mut RtAlgebra,
) -> RtStatus {
    guard(|| put(out, RtAlgebra(io::parse_algebra(text(json)?)?)))
}

/// `Q[x]/(x^2)` with zero differential.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_algebra_dual_numbers(out: *mut *mut RtAlgebra) -> RtStatus {
    guard(|| put(out, RtAlgebra(DgFrobeniusAlgebra::dual_numbers())))
}

/// The acyclic endomorphism algebra of `Q^{1|1}`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rt_algebra_contractible(out: *mut *mut RtAlgebra) -> RtStatus {
    guard(|| {
        put(
            out,
            RtAlgebra(DgFrobeniusAlgebra::contractible_endomorphisms()),
        )
    })
}

/// # Safety
/// `alg` must be NULL or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn rt_algebra_free(alg: *mut RtAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra, 0 for NULL.
///
/// # Safety
/// `alg` must be NULL or a live algebra handle.
#[no_mangle]
pub unsafe extern "C" fn rt_algebra_dim(alg: *const RtAlgebra) -> usize {
    alg.as_ref().map_or(0, |a| a.0.dim())
}

/// Checks the axioms. Returns `RT_STATUS_AXIOM_VIOLATION` if any fails;
/// if `report` is not NULL it receives the violations as JSON either way.
///
/// # Safety
/// `alg` must be a live handle; `report` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rt_algebra_validate(
    alg: *const RtAlgebra,
    report: *mut *mut c_char,
) -> RtStatus {
    guard(|| {
        let r = deref(alg)?.0.validate();
        if !report.is_null() {
            put_string(report, serde_json::to_string(&r).expect("serializable"))?;
        }
        if r.is_ok() {
            Ok(RtStatus::Ok)
        } else {
            Err(Fail(
                RtStatus::AxiomViolation,
                format!("violated: {}", r.axioms().join(", ")),
            ))
        }
    })
}

/// Solves for a Hodge decomposition of `alg`.
///
/// # Safety
/// `alg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_hodge_construct(
    alg: *const RtAlgebra,
    out: *mut *mut RtHodge,
) -> RtStatus {
    guard(|| put(out, RtHodge(construct_hodge(&deref(alg)?.0)?)))
}

/// # Safety
/// `alg` must be a live handle, `json` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_hodge_from_json(
    alg: *const RtAlgebra,
    json: *const c_char,
    out: *mut *mut RtHodge,
) -> RtStatus {
    guard(|| put(out, RtHodge(io::parse_hodge(text(json)?, &deref(alg)?.0)?)))
}

/// # Safety
/// Both handles must be live; `report` NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn rt_hodge_validate(
    alg: *const RtAlgebra,
    hodge: *const RtHodge,
    report: *mut *mut c_char,
) -> RtStatus {
    guard(|| {
        let r = validate_hodge(&deref(alg)?.0, &deref(hodge)?.0)?;
        if !report.is_null() {
            put_string(report, serde_json::to_string(&r).expect("serializable"))?;
        }
        if r.is_ok() {
            Ok(RtStatus::Ok)
        } else {
            Err(Fail(
                RtStatus::AxiomViolation,
                format!("violated: {}", r.axioms().join(", ")),
            ))
        }
    })
}

/// # Safety
/// `hodge` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_hodge_to_json(
    hodge: *const RtHodge,
    out: *mut *mut c_char,
) -> RtStatus {
    guard(|| {
        put_string(out, io::hodge_to_string(&deref(hodge)?.0))?;
        Ok(RtStatus::Ok)
    })
}

/// # Safety
/// `hodge` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_hodge_free(hodge: *mut RtHodge) {
    if !hodge.is_null() {
        drop(Box::from_raw(hodge));
    }
}

/// Evaluation engine for one algebra and decomposition. The engine keeps
/// its own copies; both inputs may be freed afterwards.
///
/// # Safety
/// Both handles must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_engine_new(
    alg: *const RtAlgebra,
    hodge: *const RtHodge,
    out: *mut *mut RtEngine,
) -> RtStatus {
    guard(|| {
        let e = CochainEngine::new(&deref(alg)?.0, &deref(hodge)?.0)?;
        put(out, RtEngine(e))
    })
}

/// # Safety
/// `engine` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn rt_engine_free(engine: *mut RtEngine) {
    if !engine.is_null() {
        drop(Box::from_raw(engine));
    }
}

unsafe fn graph_value(
    engine: *const RtEngine,
    graph_json: *const c_char,
    value: *mut *mut c_char,
    f: impl FnOnce(
        &CochainEngine,
        &ribbon_tcft::StableRibbonGraph,
        &ribbon_tcft::Orientation,
    ) -> ribbon_tcft::Result<Scalar>,
) -> RtStatus {
    guard(|| {
        let e = &deref(engine)?.0;
        let (g, or) = io::parse_graph(text(graph_json)?)?;
        let v = f(e, &g, &or)?;
        put_string(value, scalar::format(&v))?;
        Ok(RtStatus::Ok)
    })
}

/// Integral of the assembled form over the cell of the graph, written to
/// `value` as `"p/q"`. Uses the graph's orientation if given.
///
/// # Safety
/// `engine` live, `graph_json` NUL-terminated, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_costello_value(
    engine: *const RtEngine,
    graph_json: *const c_char,
    value: *mut *mut c_char,
) -> RtStatus {
    graph_value(engine, graph_json, value, |e, g, or| {
        e.costello_value(g, or)
    })
}

/// Propagator contraction of the graph, written as `"p/q"`.
///
/// # Safety
/// `engine` live, `graph_json` NUL-terminated, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_kontsevich_value(
    engine: *const RtEngine,
    graph_json: *const c_char,
    value: *mut *mut c_char,
) -> RtStatus {
    graph_value(engine, graph_json, value, |e, g, or| {
        e.kontsevich_value(g, or)
    })
}

/// Cochain value on the oriented cell, written as `"p/q"`.
///
/// # Safety
/// `engine` live, `graph_json` NUL-terminated, `value` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_cochain_value(
    engine: *const RtEngine,
    graph_json: *const c_char,
    value: *mut *mut c_char,
) -> RtStatus {
    graph_value(engine, graph_json, value, |e, g, or| e.cochain_value(g, or))
}

/// Values on every generator of type `(g, n)` with at most `max_edges`
/// edges, as JSON keyed by canonical graph key.
///
/// # Safety
/// `engine` live, `json` writable.
#[no_mangle]
pub unsafe extern "C" fn rt_cochain_values(
    engine: *const RtEngine,
    g: usize,
    n: usize,
    max_edges: usize,
    complex: RtComplex,
    json: *mut *mut c_char,
) -> RtStatus {
    guard(|| {
        let complex = match complex {
            RtComplex::Lcirc => Complex::Lcirc,
            RtComplex::Linf => Complex::Linf,
            RtComplex::Open => Complex::Open,
        };
        let v = cochain_values(&deref(engine)?.0, g, n, max_edges, complex)?;
        put_string(json, serde_json::to_string(&v).expect("serializable"))?;
        Ok(RtStatus::Ok)
    })
}
