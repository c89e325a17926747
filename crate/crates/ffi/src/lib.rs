//! C interface to `resmatch`.
//!
//! Every function returns a [`ResmatchStatus`]; results come back through out
//! pointers. On failure the message is available from
//! [`resmatch_last_error_message`] on the same thread. Handles are opaque and
//! must be released with their `_free` function. Strings returned to the
//! caller are released with [`resmatch_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use resmatch::e2sat::parse_e2sat;
use resmatch::matching::matching_number;
use resmatch::reduction::{reduce, ReductionArtifact, Theorem};
use resmatch::residual::{decide_ge, decide_le, summarize};
use resmatch::{Budget, Error, Graph};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResmatchStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidGraph = 4,
    InvalidInstance = 5,
    BudgetExceeded = 6,
    InvalidArgument = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ResmatchMode {
    /// Is there a maximum matching F with β(G \ F) ≥ k?
    AtLeast = 0,
    /// Is there a maximum matching F with β(G \ F) ≤ k?
    AtMost = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ResmatchStats {
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub connected: bool,
}

/// Opaque graph handle.
pub struct ResmatchGraph(Graph);

/// Opaque reduction artifact handle.
pub struct ResmatchArtifact(ReductionArtifact);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<Vec<u8>>) {
    let msg = CString::new(msg).unwrap_or_else(|_| c"error message contained NUL".into());
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> ResmatchStatus {
    use Error::*;
    match e {
        GraphFormat(_) | Dimacs { .. } => ResmatchStatus::ParseError,
        SelfLoop(_)
        | DuplicateEdge(..)
        | VertexOutOfRange(_)
        | DuplicateVertexId(_)
        | MissingCoordinate(_)
        | DuplicateCoordinate(..)
        | ParityViolation(..)
        | InvalidBipartition(..)
        | BipartitionLength { .. } => ResmatchStatus::InvalidGraph,
        ClauseWidth { .. }
        | RepeatedVariable { .. }
        | DuplicateClause { .. }
        | LiteralOutOfRange { .. }
        | NotStrict(_) => ResmatchStatus::InvalidInstance,
        BudgetExceeded(_) | LimitExceeded(_) | TooManyVariables(..) => {
            ResmatchStatus::BudgetExceeded
        }
        _ => ResmatchStatus::InvalidArgument,
    }
}

/// Runs `f`, converting errors and panics into a status and recording the
/// message.
fn guard(f: impl FnOnce() -> Result<(), (ResmatchStatus, String)>) -> ResmatchStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ResmatchStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ResmatchStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (ResmatchStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (ResmatchStatus, String) {
    (ResmatchStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (ResmatchStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        (
            ResmatchStatus::InvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (ResmatchStatus, String)> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), (ResmatchStatus, String)> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn budget(nodes: u64) -> Budget {
    if nodes == 0 {
        Budget::from_env()
    } else {
        Budget::new(nodes)
    }
}

/// Message for the last failing call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn resmatch_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a graph file (JSON) into a new handle.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_graph_from_json(
    json: *const c_char,
    out: *mut *mut ResmatchGraph,
) -> ResmatchStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let g = Graph::from_json(text).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(ResmatchGraph(g))), "out")
    })
}

/// # Safety
/// `graph` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn resmatch_graph_free(graph: *mut ResmatchGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_graph_stats(
    graph: *const ResmatchGraph,
    out: *mut ResmatchStats,
) -> ResmatchStatus {
    guard(|| {
        let s = deref(graph, "graph")?.0.stats();
        let stats = ResmatchStats {
            vertices: s.vertices,
            edges: s.edges,
            max_degree: s.max_degree,
            connected: s.connected,
        };
        write_out(out, stats, "out")
    })
}

/// β(G). `budget_nodes` of 0 selects the default (or `RESMATCH_BUDGET`).
///
/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_matching_number(
    graph: *const ResmatchGraph,
    budget_nodes: u64,
    out: *mut usize,
) -> ResmatchStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        let beta = matching_number(g, budget(budget_nodes)).map_err(lib_err)?;
        write_out(out, beta, "out")
    })
}

/// Minimum and maximum of β(G \ F) over the maximum matchings F.
///
/// # Safety
/// `graph` must be a live handle; `min_out` and `max_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_residual_range(
    graph: *const ResmatchGraph,
    budget_nodes: u64,
    min_out: *mut usize,
    max_out: *mut usize,
) -> ResmatchStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        if min_out.is_null() || max_out.is_null() {
            return Err(null("output pointer"));
        }
        let s = summarize(g, budget(budget_nodes)).map_err(lib_err)?;
        write_out(min_out, s.min_residual, "min_out")?;
        write_out(max_out, s.max_residual, "max_out")
    })
}

/// # Safety
/// `graph` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_decide(
    graph: *const ResmatchGraph,
    mode: ResmatchMode,
    k: usize,
    budget_nodes: u64,
    out: *mut bool,
) -> ResmatchStatus {
    guard(|| {
        let g = &deref(graph, "graph")?.0;
        let b = budget(budget_nodes);
        let yes = match mode {
            ResmatchMode::AtLeast => decide_ge(g, k, b),
            ResmatchMode::AtMost => decide_le(g, k, b),
        }
        .map_err(lib_err)?;
        write_out(out, yes, "out")
    })
}

/// Builds the reduction graph for a DIMACS instance, threshold `big_k` and
/// theorem 1 or 2.
///
/// # Safety
/// `dimacs` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_reduce(
    dimacs: *const c_char,
    big_k: usize,
    theorem: u8,
    out: *mut *mut ResmatchArtifact,
) -> ResmatchStatus {
    guard(|| {
        let th = Theorem::from_number(theorem).ok_or_else(|| {
            (
                ResmatchStatus::InvalidArgument,
                format!("theorem must be 1 or 2, got {theorem}"),
            )
        })?;
        let inst = parse_e2sat(read_str(dimacs, "dimacs")?).map_err(lib_err)?;
        let art = reduce(&inst, big_k, th).map_err(lib_err)?;
        write_out(out, Box::into_raw(Box::new(ResmatchArtifact(art))), "out")
    })
}

/// # Safety
/// `artifact` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn resmatch_artifact_free(artifact: *mut ResmatchArtifact) {
    if !artifact.is_null() {
        drop(Box::from_raw(artifact));
    }
}

/// The residual threshold k of the artifact.
///
/// # Safety
/// `artifact` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_artifact_k(
    artifact: *const ResmatchArtifact,
    out: *mut usize,
) -> ResmatchStatus {
    guard(|| write_out(out, deref(artifact, "artifact")?.0.k, "out"))
}

/// A new graph handle holding a copy of the artifact's graph.
///
/// # Safety
/// `artifact` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_artifact_graph(
    artifact: *const ResmatchArtifact,
    out: *mut *mut ResmatchGraph,
) -> ResmatchStatus {
    guard(|| {
        let g = deref(artifact, "artifact")?.0.graph().clone();
        write_out(out, Box::into_raw(Box::new(ResmatchGraph(g))), "out")
    })
}

/// The artifact file as JSON; release with [`resmatch_string_free`].
///
/// # Safety
/// `artifact` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn resmatch_artifact_json(
    artifact: *const ResmatchArtifact,
    out: *mut *mut c_char,
) -> ResmatchStatus {
    guard(|| {
        let json = deref(artifact, "artifact")?.0.to_json();
        let s =
            CString::new(json).map_err(|_| (ResmatchStatus::Panic, "NUL in JSON".to_string()))?;
        write_out(out, s.into_raw(), "out")
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn resmatch_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
