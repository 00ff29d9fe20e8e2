//! C ABI for `coauthor-rank`.
//!
//! Graphs and edge lists are opaque handles created and freed through this API.
//! Every fallible call returns a [`CrStatus`]; on failure a message is available
//! from [`cr_last_error_message`] on the same thread until the next failing call.
//! Panics never cross the boundary.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use coauthor_rank::{
    build_graph, h_index, ingest, largest_component, pagerank, solve_direct, spearman, stochastic_operator,
    uniform_teleport, CoauthorGraph, Convergence, Error, ErrorClass, Normalization, RawEdge, ScoreVector,
    TeleportVector,
};

/// Result code for every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Bad data or parameters: empty graph, invalid damping, dangling node, unreadable file, ...
    InputError = 3,
    /// Power iteration did not converge or the direct system was singular.
    NumericalError = 4,
    /// The output buffer is shorter than the node count.
    BufferTooSmall = 5,
    /// An internal panic was caught.
    Panic = 6,
}

/// Transition matrix normalization.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrMode {
    /// Divide edge weights by the column's weighted degree.
    Weighted = 0,
    /// Divide by neighbor count, ignoring weights.
    Unweighted = 1,
}

impl From<CrMode> for Normalization {
    fn from(m: CrMode) -> Self {
        match m {
            CrMode::Weighted => Normalization::Weighted,
            CrMode::Unweighted => Normalization::Unweighted,
        }
    }
}

/// Accumulates raw edge records before a graph is built.
pub struct CrEdgeList {
    records: Vec<RawEdge>,
}

/// Immutable coauthorship graph with nodes in ascending author order.
pub struct CrGraph {
    graph: CoauthorGraph,
    names: Vec<CString>,
}

impl CrGraph {
    fn new(graph: CoauthorGraph) -> Box<Self> {
        let names = graph
            .nodes()
            .iter()
            .map(|a| CString::new(a.as_str().replace('\0', "")).expect("NUL bytes removed"))
            .collect();
        Box::new(CrGraph { graph, names })
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into().replace('\0', "");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = CString::new(message).ok());
}

fn fail(status: CrStatus, message: impl Into<String>) -> CrStatus {
    set_last_error(message);
    status
}

fn from_error(e: Error) -> CrStatus {
    let status = match e.class() {
        ErrorClass::Numerical => CrStatus::NumericalError,
        ErrorClass::Input | ErrorClass::Usage => CrStatus::InputError,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> CrStatus) -> CrStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(CrStatus::Panic, "internal panic"))
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, CrStatus> {
    if p.is_null() {
        return Err(fail(CrStatus::NullPointer, format!("{name} is null")));
    }
    // SAFETY: caller guarantees a NUL-terminated string that outlives the call.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| fail(CrStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn slice_arg<'a, T>(p: *const T, len: usize, name: &str) -> Result<&'a [T], CrStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(CrStatus::NullPointer, format!("{name} is null")));
    }
    // SAFETY: caller guarantees `len` readable elements.
    Ok(unsafe { std::slice::from_raw_parts(p, len) })
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

/// Message for the last failure on this thread, or null. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cr_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cr_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Creates an empty edge list. Free with [`cr_edge_list_free`].
#[no_mangle]
pub extern "C" fn cr_edge_list_new() -> *mut CrEdgeList {
    Box::into_raw(Box::new(CrEdgeList { records: Vec::new() }))
}

/// # Safety
/// `list` must come from [`cr_edge_list_new`] (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cr_edge_list_free(list: *mut CrEdgeList) {
    if !list.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(list) });
    }
}

/// Appends one coauthorship record. Validation happens in [`cr_graph_build`].
///
/// # Safety
/// `list` must be a live edge list; `a` and `b` NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn cr_edge_list_push(
    list: *mut CrEdgeList,
    a: *const c_char,
    b: *const c_char,
    weight: f64,
) -> CrStatus {
    guard(|| {
        // SAFETY: checked for null; caller guarantees liveness and exclusivity.
        let Some(list) = (unsafe { list.as_mut() }) else {
            return fail(CrStatus::NullPointer, "list is null");
        };
        let a = try_status!(unsafe { str_arg(a, "a") });
        let b = try_status!(unsafe { str_arg(b, "b") });
        list.records.push(RawEdge::new(a, b, weight));
        CrStatus::Ok
    })
}

unsafe fn write_graph(out: *mut *mut CrGraph, graph: CoauthorGraph) {
    // SAFETY: caller checked `out` for null.
    unsafe { *out = Box::into_raw(CrGraph::new(graph)) };
}

/// Builds a graph from the list. Duplicate pairs merge by summing weights; self-loops are dropped.
///
/// # Safety
/// `list` must be a live edge list and `out` writable. On success `*out` owns a
/// graph to be released with [`cr_graph_free`].
#[no_mangle]
pub unsafe extern "C" fn cr_graph_build(list: *const CrEdgeList, out: *mut *mut CrGraph) -> CrStatus {
    guard(|| {
        let Some(list) = (unsafe { list.as_ref() }) else {
            return fail(CrStatus::NullPointer, "list is null");
        };
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is null");
        }
        match build_graph(&list.records) {
            Ok(g) => {
                unsafe { write_graph(out, g) };
                CrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Reads a tab-separated edge list file (`a<TAB>b[<TAB>weight]`); malformed lines are skipped.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_from_tsv(path: *const c_char, out: *mut *mut CrGraph) -> CrStatus {
    guard(|| {
        let path = try_status!(unsafe { str_arg(path, "path") });
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is null");
        }
        let graph = ingest::parse_edge_list(Path::new(path)).and_then(|p| build_graph(&p.records));
        match graph {
            Ok(g) => {
                unsafe { write_graph(out, g) };
                CrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `graph` must come from this library (or be null) and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_free(graph: *mut CrGraph) {
    if !graph.is_null() {
        // SAFETY: ownership returns to Rust exactly once.
        drop(unsafe { Box::from_raw(graph) });
    }
}

/// Node count, or 0 for null.
///
/// # Safety
/// `graph` must be a live graph or null.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_node_count(graph: *const CrGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.graph.node_count())
}

/// Undirected edge count, or 0 for null.
///
/// # Safety
/// `graph` must be a live graph or null.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_edge_count(graph: *const CrGraph) -> usize {
    unsafe { graph.as_ref() }.map_or(0, |g| g.graph.edge_count())
}

/// Name of node `index`, or null when out of range. Valid while the graph lives.
///
/// # Safety
/// `graph` must be a live graph or null.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_node_name(graph: *const CrGraph, index: usize) -> *const c_char {
    unsafe { graph.as_ref() }
        .and_then(|g| g.names.get(index))
        .map_or(ptr::null(), |s| s.as_ptr())
}

/// Extracts the largest connected component as a new graph.
///
/// # Safety
/// `graph` must be a live graph and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cr_graph_largest_component(
    graph: *const CrGraph,
    out: *mut *mut CrGraph,
) -> CrStatus {
    guard(|| {
        let Some(g) = (unsafe { graph.as_ref() }) else {
            return fail(CrStatus::NullPointer, "graph is null");
        };
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is null");
        }
        match largest_component(&g.graph) {
            Ok(c) => {
                unsafe { write_graph(out, c) };
                CrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

unsafe fn teleport_arg(
    graph: &CoauthorGraph,
    weights: *const f64,
    len: usize,
) -> Result<TeleportVector, CrStatus> {
    let result = if weights.is_null() {
        uniform_teleport(graph.node_count())
    } else {
        let w = unsafe { slice_arg(weights, len, "teleport") }?;
        TeleportVector::from_weights(w)
    };
    result.map_err(from_error)
}

unsafe fn write_scores(scores: &ScoreVector, out: *mut f64, out_len: usize) -> CrStatus {
    if out.is_null() {
        return fail(CrStatus::NullPointer, "out_scores is null");
    }
    if out_len < scores.len() {
        return fail(
            CrStatus::BufferTooSmall,
            format!("out_len {out_len} is less than node count {}", scores.len()),
        );
    }
    // SAFETY: caller guarantees `out_len` writable elements; we write `scores.len()` of them.
    unsafe { ptr::copy_nonoverlapping(scores.entries().as_ptr(), out, scores.len()) };
    CrStatus::Ok
}

/// Power-iteration PageRank. Scores are written in node order and sum to 1.
///
/// `teleport` may be null for the uniform vector; otherwise `teleport_len` non-negative
/// weights (normalized internally) in node order. `out_iterations` may be null.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn cr_pagerank(
    graph: *const CrGraph,
    mode: CrMode,
    damping: f64,
    tolerance: f64,
    max_iter: usize,
    teleport: *const f64,
    teleport_len: usize,
    out_scores: *mut f64,
    out_len: usize,
    out_iterations: *mut usize,
) -> CrStatus {
    guard(|| {
        let Some(g) = (unsafe { graph.as_ref() }) else {
            return fail(CrStatus::NullPointer, "graph is null");
        };
        let v = try_status!(unsafe { teleport_arg(&g.graph, teleport, teleport_len) });
        let convergence = Convergence { tolerance, max_iter };
        let scores =
            stochastic_operator(&g.graph, mode.into()).and_then(|op| pagerank(&op, &v, damping, convergence));
        match scores {
            Ok(s) => {
                let status = unsafe { write_scores(&s, out_scores, out_len) };
                if status == CrStatus::Ok && !out_iterations.is_null() {
                    unsafe { *out_iterations = s.iterations };
                }
                status
            }
            Err(e) => from_error(e),
        }
    })
}

/// Dense direct solve of the same fixed point; limited to moderate graph sizes.
///
/// # Safety
/// Pointers must be valid for the stated lengths.
#[no_mangle]
pub unsafe extern "C" fn cr_solve_direct(
    graph: *const CrGraph,
    mode: CrMode,
    damping: f64,
    teleport: *const f64,
    teleport_len: usize,
    out_scores: *mut f64,
    out_len: usize,
) -> CrStatus {
    guard(|| {
        let Some(g) = (unsafe { graph.as_ref() }) else {
            return fail(CrStatus::NullPointer, "graph is null");
        };
        let v = try_status!(unsafe { teleport_arg(&g.graph, teleport, teleport_len) });
        match stochastic_operator(&g.graph, mode.into()).and_then(|op| solve_direct(&op, &v, damping)) {
            Ok(s) => unsafe { write_scores(&s, out_scores, out_len) },
            Err(e) => from_error(e),
        }
    })
}

/// Spearman rank correlation with average ranks for ties and a two-sided p-value.
///
/// # Safety
/// `x` and `y` must hold `n` elements; `out_rho` must be writable; `out_p` may be null.
#[no_mangle]
pub unsafe extern "C" fn cr_spearman(
    x: *const f64,
    y: *const f64,
    n: usize,
    out_rho: *mut f64,
    out_p: *mut f64,
) -> CrStatus {
    guard(|| {
        let x = try_status!(unsafe { slice_arg(x, n, "x") });
        let y = try_status!(unsafe { slice_arg(y, n, "y") });
        if out_rho.is_null() {
            return fail(CrStatus::NullPointer, "out_rho is null");
        }
        match spearman(x, y) {
            Ok(c) => {
                unsafe { *out_rho = c.rho };
                if !out_p.is_null() {
                    unsafe { *out_p = c.p_value };
                }
                CrStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// h-index of per-paper citation counts.
///
/// # Safety
/// `counts` must hold `n` elements and `out` be writable.
#[no_mangle]
pub unsafe extern "C" fn cr_h_index(counts: *const u64, n: usize, out: *mut usize) -> CrStatus {
    guard(|| {
        let counts = try_status!(unsafe { slice_arg(counts, n, "counts") });
        if out.is_null() {
            return fail(CrStatus::NullPointer, "out is null");
        }
        unsafe { *out = h_index(counts) };
        CrStatus::Ok
    })
}
