//! C ABI over `hamcube`.
//!
//! Instances and paths are opaque handles owned by the caller and released
//! with their `*_free` function. Every call returns an [`HcStatus`]; on
//! failure [`hc_last_error`] holds a message for the calling thread.
//! Vertices cross the boundary as `uint64_t` with coordinate `i` in bit
//! `i - 1`; edges as two consecutive vertices.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::time::Duration;

use hamcube::engine::{ham_path_matching, EngineConfig, EngineError};
use hamcube::io::{emit_path, parse_instance};
use hamcube::{Dim, Edge, Instance, Vertex};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    OutOfContract = 4,
    BudgetExhausted = 5,
    Unsat = 6,
    ConstructionFailed = 7,
    Violation = 8,
    Panic = 9,
}

/// Engine settings; start from [`hc_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HcConfig {
    /// Dimensions up to this are solved by exact search (at least 5).
    pub n_base: u32,
    /// Node limit per exact-search call.
    pub node_limit: u64,
    /// Wall-clock limit per exact-search call in milliseconds; 0 for none.
    pub time_limit_ms: u64,
    pub seed: u64,
    /// Fail instead of falling back to exact search.
    pub strict: bool,
}

/// A validated instance.
pub struct HcInstance(Instance);

/// A verified Hamiltonian path.
pub struct HcPath {
    n: Dim,
    vertices: Vec<u64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).unwrap_or_default());
}

fn fail(status: HcStatus, msg: impl Into<String>) -> HcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> HcStatus) -> HcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => {
            if s == HcStatus::Ok {
                set_error("");
            }
            s
        }
        Err(_) => fail(HcStatus::Panic, "internal panic"),
    }
}

fn engine_status(e: &EngineError) -> HcStatus {
    match e {
        EngineError::OutOfContract(_) | EngineError::Precondition(_) => HcStatus::OutOfContract,
        EngineError::BudgetExhausted { .. } => HcStatus::BudgetExhausted,
        EngineError::Unsat { .. } => HcStatus::Unsat,
        EngineError::Construction { .. } | EngineError::Solver(_) => HcStatus::ConstructionFailed,
    }
}

/// Message of the last failed call on this thread; empty after a success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn hc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn hc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn hc_config_default() -> HcConfig {
    let d = EngineConfig::default();
    HcConfig {
        n_base: d.n_base,
        node_limit: d.budget.node_limit,
        time_limit_ms: 0,
        seed: d.budget.seed,
        strict: d.strict,
    }
}

/// Parses an instance in the text format.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_instance_parse(text: *const c_char, out: *mut *mut HcInstance) -> HcStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(HcStatus::NullPointer, "null argument");
        }
        let Ok(s) = CStr::from_ptr(text).to_str() else {
            return fail(HcStatus::InvalidUtf8, "instance text is not UTF-8");
        };
        match parse_instance(s) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(HcInstance(inst)));
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds an instance from raw vertices; `edges` holds `2 * n_edges` values.
///
/// # Safety
/// `edges` must point to `2 * n_edges` values (or be null when `n_edges` is
/// 0) and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn hc_instance_new(
    n: u32,
    x: u64,
    y: u64,
    edges: *const u64,
    n_edges: usize,
    out: *mut *mut HcInstance,
) -> HcStatus {
    guard(|| {
        if out.is_null() || (edges.is_null() && n_edges > 0) {
            return fail(HcStatus::NullPointer, "null argument");
        }
        let dim = match Dim::new(n) {
            Ok(d) => d,
            Err(e) => return fail(HcStatus::OutOfContract, e.to_string()),
        };
        let raw = if n_edges == 0 { &[][..] } else { std::slice::from_raw_parts(edges, 2 * n_edges) };
        let mut m = Vec::with_capacity(n_edges);
        for pair in raw.chunks_exact(2) {
            match Edge::between(Vertex(pair[0]), Vertex(pair[1])) {
                Ok(e) => m.push(e),
                Err(e) => return fail(HcStatus::OutOfContract, e.to_string()),
            }
        }
        match Instance::new(dim, m, Vertex(x), Vertex(y)) {
            Ok(inst) => {
                *out = Box::into_raw(Box::new(HcInstance(inst)));
                HcStatus::Ok
            }
            Err(e) => fail(HcStatus::OutOfContract, e.to_string()),
        }
    })
}

/// # Safety
/// `inst` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_instance_free(inst: *mut HcInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// Dimension of the instance; 0 for null.
///
/// # Safety
/// `inst` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_instance_dim(inst: *const HcInstance) -> u32 {
    inst.as_ref().map_or(0, |i| i.0.n.get())
}

/// Builds a Hamiltonian path for `inst`. `config` may be null for defaults.
///
/// # Safety
/// `inst` must be a live handle, `config` null or valid, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn hc_solve(inst: *const HcInstance, config: *const HcConfig, out: *mut *mut HcPath) -> HcStatus {
    guard(|| {
        let (Some(inst), false) = (inst.as_ref(), out.is_null()) else {
            return fail(HcStatus::NullPointer, "null argument");
        };
        let c = config.as_ref().copied().unwrap_or_else(|| hc_config_default());
        let mut cfg = EngineConfig { n_base: c.n_base, strict: c.strict, ..EngineConfig::default() };
        cfg.budget.node_limit = c.node_limit;
        cfg.budget.seed = c.seed;
        cfg.budget.time_limit = (c.time_limit_ms > 0).then(|| Duration::from_millis(c.time_limit_ms));
        match ham_path_matching(&inst.0, &cfg) {
            Ok(res) => {
                let vertices = res.path().iter().map(|v| v.bits()).collect();
                *out = Box::into_raw(Box::new(HcPath { n: inst.0.n, vertices }));
                HcStatus::Ok
            }
            Err(e) => fail(engine_status(&e), e.to_string()),
        }
    })
}

/// Number of vertices; 0 for null.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_path_len(path: *const HcPath) -> usize {
    path.as_ref().map_or(0, |p| p.vertices.len())
}

/// The vertices of `path`, valid while the handle lives.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_path_vertices(path: *const HcPath) -> *const u64 {
    path.as_ref().map_or(ptr::null(), |p| p.vertices.as_ptr())
}

/// The path in the text format; release with [`hc_string_free`].
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn hc_path_to_text(path: *const HcPath) -> *mut c_char {
    let Some(p) = path.as_ref() else { return ptr::null_mut() };
    let vs: Vec<Vertex> = p.vertices.iter().map(|&b| Vertex(b)).collect();
    CString::new(emit_path(p.n, &vs)).map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `path` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_path_free(path: *mut HcPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn hc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks a vertex sequence against `inst`: `Ok` or `Violation`.
///
/// # Safety
/// `inst` must be a live handle and `vertices` point to `len` values.
#[no_mangle]
pub unsafe extern "C" fn hc_verify(inst: *const HcInstance, vertices: *const u64, len: usize) -> HcStatus {
    guard(|| {
        let Some(inst) = inst.as_ref() else { return fail(HcStatus::NullPointer, "null instance") };
        if vertices.is_null() && len > 0 {
            return fail(HcStatus::NullPointer, "null vertices");
        }
        let raw = if len == 0 { &[][..] } else { std::slice::from_raw_parts(vertices, len) };
        let path: Vec<Vertex> = raw.iter().map(|&b| Vertex(b)).collect();
        let i = &inst.0;
        match hamcube::verify::verify_path(i.n, &path, i.x, i.y, &i.m) {
            Ok(()) => HcStatus::Ok,
            Err(vs) => fail(HcStatus::Violation, vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")),
        }
    })
}
