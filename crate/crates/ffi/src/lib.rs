//! C ABI for `sparse-sdp`.
//!
//! Objects cross the boundary as opaque handles created by `ssdp_*_new`-style calls and
//! released with the matching `ssdp_*_free`. Every fallible call returns an
//! [`SsdpStatus`]; on failure [`ssdp_last_error`] describes the most recent error on the
//! calling thread. Panics are caught at the boundary and reported as
//! [`SsdpStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sparse_sdp::error::Error;
use sparse_sdp::maxcut::{self, CutResult, Graph};
use sparse_sdp::problem::SdpProblem;
use sparse_sdp::sdpa::parse_sdpa;
use sparse_sdp::solver::{self, DirectionMode, SolveStatus, SolverConfig, SolverReport};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsdpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    NotPositiveDefinite = 4,
    NotChordal = 5,
    Infeasible = 6,
    DependentConstraints = 7,
    BufferTooSmall = 8,
    Panic = 9,
    Internal = 10,
}

/// Solver outcome carried by a report.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SsdpSolveStatus {
    Converged = 0,
    IterationLimit = 1,
    Stalled = 2,
}

/// Solver settings. Obtain defaults from [`ssdp_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct SsdpConfig {
    /// Potential weight `γ`; any value `<= 0` selects `√n`.
    pub gamma: f64,
    pub gap_tol: f64,
    pub extra_iters: usize,
    pub cg_rel_tol: f64,
    /// 0 selects the number of constraints.
    pub cg_max_iter: usize,
    pub max_main_iters: usize,
    /// 4 or 2.
    pub directions: u32,
    pub potential_descent_max_steps: usize,
}

pub struct SsdpGraph(Graph);
pub struct SsdpProblem(SdpProblem);
pub struct SsdpReport(SolverReport);
pub struct SsdpCut(CutResult);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(SsdpStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } => SsdpStatus::Parse,
            Error::NotPositiveDefinite(_) | Error::NotCompletable(_) => SsdpStatus::NotPositiveDefinite,
            Error::NotChordal | Error::RipFailure => SsdpStatus::NotChordal,
            Error::InfeasiblePoint | Error::InfeasibleStart(_) | Error::NoDecrease => SsdpStatus::Infeasible,
            Error::DependentConstraints => SsdpStatus::DependentConstraints,
            Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange(..)
            | Error::TooManyEdges { .. }
            | Error::PatternMismatch
            | Error::InvalidConfig(_) => SsdpStatus::InvalidArgument,
            Error::Io(_) => SsdpStatus::Internal,
        };
        Failure(code, e.to_string())
    }
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SsdpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SsdpStatus::Ok,
        Ok(Err(Failure(code, msg))) => {
            set_last_error(msg);
            code
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            SsdpStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(SsdpStatus::NullPointer, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn utf8<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(SsdpStatus::InvalidArgument, "text is not valid UTF-8".into()))
}

unsafe fn emit<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn release<T>(p: *mut T) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

fn to_config(c: &SsdpConfig) -> Result<SolverConfig, Failure> {
    let direction_mode = match c.directions {
        4 => DirectionMode::Four,
        2 => DirectionMode::Two,
        d => return Err(Failure(SsdpStatus::InvalidArgument, format!("directions must be 4 or 2, got {d}"))),
    };
    Ok(SolverConfig {
        gamma: (c.gamma > 0.0).then_some(c.gamma),
        gap_tol: c.gap_tol,
        extra_iters: c.extra_iters,
        cg_rel_tol: c.cg_rel_tol,
        cg_max_iter: (c.cg_max_iter > 0).then_some(c.cg_max_iter),
        max_main_iters: c.max_main_iters,
        direction_mode,
        potential_descent_max_steps: c.potential_descent_max_steps,
        ..SolverConfig::default()
    })
}

/// Message for the last failed call on this thread, or null if none. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ssdp_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn ssdp_config_default() -> SsdpConfig {
    let d = SolverConfig::default();
    SsdpConfig {
        gamma: 0.0,
        gap_tol: d.gap_tol,
        extra_iters: d.extra_iters,
        cg_rel_tol: d.cg_rel_tol,
        cg_max_iter: 0,
        max_main_iters: d.max_main_iters,
        directions: 4,
        potential_descent_max_steps: d.potential_descent_max_steps,
    }
}

/// Graph on `n` vertices from `m` edges `(rows[k], cols[k])`, 0-based. `weights` may be
/// null for unit weights.
///
/// # Safety
/// `rows` and `cols` (and `weights` when non-null) must point to `m` readable elements.
#[no_mangle]
pub unsafe extern "C" fn ssdp_graph_new(
    n: usize,
    m: usize,
    rows: *const usize,
    cols: *const usize,
    weights: *const f64,
    out: *mut *mut SsdpGraph,
) -> SsdpStatus {
    guard(|| {
        if m > 0 && (rows.is_null() || cols.is_null()) {
            return Err(null());
        }
        let edges = (0..m).map(|k| {
            let w = if weights.is_null() { 1.0 } else { *weights.add(k) };
            (*rows.add(k), *cols.add(k), w)
        });
        emit(out, SsdpGraph(Graph::new(n, edges.collect::<Vec<_>>())?))
    })
}

/// Parses the edge-list format: `n m`, then `m` lines `i j [w]`, 1-based.
///
/// # Safety
/// `text` must be a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn ssdp_graph_parse(text: *const c_char, out: *mut *mut SsdpGraph) -> SsdpStatus {
    guard(|| emit(out, SsdpGraph(Graph::parse(utf8(text)?)?)))
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_graph_random(n: usize, m: usize, seed: u64, out: *mut *mut SsdpGraph) -> SsdpStatus {
    guard(|| emit(out, SsdpGraph(maxcut::random_graph(n, m, seed)?)))
}

/// # Safety
/// `g` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn ssdp_graph_free(g: *mut SsdpGraph) {
    release(g)
}

/// # Safety
/// `g` must be a live graph handle; `n` and `m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_graph_size(g: *const SsdpGraph, n: *mut usize, m: *mut usize) -> SsdpStatus {
    guard(|| {
        let g = &borrow(g)?.0;
        if n.is_null() || m.is_null() {
            return Err(null());
        }
        *n = g.n();
        *m = g.edges().len();
        Ok(())
    })
}

/// Problem read from SDPA sparse text (single block).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_problem_from_sdpa(text: *const c_char, out: *mut *mut SsdpProblem) -> SsdpStatus {
    guard(|| emit(out, SsdpProblem(parse_sdpa(utf8(text)?)?.into_problem()?)))
}

/// MAX-CUT relaxation of `g`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_problem_maxcut(g: *const SsdpGraph, out: *mut *mut SsdpProblem) -> SsdpStatus {
    guard(|| emit(out, SsdpProblem(maxcut::maxcut_sdp(&borrow(g)?.0)?)))
}

/// # Safety
/// `p` must be null or a live problem handle.
#[no_mangle]
pub unsafe extern "C" fn ssdp_problem_free(p: *mut SsdpProblem) {
    release(p)
}

/// Matrix order `n` and constraint count `m`.
///
/// # Safety
/// `p` must be a live problem handle; `n` and `m` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_problem_size(p: *const SsdpProblem, n: *mut usize, m: *mut usize) -> SsdpStatus {
    guard(|| {
        let p = &borrow(p)?.0;
        if n.is_null() || m.is_null() {
            return Err(null());
        }
        *n = p.n();
        *m = p.m();
        Ok(())
    })
}

/// Solves from the built-in strictly feasible start. A run that stops without
/// converging still yields a report; check [`ssdp_report_status`].
///
/// # Safety
/// `p` must be a live problem handle, `config` null (defaults) or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_solve(
    p: *const SsdpProblem,
    config: *const SsdpConfig,
    out: *mut *mut SsdpReport,
) -> SsdpStatus {
    guard(|| {
        let p = &borrow(p)?.0;
        let cfg = match config.as_ref() {
            Some(c) => to_config(c)?,
            None => SolverConfig::default(),
        };
        let (x0, y0) = solver::feasible_start(p)?;
        emit(out, SsdpReport(solver::solve(p, x0, y0, &cfg)?))
    })
}

/// # Safety
/// `r` must be null or a live report handle.
#[no_mangle]
pub unsafe extern "C" fn ssdp_report_free(r: *mut SsdpReport) {
    release(r)
}

/// # Safety
/// `r` must be a live report handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_report_status(r: *const SsdpReport, out: *mut SsdpSolveStatus) -> SsdpStatus {
    guard(|| {
        let r = &borrow(r)?.0;
        if out.is_null() {
            return Err(null());
        }
        *out = match r.status {
            SolveStatus::Converged => SsdpSolveStatus::Converged,
            SolveStatus::IterationLimit => SsdpSolveStatus::IterationLimit,
            SolveStatus::Stalled => SsdpSolveStatus::Stalled,
        };
        Ok(())
    })
}

/// Main iterations, primal objective `C • X`, dual objective `bᵀy` and the final gap.
///
/// # Safety
/// `r` must be a live report handle; every output pointer must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_report_summary(
    r: *const SsdpReport,
    iterations: *mut usize,
    primal: *mut f64,
    dual: *mut f64,
    gap: *mut f64,
) -> SsdpStatus {
    guard(|| {
        let r = &borrow(r)?.0;
        if iterations.is_null() || primal.is_null() || dual.is_null() || gap.is_null() {
            return Err(null());
        }
        *iterations = r.main_iterations();
        *primal = r.primal_objective;
        *dual = r.dual_objective;
        *gap = r.gap;
        Ok(())
    })
}

/// Copies the duality gap after each iteration (index 0 is the start) into `buf`.
/// `len` receives the number of entries; if `cap` is smaller nothing is copied and
/// `BufferTooSmall` is returned.
///
/// # Safety
/// `r` must be a live report handle; `buf` must have room for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn ssdp_report_gaps(
    r: *const SsdpReport,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> SsdpStatus {
    guard(|| {
        let r = &borrow(r)?.0;
        if len.is_null() {
            return Err(null());
        }
        *len = r.records.len();
        if cap < r.records.len() {
            return Err(Failure(SsdpStatus::BufferTooSmall, format!("need room for {} values", r.records.len())));
        }
        if buf.is_null() {
            return Err(null());
        }
        for (k, rec) in r.records.iter().enumerate() {
            *buf.add(k) = rec.gap;
        }
        Ok(())
    })
}

/// Relaxation, solve and `trials` rounds of hyperplane rounding.
///
/// # Safety
/// `g` must be a live graph handle, `config` null or readable, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_maxcut(
    g: *const SsdpGraph,
    config: *const SsdpConfig,
    trials: usize,
    seed: u64,
    out: *mut *mut SsdpCut,
) -> SsdpStatus {
    guard(|| {
        let g = &borrow(g)?.0;
        let cfg = match config.as_ref() {
            Some(c) => to_config(c)?,
            None => SolverConfig::default(),
        };
        emit(out, SsdpCut(maxcut::solve_maxcut(g, &cfg, trials, seed)?.cut))
    })
}

/// # Safety
/// `c` must be null or a live cut handle.
#[no_mangle]
pub unsafe extern "C" fn ssdp_cut_free(c: *mut SsdpCut) {
    release(c)
}

/// Best rounded cut value and the relaxation bound.
///
/// # Safety
/// `c` must be a live cut handle; `value` and `bound` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ssdp_cut_value(c: *const SsdpCut, value: *mut f64, bound: *mut f64) -> SsdpStatus {
    guard(|| {
        let c = &borrow(c)?.0;
        if value.is_null() || bound.is_null() {
            return Err(null());
        }
        *value = c.cut_value;
        *bound = c.sdp_bound;
        Ok(())
    })
}

/// Writes one 0/1 side label per vertex into `sides`, which must hold `n` bytes.
///
/// # Safety
/// `c` must be a live cut handle; `sides` must have room for `n` bytes.
#[no_mangle]
pub unsafe extern "C" fn ssdp_cut_sides(c: *const SsdpCut, sides: *mut u8, n: usize) -> SsdpStatus {
    guard(|| {
        let c = &borrow(c)?.0;
        if n != c.sides.len() {
            return Err(Failure(
                SsdpStatus::InvalidArgument,
                format!("expected {} entries, got {n}", c.sides.len()),
            ));
        }
        if sides.is_null() {
            return Err(null());
        }
        for (k, &s) in c.sides.iter().enumerate() {
            *sides.add(k) = s as u8;
        }
        Ok(())
    })
}
