//! C ABI for `symdesign`.
//!
//! Conventions:
//! * every fallible function returns an [`SdStatus`]; outputs go through
//!   caller-provided pointers that are written only on success;
//! * models are opaque [`SdModel`] handles created by [`sd_model_new`] /
//!   [`sd_model_new_custom`] and released with [`sd_model_free`];
//! * strings returned by the library are released with [`sd_string_free`];
//! * the message of the most recent failure on the calling thread is
//!   available from [`sd_last_error_message`];
//! * panics never cross the boundary: they are reported as
//!   [`SdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use symdesign::cayley::{self, GraphKind};
use symdesign::hilbert::Symmetry;
use symdesign::moment::Model;
use symdesign::report::{self, Format, RunConfig};
use symdesign::Error;

/// Result codes of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Malformed = 3,
    Mismatch = 4,
    NotGenerating = 5,
    Unsupported = 6,
    Budget = 7,
    NotStochastic = 8,
    NoGap = 9,
    Internal = 10,
    Io = 11,
    Panic = 12,
}

/// Symmetry group selector.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdSymmetry {
    /// Qubits with conserved Hamming weight.
    U1 = 0,
    /// Qudits with global SU(d) symmetry (`d` passed separately).
    Sud = 1,
}

/// Named generating sets.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SdGraph {
    Chain = 0,
    Star = 1,
    Complete = 2,
}

/// Opaque model handle: symmetry, size, generating set and run settings.
pub struct SdModel {
    config: RunConfig,
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> SdStatus {
    match e {
        Error::InvalidArgument(_) => SdStatus::InvalidArgument,
        Error::Malformed(_) => SdStatus::Malformed,
        Error::Mismatch(_) => SdStatus::Mismatch,
        Error::NotGenerating { .. } => SdStatus::NotGenerating,
        Error::Unsupported(_) => SdStatus::Unsupported,
        Error::Budget { .. } => SdStatus::Budget,
        Error::NotStochastic(_) => SdStatus::NotStochastic,
        Error::NoGap(_) => SdStatus::NoGap,
        Error::Internal(_) => SdStatus::Internal,
        Error::Io { .. } => SdStatus::Io,
    }
}

/// Runs `f`, converting errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> SdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SdStatus::Ok
        }
        Ok(Err(e)) => {
            let s = status_of(&e);
            set_error(e.to_string());
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            SdStatus::Panic
        }
    }
}

fn null_error(what: &str) -> Error {
    Error::InvalidArgument(format!("null pointer: {what}"))
}

fn symmetry(sym: SdSymmetry, d: usize) -> Symmetry {
    match sym {
        SdSymmetry::U1 => Symmetry::U1,
        SdSymmetry::Sud => Symmetry::SUd { d },
    }
}

fn graph(g: SdGraph) -> GraphKind {
    match g {
        SdGraph::Chain => GraphKind::Chain,
        SdGraph::Star => GraphKind::Star,
        SdGraph::Complete => GraphKind::Complete,
    }
}

fn null_status(out_null: bool) -> Option<SdStatus> {
    if out_null {
        set_error("null output pointer".into());
        Some(SdStatus::NullPointer)
    } else {
        None
    }
}

fn build(config: RunConfig, out: *mut *mut SdModel) -> SdStatus {
    if let Some(s) = null_status(out.is_null()) {
        return s;
    }
    guard(|| {
        let model = config.model()?;
        let handle = Box::into_raw(Box::new(SdModel { config, model }));
        // SAFETY: `out` was checked non-null; the caller guarantees it is writable.
        unsafe { *out = handle };
        Ok(())
    })
}

/// Creates a model for a named generating set. `d` is ignored for U(1).
///
/// # Safety
/// `out` must be a valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn sd_model_new(sym: SdSymmetry, d: usize, n: usize, graph_kind: SdGraph, out: *mut *mut SdModel) -> SdStatus {
    build(RunConfig::new(symmetry(sym, d), n).with_graph(graph(graph_kind)), out)
}

/// Creates a model for a custom generating set given as `n_edges` pairs
/// `(edges[2k], edges[2k+1])` of 1-based sites.
///
/// # Safety
/// `edges` must point to `2 * n_edges` readable values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_model_new_custom(
    sym: SdSymmetry,
    d: usize,
    n: usize,
    edges: *const usize,
    n_edges: usize,
    out: *mut *mut SdModel,
) -> SdStatus {
    if edges.is_null() && n_edges > 0 {
        set_error("null edge list".into());
        return SdStatus::NullPointer;
    }
    let flat: &[usize] = if n_edges == 0 {
        &[]
    } else {
        // SAFETY: the caller guarantees `2 * n_edges` readable values.
        unsafe { std::slice::from_raw_parts(edges, 2 * n_edges) }
    };
    let mut config = RunConfig::new(symmetry(sym, d), n).with_graph(GraphKind::Custom);
    config.edges = Some(flat.chunks_exact(2).map(|p| (p[0], p[1])).collect());
    build(config, out)
}

/// Releases a model. Passing null is a no-op.
///
/// # Safety
/// `model` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_model_free(model: *mut SdModel) {
    if !model.is_null() {
        // SAFETY: the handle came from `Box::into_raw` and is freed once.
        drop(unsafe { Box::from_raw(model) });
    }
}

fn with_model<'a>(model: *const SdModel) -> Result<&'a SdModel, Error> {
    // SAFETY: the caller guarantees `model` is null or a live handle.
    unsafe { model.as_ref() }.ok_or_else(|| null_error("model"))
}

/// Sets the accuracy `ε ∈ (0, 1)` used for depth computations.
///
/// # Safety
/// `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sd_model_set_epsilon(model: *mut SdModel, epsilon: f64) -> SdStatus {
    guard(|| {
        // SAFETY: the caller guarantees `model` is null or a live handle.
        let m = unsafe { model.as_mut() }.ok_or_else(|| null_error("model"))?;
        let mut c = m.config.clone();
        c.epsilon = epsilon;
        c.validate()?;
        m.config = c;
        Ok(())
    })
}

/// Number of symmetry sectors.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sd_model_num_sectors(model: *const SdModel, out: *mut usize) -> SdStatus {
    if let Some(s) = null_status(out.is_null()) {
        return s;
    }
    guard(|| {
        let m = with_model(model)?;
        // SAFETY: checked non-null above.
        unsafe { *out = m.model.sectors.len() };
        Ok(())
    })
}

/// Dimension of sector `index`.
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sd_model_sector_dim(model: *const SdModel, index: usize, out: *mut usize) -> SdStatus {
    if let Some(s) = null_status(out.is_null()) {
        return s;
    }
    guard(|| {
        let m = with_model(model)?;
        let s = m.model.sectors.get(index).ok_or_else(|| Error::InvalidArgument(format!("sector index {index} out of range")))?;
        // SAFETY: checked non-null above.
        unsafe { *out = s.dim };
        Ok(())
    })
}

/// Runs the full gap pipeline. Writes the global gap of the second-moment
/// operator to `out_gap`, its depth to `out_depth` (either may be null), and
/// whether every comparison check passed to `out_pass` (may be null).
///
/// # Safety
/// `model` must be a live handle; non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_global_gap(model: *const SdModel, out_gap: *mut f64, out_depth: *mut u64, out_pass: *mut bool) -> SdStatus {
    guard(|| {
        let m = with_model(model)?;
        let r = report::run_gap(&m.config)?;
        let gap = r.global.gap.ok_or(Error::NoGap(0.0))?;
        let depth = r.global.depth.ok_or(Error::NoGap(gap))?;
        // SAFETY: each output is written only when non-null.
        unsafe {
            if !out_gap.is_null() {
                *out_gap = gap;
            }
            if !out_depth.is_null() {
                *out_depth = depth;
            }
            if !out_pass.is_null() {
                *out_pass = r.pass();
            }
        }
        Ok(())
    })
}

/// Runs the full gap pipeline and returns the JSON report. Release the
/// string with [`sd_string_free`].
///
/// # Safety
/// `model` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sd_report_json(model: *const SdModel, out: *mut *mut c_char) -> SdStatus {
    if let Some(s) = null_status(out.is_null()) {
        return s;
    }
    guard(|| {
        let m = with_model(model)?;
        let text = report::render(&report::run_gap(&m.config)?, Format::Json)?;
        let c = CString::new(text).map_err(|e| Error::Internal(e.to_string()))?;
        // SAFETY: checked non-null above.
        unsafe { *out = c.into_raw() };
        Ok(())
    })
}

/// Releases a string returned by this library. Passing null is a no-op.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sd_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: the pointer came from `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Depth `⌈(2kn ln d + ln(1/ε))/Δ⌉` for a given gap.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_convergence_depth(gap: f64, k: usize, n: usize, d: usize, epsilon: f64, out: *mut u64) -> SdStatus {
    if let Some(s) = null_status(out.is_null()) {
        return s;
    }
    guard(|| {
        let p = report::convergence_depth(gap, k, n, d, epsilon)?;
        // SAFETY: checked non-null above.
        unsafe { *out = p };
        Ok(())
    })
}

/// Closed-form top adjacency eigenvalues and gap of a named Cayley graph of `S_n`.
///
/// # Safety
/// Non-null outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sd_cayley_closed_form(
    graph_kind: SdGraph,
    n: usize,
    out_lambda1: *mut f64,
    out_lambda2: *mut f64,
    out_gap: *mut f64,
) -> SdStatus {
    guard(|| {
        let g = cayley::closed_form_gap(graph(graph_kind), n)?;
        // SAFETY: each output is written only when non-null.
        unsafe {
            if !out_lambda1.is_null() {
                *out_lambda1 = g.lambda1;
            }
            if !out_lambda2.is_null() {
                *out_lambda2 = g.lambda2;
            }
            if !out_gap.is_null() {
                *out_gap = g.gap;
            }
        }
        Ok(())
    })
}

/// Message of the most recent failure on this thread, or null after a
/// success. The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn sd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
