//! C interface to `qpchar`.
//!
//! Objects are opaque handles created by `qpc_*_from_json` or by operations
//! and released with the matching `*_free`. Every fallible call returns a
//! [`QpcStatus`]; on failure the message is available from
//! [`qpc_last_error`] until the next failing call on the same thread.
//! Strings returned through `out` parameters are owned by the caller and
//! must be released with [`qpc_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::sync::Arc;

use qpchar::character::{character, CharInput};
use qpchar::io::{parse_char_input, parse_potential, parse_quiver, potential_to_value, quiver_to_value};
use qpchar::jacobian::TruncatedJacobian;
use qpchar::potential::{Potential, DEFAULT_TRUNC_DEGREE, QP};
use qpchar::quiver::Quiver;
use qpchar::seeds::explore;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum QpcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

/// Opaque quiver handle.
pub struct QpcQuiver(Quiver);

/// Opaque quiver-with-potential handle.
pub struct QpcQp(QP);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: QpcStatus, msg: impl Into<String>) -> QpcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> QpcStatus) -> QpcStatus {
    std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(QpcStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, QpcStatus> {
    if s.is_null() {
        return Err(fail(QpcStatus::NullPointer, "null string argument"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(QpcStatus::InvalidUtf8, "argument is not UTF-8"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> QpcStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            QpcStatus::Ok
        }
        Err(_) => fail(QpcStatus::Domain, "result contains a nul byte"),
    }
}

macro_rules! nonnull {
    ($($p:expr),+) => {
        $(if $p.is_null() {
            return fail(QpcStatus::NullPointer, concat!("null argument: ", stringify!($p)));
        })+
    };
}

/// Message of the last failure on this thread, or null. Valid until the next
/// failing call; do not free.
#[no_mangle]
pub extern "C" fn qpc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn qpc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a quiver from `{"vertices": n, "arrows": [[s, t, "label"], ...]}`.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_quiver_from_json(json: *const c_char, out: *mut *mut QpcQuiver) -> QpcStatus {
    nonnull!(out);
    guard(|| {
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match parse_quiver(text) {
            Ok(q) => {
                *out = Box::into_raw(Box::new(QpcQuiver(q)));
                QpcStatus::Ok
            }
            Err(e) => fail(QpcStatus::Parse, e.to_string()),
        }
    })
}

/// # Safety
/// `q` must be a valid handle; `out` receives a string to free with
/// [`qpc_string_free`].
#[no_mangle]
pub unsafe extern "C" fn qpc_quiver_to_json(q: *const QpcQuiver, out: *mut *mut c_char) -> QpcStatus {
    nonnull!(q, out);
    guard(|| write_string(out, quiver_to_value(&(*q).0).to_string()))
}

/// # Safety
/// `q` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qpc_quiver_free(q: *mut QpcQuiver) {
    if !q.is_null() {
        drop(Box::from_raw(q));
    }
}

/// Number of vertices, or 0 for a null handle.
///
/// # Safety
/// `q` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn qpc_quiver_vertex_count(q: *const QpcQuiver) -> usize {
    q.as_ref().map_or(0, |q| q.0.vertex_count())
}

/// Mutates at the 1-based `vertex`, writing a new handle to `out`.
///
/// # Safety
/// `q` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_quiver_mutate(q: *const QpcQuiver, vertex: usize, out: *mut *mut QpcQuiver) -> QpcStatus {
    nonnull!(q, out);
    guard(|| match (*q).0.mutate(vertex) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(QpcQuiver(m)));
            QpcStatus::Ok
        }
        Err(e) => fail(QpcStatus::Domain, e.to_string()),
    })
}

/// Writes the row-major `n x n` B-matrix into `buf`, which must hold
/// `len >= n * n` entries.
///
/// # Safety
/// `q` must be a valid handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn qpc_quiver_b_matrix(q: *const QpcQuiver, buf: *mut i64, len: usize) -> QpcStatus {
    nonnull!(q, buf);
    guard(|| {
        let b = match (*q).0.b_matrix() {
            Ok(b) => b,
            Err(e) => return fail(QpcStatus::Domain, e.to_string()),
        };
        let n = b.size();
        if len < n * n {
            return fail(QpcStatus::Domain, format!("buffer holds {len} entries, need {}", n * n));
        }
        let out = std::slice::from_raw_parts_mut(buf, n * n);
        for (k, v) in b.rows().into_iter().flatten().enumerate() {
            out[k] = v;
        }
        QpcStatus::Ok
    })
}

/// Builds a quiver with potential. `potential_json` may be null for the zero
/// potential; `trunc_degree` 0 selects the default.
///
/// # Safety
/// `q` must be a valid handle, `potential_json` null or a nul-terminated
/// string, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_qp_new(
    q: *const QpcQuiver,
    potential_json: *const c_char,
    trunc_degree: usize,
    out: *mut *mut QpcQp,
) -> QpcStatus {
    nonnull!(q, out);
    guard(|| {
        let trunc = if trunc_degree == 0 { DEFAULT_TRUNC_DEGREE } else { trunc_degree };
        let quiver = Arc::new((*q).0.clone());
        let w = if potential_json.is_null() {
            Potential::zero(quiver.clone(), trunc)
        } else {
            let text = match read_str(potential_json) {
                Ok(t) => t,
                Err(s) => return s,
            };
            match parse_potential(quiver.clone(), text, trunc) {
                Ok(w) => w,
                Err(e) => return fail(QpcStatus::Parse, e.to_string()),
            }
        };
        match QP::new(quiver, w) {
            Ok(qp) => {
                *out = Box::into_raw(Box::new(QpcQp(qp)));
                QpcStatus::Ok
            }
            Err(e) => fail(QpcStatus::Domain, e.to_string()),
        }
    })
}

/// # Safety
/// `qp` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn qpc_qp_free(qp: *mut QpcQp) {
    if !qp.is_null() {
        drop(Box::from_raw(qp));
    }
}

/// Mutates (premutation plus reduction) at `vertex`.
///
/// # Safety
/// `qp` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_qp_mutate(qp: *const QpcQp, vertex: usize, out: *mut *mut QpcQp) -> QpcStatus {
    nonnull!(qp, out);
    guard(|| match (*qp).0.mutate(vertex) {
        Ok(m) => {
            *out = Box::into_raw(Box::new(QpcQp(m)));
            QpcStatus::Ok
        }
        Err(e) => fail(QpcStatus::Domain, e.to_string()),
    })
}

/// Writes `{"quiver": ..., "potential": ...}`.
///
/// # Safety
/// `qp` must be a valid handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_qp_to_json(qp: *const QpcQp, out: *mut *mut c_char) -> QpcStatus {
    nonnull!(qp, out);
    guard(|| {
        let qp = &(*qp).0;
        let v = serde_json::json!({
            "quiver": quiver_to_value(qp.quiver()),
            "potential": potential_to_value(qp.potential()),
        });
        write_string(out, v.to_string())
    })
}

/// Total dimension of the Jacobian algebra truncated at `max_degree`;
/// `stabilized` receives 1 if the graded dimensions vanished before the
/// truncation and 0 otherwise.
///
/// # Safety
/// `qp`, `total` and `stabilized` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn qpc_jacobian_dimension(
    qp: *const QpcQp,
    max_degree: usize,
    total: *mut usize,
    stabilized: *mut i32,
) -> QpcStatus {
    nonnull!(qp, total, stabilized);
    guard(|| {
        let j = TruncatedJacobian::new(&(*qp).0, max_degree);
        *total = j.total_dimension();
        *stabilized = i32::from(j.is_stabilized());
        QpcStatus::Ok
    })
}

/// Explores the exchange graph to `depth` with at most `max_seeds` seeds.
///
/// # Safety
/// `q` and all output pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn qpc_exchange_graph_counts(
    q: *const QpcQuiver,
    depth: usize,
    max_seeds: usize,
    seeds: *mut usize,
    variables: *mut usize,
    closed: *mut i32,
) -> QpcStatus {
    nonnull!(q, seeds, variables, closed);
    guard(|| match explore(&(*q).0, depth, max_seeds) {
        Ok(g) => {
            *seeds = g.seeds.len();
            *variables = g.cluster_variables().len();
            *closed = i32::from(g.closed);
            QpcStatus::Ok
        }
        Err(e) => fail(QpcStatus::Domain, e.to_string()),
    })
}

/// Cluster character of `{"module": ..., "g": [...]}` rendered as a
/// Laurent polynomial such as `(x2 + 1)/x1`.
///
/// # Safety
/// `qp` must be a valid handle, `input_json` a nul-terminated string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn qpc_character(qp: *const QpcQp, input_json: *const c_char, out: *mut *mut c_char) -> QpcStatus {
    nonnull!(qp, out);
    guard(|| {
        let text = match read_str(input_json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let qp = &(*qp).0;
        let input: CharInput = match parse_char_input(qp.quiver(), text) {
            Ok(c) => c,
            Err(e) => return fail(QpcStatus::Parse, e.to_string()),
        };
        match character(qp, &input) {
            Ok(x) => write_string(out, x.to_string()),
            Err(e) => fail(QpcStatus::Domain, e.to_string()),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(s: *mut c_char) -> String {
        let out = CStr::from_ptr(s).to_str().unwrap().to_owned();
        qpc_string_free(s);
        out
    }

    unsafe fn quiver(json: &str) -> *mut QpcQuiver {
        let mut q = ptr::null_mut();
        assert_eq!(qpc_quiver_from_json(cstr(json).as_ptr(), &mut q), QpcStatus::Ok);
        q
    }

    #[test]
    fn quiver_mutation_and_b_matrix() {
        unsafe {
            let q = quiver(r#"{"vertices": 2, "arrows": [[1, 2, "a"]]}"#);
            assert_eq!(qpc_quiver_vertex_count(q), 2);
            let mut m = ptr::null_mut();
            assert_eq!(qpc_quiver_mutate(q, 1, &mut m), QpcStatus::Ok);
            let mut s = ptr::null_mut();
            assert_eq!(qpc_quiver_to_json(m, &mut s), QpcStatus::Ok);
            assert_eq!(take(s), r#"{"arrows":[[2,1,"a*"]],"vertices":2}"#);
            let mut b = [0i64; 4];
            assert_eq!(qpc_quiver_b_matrix(m, b.as_mut_ptr(), 4), QpcStatus::Ok);
            assert_eq!(b, [0, -1, 1, 0]);
            assert_eq!(qpc_quiver_b_matrix(m, b.as_mut_ptr(), 3), QpcStatus::Domain);
            qpc_quiver_free(m);
            qpc_quiver_free(q);
        }
    }

    #[test]
    fn errors_are_reported() {
        unsafe {
            let mut q = ptr::null_mut();
            assert_eq!(qpc_quiver_from_json(cstr("{").as_ptr(), &mut q), QpcStatus::Parse);
            assert!(!qpc_last_error().is_null());
            assert_eq!(qpc_quiver_from_json(ptr::null(), &mut q), QpcStatus::NullPointer);
            let two = quiver(r#"{"vertices": 2, "arrows": [[1, 2, "a"], [2, 1, "b"]]}"#);
            let mut m = ptr::null_mut();
            assert_eq!(qpc_quiver_mutate(two, 1, &mut m), QpcStatus::Domain);
            assert_eq!(qpc_quiver_mutate(two, 9, &mut m), QpcStatus::Domain);
            qpc_quiver_free(two);
        }
    }

    #[test]
    fn qp_jacobian_and_character() {
        unsafe {
            let q = quiver(r#"{"vertices": 3, "arrows": [[1, 2, "a"], [2, 3, "b"], [3, 1, "c"]]}"#);
            let mut qp = ptr::null_mut();
            assert_eq!(qpc_qp_new(q, cstr(r#"[["1", ["c", "b", "a"]]]"#).as_ptr(), 0, &mut qp), QpcStatus::Ok);
            let (mut total, mut stab) = (0usize, 0i32);
            assert_eq!(qpc_jacobian_dimension(qp, 16, &mut total, &mut stab), QpcStatus::Ok);
            assert_eq!((total, stab), (6, 1));
            let mut s = ptr::null_mut();
            let input = cstr(r#"{"module": {"dims": [1, 0, 0]}, "g": [-1, 1, 0]}"#);
            assert_eq!(qpc_character(qp, input.as_ptr(), &mut s), QpcStatus::Ok);
            assert_eq!(take(s), "(x2 + x3)/x1");
            let mut m = ptr::null_mut();
            assert_eq!(qpc_qp_mutate(qp, 1, &mut m), QpcStatus::Ok);
            assert_eq!(qpc_qp_to_json(m, &mut s), QpcStatus::Ok);
            assert_eq!(take(s), r#"{"potential":[],"quiver":{"arrows":[[2,1,"a*"],[1,3,"c*"]],"vertices":3}}"#);
            qpc_qp_free(m);
            qpc_qp_free(qp);
            qpc_quiver_free(q);
        }
    }

    #[test]
    fn exchange_graph() {
        unsafe {
            let q = quiver(r#"{"vertices": 3, "arrows": [[1, 2, "a"], [2, 3, "b"]]}"#);
            let (mut s, mut v, mut c) = (0usize, 0usize, 0i32);
            assert_eq!(qpc_exchange_graph_counts(q, 10, 1000, &mut s, &mut v, &mut c), QpcStatus::Ok);
            assert_eq!((s, v, c), (14, 9, 1));
            qpc_quiver_free(q);
        }
    }
}
