//! C ABI over `crystrep`.
//!
//! Groups and representations cross the boundary as opaque handles that
//! the caller releases with the matching `_free` function. Every fallible
//! call returns a [`CrystrepStatus`]; on failure the message is available
//! from [`crystrep_last_error`] until the next call on the same thread.
//! Strings returned to the caller are freed with [`crystrep_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use crystrep::classify::family_rep;
use crystrep::group::text::parse_group;
use crystrep::group::VaGroup;
use crystrep::numeric::cis;
use crystrep::probe::local_moduli_dim;
use crystrep::rep::{is_irreducible, UnitaryRep};
use crystrep::topology::{rational_cohomology_gamma_k, rdef_homotopy};
use crystrep::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrystrepStatus {
    Ok = 0,
    InvalidInput = 1,
    Computation = 2,
    NullPointer = 3,
    BufferTooSmall = 4,
    Panic = 5,
}

/// Opaque group handle.
pub struct CrystrepGroup {
    inner: Arc<VaGroup>,
}

/// Opaque representation handle.
pub struct CrystrepRep {
    inner: UnitaryRep,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(e: Error) -> CrystrepStatus {
    let status = if e.is_input_error() {
        CrystrepStatus::InvalidInput
    } else {
        CrystrepStatus::Computation
    };
    set_error(e.to_string());
    status
}

fn guard(f: impl FnOnce() -> CrystrepStatus) -> CrystrepStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("panic inside crystrep".into());
            CrystrepStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, CrystrepStatus> {
    if p.is_null() {
        set_error("null string argument".into());
        return Err(CrystrepStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("string argument is not UTF-8".into());
        CrystrepStatus::InvalidInput
    })
}

macro_rules! non_null {
    ($($p:expr),+) => {
        if $($p.is_null())||+ {
            set_error("null pointer argument".into());
            return CrystrepStatus::NullPointer;
        }
    };
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

/// Message for the last failure on this thread, or null. Owned by the
/// library; valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn crystrep_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn crystrep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builtin group by name: `gamma-k:<k>`, `z:<k>` or `p4`.
///
/// # Safety
/// `name` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_group_builtin(name: *const c_char, out: *mut *mut CrystrepGroup) -> CrystrepStatus {
    guard(|| {
        non_null!(out);
        let name = try_status!(str_arg(name));
        match VaGroup::builtin(name) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(CrystrepGroup { inner: Arc::new(g) }));
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Group from the plain-text definition format.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_group_parse(text: *const c_char, out: *mut *mut CrystrepGroup) -> CrystrepStatus {
    guard(|| {
        non_null!(out);
        let text = try_status!(str_arg(text));
        match parse_group(text) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(CrystrepGroup { inner: Arc::new(g) }));
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `g` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crystrep_group_free(g: *mut CrystrepGroup) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Rank of the translation lattice; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn crystrep_group_rank(g: *const CrystrepGroup) -> usize {
    g.as_ref().map_or(0, |g| g.inner.rank())
}

/// Order of the point group; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live group handle.
#[no_mangle]
pub unsafe extern "C" fn crystrep_group_point_order(g: *const CrystrepGroup) -> usize {
    g.as_ref().map_or(0, |g| g.inner.q_order())
}

/// Parses and verifies a representation in the JSON exchange format.
///
/// # Safety
/// `g` must be a live group handle, `json` a valid C string, `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_from_json(
    g: *const CrystrepGroup,
    json: *const c_char,
    out: *mut *mut CrystrepRep,
) -> CrystrepStatus {
    guard(|| {
        non_null!(g, out);
        let json = try_status!(str_arg(json));
        match UnitaryRep::from_json(json, (*g).inner.clone()) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CrystrepRep { inner: r }));
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// The 2-dimensional family representation of `Γ_k`. Angles are in turns:
/// `z_i = exp(2πi z_turns[i])`, `α = exp(2πi alpha_turns)`.
///
/// # Safety
/// `z_turns` must point to `k` doubles and `out` be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_family(
    k: usize,
    z_turns: *const f64,
    alpha_turns: f64,
    out: *mut *mut CrystrepRep,
) -> CrystrepStatus {
    guard(|| {
        non_null!(out);
        if k > 0 && z_turns.is_null() {
            set_error("null angle array".into());
            return CrystrepStatus::NullPointer;
        }
        let tau = std::f64::consts::TAU;
        let z: Vec<_> = if k == 0 {
            vec![]
        } else {
            std::slice::from_raw_parts(z_turns, k).iter().map(|a| cis(tau * a)).collect()
        };
        match family_rep(k, &z, cis(tau * alpha_turns)) {
            Ok(r) => {
                *out = Box::into_raw(Box::new(CrystrepRep { inner: r }));
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// # Safety
/// `r` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_free(r: *mut CrystrepRep) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Dimension; 0 for a null handle.
///
/// # Safety
/// `r` must be null or a live representation handle.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_dim(r: *const CrystrepRep) -> usize {
    r.as_ref().map_or(0, |r| r.inner.dim())
}

/// JSON text of the representation; free with [`crystrep_string_free`].
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_to_json(r: *const CrystrepRep, out: *mut *mut c_char) -> CrystrepStatus {
    guard(|| {
        non_null!(r, out);
        match CString::new((*r).inner.to_json()) {
            Ok(s) => {
                *out = s.into_raw();
                CrystrepStatus::Ok
            }
            Err(_) => {
                set_error("JSON contains a NUL byte".into());
                CrystrepStatus::Computation
            }
        }
    })
}

/// Schur's criterion on the commutant.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_is_irreducible(r: *const CrystrepRep, out: *mut bool) -> CrystrepStatus {
    guard(|| {
        non_null!(r, out);
        match is_irreducible(&(*r).inner) {
            Ok(b) => {
                *out = b;
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Local dimension of the moduli space at an irreducible representation.
///
/// # Safety
/// `r` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rep_local_moduli_dim(r: *const CrystrepRep, out: *mut usize) -> CrystrepStatus {
    guard(|| {
        non_null!(r, out);
        match local_moduli_dim(&(*r).inner) {
            Ok(rep) => {
                *out = rep.local_moduli_dim;
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// `π₀` of the deformation representation ring of `Γ_k` as
/// `ℤ^free_rank ⊕ (ℤ/2)^two_torsion`; other torsion is reported as an error.
///
/// # Safety
/// Both out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rdef_pi0(k: usize, free_rank: *mut usize, two_torsion: *mut usize) -> CrystrepStatus {
    guard(|| {
        non_null!(free_rank, two_torsion);
        match rdef_homotopy(k) {
            Ok(r) => {
                if r.pi0.two_torsion_count() != r.pi0.torsion.len() {
                    set_error(format!("π₀ = {} has odd torsion", r.pi0));
                    return CrystrepStatus::Computation;
                }
                *free_rank = r.pi0.free_rank;
                *two_torsion = r.pi0.torsion.len();
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}

/// Ranks of `H^n(Γ_k; ℚ)` for `n = 0..=k+1` into `ranks[0..cap]`; `len`
/// receives the number of degrees even when the buffer is too small.
///
/// # Safety
/// `ranks` must point to `cap` writable entries (or be null with `cap = 0`);
/// `len` must be valid.
#[no_mangle]
pub unsafe extern "C" fn crystrep_rational_cohomology(
    k: usize,
    ranks: *mut usize,
    cap: usize,
    len: *mut usize,
) -> CrystrepStatus {
    guard(|| {
        non_null!(len);
        match rational_cohomology_gamma_k(k) {
            Ok(r) => {
                if !r.all_agree() {
                    set_error("cohomology models disagree".into());
                    return CrystrepStatus::Computation;
                }
                *len = r.formula.len();
                if cap < r.formula.len() || ranks.is_null() {
                    set_error(format!("need room for {} ranks", r.formula.len()));
                    return CrystrepStatus::BufferTooSmall;
                }
                ptr::copy_nonoverlapping(r.formula.as_ptr(), ranks, r.formula.len());
                CrystrepStatus::Ok
            }
            Err(e) => fail(e),
        }
    })
}
