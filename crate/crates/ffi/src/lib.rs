//! C ABI for `lammult`.
//!
//! Terms cross the boundary as opaque `LmTerm` handles; everything else is a
//! status code plus out-parameters. Strings returned through `char **out`
//! are owned by the caller and must be released with `lm_string_free`. After
//! any non-`LM_STATUS_OK` return, `lm_last_error` describes the failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lammult::derivation::check_stage_chain;
use lammult::harness::{differential, fuzz, unload, FuzzConfig, Verdict};
use lammult::machine::{run, EvalApply, Machine, Outcome, PushEnter, Stg};
use lammult::syntax::gen_term;
use lammult::{parse, Term};

/// Opaque handle to an immutable term.
pub struct LmTerm {
    term: Term,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    /// The run did not halt within its fuel; out-parameters that carry a
    /// step count are still written.
    FuelExhausted = 5,
    /// A cross-check found a disagreement; the report is still written.
    Mismatch = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LmMachine {
    PushEnter = 0,
    EvalApply = 1,
    Stg = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

type Failure = (LmStatus, String);

fn guard(f: impl FnOnce() -> Result<LmStatus, Failure>) -> LmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => {
            set_error("");
            s
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(&format!("panic: {msg}"));
            LmStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (LmStatus::NullPointer, format!("{what} is null"))
}

unsafe fn term_ref<'a>(t: *const LmTerm, what: &str) -> Result<&'a Term, Failure> {
    t.as_ref().map(|h| &h.term).ok_or_else(|| null(what))
}

unsafe fn write<T>(out: *mut T, v: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(v);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c =
        CString::new(s).map_err(|_| (LmStatus::InvalidArgument, "string contains nul".into()))?;
    write(out, c.into_raw(), "out")
}

fn new_handle(term: Term) -> *mut LmTerm {
    Box::into_raw(Box::new(LmTerm { term }))
}

fn positive_fuel(fuel: u64) -> Result<u64, Failure> {
    if fuel == 0 {
        Err((LmStatus::InvalidArgument, "fuel must be positive".into()))
    } else {
        Ok(fuel)
    }
}

/// Parses a NUL-terminated UTF-8 term into `*out`.
///
/// # Safety
/// `src` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lm_term_parse(src: *const c_char, out: *mut *mut LmTerm) -> LmStatus {
    guard(|| {
        if src.is_null() {
            return Err(null("src"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let s = CStr::from_ptr(src)
            .to_str()
            .map_err(|e| (LmStatus::InvalidUtf8, e.to_string()))?;
        let t = parse(s).map_err(|e| (LmStatus::ParseError, e.to_string()))?;
        write(out, new_handle(t), "out")?;
        Ok(LmStatus::Ok)
    })
}

/// Releases a term handle. Null is ignored.
///
/// # Safety
/// `t` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lm_term_free(t: *mut LmTerm) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Prints a term in the concrete syntax accepted by `lm_term_parse`.
///
/// # Safety
/// `t` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn lm_term_print(t: *const LmTerm, out: *mut *mut c_char) -> LmStatus {
    guard(|| {
        let t = term_ref(t, "term")?;
        write_string(out, t.to_string())?;
        Ok(LmStatus::Ok)
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn lm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Alpha-equivalence of two terms.
///
/// # Safety
/// Both handles must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lm_term_alpha_eq(
    a: *const LmTerm,
    b: *const LmTerm,
    out: *mut bool,
) -> LmStatus {
    guard(|| {
        let (a, b) = (term_ref(a, "a")?, term_ref(b, "b")?);
        write(out, a.alpha_eq(b), "out")?;
        Ok(LmStatus::Ok)
    })
}

fn eval_with<M: Machine>(t: &Term, fuel: u64) -> (Option<Term>, u64) {
    match run::<M>(t, fuel).0 {
        Outcome::Halted { config, steps, .. } => (
            Some(unload::<M>(&config).expect("halted configurations unload")),
            steps,
        ),
        Outcome::FuelExhausted { steps } => (None, steps),
    }
}

/// Runs `machine` on `t`. On halt writes the unloaded term to `*out` and
/// returns `LM_STATUS_OK`; otherwise `*out` is set to null and
/// `LM_STATUS_FUEL_EXHAUSTED` is returned. `steps` may be null.
///
/// # Safety
/// `t` must be live, `out` valid, `steps` valid or null.
#[no_mangle]
pub unsafe extern "C" fn lm_eval(
    t: *const LmTerm,
    machine: LmMachine,
    fuel: u64,
    out: *mut *mut LmTerm,
    steps: *mut u64,
) -> LmStatus {
    guard(|| {
        let t = term_ref(t, "term")?;
        let fuel = positive_fuel(fuel)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let (result, n) = match machine {
            LmMachine::PushEnter => eval_with::<PushEnter>(t, fuel),
            LmMachine::EvalApply => eval_with::<EvalApply>(t, fuel),
            LmMachine::Stg => eval_with::<Stg>(t, fuel),
        };
        if !steps.is_null() {
            steps.write(n);
        }
        match result {
            Some(u) => {
                out.write(new_handle(u));
                Ok(LmStatus::Ok)
            }
            None => {
                out.write(ptr::null_mut());
                Err((
                    LmStatus::FuelExhausted,
                    format!("fuel exhausted after {n} steps"),
                ))
            }
        }
    })
}

fn trace_with<M: Machine>(t: &Term, fuel: u64) -> (String, bool) {
    let (o, tr) = run::<M>(t, fuel);
    let mut s = tr.json_lines().join("\n");
    if !s.is_empty() {
        s.push('\n');
    }
    (s, o.is_halted())
}

/// Writes the transition trace as newline-terminated JSON lines. Returns
/// `LM_STATUS_FUEL_EXHAUSTED` (with the trace written) if the run did not
/// halt.
///
/// # Safety
/// `t` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lm_trace_json(
    t: *const LmTerm,
    machine: LmMachine,
    fuel: u64,
    out: *mut *mut c_char,
) -> LmStatus {
    guard(|| {
        let t = term_ref(t, "term")?;
        let fuel = positive_fuel(fuel)?;
        let (s, halted) = match machine {
            LmMachine::PushEnter => trace_with::<PushEnter>(t, fuel),
            LmMachine::EvalApply => trace_with::<EvalApply>(t, fuel),
            LmMachine::Stg => trace_with::<Stg>(t, fuel),
        };
        write_string(out, s)?;
        if halted {
            Ok(LmStatus::Ok)
        } else {
            Err((LmStatus::FuelExhausted, "fuel exhausted".into()))
        }
    })
}

/// Cross-checks all machines, the derivation stages and the reference
/// reducer, writing the report as JSON.
///
/// # Safety
/// `t` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lm_compare_json(
    t: *const LmTerm,
    fuel: u64,
    out: *mut *mut c_char,
) -> LmStatus {
    guard(|| {
        let t = term_ref(t, "term")?;
        let r = differential(t, positive_fuel(fuel)?);
        write_string(out, r.to_json())?;
        match r.verdict {
            Verdict::Agree => Ok(LmStatus::Ok),
            Verdict::AllFuelExhausted => Err((LmStatus::FuelExhausted, "no machine halted".into())),
            Verdict::Mismatch => Err((LmStatus::Mismatch, r.mismatches[0].detail.clone())),
        }
    })
}

/// Runs the derivation stages and writes their comparison as JSON.
///
/// # Safety
/// `t` must be live and `out` valid.
#[no_mangle]
pub unsafe extern "C" fn lm_stages_json(
    t: *const LmTerm,
    fuel: u64,
    out: *mut *mut c_char,
) -> LmStatus {
    guard(|| {
        let t = term_ref(t, "term")?;
        let r = check_stage_chain(t, positive_fuel(fuel)?);
        write_string(out, r.to_json())?;
        match &r.divergence {
            None => Ok(LmStatus::Ok),
            Some(d) => Err((LmStatus::Mismatch, d.detail.clone())),
        }
    })
}

/// Differentially tests `count` generated terms and writes the summary as
/// JSON.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lm_fuzz_json(
    count: usize,
    max_size: usize,
    fuel: u64,
    seed: u64,
    closed: bool,
    out: *mut *mut c_char,
) -> LmStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let s = fuzz(&FuzzConfig {
            count,
            max_size,
            fuel,
            seed,
            closed,
        })
        .map_err(|e| (LmStatus::InvalidArgument, e.to_string()))?;
        write_string(out, s.to_json())?;
        if s.mismatched == 0 {
            Ok(LmStatus::Ok)
        } else {
            Err((
                LmStatus::Mismatch,
                format!("{} terms mismatched", s.mismatched),
            ))
        }
    })
}

/// Generates a random term, deterministic in its arguments.
///
/// # Safety
/// `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn lm_gen_term(
    seed: u64,
    max_size: usize,
    closed: bool,
    out: *mut *mut LmTerm,
) -> LmStatus {
    guard(|| {
        if max_size == 0 {
            return Err((
                LmStatus::InvalidArgument,
                "max_size must be positive".into(),
            ));
        }
        write(out, new_handle(gen_term(seed, max_size, closed)), "out")?;
        Ok(LmStatus::Ok)
    })
}

/// Message for the most recent failure on this thread, or an empty string.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn lm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}
