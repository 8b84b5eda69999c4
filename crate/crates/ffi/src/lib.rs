//! C ABI over the `fdsat` engine.
//!
//! Scenarios and assessments are opaque handles owned by the caller and
//! released with their `_free` function. Every fallible call returns an
//! [`FdsatStatus`]; on failure [`fdsat_last_error_message`] describes the
//! error for the calling thread. Strings returned through `char **` out
//! parameters must be released with [`fdsat_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use fdsat::duplexing::Breakeven;
use fdsat::scenario::{assess, sweep_sic, AssessmentResult, Scenario};
use fdsat::usecases::{catalog, default_scenario, UseCaseId};
use fdsat::{report, Error};

/// Status codes. The first four match the CLI exit codes.
#[repr(i32)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FdsatStatus {
    Ok = 0,
    /// Validation, parse, range or domain error.
    Invalid = 1,
    Io = 2,
    NoCommonVisibility = 3,
    NullArgument = 4,
    InvalidUtf8 = 5,
    Panic = 6,
}

/// A validated scenario.
pub struct FdsatScenario {
    inner: Scenario,
}

/// The result of [`fdsat_assess`], with the scenario it was computed from.
pub struct FdsatAssessment {
    scenario: Scenario,
    result: AssessmentResult,
}

/// Headline numbers of an assessment.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdsatSummary {
    pub se_fdd_bps_hz: f64,
    pub se_fd_bps_hz: f64,
    pub gain_percent: f64,
    pub residual_si_dbw: f64,
    pub stability_margin_db: f64,
    /// NaN when FD never catches up with FDD.
    pub sic_breakeven_db: f64,
    pub stability_warning: bool,
}

/// One row of a SIC sweep.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdsatSweepPoint {
    pub sic_db: f64,
    pub se_fdd_bps_hz: f64,
    pub se_fd_bps_hz: f64,
    pub gain_percent: f64,
    pub residual_si_dbw: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(FdsatStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.exit_code() {
            2 => FdsatStatus::Io,
            3 => FdsatStatus::NoCommonVisibility,
            _ => FdsatStatus::Invalid,
        };
        Failure(status, e.to_string())
    }
}

fn null(name: &str) -> Failure {
    Failure(FdsatStatus::NullArgument, format!("`{name}` is null"))
}

fn guard<F: FnOnce() -> Result<(), Failure>>(f: F) -> FdsatStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FdsatStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            FdsatStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p).to_str().map_err(|e| {
        Failure(
            FdsatStatus::InvalidUtf8,
            format!("`{name}` is not UTF-8: {e}"),
        )
    })
}

unsafe fn out_handle<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn out_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s)
        .map_err(|_| Failure(FdsatStatus::Invalid, "output contains a NUL byte".into()))?
        .into_raw();
    Ok(())
}

/// Parses and validates scenario TOML.
///
/// # Safety
/// `toml` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_scenario_from_toml(
    toml: *const c_char,
    out: *mut *mut FdsatScenario,
) -> FdsatStatus {
    guard(|| {
        let text = read_str(toml, "toml")?;
        out_handle(
            out,
            FdsatScenario {
                inner: Scenario::from_toml_str(text)?,
            },
        )
    })
}

/// Loads a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_scenario_from_file(
    path: *const c_char,
    out: *mut *mut FdsatScenario,
) -> FdsatStatus {
    guard(|| {
        let path = read_str(path, "path")?;
        out_handle(
            out,
            FdsatScenario {
                inner: Scenario::load(path)?,
            },
        )
    })
}

/// Built-in reference scenario for `use_case` (for example `"FU-UD"`).
///
/// # Safety
/// `use_case` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_scenario_reference(
    use_case: *const c_char,
    out: *mut *mut FdsatScenario,
) -> FdsatStatus {
    guard(|| {
        let id: UseCaseId = read_str(use_case, "use_case")?.parse()?;
        out_handle(
            out,
            FdsatScenario {
                inner: default_scenario(id).load()?,
            },
        )
    })
}

/// # Safety
/// `scenario` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdsat_scenario_free(scenario: *mut FdsatScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Replaces the scenario SIC depth, dB.
///
/// # Safety
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn fdsat_scenario_set_sic(
    scenario: *mut FdsatScenario,
    sic_db: f64,
) -> FdsatStatus {
    guard(|| {
        let s = scenario.as_mut().ok_or_else(|| null("scenario"))?;
        let updated = s.inner.with_sic(sic_db);
        updated.validate()?;
        s.inner = updated;
        Ok(())
    })
}

/// Scenario as TOML text.
///
/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_scenario_to_toml(
    scenario: *const FdsatScenario,
    out: *mut *mut c_char,
) -> FdsatStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        out_string(out, s.inner.to_toml_string())
    })
}

/// # Safety
/// `scenario` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_assess(
    scenario: *const FdsatScenario,
    out: *mut *mut FdsatAssessment,
) -> FdsatStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        let result = assess(&s.inner)?;
        out_handle(
            out,
            FdsatAssessment {
                scenario: s.inner.clone(),
                result,
            },
        )
    })
}

/// # Safety
/// `assessment` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdsat_assessment_free(assessment: *mut FdsatAssessment) {
    if !assessment.is_null() {
        drop(Box::from_raw(assessment));
    }
}

/// # Safety
/// `assessment` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_assessment_summary(
    assessment: *const FdsatAssessment,
    out: *mut FdsatSummary,
) -> FdsatStatus {
    guard(|| {
        let a = assessment.as_ref().ok_or_else(|| null("assessment"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = &a.result.comparison;
        *out = FdsatSummary {
            se_fdd_bps_hz: c.se_fdd_bps_hz,
            se_fd_bps_hz: c.se_fd_bps_hz,
            gain_percent: c.gain_percent,
            residual_si_dbw: c.residual_si_dbw,
            stability_margin_db: a.result.stability_margin_db,
            sic_breakeven_db: match a.result.sic_breakeven_db {
                Breakeven::Db(v) => v,
                Breakeven::Unreachable => f64::NAN,
            },
            stability_warning: a.result.stability_warning,
        };
        Ok(())
    })
}

/// The same JSON document as `fdsat assess --format json`.
///
/// # Safety
/// `assessment` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_assessment_to_json(
    assessment: *const FdsatAssessment,
    out: *mut *mut c_char,
) -> FdsatStatus {
    guard(|| {
        let a = assessment.as_ref().ok_or_else(|| null("assessment"))?;
        out_string(out, report::assessment_json(&a.scenario, &a.result))
    })
}

/// Evaluates `count` SIC values into `out`, which must hold `count` points.
///
/// # Safety
/// `sic_values` and `out` must each point to `count` elements.
#[no_mangle]
pub unsafe extern "C" fn fdsat_sweep_sic(
    scenario: *const FdsatScenario,
    sic_values: *const f64,
    count: usize,
    out: *mut FdsatSweepPoint,
) -> FdsatStatus {
    guard(|| {
        let s = scenario.as_ref().ok_or_else(|| null("scenario"))?;
        if sic_values.is_null() {
            return Err(null("sic_values"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let values = std::slice::from_raw_parts(sic_values, count);
        let sweep = sweep_sic(&s.inner, values)?;
        let rows = std::slice::from_raw_parts_mut(out, count);
        for (row, p) in rows.iter_mut().zip(&sweep.points) {
            let c = &p.comparison;
            *row = FdsatSweepPoint {
                sic_db: p.sic_db,
                se_fdd_bps_hz: c.se_fdd_bps_hz,
                se_fd_bps_hz: c.se_fd_bps_hz,
                gain_percent: c.gain_percent,
                residual_si_dbw: c.residual_si_dbw,
            };
        }
        Ok(())
    })
}

/// The use-case catalog, as printed by `fdsat catalog --json`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn fdsat_catalog_json(out: *mut *mut c_char) -> FdsatStatus {
    guard(|| {
        let entries: Vec<_> = catalog().iter().collect();
        out_string(out, report::catalog_json(&entries))
    })
}

/// Message for the last failed call on this thread, or null. The pointer is
/// valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn fdsat_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn fdsat_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn fdsat_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}
