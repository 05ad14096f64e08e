//! C interface to the optimizer.
//!
//! Every function returns an [`LlmoeaStatus`]. On anything but `LLMOEA_STATUS_OK`
//! a description is stored per thread and can be fetched with
//! [`llmoea_last_error`]. Handles are opaque and owned by the caller until
//! passed to the matching `_free` function. Strings handed out by this library
//! must be released with [`llmoea_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use llmoea::harness::{emit_outputs, run, Algorithm, RunConfig, RunReport};
use llmoea::metrics::{hypervolume, igd, MetricContext};
use llmoea::problems::make_problem;
use llmoea::{Error, ProblemSpec};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LlmoeaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Config = 4,
    UnknownProblem = 5,
    Provider = 6,
    Io = 7,
    Evaluation = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Run configuration.
pub struct LlmoeaConfig {
    inner: RunConfig,
}

/// Result of a finished run.
pub struct LlmoeaReport {
    inner: RunReport,
}

/// A benchmark problem that can be evaluated directly.
pub struct LlmoeaProblem {
    inner: ProblemSpec,
}

/// One row of the per-generation series.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LlmoeaSeriesRow {
    pub generation: usize,
    pub evaluations: usize,
    pub hv: f64,
    pub igd: f64,
    /// Gate score; `-inf` when no finite crowding distance exists.
    pub score: f64,
    pub invoked: bool,
    pub tokens: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

struct Failure(LlmoeaStatus, String);

type Outcome = Result<(), Failure>;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::UnknownProblem { .. } => LlmoeaStatus::UnknownProblem,
            Error::Config(_) => LlmoeaStatus::Config,
            Error::NonFiniteObjective { .. } => LlmoeaStatus::Evaluation,
            Error::Provider(_) => LlmoeaStatus::Provider,
            Error::Io { .. } | Error::Csv { .. } | Error::Data { .. } => LlmoeaStatus::Io,
        };
        Failure(status, e.to_string())
    }
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(LlmoeaStatus::InvalidArgument, msg.into())
}

fn set_error(msg: Option<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg);
}

/// Runs `body`, converting errors and panics into a status and the thread's last error.
fn guard(body: impl FnOnce() -> Outcome) -> LlmoeaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error(None);
            LlmoeaStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(Some(msg));
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(Some(format!("internal panic: {msg}")));
            LlmoeaStatus::Panic
        }
    }
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(LlmoeaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn borrow_mut<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    p.as_mut()
        .ok_or_else(|| Failure(LlmoeaStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(LlmoeaStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(LlmoeaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn reals<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure(LlmoeaStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn reals_mut<'a>(p: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(Failure(LlmoeaStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

fn into_c_string(s: String) -> *mut c_char {
    // Interior NULs cannot come from our own messages; strip them defensively.
    CString::new(s.replace('\0', "")).unwrap_or_default().into_raw()
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Outcome {
    let slot = borrow_mut(out, what)?;
    *slot = value;
    Ok(())
}

/// The message for the last failed call on this thread, or null after a
/// successful one. Free with [`llmoea_string_free`].
#[no_mangle]
pub extern "C" fn llmoea_last_error() -> *mut c_char {
    LAST_ERROR.with(|slot| match slot.borrow().as_ref() {
        Some(msg) => into_c_string(msg.clone()),
        None => ptr::null_mut(),
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn llmoea_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn llmoea_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// A configuration with every field at its default.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_new(out: *mut *mut LlmoeaConfig) -> LlmoeaStatus {
    guard(|| {
        let handle = Box::into_raw(Box::new(LlmoeaConfig {
            inner: RunConfig::default(),
        }));
        put(out, handle, "out")
    })
}

/// Parses a TOML configuration; missing keys take their defaults.
///
/// # Safety
/// `toml` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_from_toml(toml: *const c_char, out: *mut *mut LlmoeaConfig) -> LlmoeaStatus {
    guard(|| {
        borrow_mut(out, "out")?;
        let inner = RunConfig::from_toml_str(text(toml, "toml")?)?;
        put(out, Box::into_raw(Box::new(LlmoeaConfig { inner })), "out")
    })
}

/// The configuration as TOML. Free with [`llmoea_string_free`].
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_to_toml(config: *const LlmoeaConfig, out: *mut *mut c_char) -> LlmoeaStatus {
    guard(|| {
        let c = borrow(config, "config")?;
        let slot = borrow_mut(out, "out")?;
        *slot = into_c_string(c.inner.to_toml_string());
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle and `name` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_set_problem(
    config: *mut LlmoeaConfig,
    name: *const c_char,
    dim: usize,
) -> LlmoeaStatus {
    guard(|| {
        let c = borrow_mut(config, "config")?;
        let name = text(name, "name")?;
        // Reject bad names and sizes here rather than at run time.
        make_problem(name, (dim > 0).then_some(dim))?;
        c.inner.problem = name.to_string();
        c.inner.dim = (dim > 0).then_some(dim);
        Ok(())
    })
}

/// `algorithm` is one of `nsga2`, `nsga2-llm`, `nsga2-llm-always`.
///
/// # Safety
/// `config` must be a live handle and `algorithm` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_set_algorithm(
    config: *mut LlmoeaConfig,
    algorithm: *const c_char,
) -> LlmoeaStatus {
    guard(|| {
        let c = borrow_mut(config, "config")?;
        let name = text(algorithm, "algorithm")?;
        c.inner.algorithm = Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == name)
            .ok_or_else(|| invalid(format!("unknown algorithm `{name}`")))?;
        Ok(())
    })
}

/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_set_seed(config: *mut LlmoeaConfig, seed: u64) -> LlmoeaStatus {
    guard(|| {
        borrow_mut(config, "config")?.inner.seed = seed;
        Ok(())
    })
}

/// Population size and evaluation budget.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_set_budget(
    config: *mut LlmoeaConfig,
    pop_size: usize,
    max_evaluations: usize,
) -> LlmoeaStatus {
    guard(|| {
        let c = borrow_mut(config, "config")?;
        let mut next = c.inner.clone();
        next.pop_size = pop_size;
        next.max_evaluations = max_evaluations;
        next.validate()?;
        c.inner = next;
        Ok(())
    })
}

/// Gate threshold, elite count `l` and solutions per call `s`.
///
/// # Safety
/// `config` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_set_llm(
    config: *mut LlmoeaConfig,
    delta: f64,
    l: usize,
    s: usize,
) -> LlmoeaStatus {
    guard(|| {
        let c = borrow_mut(config, "config")?;
        let mut next = c.inner.clone();
        next.delta = delta;
        next.l = l;
        next.s = s;
        next.validate()?;
        c.inner = next;
        Ok(())
    })
}

/// # Safety
/// `config` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn llmoea_config_free(config: *mut LlmoeaConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Runs the optimizer to completion.
///
/// # Safety
/// `config` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_run(config: *const LlmoeaConfig, out: *mut *mut LlmoeaReport) -> LlmoeaStatus {
    guard(|| {
        let c = borrow(config, "config")?;
        borrow_mut(out, "out")?;
        let inner = run(&c.inner)?;
        put(out, Box::into_raw(Box::new(LlmoeaReport { inner })), "out")
    })
}

/// Final HV and IGD, total tokens and gate firings.
///
/// # Safety
/// `report` must be a live handle; each output pointer may be null.
#[no_mangle]
pub unsafe extern "C" fn llmoea_report_summary(
    report: *const LlmoeaReport,
    hv: *mut f64,
    igd: *mut f64,
    tokens: *mut u64,
    invocations: *mut usize,
) -> LlmoeaStatus {
    guard(|| {
        let r = &borrow(report, "report")?.inner;
        if let Some(v) = hv.as_mut() {
            *v = r.final_hv();
        }
        if let Some(v) = igd.as_mut() {
            *v = r.final_igd();
        }
        if let Some(v) = tokens.as_mut() {
            *v = r.total_tokens();
        }
        if let Some(v) = invocations.as_mut() {
            *v = r.invocations;
        }
        Ok(())
    })
}

/// Number of series rows (generation 0 included).
///
/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_report_series_len(report: *const LlmoeaReport, out: *mut usize) -> LlmoeaStatus {
    guard(|| {
        let r = borrow(report, "report")?;
        put(out, r.inner.log.len(), "out")
    })
}

/// # Safety
/// `report` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_report_series_row(
    report: *const LlmoeaReport,
    index: usize,
    out: *mut LlmoeaSeriesRow,
) -> LlmoeaStatus {
    guard(|| {
        let r = borrow(report, "report")?;
        let row = r.inner.log.get(index).map(|g| g.row).ok_or_else(|| {
            Failure(
                LlmoeaStatus::OutOfRange,
                format!("row {index} of {}", r.inner.log.len()),
            )
        })?;
        put(
            out,
            LlmoeaSeriesRow {
                generation: row.generation,
                evaluations: row.evaluations,
                hv: row.hv,
                igd: row.igd,
                score: row.score,
                invoked: row.invoked,
                tokens: row.tokens,
            },
            "out",
        )
    })
}

/// Copies the final non-dominated objective vectors row-major into `buf`.
/// `rows` and `m` always receive the front size; when `buf` is null or
/// `cap < rows * m` nothing is copied and `LLMOEA_STATUS_OUT_OF_RANGE` is returned.
///
/// # Safety
/// `report` must be a live handle, `rows` and `m` valid pointers and `buf`
/// null or writable for `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn llmoea_report_front(
    report: *const LlmoeaReport,
    buf: *mut f64,
    cap: usize,
    rows: *mut usize,
    m: *mut usize,
) -> LlmoeaStatus {
    guard(|| {
        let r = borrow(report, "report")?;
        let front = r.inner.final_front();
        let width = front.first().map_or(0, Vec::len);
        put(rows, front.len(), "rows")?;
        put(m, width, "m")?;
        let need = front.len() * width;
        if buf.is_null() || cap < need {
            return Err(Failure(
                LlmoeaStatus::OutOfRange,
                format!("front needs {need} doubles, buffer holds {cap}"),
            ));
        }
        let dst = reals_mut(buf, need, "buf")?;
        for (chunk, f) in dst.chunks_exact_mut(width.max(1)).zip(&front) {
            chunk.copy_from_slice(f);
        }
        Ok(())
    })
}

/// Writes the metrics, front and log files (and the HV plot if `svg`) into `dir`.
///
/// # Safety
/// `report` must be a live handle and `dir` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn llmoea_report_write(
    report: *const LlmoeaReport,
    dir: *const c_char,
    svg: bool,
) -> LlmoeaStatus {
    guard(|| {
        let r = borrow(report, "report")?;
        emit_outputs(&r.inner, Path::new(text(dir, "dir")?), svg)?;
        Ok(())
    })
}

/// # Safety
/// `report` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn llmoea_report_free(report: *mut LlmoeaReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// A benchmark problem; `dim == 0` picks the standard size.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_problem_new(
    name: *const c_char,
    dim: usize,
    out: *mut *mut LlmoeaProblem,
) -> LlmoeaStatus {
    guard(|| {
        borrow_mut(out, "out")?;
        let inner = make_problem(text(name, "name")?, (dim > 0).then_some(dim))?;
        put(out, Box::into_raw(Box::new(LlmoeaProblem { inner })), "out")
    })
}

/// Decision dimension and objective count.
///
/// # Safety
/// `problem` must be a live handle; `d` and `m` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn llmoea_problem_shape(
    problem: *const LlmoeaProblem,
    d: *mut usize,
    m: *mut usize,
) -> LlmoeaStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.inner;
        put(d, p.d(), "d")?;
        put(m, p.m, "m")
    })
}

/// # Safety
/// `problem` must be a live handle; `lower` and `upper` writable for `d` doubles.
#[no_mangle]
pub unsafe extern "C" fn llmoea_problem_bounds(
    problem: *const LlmoeaProblem,
    lower: *mut f64,
    upper: *mut f64,
    d: usize,
) -> LlmoeaStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.inner;
        if d != p.d() {
            return Err(invalid(format!("problem has {} variables, got {d}", p.d())));
        }
        reals_mut(lower, d, "lower")?.copy_from_slice(&p.bounds().lower);
        reals_mut(upper, d, "upper")?.copy_from_slice(&p.bounds().upper);
        Ok(())
    })
}

/// Evaluates `x` (length `d`) into `f` (length `m`). `x` must lie within the bounds.
///
/// # Safety
/// `problem` must be a live handle, `x` readable for `d` and `f` writable for `m` doubles.
#[no_mangle]
pub unsafe extern "C" fn llmoea_problem_evaluate(
    problem: *const LlmoeaProblem,
    x: *const f64,
    d: usize,
    f: *mut f64,
    m: usize,
) -> LlmoeaStatus {
    guard(|| {
        let p = &borrow(problem, "problem")?.inner;
        if d != p.d() || m != p.m {
            return Err(invalid(format!("problem is {}x{}, got {d}x{m}", p.d(), p.m)));
        }
        let x = reals(x, d, "x")?;
        if !p.bounds().contains(x) {
            return Err(invalid("x lies outside the problem bounds"));
        }
        let value = p.objectives_at(x);
        reals_mut(f, m, "f")?.copy_from_slice(&value);
        Ok(())
    })
}

/// # Safety
/// `problem` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn llmoea_problem_free(problem: *mut LlmoeaProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Normalized hypervolume of `n` points of dimension `m` (row-major), using
/// the frame `(f - ideal) / (nadir - ideal)` and reference point `ref_multiplier`
/// on every axis.
///
/// # Safety
/// `points` must be readable for `n * m` doubles, `ideal` and `nadir` for `m`,
/// and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_hypervolume(
    points: *const f64,
    n: usize,
    m: usize,
    ideal: *const f64,
    nadir: *const f64,
    ref_multiplier: f64,
    out: *mut f64,
) -> LlmoeaStatus {
    guard(|| {
        if m == 0 {
            return Err(invalid("m must be positive"));
        }
        let ctx = MetricContext::new(
            reals(ideal, m, "ideal")?.to_vec(),
            reals(nadir, m, "nadir")?.to_vec(),
            ref_multiplier,
        )?;
        let pts: Vec<&[f64]> = reals(points, n * m, "points")?.chunks_exact(m).collect();
        if pts.iter().flat_map(|p| p.iter()).any(|v| !v.is_finite()) {
            return Err(invalid("points must be finite"));
        }
        put(out, hypervolume(&pts, &ctx), "out")
    })
}

/// Inverted generational distance of `n` points against `k` reference points,
/// both of dimension `m`, row-major.
///
/// # Safety
/// `points` must be readable for `n * m` doubles, `pf` for `k * m`, and `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn llmoea_igd(
    points: *const f64,
    n: usize,
    pf: *const f64,
    k: usize,
    m: usize,
    out: *mut f64,
) -> LlmoeaStatus {
    guard(|| {
        if m == 0 || k == 0 {
            return Err(invalid("m and k must be positive"));
        }
        let pts: Vec<&[f64]> = reals(points, n * m, "points")?.chunks_exact(m).collect();
        let refs: Vec<&[f64]> = reals(pf, k * m, "pf")?.chunks_exact(m).collect();
        put(out, igd(&pts, &refs), "out")
    })
}
