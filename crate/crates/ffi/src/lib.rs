//! C interface to `fuzzy_lsde`.
//!
//! Problems and solutions are opaque heap handles created and released by
//! the matching `_new`/`_free` functions. Every fallible call returns a
//! `FlsdeStatus`; on failure `flsde_last_error` retrieves a message for the
//! calling thread. Matrices are row-major and all arrays are caller-owned.
//!
//! # Safety
//!
//! Handles must come from this library and not be used after they are
//! freed. Array arguments must point to at least the documented number of
//! valid `double`s. Handles may be shared between threads for queries but
//! not mutated concurrently.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::ptr;
use std::slice;

use fuzzy_lsde::cli::Scenario;
use fuzzy_lsde::{Error, Forcing, FuzzyNumber, FuzzySolution, Matrix, Problem, solve};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlsdeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidInput = 2,
    Numeric = 3,
    Panic = 4,
}

/// Problem under construction: matrix, forcing, initial values, optional crisp part.
pub struct FlsdeProblem {
    n: usize,
    a: Matrix,
    t0: f64,
    forcing: Vec<Vec<f64>>,
    initial: Vec<Option<FuzzyNumber>>,
    b_cr: Option<Vec<f64>>,
}

/// Solved problem, queried for regions and memberships.
pub struct FlsdeSolution {
    inner: FuzzySolution,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

struct Failure(FlsdeStatus, String);

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let status = if err.is_numeric() {
            FlsdeStatus::Numeric
        } else {
            FlsdeStatus::InvalidInput
        };
        Failure(status, err.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(FlsdeStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(FlsdeStatus::InvalidInput, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> FlsdeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => FlsdeStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            FlsdeStatus::Panic
        }
    }
}

unsafe fn input<'a>(ptr: *const f64, len: usize, what: &str) -> Result<&'a [f64], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { slice::from_raw_parts(ptr, len) })
}

unsafe fn output<'a>(ptr: *mut f64, len: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if ptr.is_null() {
        return Err(null(what));
    }
    Ok(unsafe { slice::from_raw_parts_mut(ptr, len) })
}

unsafe fn handle<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    unsafe { ptr.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn handle_mut<'a, T>(ptr: *mut T, what: &str) -> Result<&'a mut T, Failure> {
    unsafe { ptr.as_mut() }.ok_or_else(|| null(what))
}

fn store<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    unsafe { *out = Box::into_raw(Box::new(value)) };
    Ok(())
}

impl FlsdeProblem {
    fn component(&mut self, i: usize) -> Result<&mut Option<FuzzyNumber>, Failure> {
        let n = self.n;
        self.initial
            .get_mut(i)
            .ok_or_else(|| invalid(format!("component {i} out of range for dimension {n}")))
    }

    fn build(&self) -> Result<Problem, Failure> {
        let initial = self
            .initial
            .iter()
            .enumerate()
            .map(|(i, u)| {
                u.clone()
                    .ok_or_else(|| invalid(format!("initial value {i} is not set")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let forcing = Forcing::polynomial(self.forcing.clone())?;
        let problem = Problem::new(self.a.clone(), forcing, self.t0, initial)?;
        Ok(match &self.b_cr {
            Some(b) => problem.with_b_cr(b.clone())?,
            None => problem,
        })
    }
}

/// Copies the calling thread's last error message into `buf` (NUL-terminated,
/// truncated to `len` bytes) and returns the full message length plus one.
/// Returns 0 when no error has been recorded.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        None => 0,
        Some(msg) => {
            let bytes = msg.as_bytes_with_nul();
            if !buf.is_null() && len > 0 {
                let k = bytes.len().min(len);
                unsafe {
                    ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, k);
                    *buf.add(k - 1) = 0;
                }
            }
            bytes.len()
        }
    })
}

/// Creates a problem `x' = A x` with `A` given as `n * n` row-major values.
/// Forcing starts at zero and every initial value must be set before solving.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_problem_new(
    n: usize,
    a: *const f64,
    t0: f64,
    out: *mut *mut FlsdeProblem,
) -> FlsdeStatus {
    guard(|| {
        let values = unsafe { input(a, n.saturating_mul(n), "matrix")? };
        let a = Matrix::new(n, values.to_vec())?;
        if !t0.is_finite() {
            return Err(invalid("t0 must be finite"));
        }
        store(
            out,
            FlsdeProblem {
                n,
                a,
                t0,
                forcing: vec![Vec::new(); n],
                initial: vec![None; n],
                b_cr: None,
            },
        )
    })
}

/// Releases a problem. Null is ignored.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_problem_free(problem: *mut FlsdeProblem) {
    if !problem.is_null() {
        drop(unsafe { Box::from_raw(problem) });
    }
}

/// Sets forcing component `i` to the polynomial with ascending coefficients.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_problem_set_forcing(
    problem: *mut FlsdeProblem,
    i: usize,
    coeffs: *const f64,
    len: usize,
) -> FlsdeStatus {
    guard(|| {
        let p = unsafe { handle_mut(problem, "problem")? };
        let coeffs = unsafe { input(coeffs, len, "coefficients")? };
        if i >= p.n {
            return Err(invalid(format!(
                "component {i} out of range for dimension {}",
                p.n
            )));
        }
        let mut forcing = p.forcing.clone();
        forcing[i] = coeffs.to_vec();
        Forcing::polynomial(forcing.clone()).map_err(|e| Failure::from(e.in_component(i)))?;
        p.forcing = forcing;
        Ok(())
    })
}

/// Sets initial value `i` to the triangular number `(a, c, b)`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_problem_set_triangular(
    problem: *mut FlsdeProblem,
    i: usize,
    a: f64,
    c: f64,
    b: f64,
) -> FlsdeStatus {
    guard(|| {
        let p = unsafe { handle_mut(problem, "problem")? };
        let u = FuzzyNumber::triangular(a, c, b).map_err(|e| Failure::from(e.in_component(i)))?;
        *p.component(i)? = Some(u);
        Ok(())
    })
}

/// Sets initial value `i` from branch values sampled on `len` increasing levels.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_problem_set_parametric(
    problem: *mut FlsdeProblem,
    i: usize,
    levels: *const f64,
    lower: *const f64,
    upper: *const f64,
    len: usize,
) -> FlsdeStatus {
    guard(|| {
        let p = unsafe { handle_mut(problem, "problem")? };
        let levels = unsafe { input(levels, len, "levels")? };
        let lower = unsafe { input(lower, len, "lower")? };
        let upper = unsafe { input(upper, len, "upper")? };
        let u = FuzzyNumber::parametric(levels.to_vec(), lower.to_vec(), upper.to_vec())
            .map_err(|e| Failure::from(e.in_component(i)))?;
        *p.component(i)? = Some(u);
        Ok(())
    })
}

/// Overrides the crisp part of the initial value; each entry must lie in the core.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_problem_set_b_cr(
    problem: *mut FlsdeProblem,
    b_cr: *const f64,
    len: usize,
) -> FlsdeStatus {
    guard(|| {
        let p = unsafe { handle_mut(problem, "problem")? };
        if len != p.n {
            return Err(invalid(format!("b_cr has {len} entries, expected {}", p.n)));
        }
        p.b_cr = Some(unsafe { input(b_cr, len, "b_cr")? }.to_vec());
        Ok(())
    })
}

/// Solves the problem on `[t0, t_end]` with RK4 step `step`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solve(
    problem: *const FlsdeProblem,
    t_end: f64,
    step: f64,
    out: *mut *mut FlsdeSolution,
) -> FlsdeStatus {
    guard(|| {
        let p = unsafe { handle(problem, "problem")? };
        let inner = solve(&p.build()?, t_end, step)?;
        store(out, FlsdeSolution { inner })
    })
}

/// Parses a JSON scenario and solves it on its own horizon and step.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solve_scenario_json(
    json: *const c_char,
    out: *mut *mut FlsdeSolution,
) -> FlsdeStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = unsafe { CStr::from_ptr(json) }
            .to_str()
            .map_err(|e| invalid(format!("scenario is not UTF-8: {e}")))?;
        let scenario = Scenario::from_json(text)?;
        let inner = solve(&scenario.to_problem()?, scenario.t_end, scenario.h)?;
        store(out, FlsdeSolution { inner })
    })
}

/// Releases a solution. Null is ignored.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solution_free(solution: *mut FlsdeSolution) {
    if !solution.is_null() {
        drop(unsafe { Box::from_raw(solution) });
    }
}

/// State dimension, or 0 for a null handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solution_dim(solution: *const FlsdeSolution) -> usize {
    unsafe { solution.as_ref() }.map_or(0, |s| s.inner.dim())
}

/// Writes the `n` entries of the crisp part of the initial value.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solution_b_cr(solution: *const FlsdeSolution, out: *mut f64) -> FlsdeStatus {
    guard(|| {
        let s = unsafe { handle(solution, "solution")? };
        let out = unsafe { output(out, s.inner.dim(), "out")? };
        out.copy_from_slice(s.inner.b_cr());
        Ok(())
    })
}

/// Writes the crisp trajectory state at `t` (n entries).
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solution_crisp_state(
    solution: *const FlsdeSolution,
    t: f64,
    out: *mut f64,
) -> FlsdeStatus {
    guard(|| {
        let s = unsafe { handle(solution, "solution")? };
        let state = s.inner.crisp_state(t)?;
        unsafe { output(out, state.len(), "out")? }.copy_from_slice(&state);
        Ok(())
    })
}

/// Membership grade of the `n`-vector `point` in the solution at time `t`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solution_membership(
    solution: *const FlsdeSolution,
    point: *const f64,
    t: f64,
    out: *mut f64,
) -> FlsdeStatus {
    guard(|| {
        let s = unsafe { handle(solution, "solution")? };
        let point = unsafe { input(point, s.inner.dim(), "point")? };
        let mu = s.inner.membership(point, t)?;
        let out = unsafe { output(out, 1, "out")? };
        out[0] = mu;
        Ok(())
    })
}

/// The `alpha`-cut at `t` as `{center + sum c_i g_i : lo_i <= c_i <= hi_i}`.
/// `center`, `lo`, `hi` receive n entries; `generators` receives n * n
/// entries with generator `i` stored contiguously at offset `i * n`.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn flsde_solution_alpha_cut(
    solution: *const FlsdeSolution,
    t: f64,
    alpha: f64,
    center: *mut f64,
    generators: *mut f64,
    lo: *mut f64,
    hi: *mut f64,
) -> FlsdeStatus {
    guard(|| {
        let s = unsafe { handle(solution, "solution")? };
        let n = s.inner.dim();
        let (center, generators, lo, hi) = unsafe {
            (
                output(center, n, "center")?,
                output(generators, n * n, "generators")?,
                output(lo, n, "lo")?,
                output(hi, n, "hi")?,
            )
        };
        let region = s.inner.alpha_cut_region(t, alpha)?;
        center.copy_from_slice(region.center());
        for (dst, g) in generators.chunks_exact_mut(n).zip(region.generators()) {
            dst.copy_from_slice(g);
        }
        for (i, iv) in region.intervals().iter().enumerate() {
            lo[i] = iv.lo;
            hi[i] = iv.hi;
        }
        Ok(())
    })
}
