//! Linear systems with fuzzy initial values, solved as a fuzzy set of crisp
//! trajectories.
//!
//! The fuzzy initial vector is split into a crisp vertex `b_cr` and an
//! uncertain offset whose core contains the origin. The vertex is carried
//! by the non-homogeneous crisp problem; the offset is carried by the
//! fundamental matrix `G(t) = e^{A (t - t0)}`. At time `t` the `alpha`-cut
//! of the solution is
//!
//! ```text
//! x_cr(t) + sum_i c_i g_i(t),   c_i in [lower_i(alpha) - b_cr_i, upper_i(alpha) - b_cr_i]
//! ```
//!
//! and a point's membership is the membership of the initial value that
//! reaches it, obtained by solving `G(t) c = x - x_cr(t)`.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use crate::crisp_ode::{CrispTrajectory, Forcing, integrate};
use crate::error::{Error, Result};
use crate::fuzzy_num::{FuzzyNumber, check_level};
use crate::geometry::Parallelepiped;
use crate::linalg::{Matrix, lu_solve, mat_exp};

/// Relative width under which a zero-width component counts as matched.
pub const CRISP_MATCH_RTOL: f64 = 1e-9;

/// `x' = A x + F(t)`, `x(t0) = B` with fuzzy `B`.
#[derive(Clone, Debug)]
pub struct Problem {
    a: Matrix,
    forcing: Forcing,
    t0: f64,
    initial: Vec<FuzzyNumber>,
    b_cr: Option<Vec<f64>>,
}

impl Problem {
    pub fn new(a: Matrix, forcing: Forcing, t0: f64, initial: Vec<FuzzyNumber>) -> Result<Self> {
        let n = a.dim();
        if forcing.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: forcing.dim(),
            });
        }
        if initial.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: initial.len(),
            });
        }
        if !t0.is_finite() {
            return Err(Error::invalid("initial time is not finite"));
        }
        Ok(Self {
            a,
            forcing,
            t0,
            initial,
            b_cr: None,
        })
    }

    /// Fixes the crisp vertex instead of using the core midpoints.
    pub fn with_b_cr(mut self, b_cr: Vec<f64>) -> Result<Self> {
        let n = self.dim();
        if b_cr.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: b_cr.len(),
            });
        }
        for (i, (b, u)) in b_cr.iter().zip(&self.initial).enumerate() {
            let core = u.core();
            if !core.contains(*b) {
                return Err(Error::invalid(format!(
                    "b_cr[{i}] = {b} is outside the core [{}, {}]",
                    core.lo, core.hi
                ))
                .in_component(i));
            }
        }
        self.b_cr = Some(b_cr);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.a
    }

    pub fn forcing(&self) -> &Forcing {
        &self.forcing
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn initial(&self) -> &[FuzzyNumber] {
        &self.initial
    }

    pub fn b_cr_override(&self) -> Option<&[f64]> {
        self.b_cr.as_deref()
    }

    /// Support box of the initial values.
    pub fn support_box(&self) -> Vec<crate::fuzzy_num::Interval> {
        self.initial.iter().map(FuzzyNumber::support).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub b_cr: Vec<f64>,
    pub offsets: Vec<FuzzyNumber>,
}

/// Splits the fuzzy initial vector into `b_cr + offsets`.
pub fn decompose(problem: &Problem) -> Result<Decomposition> {
    let b_cr: Vec<f64> = match &problem.b_cr {
        Some(b) => b.clone(),
        None => problem
            .initial
            .iter()
            .map(|u| {
                // Exact for a point core, which keeps triangular peaks bit-exact.
                let core = u.core();
                if core.lo == core.hi {
                    core.lo
                } else {
                    core.midpoint()
                }
            })
            .collect(),
    };
    let offsets = problem
        .initial
        .iter()
        .zip(&b_cr)
        .map(|(u, b)| u.shift(-b))
        .collect();
    Ok(Decomposition { b_cr, offsets })
}

/// Fuzzy set of trajectories: crisp centre plus fundamental-matrix image of the offsets.
#[derive(Debug)]
pub struct FuzzySolution {
    problem: Problem,
    decomposition: Decomposition,
    trajectory: CrispTrajectory,
    fundamental: RwLock<HashMap<u64, Arc<Matrix>>>,
}

pub fn solve(problem: &Problem, t_end: f64, step: f64) -> Result<FuzzySolution> {
    let decomposition = decompose(problem)?;
    let trajectory = integrate(
        &problem.a,
        &problem.forcing,
        problem.t0,
        &decomposition.b_cr,
        t_end,
        step,
    )?;
    Ok(FuzzySolution {
        problem: problem.clone(),
        decomposition,
        trajectory,
        fundamental: RwLock::new(HashMap::new()),
    })
}

impl FuzzySolution {
    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn dim(&self) -> usize {
        self.problem.dim()
    }

    pub fn b_cr(&self) -> &[f64] {
        &self.decomposition.b_cr
    }

    pub fn offsets(&self) -> &[FuzzyNumber] {
        &self.decomposition.offsets
    }

    pub fn trajectory(&self) -> &CrispTrajectory {
        &self.trajectory
    }

    pub fn t0(&self) -> f64 {
        self.trajectory.t0()
    }

    pub fn t_end(&self) -> f64 {
        self.trajectory.t_end()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if self.t0() <= t && t <= self.t_end() {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: self.t0(),
                hi: self.t_end(),
            })
        }
    }

    /// `x_cr(t)`.
    pub fn crisp_state(&self, t: f64) -> Result<Vec<f64>> {
        self.trajectory.eval(t)
    }

    /// `G(t) = e^{A (t - t0)}`, memoized per query time.
    pub fn fundamental_matrix(&self, t: f64) -> Result<Arc<Matrix>> {
        self.check_time(t)?;
        let key = t.to_bits();
        if let Some(g) = self.fundamental.read().unwrap().get(&key) {
            return Ok(Arc::clone(g));
        }
        let g = Arc::new(mat_exp(&self.problem.a, t - self.t0())?);
        let mut cache = self.fundamental.write().unwrap();
        Ok(Arc::clone(cache.entry(key).or_insert(g)))
    }

    pub fn alpha_cut_region(&self, t: f64, alpha: f64) -> Result<Parallelepiped> {
        check_level(alpha)?;
        let g = self.fundamental_matrix(t)?;
        let intervals = self
            .offsets()
            .iter()
            .map(|b| b.alpha_cut(alpha))
            .collect::<Result<Vec<_>>>()?;
        Parallelepiped::new(self.crisp_state(t)?, g.columns(), intervals)
    }

    /// Offset coefficients `c` with `x = x_cr(t) + G(t) c`.
    pub fn coefficients(&self, point: &[f64], t: f64) -> Result<Vec<f64>> {
        if point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: point.len(),
            });
        }
        let g = self.fundamental_matrix(t)?;
        let center = self.crisp_state(t)?;
        let d: Vec<f64> = point.iter().zip(&center).map(|(p, c)| p - c).collect();
        lu_solve(&g, &d).map_err(|e| match e {
            Error::Singular { .. } => {
                Error::NumericRange(format!("fundamental matrix is numerically singular at t = {t}"))
            }
            other => other,
        })
    }

    /// Level of offset coefficient `c` in component `i`.
    fn component_level(&self, i: usize, c: f64) -> f64 {
        let b = self.decomposition.b_cr[i];
        if self.decomposition.offsets[i].is_crisp() {
            let tol = CRISP_MATCH_RTOL * (1.0 + b.abs());
            return if c.abs() <= tol { 1.0 } else { 0.0 };
        }
        self.problem.initial[i].membership(b + c)
    }

    /// Membership of `point` at time `t`: the possibility of its initial value.
    pub fn membership(&self, point: &[f64], t: f64) -> Result<f64> {
        let c = self.coefficients(point, t)?;
        Ok(c.iter()
            .enumerate()
            .map(|(i, ci)| self.component_level(i, *ci))
            .fold(1.0, f64::min))
    }

    /// Membership from the triangular `1 - max gamma_i` formula.
    ///
    /// Fails unless every initial value is triangular.
    pub fn membership_triangular(&self, point: &[f64], t: f64) -> Result<f64> {
        let bounds = self
            .offsets()
            .iter()
            .enumerate()
            .map(|(i, b)| {
                b.as_triangular()
                    .map(|tri| (tri.a, tri.b))
                    .ok_or_else(|| Error::invalid("initial value is not triangular").in_component(i))
            })
            .collect::<Result<Vec<_>>>()?;
        let c = self.coefficients(point, t)?;
        let mut gamma_max: f64 = 0.0;
        for (i, (ci, (lo, hi))) in c.iter().zip(bounds).enumerate() {
            let gamma = if *ci >= 0.0 {
                if hi > 0.0 {
                    ci / hi
                } else {
                    self.crisp_gamma(i, *ci)
                }
            } else if lo < 0.0 {
                ci / lo
            } else {
                self.crisp_gamma(i, *ci)
            };
            gamma_max = gamma_max.max(gamma);
        }
        Ok((1.0 - gamma_max).max(0.0))
    }

    /// `gamma` on a zero-width side: matched within the crisp tolerance or fully out.
    fn crisp_gamma(&self, i: usize, c: f64) -> f64 {
        let tol = CRISP_MATCH_RTOL * (1.0 + self.decomposition.b_cr[i].abs());
        if c.abs() <= tol { 0.0 } else { 1.0 }
    }

    /// Possibility of the member trajectory starting at `initial_point`.
    pub fn membership_of_trajectory(&self, initial_point: &[f64]) -> Result<f64> {
        if initial_point.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: initial_point.len(),
            });
        }
        Ok(initial_point
            .iter()
            .enumerate()
            .map(|(i, p)| self.component_level(i, p - self.decomposition.b_cr[i]))
            .fold(1.0, f64::min))
    }
}
