//! Fixed-step RK4 for `x' = A x + F(t)` with cubic Hermite dense output.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub const DEFAULT_STEP: f64 = 1e-3;

/// Highest polynomial degree accepted for a forcing component in scenario files.
pub const MAX_FORCING_DEGREE: usize = 16;

/// Step used by [`residual`] for the central difference.
const RESIDUAL_STEP: f64 = 1e-5;

type ForcingFn = dyn Fn(f64, &mut [f64]) + Send + Sync;

/// Crisp forcing term `F(t)`.
#[derive(Clone)]
pub enum Forcing {
    /// `f_i(t) = sum_k coeffs[i][k] * t^k`; an empty list is the zero function.
    Polynomial(Vec<Vec<f64>>),
    /// Arbitrary component-wise function writing `F(t)` into the output slice.
    Custom { dim: usize, f: Arc<ForcingFn> },
}

impl Forcing {
    pub fn zero(n: usize) -> Self {
        Forcing::Polynomial(vec![Vec::new(); n])
    }

    pub fn polynomial(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        for (i, c) in coeffs.iter().enumerate() {
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("forcing coefficient is not finite").in_component(i));
            }
        }
        Ok(Forcing::Polynomial(coeffs))
    }

    pub fn custom(dim: usize, f: impl Fn(f64, &mut [f64]) + Send + Sync + 'static) -> Self {
        Forcing::Custom { dim, f: Arc::new(f) }
    }

    pub fn dim(&self) -> usize {
        match self {
            Forcing::Polynomial(c) => c.len(),
            Forcing::Custom { dim, .. } => *dim,
        }
    }

    pub fn eval_into(&self, t: f64, out: &mut [f64]) {
        match self {
            Forcing::Polynomial(coeffs) => {
                for (o, c) in out.iter_mut().zip(coeffs) {
                    *o = c.iter().rev().fold(0.0, |acc, &ck| acc * t + ck);
                }
            }
            Forcing::Custom { f, .. } => f(t, out),
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.eval_into(t, &mut out);
        out
    }

    /// Component-wise sum; polynomial plus polynomial stays polynomial.
    pub fn sum(&self, other: &Forcing) -> Forcing {
        match (self, other) {
            (Forcing::Polynomial(a), Forcing::Polynomial(b)) => Forcing::Polynomial(
                a.iter()
                    .zip(b)
                    .map(|(p, q)| {
                        let len = p.len().max(q.len());
                        (0..len)
                            .map(|k| p.get(k).unwrap_or(&0.0) + q.get(k).unwrap_or(&0.0))
                            .collect()
                    })
                    .collect(),
            ),
            _ => {
                let (a, b) = (self.clone(), other.clone());
                let n = self.dim();
                Forcing::custom(n, move |t, out| {
                    a.eval_into(t, out);
                    let extra = b.eval(t);
                    for (o, e) in out.iter_mut().zip(extra) {
                        *o += e;
                    }
                })
            }
        }
    }
}

impl fmt::Debug for Forcing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Forcing::Polynomial(c) => f.debug_tuple("Polynomial").field(c).finish(),
            Forcing::Custom { dim, .. } => f.debug_struct("Custom").field("dim", dim).finish_non_exhaustive(),
        }
    }
}

/// Right-hand side `A x + F(t)`.
fn rhs(a: &Matrix, forcing: &Forcing, t: f64, x: &[f64], out: &mut [f64]) {
    forcing.eval_into(t, out);
    for (i, o) in out.iter_mut().enumerate() {
        *o += crate::linalg::dot(a.row(i), x);
    }
}

/// RK4 solution sampled at uniform nodes, with slopes kept for dense output.
#[derive(Clone, Debug)]
pub struct CrispTrajectory {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    slopes: Vec<Vec<f64>>,
    step: f64,
}

impl CrispTrajectory {
    pub fn t0(&self) -> f64 {
        self.times[0]
    }

    pub fn t_end(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Actual step: the requested one shrunk so the nodes land on `t_end`.
    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn dim(&self) -> usize {
        self.states[0].len()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[Vec<f64>] {
        &self.states
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().unwrap()
    }

    /// State at time `t`; exact at nodes, cubic Hermite in between.
    pub fn eval(&self, t: f64) -> Result<Vec<f64>> {
        let (t0, t1) = (self.t0(), self.t_end());
        if !(t0 <= t && t <= t1) {
            return Err(Error::OutOfRange {
                what: "t",
                value: t,
                lo: t0,
                hi: t1,
            });
        }
        let k = self.times.partition_point(|&s| s <= t) - 1;
        if self.times[k] == t {
            return Ok(self.states[k].clone());
        }
        let (ta, tb) = (self.times[k], self.times[k + 1]);
        let h = tb - ta;
        let s = (t - ta) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        let (xa, xb) = (&self.states[k], &self.states[k + 1]);
        let (da, db) = (&self.slopes[k], &self.slopes[k + 1]);
        Ok((0..self.dim())
            .map(|i| h00 * xa[i] + h10 * h * da[i] + h01 * xb[i] + h11 * h * db[i])
            .collect())
    }
}

pub fn integrate(
    a: &Matrix,
    forcing: &Forcing,
    t0: f64,
    initial: &[f64],
    t_end: f64,
    step: f64,
) -> Result<CrispTrajectory> {
    let n = a.dim();
    if initial.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: initial.len(),
        });
    }
    if forcing.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            actual: forcing.dim(),
        });
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::invalid(format!("step must be positive, got {step}")));
    }
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::invalid(format!(
            "end time {t_end} must be finite and after start time {t0}"
        )));
    }

    let span = t_end - t0;
    let steps = ((span / step) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
    let h = span / steps as f64;

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut slopes = Vec::with_capacity(steps + 1);

    let mut x = initial.to_vec();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut tmp = vec![0.0; n];

    rhs(a, forcing, t0, &x, &mut k1);
    times.push(t0);
    states.push(x.clone());
    slopes.push(k1.clone());

    for j in 0..steps {
        let t = t0 + j as f64 * h;
        // k1 holds the slope at (t, x) from the previous iteration.
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k1[i];
        }
        rhs(a, forcing, t + 0.5 * h, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = x[i] + 0.5 * h * k2[i];
        }
        rhs(a, forcing, t + 0.5 * h, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = x[i] + h * k3[i];
        }
        rhs(a, forcing, t + h, &tmp, &mut k4);
        for i in 0..n {
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let t_next = if j + 1 == steps {
            t_end
        } else {
            t0 + (j + 1) as f64 * h
        };
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Divergence { t: t_next });
        }
        rhs(a, forcing, t_next, &x, &mut k1);
        times.push(t_next);
        states.push(x.clone());
        slopes.push(k1.clone());
    }

    Ok(CrispTrajectory {
        times,
        states,
        slopes,
        step: h,
    })
}

/// `(x(t+d) - x(t-d)) / 2d - (A x(t) + F(t))` using the dense output.
pub fn residual(traj: &CrispTrajectory, a: &Matrix, forcing: &Forcing, t: f64) -> Result<Vec<f64>> {
    let lo = traj.t0() + traj.step();
    let hi = traj.t_end() - traj.step();
    if !(lo <= t && t <= hi) {
        return Err(Error::OutOfRange {
            what: "t",
            value: t,
            lo,
            hi,
        });
    }
    let x = traj.eval(t)?;
    let plus = traj.eval(t + RESIDUAL_STEP)?;
    let minus = traj.eval(t - RESIDUAL_STEP)?;
    let mut f = vec![0.0; x.len()];
    rhs(a, forcing, t, &x, &mut f);
    Ok((0..x.len())
        .map(|i| (plus[i] - minus[i]) / (2.0 * RESIDUAL_STEP) - f[i])
        .collect())
}
