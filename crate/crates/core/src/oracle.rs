//! Brute-force cross-checks of the analytic solution.
//!
//! Initial points are propagated one by one with RK4 and compared with the
//! region and membership that the fundamental matrix predicts. The two
//! paths share no code beyond the problem data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::crisp_ode::{DEFAULT_STEP, integrate};
use crate::error::{Error, Result};
use crate::fuzzy_num::Interval;
use crate::solver::{FuzzySolution, Problem, solve};

/// RK4 step for propagating sample points.
pub const ORACLE_STEP: f64 = 1e-4;
pub const MEMBERSHIP_TOL: f64 = 1e-5;
pub const CONTAINMENT_TOL: f64 = 1e-6;
pub const CORNER_TOL: f64 = 1e-6;
/// Outside probes sit this factor beyond a face midpoint, measured from the box centre.
pub const PROBE_FACTOR: f64 = 1.05;
/// Upper bound on `grid_per_axis^n` for the containment grid.
pub const MAX_GRID_POINTS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleCheck {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub samples: usize,
    pub max_membership_discrepancy: f64,
    pub max_containment_violation: f64,
    pub checks: Vec<OracleCheck>,
    pub seed: Option<u64>,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Propagates `initial` from `t0` through the sorted `times` with RK4.
fn propagate(problem: &Problem, initial: &[f64], times: &[f64]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(times.len());
    let mut t = problem.t0();
    let mut x = initial.to_vec();
    for &target in times {
        if target > t {
            let traj = integrate(problem.matrix(), problem.forcing(), t, &x, target, ORACLE_STEP)?;
            x = traj.final_state().to_vec();
            t = target;
        }
        out.push(x.clone());
    }
    Ok(out)
}

fn solve_through(problem: &Problem, t_max: f64) -> Result<FuzzySolution> {
    let t_end = t_max.max(problem.t0() + DEFAULT_STEP);
    solve(problem, t_end, DEFAULT_STEP)
}

fn sorted_times(problem: &Problem, times: &[f64]) -> Result<Vec<f64>> {
    if let Some(t) = times.iter().find(|t| !(**t >= problem.t0()) || !t.is_finite()) {
        return Err(Error::invalid(format!(
            "check time {t} precedes the initial time {}",
            problem.t0()
        )));
    }
    let mut sorted = times.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted)
}

/// Samples initial points uniformly from the support box and checks that
/// membership is carried unchanged along each propagated trajectory.
pub fn run_membership_oracle(
    problem: &Problem,
    t_checks: &[f64],
    samples: usize,
    seed: u64,
) -> Result<OracleReport> {
    if samples == 0 {
        return Err(Error::invalid("at least one sample is required"));
    }
    let times = sorted_times(problem, t_checks)?;
    let sol = solve_through(problem, times.last().copied().unwrap_or(problem.t0()))?;
    let support = problem.support_box();
    let samples = if support.iter().all(|iv| iv.width() == 0.0) {
        1
    } else {
        samples
    };

    let per_sample = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let p: Vec<f64> = support.iter().map(|iv| sample_in(&mut rng, iv)).collect();
            let mu0 = sol.membership_of_trajectory(&p)?;
            let states = propagate(problem, &p, &times)?;
            let mut worst: f64 = 0.0;
            for (x, &t) in states.iter().zip(&times) {
                worst = worst.max((sol.membership(x, t)? - mu0).abs());
            }
            Ok(worst)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = per_sample.into_iter().fold(0.0, f64::max);

    Ok(OracleReport {
        samples,
        max_membership_discrepancy: max,
        max_containment_violation: 0.0,
        checks: vec![OracleCheck {
            name: "membership preserved along trajectories".into(),
            passed: max <= MEMBERSHIP_TOL,
            value: max,
            threshold: MEMBERSHIP_TOL,
        }],
        seed: Some(seed),
    })
}

fn sample_in(rng: &mut ChaCha8Rng, iv: &Interval) -> f64 {
    if iv.width() == 0.0 {
        iv.lo
    } else {
        rng.random_range(iv.lo..=iv.hi)
    }
}

/// Lattice of `per_axis^n` coefficient vectors spanning the given box.
fn lattice(intervals: &[Interval], per_axis: usize) -> Vec<Vec<f64>> {
    let n = intervals.len();
    let total = per_axis.pow(n as u32);
    (0..total)
        .map(|mut k| {
            intervals
                .iter()
                .map(|iv| {
                    let j = k % per_axis;
                    k /= per_axis;
                    iv.lo + iv.width() * j as f64 / (per_axis - 1) as f64
                })
                .collect()
        })
        .collect()
}

fn box_excess(c: &[f64], intervals: &[Interval]) -> f64 {
    c.iter()
        .zip(intervals)
        .map(|(ci, iv)| (iv.lo - ci).max(ci - iv.hi).max(0.0))
        .fold(0.0, f64::max)
}

/// Grid-samples the `alpha`-cut box of initial values, propagates every
/// point to `t` and checks it lands in the predicted region; probes just
/// outside each face must land outside it.
pub fn run_containment_oracle(
    problem: &Problem,
    alpha: f64,
    t: f64,
    grid_per_axis: usize,
) -> Result<OracleReport> {
    if grid_per_axis < 2 {
        return Err(Error::invalid(
            "containment grid needs at least 2 points per axis",
        ));
    }
    let n = problem.dim();
    let total = (grid_per_axis as f64).powi(n as i32);
    if total > MAX_GRID_POINTS as f64 {
        return Err(Error::invalid(format!(
            "containment grid of {grid_per_axis}^{n} points exceeds {MAX_GRID_POINTS}"
        )));
    }
    let times = sorted_times(problem, &[t])?;
    let sol = solve_through(problem, t)?;
    let region = sol.alpha_cut_region(t, alpha)?;
    let cut: Vec<Interval> = region.intervals().to_vec();
    let b_cr = sol.b_cr().to_vec();
    let initial_of = |c: &[f64]| -> Vec<f64> { c.iter().zip(&b_cr).map(|(ci, b)| b + ci).collect() };
    let land = |c: &[f64]| -> Result<Vec<f64>> { Ok(propagate(problem, &initial_of(c), &times)?.remove(0)) };

    let grid = lattice(&cut, grid_per_axis);
    let inside = grid
        .par_iter()
        .map(|c| {
            let x = land(c)?;
            let coeffs = region.coefficients_of(&x)?;
            Ok(box_excess(&coeffs, &cut))
        })
        .collect::<Result<Vec<f64>>>()?;
    let max_violation = inside.iter().copied().fold(0.0, f64::max);

    let mut probes = Vec::new();
    for i in 0..n {
        let iv = cut[i];
        if iv.width() == 0.0 {
            continue;
        }
        let mid: Vec<f64> = cut.iter().map(Interval::midpoint).collect();
        for face in [iv.lo, iv.hi] {
            let mut c = mid.clone();
            c[i] = mid[i] + PROBE_FACTOR * (face - mid[i]);
            probes.push(c);
        }
    }
    let mut probes_included = 0usize;
    for c in &probes {
        if region.contains(&land(c)?, CONTAINMENT_TOL)? {
            probes_included += 1;
        }
    }

    let mut corner_gap: f64 = 0.0;
    let vertex_coeffs = region.vertex_coefficients()?;
    for (c, v) in vertex_coeffs.iter().zip(region.vertices()?) {
        let x = land(c)?;
        let d = x
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt();
        corner_gap = corner_gap.max(d);
    }

    Ok(OracleReport {
        samples: grid.len() + probes.len() + vertex_coeffs.len(),
        max_membership_discrepancy: 0.0,
        max_containment_violation: max_violation,
        checks: vec![
            OracleCheck {
                name: format!("{} grid points contained", grid.len()),
                passed: max_violation <= CONTAINMENT_TOL,
                value: max_violation,
                threshold: CONTAINMENT_TOL,
            },
            OracleCheck {
                name: format!("{} outside probes excluded", probes.len()),
                passed: probes_included == 0,
                value: probes_included as f64,
                threshold: 0.0,
            },
            OracleCheck {
                name: "cut corners land on region vertices".into(),
                passed: corner_gap <= CORNER_TOL,
                value: corner_gap,
                threshold: CORNER_TOL,
            },
        ],
        seed: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crisp_ode::Forcing;
    use crate::fuzzy_num::FuzzyNumber;
    use crate::linalg::Matrix;

    fn example1() -> Problem {
        Problem::new(
            Matrix::from_rows(&[[3.0, -1.0], [4.0, -2.0]]).unwrap(),
            Forcing::polynomial(vec![vec![-25.0, -15.0, 5.0], vec![-40.0, -10.0, 10.0]]).unwrap(),
            0.0,
            vec![
                FuzzyNumber::triangular(14.5, 15.0, 16.0).unwrap(),
                FuzzyNumber::triangular(4.0, 6.0, 9.0).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn lattice_covers_corners() {
        let ivs = [Interval { lo: 0.0, hi: 1.0 }, Interval { lo: -1.0, hi: 1.0 }];
        let pts = lattice(&ivs, 3);
        assert_eq!(pts.len(), 9);
        assert!(pts.contains(&vec![0.0, -1.0]));
        assert!(pts.contains(&vec![1.0, 1.0]));
        assert!(pts.contains(&vec![0.5, 0.0]));
    }

    #[test]
    fn membership_oracle_is_deterministic() {
        let a = run_membership_oracle(&example1(), &[0.1], 50, 7).unwrap();
        let b = run_membership_oracle(&example1(), &[0.1], 50, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.passed(), "{a:?}");
        assert_eq!(a.seed, Some(7));
    }

    #[test]
    fn crisp_problem_uses_single_sample() {
        let p = Problem::new(
            Matrix::diag(&[-1.0]),
            Forcing::zero(1),
            0.0,
            vec![FuzzyNumber::crisp(2.0)],
        )
        .unwrap();
        let r = run_membership_oracle(&p, &[0.5], 100, 1).unwrap();
        assert_eq!(r.samples, 1);
        assert!(r.passed());
        assert_eq!(r.max_membership_discrepancy, 0.0);
    }

    #[test]
    fn containment_at_initial_time() {
        let r = run_containment_oracle(&example1(), 0.3, 0.0, 3).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.max_containment_violation <= 1e-12);
    }

    #[test]
    fn containment_after_propagation() {
        let r = run_containment_oracle(&example1(), 0.0, 0.2, 4).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn argument_checks() {
        assert!(run_membership_oracle(&example1(), &[0.1], 0, 1).is_err());
        assert!(run_membership_oracle(&example1(), &[-0.1], 10, 1).is_err());
        assert!(run_containment_oracle(&example1(), 0.5, 0.1, 1).is_err());
        assert!(run_containment_oracle(&example1(), 1.5, 0.1, 3).is_err());
    }
}
