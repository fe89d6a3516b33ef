//! End-to-end acceptance suite. Prints one line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use fuzzy_lsde::crisp_ode::{DEFAULT_STEP, Forcing, integrate};
use fuzzy_lsde::linalg::{Matrix, mat_exp};
use fuzzy_lsde::{FuzzyNumber, Problem, Result, run_containment_oracle, run_membership_oracle, solve};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    passed: bool,
    detail: String,
}

fn within(value: f64, tol: f64) -> Outcome {
    Outcome {
        passed: value <= tol,
        detail: format!("max error {value:.3e} (tol {tol:.0e})"),
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn example_matrix(k: usize) -> Matrix {
    match k {
        1 => Matrix::from_rows(&[[3.0, -1.0], [4.0, -2.0]]).unwrap(),
        _ => Matrix::from_rows(&[[-3.0, 2.0], [3.0, -4.0]]).unwrap(),
    }
}

fn example1_forcing() -> Forcing {
    Forcing::polynomial(vec![vec![-25.0, -15.0, 5.0], vec![-40.0, -10.0, 10.0]]).unwrap()
}

fn example1() -> Problem {
    Problem::new(
        example_matrix(1),
        example1_forcing(),
        0.0,
        vec![
            FuzzyNumber::triangular(14.5, 15.0, 16.0).unwrap(),
            FuzzyNumber::triangular(4.0, 6.0, 9.0).unwrap(),
        ],
    )
    .unwrap()
}

fn example2() -> Problem {
    Problem::new(
        example_matrix(1),
        example1_forcing(),
        0.0,
        vec![
            FuzzyNumber::sample(100, |r| 14.5 + 0.2 * r, |r| 16.0 - 0.6 * r * r).unwrap(),
            FuzzyNumber::sample(100, |r| 4.0 + 1.75 * r * r, |r| 9.0 - 2.5 * r.sqrt()).unwrap(),
        ],
    )
    .unwrap()
}

fn example3() -> Problem {
    Problem::new(
        example_matrix(3),
        Forcing::polynomial(vec![vec![1.0], vec![2.0]]).unwrap(),
        0.0,
        vec![
            FuzzyNumber::triangular(70.0, 100.0, 130.0).unwrap(),
            FuzzyNumber::triangular(70.0, 100.0, 130.0).unwrap(),
        ],
    )
    .unwrap()
}

fn exact1(t: f64) -> [f64; 2] {
    let (em, e2) = ((-t).exp(), (2.0 * t).exp());
    [
        5.0 * (t + 2.0) + em / 3.0 + 14.0 / 3.0 * e2,
        5.0 * t * t + 4.0 / 3.0 * em + 14.0 / 3.0 * e2,
    ]
}

fn exact3(t: f64) -> [f64; 2] {
    let (e1, e6) = ((-t).exp(), (-6.0 * t).exp());
    [4.0 / 3.0 + 98.6 * e1 + e6 / 15.0, 1.5 + 98.6 * e1 - e6 / 10.0]
}

/// Homogeneous solution from `(a, b)` written with the eigen-constants.
fn homogeneous(k: usize, a: f64, b: f64, t: f64) -> [f64; 2] {
    if k == 1 {
        let (c1, c2) = ((-a + b) / 3.0, (4.0 * a - b) / 3.0);
        let (em, e2) = ((-t).exp(), (2.0 * t).exp());
        [c1 * em + c2 * e2, 4.0 * c1 * em + c2 * e2]
    } else {
        let (c1, c2) = ((3.0 * a + 2.0 * b) / 5.0, (a - b) / 5.0);
        let (e1, e6) = ((-t).exp(), (-6.0 * t).exp());
        [c1 * e1 + 2.0 * c2 * e6, c1 * e1 - 3.0 * c2 * e6]
    }
}

fn trajectory_error(problem: &Problem, t_end: f64, exact: fn(f64) -> [f64; 2]) -> Result<f64> {
    let start = exact(0.0);
    let traj = integrate(
        problem.matrix(),
        problem.forcing(),
        0.0,
        &start,
        t_end,
        DEFAULT_STEP,
    )?;
    Ok(traj
        .times()
        .iter()
        .zip(traj.states())
        .map(|(&t, x)| max_abs_diff(x, &exact(t)))
        .fold(0.0, f64::max))
}

fn c1_example1_trajectory() -> Result<Outcome> {
    Ok(within(trajectory_error(&example1(), 0.5, exact1)?, 1e-6))
}

fn c2_example3_trajectory() -> Result<Outcome> {
    let p = example3();
    let err = trajectory_error(&p, 1.0, exact3)?;
    let long = integrate(p.matrix(), p.forcing(), 0.0, &[100.0, 100.0], 10.0, DEFAULT_STEP)?;
    let gap = max_abs_diff(long.final_state(), &[4.0 / 3.0, 1.5]);
    Ok(Outcome {
        passed: err <= 1e-6 && gap <= 1e-3,
        detail: format!("max error {err:.3e} on [0,1] (tol 1e-6), |x(10) - eq| {gap:.3e} (tol 1e-3)"),
    })
}

fn c3_example2_initial_cut() -> Result<Outcome> {
    let p = example2();
    let want = [(14.6, 15.85), (4.4375, 7.23223)];
    let mut err: f64 = 0.0;
    for (u, (lo, hi)) in p.initial().iter().zip(want) {
        let cut = u.alpha_cut(0.5)?;
        err = err.max((cut.lo - lo).abs()).max((cut.hi - hi).abs());
    }
    Ok(within(err, 1e-4))
}

fn c4_example1_coefficient_intervals() -> Result<Outcome> {
    let sol = solve(&example1(), 0.5, DEFAULT_STEP)?;
    let region = sol.alpha_cut_region(0.0, 0.5)?;
    let want = [(-0.25, 0.5), (-1.0, 1.5)];
    let mut err: f64 = 0.0;
    for (iv, (lo, hi)) in region.intervals().iter().zip(want) {
        err = err.max((iv.lo - lo).abs()).max((iv.hi - hi).abs());
    }
    Ok(within(err, 1e-12))
}

fn sorted_offsets(vertices: Vec<Vec<f64>>, center: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vertices
        .into_iter()
        .map(|v| v.iter().zip(center).map(|(a, b)| a - b).collect())
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out
}

fn c5_vertex_fixtures() -> Result<Outcome> {
    let mut err: f64 = 0.0;
    let cases: [(Problem, Vec<[f64; 2]>); 2] = [
        (
            example1(),
            vec![[-0.5, 3.0], [1.0, 3.0], [1.0, -2.0], [-0.5, -2.0]],
        ),
        (
            example3(),
            vec![[-30.0, -30.0], [-30.0, 30.0], [30.0, -30.0], [30.0, 30.0]],
        ),
    ];
    for (p, want) in cases {
        let sol = solve(&p, 0.5, DEFAULT_STEP)?;
        let region = sol.alpha_cut_region(0.0, 0.0)?;
        let got = sorted_offsets(region.vertices()?, region.center());
        let mut want: Vec<Vec<f64>> = want.iter().map(|v| v.to_vec()).collect();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if got.len() != want.len() {
            return Ok(Outcome {
                passed: false,
                detail: format!("{} vertices", got.len()),
            });
        }
        for (g, w) in got.iter().zip(&want) {
            err = err.max(max_abs_diff(g, w));
        }
    }
    Ok(Outcome {
        passed: err == 0.0,
        detail: format!("max deviation {err:.3e} (exact)"),
    })
}

fn c6_fundamental_columns() -> Result<Outcome> {
    let mut err: f64 = 0.0;
    for k in [1, 3] {
        let a = example_matrix(k);
        for t in [0.1, 0.25, 0.5] {
            let g = mat_exp(&a, t)?;
            for (j, (x, y)) in [(1.0, 0.0), (0.0, 1.0)].into_iter().enumerate() {
                err = err.max(max_abs_diff(&g.column(j), &homogeneous(k, x, y, t)));
            }
        }
    }
    Ok(within(err, 1e-9))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    Matrix::new(n, (0..n * n).map(|_| rng.random_range(-5.0..=5.0)).collect()).unwrap()
}

fn c7_exponential_identities() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut semigroup, mut liouville): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let n = rng.random_range(1..=5);
        let a = random_matrix(&mut rng, n);
        let s = rng.random_range(0.0..=1.0);
        let t = rng.random_range(0.0..=1.0);
        let lhs = mat_exp(&a, s + t)?;
        let rhs = mat_exp(&a, s)?.matmul(&mat_exp(&a, t)?);
        semigroup = semigroup.max(lhs.sub(&rhs).norm_inf() / lhs.norm_inf());
        let det = mat_exp(&a, t)?.det()?;
        let want = (a.trace() * t).exp();
        liouville = liouville.max((det - want).abs() / want);
    }
    Ok(Outcome {
        passed: semigroup <= 1e-9 && liouville <= 1e-9,
        detail: format!("semigroup {semigroup:.3e}, Liouville {liouville:.3e} (tol 1e-9 rel)"),
    })
}

fn c8_membership_oracle() -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut passed = true;
    let cases = [
        (example1(), [0.25, 0.5]),
        (example2(), [0.25, 0.5]),
        (example3(), [0.2, 0.4]),
    ];
    for (k, (p, times)) in cases.into_iter().enumerate() {
        let report = run_membership_oracle(&p, &times, 1000, 42 + k as u64)?;
        passed &= report.passed() && report.samples == 1000;
        worst = worst.max(report.max_membership_discrepancy);
    }
    Ok(Outcome {
        passed: passed && worst <= 1e-5,
        detail: format!("max |mu_t - mu_0| {worst:.3e} over 3x1000 samples (tol 1e-5)"),
    })
}

fn c9_containment_oracle() -> Result<Outcome> {
    let report = run_containment_oracle(&example1(), 0.5, 0.25, 9)?;
    let detail = report
        .checks
        .iter()
        .map(|c| format!("{}: {:.3e}", c.name, c.value))
        .collect::<Vec<_>>()
        .join(", ");
    Ok(Outcome {
        passed: report.passed() && report.max_containment_violation <= 1e-6,
        detail,
    })
}

fn c10_triangular_similarity() -> Result<Outcome> {
    let sol = solve(&example1(), 0.5, DEFAULT_STEP)?;
    let mut scale_err: f64 = 0.0;
    for t in [0.0, 0.25, 0.5] {
        let support = sol.alpha_cut_region(t, 0.0)?;
        for alpha in [0.1, 0.25, 0.5, 0.75, 1.0] {
            let cut = sol.alpha_cut_region(t, alpha)?;
            for (s, c) in support.intervals().iter().zip(cut.intervals()) {
                scale_err = scale_err
                    .max((c.lo - (1.0 - alpha) * s.lo).abs())
                    .max((c.hi - (1.0 - alpha) * s.hi).abs());
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut formula_err: f64 = 0.0;
    for _ in 0..1000 {
        let t = rng.random_range(0.0..=0.5);
        let region = sol.alpha_cut_region(t, 0.0)?;
        let coeffs: Vec<f64> = region
            .intervals()
            .iter()
            .map(|iv| rng.random_range(iv.lo - 0.25 * iv.width()..=iv.hi + 0.25 * iv.width()))
            .collect();
        let x = region.point_at(&coeffs);
        formula_err = formula_err.max((sol.membership(&x, t)? - sol.membership_triangular(&x, t)?).abs());
    }
    Ok(Outcome {
        passed: scale_err <= 1e-12 && formula_err <= 1e-9,
        detail: format!(
            "interval scaling {scale_err:.3e} (tol 1e-12), formula agreement {formula_err:.3e} (tol 1e-9)"
        ),
    })
}

fn c11_example3_shrinkage() -> Result<Outcome> {
    let sol = solve(&example3(), 2.0, DEFAULT_STEP)?;
    let diameters = [0.0, 0.2, 0.4, 1.0, 2.0]
        .iter()
        .map(|&t| sol.alpha_cut_region(t, 0.0)?.diameter())
        .collect::<Result<Vec<f64>>>()?;
    let strictly = diameters.windows(2).all(|w| w[1] < w[0]);
    let shown: Vec<String> = diameters.iter().map(|d| format!("{d:.4}")).collect();
    Ok(Outcome {
        passed: strictly,
        detail: format!("diameters [{}]", shown.join(", ")),
    })
}

fn c12_b_cr_invariance() -> Result<Outcome> {
    let default = solve(&example2(), 0.25, DEFAULT_STEP)?;
    let fixed = solve(&example2().with_b_cr(vec![15.0, 6.0])?, 0.25, DEFAULT_STEP)?;
    let midpoint_err = max_abs_diff(default.b_cr(), &[15.05, 6.125]);
    let sorted = |sol: &fuzzy_lsde::FuzzySolution| -> Result<Vec<Vec<f64>>> {
        let mut v = sol.alpha_cut_region(0.25, 0.5)?.vertices()?;
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(v)
    };
    let (a, b) = (sorted(&default)?, sorted(&fixed)?);
    let err = a
        .iter()
        .zip(&b)
        .map(|(p, q)| max_abs_diff(p, q))
        .fold(0.0, f64::max);
    Ok(Outcome {
        passed: err <= 1e-9 && midpoint_err <= 1e-12,
        detail: format!(
            "vertex deviation {err:.3e} (tol 1e-9), default b_cr {:?}",
            default.b_cr()
        ),
    })
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Example 1 crisp trajectory", c1_example1_trajectory),
        (
            "Example 3 crisp trajectory and equilibrium",
            c2_example3_trajectory,
        ),
        ("Example 2 initial 0.5-cut", c3_example2_initial_cut),
        (
            "Example 1 coefficient intervals",
            c4_example1_coefficient_intervals,
        ),
        ("vertex fixtures", c5_vertex_fixtures),
        ("fundamental solution columns", c6_fundamental_columns),
        ("matrix exponential identities", c7_exponential_identities),
        ("membership preservation oracle", c8_membership_oracle),
        ("containment oracle", c9_containment_oracle),
        ("triangular similarity", c10_triangular_similarity),
        ("Example 3 monotone shrinkage", c11_example3_shrinkage),
        ("b_cr invariance", c12_b_cr_invariance),
    ];
    let start = Instant::now();
    let mut failures = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = check().unwrap_or_else(|e| Outcome {
            passed: false,
            detail: format!("error: {e}"),
        });
        let tag = if outcome.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{:>2}] {name}: {}", k + 1, outcome.detail);
        failures += usize::from(!outcome.passed);
    }
    println!(
        "acceptance: {}/{} passed in {:.1}s",
        criteria.len() - failures,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
