//! Command implementations behind the `fuzzy-lsde` binary.
//!
//! Each command returns a serializable record; the binary decides whether
//! to print it or write it (plus CSV companions) into an output directory.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy_num::Interval;
use crate::geometry::MAX_VERTEX_DIM;
use crate::oracle::{OracleReport, run_containment_oracle, run_membership_oracle};
use crate::solver::{FuzzySolution, solve};

use super::scenario::{Query, Scenario};

pub const VERIFY_SAMPLES: usize = 1000;
pub const VERIFY_ALPHA: f64 = 0.5;
/// Longest horizon the verifier propagates over; long horizons on stable
/// systems make `G(t)` too ill-conditioned to invert meaningfully.
pub const VERIFY_HORIZON: f64 = 0.5;

pub fn solve_scenario(scenario: &Scenario) -> Result<FuzzySolution> {
    solve(&scenario.to_problem()?, scenario.t_end, scenario.h)
}

#[derive(Clone, Debug, Serialize)]
pub struct CutRecord {
    pub time: f64,
    pub alpha: f64,
    pub center: Vec<f64>,
    pub generators: Vec<Vec<f64>>,
    pub intervals: Vec<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub polygon: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipRecord {
    pub time: f64,
    pub point: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub membership: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerticesRecord {
    pub time: f64,
    pub alpha: f64,
    pub vertices: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolygonRecord {
    pub time: f64,
    pub alpha: f64,
    /// Closed ring: the first vertex is repeated at the end.
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PlotData {
    pub trajectory: TrajectoryRecord,
    pub polygons: Vec<PolygonRecord>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum QueryResult {
    Cut(CutRecord),
    Membership(MembershipRecord),
    Plot { polygons: Vec<PolygonRecord> },
    Vertices(VerticesRecord),
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveRecord {
    pub b_cr: Vec<f64>,
    pub trajectory: TrajectoryRecord,
    pub queries: Vec<QueryResult>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyRecord {
    pub passed: bool,
    pub check_times: Vec<f64>,
    pub membership: OracleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub containment: Option<OracleReport>,
}

fn trajectory_record(sol: &FuzzySolution) -> TrajectoryRecord {
    let traj = sol.trajectory();
    TrajectoryRecord {
        times: traj.times().to_vec(),
        states: traj.states().to_vec(),
    }
}

pub fn cut(sol: &FuzzySolution, time: f64, alpha: f64) -> Result<CutRecord> {
    let region = sol.alpha_cut_region(time, alpha)?;
    let polygon = if region.dim() == 2 {
        Some(region.polygon2d()?)
    } else {
        None
    };
    Ok(CutRecord {
        time,
        alpha,
        center: region.center().to_vec(),
        generators: region.generators().to_vec(),
        intervals: region.intervals().to_vec(),
        polygon,
    })
}

pub fn membership(sol: &FuzzySolution, time: f64, point: &[f64]) -> Result<MembershipRecord> {
    Ok(MembershipRecord {
        time,
        point: point.to_vec(),
        coefficients: sol.coefficients(point, time)?,
        membership: sol.membership(point, time)?,
    })
}

pub fn vertices(sol: &FuzzySolution, time: f64, alpha: f64) -> Result<VerticesRecord> {
    Ok(VerticesRecord {
        time,
        alpha,
        vertices: sol.alpha_cut_region(time, alpha)?.vertices()?,
    })
}

fn polygons(sol: &FuzzySolution, times: &[f64], alphas: &[f64]) -> Result<Vec<PolygonRecord>> {
    let mut out = Vec::with_capacity(times.len() * alphas.len());
    for &time in times {
        for &alpha in alphas {
            let mut points = sol.alpha_cut_region(time, alpha)?.polygon2d()?;
            points.push(points[0]);
            out.push(PolygonRecord { time, alpha, points });
        }
    }
    Ok(out)
}

pub fn plotdata(sol: &FuzzySolution, times: &[f64], alphas: &[f64]) -> Result<PlotData> {
    Ok(PlotData {
        trajectory: trajectory_record(sol),
        polygons: polygons(sol, times, alphas)?,
    })
}

pub fn cmd_cut(scenario: &Scenario, time: f64, alpha: f64) -> Result<CutRecord> {
    cut(&solve_scenario(scenario)?, time, alpha)
}

pub fn cmd_membership(scenario: &Scenario, time: f64, point: &[f64]) -> Result<MembershipRecord> {
    membership(&solve_scenario(scenario)?, time, point)
}

pub fn cmd_vertices(scenario: &Scenario, time: f64, alpha: f64) -> Result<VerticesRecord> {
    vertices(&solve_scenario(scenario)?, time, alpha)
}

pub fn cmd_plotdata(scenario: &Scenario, times: &[f64], alphas: &[f64]) -> Result<PlotData> {
    plotdata(&solve_scenario(scenario)?, times, alphas)
}

/// Integrates the crisp trajectory and answers every query in the scenario.
pub fn cmd_solve(scenario: &Scenario) -> Result<SolveRecord> {
    let sol = solve_scenario(scenario)?;
    let queries = scenario
        .queries
        .iter()
        .map(|q| {
            Ok(match q {
                Query::Cut { time, alpha } => QueryResult::Cut(cut(&sol, *time, *alpha)?),
                Query::Membership { time, point } => QueryResult::Membership(membership(&sol, *time, point)?),
                Query::Plot { times, alphas } => QueryResult::Plot {
                    polygons: polygons(&sol, times, alphas)?,
                },
                Query::Vertices { time, alpha } => QueryResult::Vertices(vertices(&sol, *time, *alpha)?),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SolveRecord {
        b_cr: sol.b_cr().to_vec(),
        trajectory: trajectory_record(&sol),
        queries,
    })
}

/// Default check times: midway and at the end of the first
/// `VERIFY_HORIZON` time units.
pub fn default_check_times(scenario: &Scenario) -> Vec<f64> {
    let span = (scenario.t_end - scenario.t0).min(VERIFY_HORIZON);
    vec![scenario.t0 + 0.5 * span, scenario.t0 + span]
}

pub fn cmd_verify(scenario: &Scenario, seed: u64, times: Option<&[f64]>) -> Result<VerifyRecord> {
    let problem = scenario.to_problem()?;
    let check_times = match times {
        Some(t) if !t.is_empty() => t.to_vec(),
        _ => default_check_times(scenario),
    };
    let membership = run_membership_oracle(&problem, &check_times, VERIFY_SAMPLES, seed)?;
    let n = problem.dim();
    let containment = if n <= MAX_VERTEX_DIM {
        let grid = if n <= 3 { 9 } else { 2 };
        Some(run_containment_oracle(
            &problem,
            VERIFY_ALPHA,
            check_times[0],
            grid,
        )?)
    } else {
        None
    };
    let passed = membership.passed() && containment.as_ref().is_none_or(OracleReport::passed);
    Ok(VerifyRecord {
        passed,
        check_times,
        membership,
        containment,
    })
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(prefix: &[&str], n: usize) -> String {
    let mut cols: Vec<String> = prefix.iter().map(|s| s.to_string()).collect();
    cols.extend((1..=n).map(|i| format!("x{i}")));
    cols.join(",")
}

/// `t,x1,...,xn` rows.
pub fn trajectory_csv(traj: &TrajectoryRecord) -> String {
    let n = traj.states.first().map_or(0, Vec::len);
    let mut out = header(&["t"], n);
    out.push('\n');
    for (t, x) in traj.times.iter().zip(&traj.states) {
        let row: Vec<String> = std::iter::once(*t).chain(x.iter().copied()).map(num).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

/// `t,alpha,vertex,x1,x2` rows, one closed ring per `(t, alpha)`.
pub fn polygons_csv(polygons: &[PolygonRecord]) -> String {
    let mut out = header(&["t", "alpha", "vertex"], 2);
    out.push('\n');
    for poly in polygons {
        for (k, p) in poly.points.iter().enumerate() {
            let _ = writeln!(
                out,
                "{},{},{k},{},{}",
                num(poly.time),
                num(poly.alpha),
                num(p[0]),
                num(p[1])
            );
        }
    }
    out
}

/// `vertex,x1,...,xn` rows; planar cuts are written as a closed CCW ring.
pub fn cut_csv(record: &CutRecord) -> String {
    let rows: Vec<Vec<f64>> = match &record.polygon {
        Some(poly) => poly.iter().chain(poly.first()).map(|p| p.to_vec()).collect(),
        None => Vec::new(),
    };
    points_csv(&rows, record.center.len())
}

pub fn vertices_csv(record: &VerticesRecord) -> String {
    points_csv(&record.vertices, record.vertices.first().map_or(0, Vec::len))
}

fn points_csv(points: &[Vec<f64>], n: usize) -> String {
    let mut out = header(&["vertex"], n);
    out.push('\n');
    for (k, p) in points.iter().enumerate() {
        let row: Vec<String> = p.iter().copied().map(num).collect();
        let _ = writeln!(out, "{k},{}", row.join(","));
    }
    out
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

/// Writes `files` (name, contents) into `dir`, creating it if needed.
pub fn write_outputs(dir: &Path, files: &[(&str, String)]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    files
        .iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            fs::write(&path, body)?;
            Ok(path)
        })
        .collect()
}

/// Process exit code for a failed command.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_numeric() { 3 } else { 2 }
}
