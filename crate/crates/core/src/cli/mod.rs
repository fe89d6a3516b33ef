//! Scenario files and the commands of the `fuzzy-lsde` binary.

pub mod commands;
pub mod scenario;

pub use commands::{
    CutRecord, MembershipRecord, PlotData, PolygonRecord, SolveRecord, VerifyRecord, VerticesRecord, cmd_cut,
    cmd_membership, cmd_plotdata, cmd_solve, cmd_verify, cmd_vertices,
};
pub use scenario::{FuzzySpec, Query, Scenario, load_scenario};
