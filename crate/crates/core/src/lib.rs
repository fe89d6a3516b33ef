//! Linear ODE systems `x' = A x + F(t)` with fuzzy initial values.
//!
//! The solution is a fuzzy set of crisp trajectories. Each trajectory keeps
//! the possibility of the initial value it starts from, and at any time the
//! `alpha`-cuts of the set are nested parallelepipeds spanned by the columns
//! of `e^{A t}` around the crisp trajectory started from the core of the
//! initial values.
//!
//! ```
//! use fuzzy_lsde::{FuzzyNumber, Forcing, Matrix, Problem, solve};
//!
//! let a = Matrix::from_rows(&[[-3.0, 2.0], [3.0, -4.0]])?;
//! let forcing = Forcing::polynomial(vec![vec![1.0], vec![2.0]])?;
//! let initial = vec![
//!     FuzzyNumber::triangular(70.0, 100.0, 130.0)?,
//!     FuzzyNumber::triangular(70.0, 100.0, 130.0)?,
//! ];
//! let problem = Problem::new(a, forcing, 0.0, initial)?;
//! let sol = solve(&problem, 1.0, 1e-3)?;
//! let region = sol.alpha_cut_region(0.4, 0.0)?;
//! assert_eq!(region.vertices()?.len(), 4);
//! # Ok::<(), fuzzy_lsde::Error>(())
//! ```

// Negated comparisons are how NaN gets rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod crisp_ode;
pub mod error;
pub mod fuzzy_num;
pub mod geometry;
pub mod linalg;
pub mod oracle;
pub mod solver;

pub use crisp_ode::{CrispTrajectory, Forcing, integrate, residual};
pub use error::{Error, Result};
pub use fuzzy_num::{FuzzyNumber, Interval, Triangular};
pub use geometry::Parallelepiped;
pub use linalg::{Matrix, fundamental_columns, lu_solve, mat_exp};
pub use oracle::{OracleReport, run_containment_oracle, run_membership_oracle};
pub use solver::{Decomposition, FuzzySolution, Problem, decompose, solve};
