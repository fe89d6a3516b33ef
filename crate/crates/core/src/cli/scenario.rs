use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::crisp_ode::{Forcing, MAX_FORCING_DEGREE};
use crate::error::{Error, Result};
use crate::fuzzy_num::FuzzyNumber;
use crate::linalg::Matrix;
use crate::solver::Problem;

/// Prefix selecting one of the scenarios compiled into the binary.
pub const BUILTIN_PREFIX: &str = "builtin:";

const BUILTINS: &[(&str, &str)] = &[
    ("example1", include_str!("../../scenarios/example1.json")),
    ("example2", include_str!("../../scenarios/example2.json")),
    ("example3", include_str!("../../scenarios/example3.json")),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FuzzySpec {
    Triangular {
        a: f64,
        c: f64,
        b: f64,
    },
    Parametric {
        levels: Vec<f64>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    },
}

impl FuzzySpec {
    pub fn to_fuzzy(&self) -> Result<FuzzyNumber> {
        match self {
            FuzzySpec::Triangular { a, c, b } => FuzzyNumber::triangular(*a, *c, *b),
            FuzzySpec::Parametric { levels, lower, upper } => {
                FuzzyNumber::parametric(levels.clone(), lower.clone(), upper.clone())
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Query {
    Cut { time: f64, alpha: f64 },
    Membership { time: f64, point: Vec<f64> },
    Plot { times: Vec<f64>, alphas: Vec<f64> },
    Vertices { time: f64, alpha: f64 },
}

/// On-disk problem description plus the queries to run against it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub n: usize,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    pub forcing: Vec<Vec<f64>>,
    pub t0: f64,
    pub t_end: f64,
    pub h: f64,
    pub initial: Vec<FuzzySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_cr: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<Query>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self> {
        let scenario: Scenario = serde_json::from_str(text)?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn builtin(name: &str) -> Option<Self> {
        BUILTINS
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| Self::from_json(text).expect("bundled scenario is valid"))
    }

    pub fn builtin_names() -> impl Iterator<Item = &'static str> {
        BUILTINS.iter().map(|(n, _)| *n)
    }

    /// Checks every structural invariant; the error names the offending component.
    pub fn validate(&self) -> Result<()> {
        self.to_problem().map(|_| ())?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::invalid(format!("step h must be positive, got {}", self.h)));
        }
        if !(self.t_end > self.t0 && self.t_end.is_finite()) {
            return Err(Error::invalid(format!(
                "t_end = {} must be finite and greater than t0 = {}",
                self.t_end, self.t0
            )));
        }
        Ok(())
    }

    pub fn to_problem(&self) -> Result<Problem> {
        let n = self.n;
        if n == 0 {
            return Err(Error::invalid("n must be at least 1"));
        }
        let a = Matrix::new(n, self.a.clone())?;
        if self.forcing.len() != n {
            return Err(Error::invalid(format!(
                "forcing has {} components, expected {n}",
                self.forcing.len()
            )));
        }
        if let Some(i) = self.forcing.iter().position(|c| c.len() > MAX_FORCING_DEGREE + 1) {
            return Err(
                Error::invalid(format!("forcing polynomial degree exceeds {MAX_FORCING_DEGREE}"))
                    .in_component(i),
            );
        }
        let forcing = Forcing::polynomial(self.forcing.clone())?;
        if self.initial.len() != n {
            return Err(Error::invalid(format!(
                "initial has {} components, expected {n}",
                self.initial.len()
            )));
        }
        let initial = self
            .initial
            .iter()
            .enumerate()
            .map(|(i, s)| s.to_fuzzy().map_err(|e| e.in_component(i)))
            .collect::<Result<Vec<_>>>()?;
        let problem = Problem::new(a, forcing, self.t0, initial)?;
        match &self.b_cr {
            Some(b) => problem.with_b_cr(b.clone()),
            None => Ok(problem),
        }
    }
}

/// Reads a scenario file, or a bundled one when `path` is `builtin:<name>`.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    if let Some(name) = path.to_str().and_then(|s| s.strip_prefix(BUILTIN_PREFIX)) {
        return Scenario::builtin(name).ok_or_else(|| {
            let known: Vec<_> = Scenario::builtin_names().collect();
            Error::invalid(format!("unknown builtin scenario {name:?}; known: {known:?}"))
        });
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::invalid(format!("cannot read {}: {e}", path.display())))?;
    Scenario::from_json(&text)
}
