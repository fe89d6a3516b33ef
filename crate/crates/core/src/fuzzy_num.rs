//! Fuzzy numbers in parametric (level-wise) form.
//!
//! A fuzzy number is stored as two branch functions sampled on a grid of
//! levels `0 = r_0 < ... < r_M = 1`: the nondecreasing lower branch and the
//! nonincreasing upper branch. Between samples both branches are linear, so
//! triangular numbers are represented exactly on the two-point grid
//! `{0, 1}` and inverse lookups reduce to a segment search plus a linear
//! solve.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of grid segments used when sampling a branch expression.
pub const DEFAULT_SEGMENTS: usize = 100;

/// Closed interval `[lo, hi]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo <= hi) {
            return Err(Error::invalid(format!("interval [{lo}, {hi}] is empty")));
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn shift(&self, d: f64) -> Self {
        Self {
            lo: self.lo + d,
            hi: self.hi + d,
        }
    }
}

/// Triangular fuzzy number `(a, c, b)`: support `[a, b]`, peak `c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triangular {
    pub a: f64,
    pub c: f64,
    pub b: f64,
}

impl Triangular {
    pub fn new(a: f64, c: f64, b: f64) -> Result<Self> {
        if ![a, c, b].iter().all(|v| v.is_finite()) {
            return Err(Error::invalid("triangular number has a non-finite parameter"));
        }
        if !(a <= c && c <= b) {
            return Err(Error::invalid(format!(
                "triangular number requires a <= c <= b, got ({a}, {c}, {b})"
            )));
        }
        Ok(Self { a, c, b })
    }

    /// Closed-form membership; the degenerate vertical sides map to 1 at the peak.
    pub fn membership(&self, x: f64) -> f64 {
        if x < self.a || x > self.b || x.is_nan() {
            0.0
        } else if x == self.c {
            1.0
        } else if x < self.c {
            (x - self.a) / (self.c - self.a)
        } else {
            (x - self.b) / (self.c - self.b)
        }
    }
}

impl From<Triangular> for FuzzyNumber {
    fn from(t: Triangular) -> Self {
        FuzzyNumber {
            levels: vec![0.0, 1.0],
            lower: vec![t.a, t.c],
            upper: vec![t.b, t.c],
        }
    }
}

/// Parametric fuzzy number sampled on a level grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyNumber {
    levels: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl FuzzyNumber {
    pub fn triangular(a: f64, c: f64, b: f64) -> Result<Self> {
        Ok(Triangular::new(a, c, b)?.into())
    }

    pub fn crisp(x: f64) -> Self {
        Self {
            levels: vec![0.0, 1.0],
            lower: vec![x, x],
            upper: vec![x, x],
        }
    }

    /// Builds a fuzzy number from branch samples, checking every invariant.
    pub fn parametric(levels: Vec<f64>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let m = levels.len();
        if m < 2 {
            return Err(Error::invalid("a level grid needs at least two levels"));
        }
        if lower.len() != m || upper.len() != m {
            return Err(Error::invalid(format!(
                "grid has {m} levels but lower has {} and upper has {} values",
                lower.len(),
                upper.len()
            )));
        }
        let bad = |index: usize, reason: &str| Error::InvalidFuzzyNumber {
            index,
            reason: reason.to_string(),
        };
        if levels[0] != 0.0 {
            return Err(bad(0, "first level must be 0"));
        }
        if levels[m - 1] != 1.0 {
            return Err(bad(m - 1, "last level must be 1"));
        }
        for k in 0..m {
            if !(levels[k].is_finite() && lower[k].is_finite() && upper[k].is_finite()) {
                return Err(bad(k, "non-finite value"));
            }
            if lower[k] > upper[k] {
                return Err(bad(k, "lower branch exceeds upper branch"));
            }
            if k > 0 {
                if levels[k] <= levels[k - 1] {
                    return Err(bad(k, "levels are not strictly increasing"));
                }
                if lower[k] < lower[k - 1] {
                    return Err(bad(k, "lower branch decreases"));
                }
                if upper[k] > upper[k - 1] {
                    return Err(bad(k, "upper branch increases"));
                }
            }
        }
        Ok(Self { levels, lower, upper })
    }

    /// Samples branch functions on a uniform grid of `segments + 1` levels.
    pub fn sample(segments: usize, lower: impl Fn(f64) -> f64, upper: impl Fn(f64) -> f64) -> Result<Self> {
        if segments == 0 {
            return Err(Error::invalid("at least one grid segment is required"));
        }
        let levels = uniform_levels(segments);
        let lo = levels.iter().map(|&r| lower(r)).collect();
        let hi = levels.iter().map(|&r| upper(r)).collect();
        Self::parametric(levels, lo, hi)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn lower_values(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper_values(&self) -> &[f64] {
        &self.upper
    }

    /// Both branches are linear on the whole level range (triangular or crisp).
    pub fn is_linear(&self) -> bool {
        self.levels.len() == 2
    }

    pub fn is_crisp(&self) -> bool {
        self.lower[0] == self.upper[0]
    }

    pub fn support(&self) -> Interval {
        Interval {
            lo: self.lower[0],
            hi: self.upper[0],
        }
    }

    pub fn core(&self) -> Interval {
        let m = self.levels.len() - 1;
        Interval {
            lo: self.lower[m],
            hi: self.upper[m],
        }
    }

    /// Lower branch at level `r`, clamped to `[0, 1]`.
    pub fn lower(&self, r: f64) -> f64 {
        interpolate(&self.levels, &self.lower, r)
    }

    /// Upper branch at level `r`, clamped to `[0, 1]`.
    pub fn upper(&self, r: f64) -> f64 {
        interpolate(&self.levels, &self.upper, r)
    }

    pub fn alpha_cut(&self, alpha: f64) -> Result<Interval> {
        check_level(alpha)?;
        Ok(Interval {
            lo: self.lower(alpha),
            hi: self.upper(alpha),
        })
    }

    /// Membership grade of `x`: the largest level whose cut still contains `x`.
    pub fn membership(&self, x: f64) -> f64 {
        let support = self.support();
        if !support.contains(x) {
            return 0.0;
        }
        let left = branch_level(&self.levels, &self.lower, x, Branch::Lower);
        let right = branch_level(&self.levels, &self.upper, x, Branch::Upper);
        left.min(right)
    }

    pub fn add(&self, other: &FuzzyNumber) -> FuzzyNumber {
        let levels = union_levels(&self.levels, &other.levels);
        let sum = |f: &dyn Fn(f64) -> f64, g: &dyn Fn(f64) -> f64| -> Vec<f64> {
            levels.iter().map(|&r| f(r) + g(r)).collect()
        };
        let lower = sum(&|r| self.lower(r), &|r| other.lower(r));
        let upper = sum(&|r| self.upper(r), &|r| other.upper(r));
        FuzzyNumber { levels, lower, upper }
    }

    /// Multiplication by a real scalar; a negative factor swaps the branches.
    pub fn scale(&self, k: f64) -> FuzzyNumber {
        let mul = |v: &[f64]| v.iter().map(|x| k * x).collect::<Vec<_>>();
        let (lower, upper) = if k >= 0.0 {
            (mul(&self.lower), mul(&self.upper))
        } else {
            (mul(&self.upper), mul(&self.lower))
        };
        FuzzyNumber {
            levels: self.levels.clone(),
            lower,
            upper,
        }
    }

    pub fn sub(&self, other: &FuzzyNumber) -> FuzzyNumber {
        self.add(&other.scale(-1.0))
    }

    /// Translation by a crisp amount.
    pub fn shift(&self, d: f64) -> FuzzyNumber {
        FuzzyNumber {
            levels: self.levels.clone(),
            lower: self.lower.iter().map(|x| x + d).collect(),
            upper: self.upper.iter().map(|x| x + d).collect(),
        }
    }

    /// The triangular parameters, when both branches are linear.
    pub fn as_triangular(&self) -> Option<Triangular> {
        self.is_linear()
            .then(|| Triangular {
                a: self.lower[0],
                c: self.lower[1],
                b: self.upper[0],
            })
            .filter(|_| self.lower[1] == self.upper[1])
    }
}

pub fn check_level(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

pub fn uniform_levels(segments: usize) -> Vec<f64> {
    let mut levels: Vec<f64> = (0..=segments).map(|k| k as f64 / segments as f64).collect();
    levels[segments] = 1.0;
    levels
}

fn union_levels(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out: Vec<f64> = a.iter().chain(b).copied().collect();
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

fn interpolate(levels: &[f64], values: &[f64], r: f64) -> f64 {
    let last = levels.len() - 1;
    if r >= 1.0 {
        return values[last];
    }
    if !(r > 0.0) {
        return values[0];
    }
    // levels[k] <= r < levels[k + 1]
    let k = levels.partition_point(|&l| l <= r) - 1;
    let w = (r - levels[k]) / (levels[k + 1] - levels[k]);
    values[k] + (values[k + 1] - values[k]) * w
}

#[derive(Clone, Copy)]
enum Branch {
    Lower,
    Upper,
}

/// `sup { r : lower(r) <= x }` or `sup { r : upper(r) >= x }` for `x` in the support.
fn branch_level(levels: &[f64], values: &[f64], x: f64, branch: Branch) -> f64 {
    let last = levels.len() - 1;
    let k = match branch {
        Branch::Lower => {
            if x >= values[last] {
                return 1.0;
            }
            values.partition_point(|&v| v <= x)
        }
        Branch::Upper => {
            if x <= values[last] {
                return 1.0;
            }
            values.partition_point(|&v| v >= x)
        }
    };
    // Segment [k - 1, k] brackets x, with a strict inequality at k.
    let (r0, r1) = (levels[k - 1], levels[k]);
    let (v0, v1) = (values[k - 1], values[k]);
    let w = (x - v0) / (v1 - v0);
    (r0 + w * (r1 - r0)).clamp(r0, r1)
}
