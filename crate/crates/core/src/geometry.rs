//! Parallelepipeds `{ center + sum_i c_i g_i : c_i in [lo_i, hi_i] }`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fuzzy_num::Interval;
use crate::linalg::{Matrix, lu_solve, norm2};

/// Largest dimension for which vertices are enumerated.
pub const MAX_VERTEX_DIM: usize = 16;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Parallelepiped {
    center: Vec<f64>,
    generators: Vec<Vec<f64>>,
    intervals: Vec<Interval>,
}

impl Parallelepiped {
    pub fn new(center: Vec<f64>, generators: Vec<Vec<f64>>, intervals: Vec<Interval>) -> Result<Self> {
        let n = center.len();
        if n == 0 {
            return Err(Error::invalid("parallelepiped needs at least one dimension"));
        }
        for len in std::iter::once(generators.len())
            .chain(generators.iter().map(Vec::len))
            .chain(std::iter::once(intervals.len()))
        {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        if let Some(i) = intervals.iter().position(|iv| !(iv.lo <= iv.hi)) {
            return Err(Error::invalid(format!("coefficient interval {i} is empty")));
        }
        Ok(Self {
            center,
            generators,
            intervals,
        })
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn generators(&self) -> &[Vec<f64>] {
        &self.generators
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    /// Matrix whose columns are the generators.
    pub fn generator_matrix(&self) -> Result<Matrix> {
        Matrix::from_columns(&self.generators)
    }

    pub fn point_at(&self, coeffs: &[f64]) -> Vec<f64> {
        let mut x = self.center.clone();
        for (g, c) in self.generators.iter().zip(coeffs) {
            for (xi, gi) in x.iter_mut().zip(g) {
                *xi += c * gi;
            }
        }
        x
    }

    /// Coefficients `c` with `x = center + G c`.
    pub fn coefficients_of(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: x.len(),
            });
        }
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, b)| a - b).collect();
        lu_solve(&self.generator_matrix()?, &d)
    }

    fn check_vertex_dim(&self) -> Result<()> {
        if self.dim() > MAX_VERTEX_DIM {
            return Err(Error::UnsupportedDimension {
                n: self.dim(),
                max: MAX_VERTEX_DIM,
            });
        }
        Ok(())
    }

    /// Coefficient choices of the vertices, in reflected Gray-code order.
    pub fn vertex_coefficients(&self) -> Result<Vec<Vec<f64>>> {
        self.check_vertex_dim()?;
        let n = self.dim();
        Ok((0u32..1 << n)
            .map(|k| {
                let gray = k ^ (k >> 1);
                (0..n)
                    .map(|i| {
                        let iv = &self.intervals[i];
                        if gray >> i & 1 == 1 { iv.hi } else { iv.lo }
                    })
                    .collect()
            })
            .collect())
    }

    pub fn vertices(&self) -> Result<Vec<Vec<f64>>> {
        Ok(self
            .vertex_coefficients()?
            .iter()
            .map(|c| self.point_at(c))
            .collect())
    }

    /// The four corners of a planar parallelogram, counterclockwise, starting at `(lo_1, lo_2)`.
    pub fn polygon2d(&self) -> Result<Vec<[f64; 2]>> {
        if self.dim() != 2 {
            return Err(Error::invalid(format!(
                "polygon output needs a planar region, got dimension {}",
                self.dim()
            )));
        }
        let [i0, i1] = [self.intervals[0], self.intervals[1]];
        let corner = |c0: f64, c1: f64| {
            let p = self.point_at(&[c0, c1]);
            [p[0], p[1]]
        };
        let mut poly = vec![
            corner(i0.lo, i1.lo),
            corner(i0.hi, i1.lo),
            corner(i0.hi, i1.hi),
            corner(i0.lo, i1.hi),
        ];
        if signed_area(&poly) < 0.0 {
            poly[1..].reverse();
        }
        Ok(poly)
    }

    /// Largest distance between two vertices.
    ///
    /// Vertex differences are `sum_i d_i w_i` with `w_i = (hi_i - lo_i) g_i` and
    /// `d_i in {-1, 0, 1}`; the norm is convex, so the maximum sits at a sign
    /// vector and half of them suffice by symmetry.
    pub fn diameter(&self) -> Result<f64> {
        self.check_vertex_dim()?;
        let n = self.dim();
        let edges: Vec<Vec<f64>> = self
            .generators
            .iter()
            .zip(&self.intervals)
            .map(|(g, iv)| g.iter().map(|x| x * iv.width()).collect())
            .collect();
        let mut best: f64 = 0.0;
        let mut diff = vec![0.0; n];
        for signs in 0u32..1 << (n - 1) {
            diff.copy_from_slice(&edges[n - 1]);
            for (i, e) in edges.iter().enumerate().take(n - 1) {
                let s = if signs >> i & 1 == 1 { -1.0 } else { 1.0 };
                for (d, x) in diff.iter_mut().zip(e) {
                    *d += s * x;
                }
            }
            best = best.max(norm2(&diff));
        }
        Ok(best)
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        let c = self.coefficients_of(x)?;
        Ok(c.iter()
            .zip(&self.intervals)
            .all(|(ci, iv)| iv.lo - tol <= *ci && *ci <= iv.hi + tol))
    }
}

/// Shoelace area; positive for counterclockwise rings.
pub fn signed_area(polygon: &[[f64; 2]]) -> f64 {
    let n = polygon.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (polygon[i], polygon[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}
