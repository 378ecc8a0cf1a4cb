use crate::error::{check_len, Result};
use crate::linalg::BandedMatrix;

use super::grid::{BoundaryKind, BoundaryValues, Face, Grid, Injection};
use super::{build_1d, check_n_hat, square_grid, square_injection, DiscreteOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    X,
    Y,
}

/// Dimension splitting `A = A_1 + A_2` of the five-point Laplacian.
///
/// Both parts are block diagonal with copies of the 1D Dirichlet matrix. Lines
/// of the x-part are contiguous in the lexicographic ordering; lines of the
/// y-part are contiguous after the transposing permutation built here.
#[derive(Debug, Clone)]
pub struct SplitOperator2D {
    grid: Grid,
    line: DiscreteOperator,
    c1: Injection,
    c2: Injection,
    /// `y_order[p]` is the lexicographic index of position `p` in y-major order.
    y_order: Vec<usize>,
}

pub fn build_2d_split(n_hat: usize) -> Result<SplitOperator2D> {
    check_n_hat(n_hat)?;
    let grid = square_grid(n_hat);
    let h = grid.h();
    let line = build_1d(n_hat, BoundaryKind::Dirichlet)?;
    let c1 = square_injection(n_hat, h, Face::is_x_face);
    let c2 = square_injection(n_hat, h, |f| !f.is_x_face());
    let mut y_order = Vec::with_capacity(n_hat * n_hat);
    for i in 0..n_hat {
        for j in 0..n_hat {
            y_order.push(i + n_hat * j);
        }
    }
    Ok(SplitOperator2D { grid, line, c1, c2, y_order })
}

impl SplitOperator2D {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn n_hat(&self) -> usize {
        self.grid.n_hat()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// The 1D operator every block repeats.
    pub fn line_operator(&self) -> &DiscreteOperator {
        &self.line
    }

    pub fn injection(&self, dir: Direction) -> &Injection {
        match dir {
            Direction::X => &self.c1,
            Direction::Y => &self.c2,
        }
    }

    /// `A_1` or `A_2` assembled in the lexicographic ordering.
    pub fn assemble(&self, dir: Direction) -> BandedMatrix {
        let n_hat = self.n_hat();
        let (stride, band) = match dir {
            Direction::X => (1, 1),
            Direction::Y => (n_hat, n_hat),
        };
        let mut a = BandedMatrix::zeros(self.len(), band, band).expect("valid band");
        let t = &self.line.a;
        for line in 0..n_hat {
            for p in 0..n_hat {
                for (q, v) in t.row_entries(p) {
                    let (r, c) = match dir {
                        Direction::X => (p + n_hat * line, q + n_hat * line),
                        Direction::Y => (line + stride * p, line + stride * q),
                    };
                    a.set(r, c, v);
                }
            }
        }
        a
    }

    /// Reorders `u` so that the lines of `dir` are contiguous.
    pub fn to_line_order(&self, dir: Direction, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), u.len())?;
        Ok(match dir {
            Direction::X => u.to_vec(),
            Direction::Y => self.y_order.iter().map(|&k| u[k]).collect(),
        })
    }

    pub fn from_line_order(&self, dir: Direction, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), v.len())?;
        Ok(match dir {
            Direction::X => v.to_vec(),
            Direction::Y => {
                let mut u = vec![0.0; v.len()];
                for (p, &k) in self.y_order.iter().enumerate() {
                    u[k] = v[p];
                }
                u
            }
        })
    }

    /// Boundary values seen by line `line` of `dir`: `(start, end)` of the line.
    pub fn line_boundary(&self, dir: Direction, b: &BoundaryValues, line: usize) -> BoundaryValues {
        let n_hat = self.n_hat();
        let (lo, hi) = match dir {
            Direction::X => (0, n_hat),
            Direction::Y => (2 * n_hat, 3 * n_hat),
        };
        BoundaryValues { values: vec![b.values[lo + line], b.values[hi + line]] }
    }
}
