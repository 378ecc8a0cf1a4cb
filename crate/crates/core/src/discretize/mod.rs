//! Second-order finite differences on the unit interval and square.
//!
//! Every builder returns the stiff matrix `A_{h,0}` together with the sparse
//! injection `C_h` such that the discrete operator with boundary data `g` is
//! `A_{h,0} U + C_h g`.

mod grid;
mod split;

pub use grid::{interior_count, BoundaryKind, BoundaryNode, BoundaryValues, Face, Grid, Injection, Point};
pub use split::{build_2d_split, Direction, SplitOperator2D};

use crate::error::{check_len, Error, Result};
use crate::linalg::{norm_max, BandedMatrix};

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteOperator {
    pub a: BandedMatrix,
    pub grid: Grid,
    pub injection: Injection,
}

impl DiscreteOperator {
    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// `A_{h,0} u + C_h b`
    pub fn apply_with_boundary(&self, u: &[f64], b: &BoundaryValues) -> Result<Vec<f64>> {
        let mut out = self.a.mat_vec(u)?;
        for (o, c) in out.iter_mut().zip(self.injection.apply(b)?) {
            *o += c;
        }
        Ok(out)
    }
}

fn check_n_hat(n_hat: usize) -> Result<()> {
    if n_hat < 3 {
        Err(Error::InvalidArgument(format!("need at least 3 interior nodes per direction, got {n_hat}")))
    } else {
        Ok(())
    }
}

/// `u'' ` on `[0, 1]` with Dirichlet data at `x = 0` and `right` at `x = 1`.
///
/// Dirichlet: `N̂` unknowns at `x_j = jh`, `h = 1/(N̂+1)`, `A = tridiag(1,-2,1)/h²`,
/// `C_h(g_0, g_1) = (g_0, 0, …, 0, g_1)/h²`.
///
/// Neumann and Robin keep the node `x = 1` as unknown `N̂+1`. Eliminating the
/// ghost value through `α u + β u_x = g` turns the last row into
/// `[0, …, 0, 2, -2 - 2hα/β]/h²` with injection `2g/(hβ)`.
pub fn build_1d(n_hat: usize, right: BoundaryKind) -> Result<DiscreteOperator> {
    check_n_hat(n_hat)?;
    let h = 1.0 / (n_hat + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let n = if right.is_dirichlet() { n_hat } else { n_hat + 1 };
    let mut a = BandedMatrix::tridiagonal(n, inv_h2, -2.0 * inv_h2, inv_h2)?;
    let mut entries = vec![(0, 0, inv_h2)];
    let right_unknown = match right {
        BoundaryKind::Dirichlet => {
            entries.push((n - 1, 1, inv_h2));
            None
        }
        BoundaryKind::Neumann | BoundaryKind::Robin { .. } => {
            let (alpha, beta) = right.coefficients();
            if beta == 0.0 {
                return Err(Error::InvalidArgument("Robin condition needs β ≠ 0".into()));
            }
            a.set(n - 1, n - 2, 2.0 * inv_h2);
            a.set(n - 1, n - 1, (-2.0 - 2.0 * h * alpha / beta) * inv_h2);
            entries.push((n - 1, 1, 2.0 / (h * beta)));
            Some(n - 1)
        }
    };
    let nodes = (1..=n).map(|j| Point::on_line(j as f64 * h)).collect();
    let boundary = vec![
        BoundaryNode { face: Face::Left, point: Point::on_line(0.0), kind: BoundaryKind::Dirichlet, unknown: None },
        BoundaryNode { face: Face::Right, point: Point::on_line(1.0), kind: right, unknown: right_unknown },
    ];
    Ok(DiscreteOperator { a, grid: Grid::new(1, h, n_hat, nodes, boundary), injection: Injection::new(n, 2, entries) })
}

/// Boundary nodes of the square excluding corners: left, right, bottom, top,
/// each ordered by increasing tangential coordinate.
pub(crate) fn square_boundary(n_hat: usize, h: f64) -> Vec<BoundaryNode> {
    let coord = |k: usize| (k + 1) as f64 * h;
    let face = |face: Face, f: &dyn Fn(f64) -> Point| -> Vec<BoundaryNode> {
        (0..n_hat)
            .map(|k| BoundaryNode { face, point: f(coord(k)), kind: BoundaryKind::Dirichlet, unknown: None })
            .collect()
    };
    let mut out = face(Face::Left, &|y| Point::new(0.0, y));
    out.extend(face(Face::Right, &|y| Point::new(1.0, y)));
    out.extend(face(Face::Bottom, &|x| Point::new(x, 0.0)));
    out.extend(face(Face::Top, &|x| Point::new(x, 1.0)));
    out
}

pub(crate) fn square_grid(n_hat: usize) -> Grid {
    let h = 1.0 / (n_hat + 1) as f64;
    let mut nodes = Vec::with_capacity(n_hat * n_hat);
    for j in 0..n_hat {
        for i in 0..n_hat {
            nodes.push(Point::new((i + 1) as f64 * h, (j + 1) as f64 * h));
        }
    }
    Grid::new(2, h, n_hat, nodes, square_boundary(n_hat, h))
}

/// Injection entries for the faces selected by `keep`.
pub(crate) fn square_injection(n_hat: usize, h: f64, keep: impl Fn(Face) -> bool) -> Injection {
    let w = 1.0 / (h * h);
    let idx = |i: usize, j: usize| i + n_hat * j;
    let mut entries = Vec::new();
    for k in 0..n_hat {
        for (slot_base, face, row) in [
            (0, Face::Left, idx(0, k)),
            (n_hat, Face::Right, idx(n_hat - 1, k)),
            (2 * n_hat, Face::Bottom, idx(k, 0)),
            (3 * n_hat, Face::Top, idx(k, n_hat - 1)),
        ] {
            if keep(face) {
                entries.push((row, slot_base + k, w));
            }
        }
    }
    Injection::new(n_hat * n_hat, 4 * n_hat, entries)
}

/// Five-point Laplacian on the unit square with Dirichlet data on every face.
pub fn build_2d_5pt(n_hat: usize) -> Result<DiscreteOperator> {
    check_n_hat(n_hat)?;
    let grid = square_grid(n_hat);
    let h = grid.h();
    let w = 1.0 / (h * h);
    let n = n_hat * n_hat;
    let mut a = BandedMatrix::zeros(n, n_hat, n_hat)?;
    for j in 0..n_hat {
        for i in 0..n_hat {
            let r = i + n_hat * j;
            a.set(r, r, -4.0 * w);
            if i > 0 {
                a.set(r, r - 1, w);
            }
            if i + 1 < n_hat {
                a.set(r, r + 1, w);
            }
            if j > 0 {
                a.set(r, r - n_hat, w);
            }
            if j + 1 < n_hat {
                a.set(r, r + n_hat, w);
            }
        }
    }
    let injection = square_injection(n_hat, h, |_| true);
    Ok(DiscreteOperator { a, grid, injection })
}

/// Elliptic projection `R_h u`: the solution of `A_{h,0} R_h u + C_h ∂u = P_h Au`.
pub fn elliptic_projection(op: &DiscreteOperator, au: &[f64], bu: &BoundaryValues) -> Result<Vec<f64>> {
    check_len(op.len(), au.len())?;
    let c = op.injection.apply(bu)?;
    let rhs: Vec<f64> = au.iter().zip(&c).map(|(a, c)| a - c).collect();
    op.a.solve(&rhs)
}

/// Consistency measures `(‖A_{h,0}(P_h u - R_h u)‖∞, ‖P_h u - R_h u‖∞)` for one field.
pub fn consistency(op: &DiscreteOperator, pu: &[f64], au: &[f64], bu: &BoundaryValues) -> Result<(f64, f64)> {
    check_len(op.len(), pu.len())?;
    let rh = elliptic_projection(op, au, bu)?;
    let diff: Vec<f64> = pu.iter().zip(&rh).map(|(p, r)| p - r).collect();
    let eps = norm_max(&op.a.mat_vec(&diff)?);
    Ok((eps, norm_max(&diff)))
}

/// Max-norm logarithmic norm `max_i (a_ii + Σ_{j≠i} |a_ij|)`.
pub fn log_norm_inf(a: &BandedMatrix) -> f64 {
    (0..a.n())
        .map(|i| a.row_entries(i).map(|(j, v)| if j == i { v } else { v.abs() }).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}
