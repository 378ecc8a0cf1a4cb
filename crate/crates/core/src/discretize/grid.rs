use crate::error::{check_len, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn on_line(x: f64) -> Self {
        Self { x, y: 0.0 }
    }
}

/// Sides of the unit interval or square.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    /// `x = 0`
    Left,
    /// `x = 1`
    Right,
    /// `y = 0`
    Bottom,
    /// `y = 1`
    Top,
}

impl Face {
    /// Faces crossed by the x-direction operator.
    pub fn is_x_face(self) -> bool {
        matches!(self, Face::Left | Face::Right)
    }
}

/// Boundary operator `α u + β ∂_n u` on one face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryKind {
    Dirichlet,
    Neumann,
    /// Experimental: no benchmark exercises it.
    Robin {
        alpha: f64,
        beta: f64,
    },
}

impl BoundaryKind {
    /// `(α, β)`
    pub fn coefficients(self) -> (f64, f64) {
        match self {
            BoundaryKind::Dirichlet => (1.0, 0.0),
            BoundaryKind::Neumann => (0.0, 1.0),
            BoundaryKind::Robin { alpha, beta } => (alpha, beta),
        }
    }

    pub fn is_dirichlet(self) -> bool {
        matches!(self, BoundaryKind::Dirichlet)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNode {
    pub face: Face,
    pub point: Point,
    pub kind: BoundaryKind,
    /// Index of the unknown sitting on this boundary point, if the layout keeps one.
    pub unknown: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    dim: usize,
    h: f64,
    n_hat: usize,
    nodes: Vec<Point>,
    boundary: Vec<BoundaryNode>,
}

impl Grid {
    pub(crate) fn new(dim: usize, h: f64, n_hat: usize, nodes: Vec<Point>, boundary: Vec<BoundaryNode>) -> Self {
        Self { dim, h, n_hat, nodes, boundary }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Interior nodes per direction.
    pub fn n_hat(&self) -> usize {
        self.n_hat
    }

    /// Number of unknowns.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Unknown locations, lexicographic with x fastest.
    pub fn nodes(&self) -> &[Point] {
        &self.nodes
    }

    pub fn boundary(&self) -> &[BoundaryNode] {
        &self.boundary
    }

    /// Samples `f` at every boundary node.
    pub fn boundary_values(&self, mut f: impl FnMut(&BoundaryNode) -> f64) -> BoundaryValues {
        BoundaryValues { values: self.boundary.iter().map(&mut f).collect() }
    }

    /// Samples `f` at every unknown.
    pub fn project(&self, f: impl Fn(Point) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|p| f(*p)).collect()
    }
}

/// Mesh width `1/(N̂+1)` is fixed by `N̂`; this recovers `N̂` from a requested `h`.
pub fn interior_count(h: f64) -> usize {
    ((1.0 / h).round() as usize).saturating_sub(1)
}

/// One value per boundary node of a grid, in the grid's boundary order.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryValues {
    pub values: Vec<f64>,
}

impl BoundaryValues {
    pub fn zeros(len: usize) -> Self {
        Self { values: vec![0.0; len] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.len(), other.len());
        Self { values: self.values.iter().zip(&other.values).map(|(a, b)| a + s * b).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == 0.0)
    }
}

/// Sparse boundary injection `C_h`: `(row, boundary slot, weight)` triples.
#[derive(Debug, Clone, PartialEq)]
pub struct Injection {
    rows: usize,
    slots: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl Injection {
    pub(crate) fn new(rows: usize, slots: usize, entries: Vec<(usize, usize, f64)>) -> Self {
        Self { rows, slots, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn slots(&self) -> usize {
        self.slots
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn apply(&self, b: &BoundaryValues) -> Result<Vec<f64>> {
        check_len(self.slots, b.len())?;
        let mut out = vec![0.0; self.rows];
        for &(r, s, w) in &self.entries {
            out[r] += w * b.values[s];
        }
        Ok(out)
    }

    /// Number of rows receiving a contribution.
    pub fn nonzero_rows(&self) -> usize {
        let mut rows: Vec<usize> = self.entries.iter().map(|e| e.0).collect();
        rows.sort_unstable();
        rows.dedup();
        rows.len()
    }
}
