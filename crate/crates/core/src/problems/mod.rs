//! Initial-boundary-value problem data `u' = Au + φ(u) + h(t, x)`, `∂u = g`.

mod catalog;

pub use catalog::{benchmark, benchmark_catalog, BENCHMARK_NAMES};

use std::fmt;
use std::sync::Arc;

use crate::discretize::{BoundaryKind, BoundaryNode, BoundaryValues, Face, Grid, Point};
use crate::error::{check_len, Error, Result};

pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
/// `(t, x) -> value`
pub type FieldFn = Arc<dyn Fn(f64, Point) -> f64 + Send + Sync>;
/// `(face, t, x) -> value` for points on `face`.
pub type FaceFn = Arc<dyn Fn(Face, f64, Point) -> f64 + Send + Sync>;

/// Continuous problem description; grid-free.
#[derive(Clone)]
pub struct ProblemSpec {
    pub name: String,
    /// Spatial dimension, 1 or 2.
    pub dim: usize,
    /// Boundary operator per face; faces not listed are Dirichlet.
    pub faces: Vec<(Face, BoundaryKind)>,
    /// Pointwise nonlinearity `φ`.
    pub reaction: ScalarFn,
    /// `φ'`
    pub reaction_du: ScalarFn,
    /// Additive source `h(t, x)`.
    pub source: FieldFn,
    /// Outward normal derivative of `h`; required on Neumann/Robin faces.
    pub source_normal: Option<FaceFn>,
    /// Boundary data `g` (the value of `α u + β ∂_n u` on each face).
    pub boundary: FaceFn,
    /// `g'(t)`
    pub boundary_dt: FaceFn,
    /// Second tangential derivative of `g` along its face (2D only).
    pub boundary_tangential_dd: Option<FaceFn>,
    pub initial: Arc<dyn Fn(Point) -> f64 + Send + Sync>,
    pub exact: Option<FieldFn>,
    /// `u_t` of the exact solution.
    pub exact_dt: Option<FieldFn>,
    /// `Au` of the exact solution.
    pub exact_laplacian: Option<FieldFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("faces", &self.faces)
            .field("exact", &self.exact.is_some())
            .finish_non_exhaustive()
    }
}

/// Where the boundary value `u|∂Ω` in the trace of `f` comes from on
/// Neumann/Robin faces.
#[derive(Debug, Clone, Copy)]
pub enum TraceSource<'a> {
    /// The current numerical approximation.
    Numerical(&'a [f64]),
    /// The exact solution at the same time.
    Exact,
}

impl ProblemSpec {
    pub fn bc(&self, face: Face) -> BoundaryKind {
        self.faces.iter().find(|(f, _)| *f == face).map_or(BoundaryKind::Dirichlet, |(_, k)| *k)
    }

    /// Boundary kind at `x = 1` for 1D problems.
    pub fn right_bc(&self) -> BoundaryKind {
        self.bc(Face::Right)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// `f(t, u) = φ(u) + h(t, x)` at one point.
    pub fn f(&self, t: f64, p: Point, u: f64) -> f64 {
        (self.reaction)(u) + (self.source)(t, p)
    }

    pub fn exact_at(&self, t: f64, p: Point) -> Result<f64> {
        let u = self.exact.as_ref().ok_or_else(|| self.missing("exact solution"))?;
        Ok(u(t, p))
    }

    fn missing(&self, what: &str) -> Error {
        Error::Config(format!("problem {} has no {what}", self.name))
    }

    /// `P_h u(t)`
    pub fn project_exact(&self, grid: &Grid, t: f64) -> Result<Vec<f64>> {
        let u = self.exact.as_ref().ok_or_else(|| self.missing("exact solution"))?;
        Ok(grid.project(|p| u(t, p)))
    }

    pub fn project_initial(&self, grid: &Grid) -> Vec<f64> {
        grid.project(|p| (self.initial)(p))
    }

    /// `g(t)` on every boundary node.
    pub fn boundary_data(&self, grid: &Grid, t: f64) -> BoundaryValues {
        grid.boundary_values(|n| (self.boundary)(n.face, t, n.point))
    }

    /// `g'(t)` on every boundary node.
    pub fn boundary_data_dt(&self, grid: &Grid, t: f64) -> BoundaryValues {
        grid.boundary_values(|n| (self.boundary_dt)(n.face, t, n.point))
    }

    /// Second tangential derivative of `g` on every boundary node.
    pub fn boundary_tangential(&self, grid: &Grid, t: f64) -> Result<BoundaryValues> {
        let g = self.boundary_tangential_dd.as_ref().ok_or_else(|| self.missing("tangential boundary derivative"))?;
        Ok(grid.boundary_values(|n| g(n.face, t, n.point)))
    }

    /// Trace `∂f(t, u(t))` on every boundary node.
    ///
    /// Dirichlet nodes use data only: `φ(g) + h`. Neumann/Robin nodes use
    /// `α[φ(u_b) + h] + β[φ'(u_b)(g - α u_b)/β + ∂_n h]` with `u_b` taken from
    /// `source`.
    pub fn boundary_f_trace(&self, grid: &Grid, t: f64, source: TraceSource<'_>) -> Result<BoundaryValues> {
        if let TraceSource::Numerical(u) = source {
            check_len(grid.len(), u.len())?;
        }
        let mut values = Vec::with_capacity(grid.boundary().len());
        for node in grid.boundary() {
            values.push(self.node_trace(node, t, source)?);
        }
        Ok(BoundaryValues { values })
    }

    fn node_trace(&self, node: &BoundaryNode, t: f64, source: TraceSource<'_>) -> Result<f64> {
        let g = (self.boundary)(node.face, t, node.point);
        let h = (self.source)(t, node.point);
        if node.kind.is_dirichlet() {
            return Ok((self.reaction)(g) + h);
        }
        let (alpha, beta) = node.kind.coefficients();
        let dn_h = self.source_normal.as_ref().ok_or_else(|| self.missing("normal derivative of the source"))?;
        let ub = match source {
            TraceSource::Numerical(u) => {
                let idx = node.unknown.ok_or_else(|| {
                    Error::Config("Neumann/Robin trace needs the boundary node among the unknowns".into())
                })?;
                u[idx]
            }
            TraceSource::Exact => self.exact_at(t, node.point)?,
        };
        let dn_u = (g - alpha * ub) / beta;
        Ok(alpha * ((self.reaction)(ub) + h) + beta * ((self.reaction_du)(ub) * dn_u + dn_h(node.face, t, node.point)))
    }
}

/// Nodal evaluation of `f(t, U) = φ(U_i) + h(t, x_i)`.
#[derive(Debug, Clone)]
pub struct ReactionEvaluator {
    spec: ProblemSpec,
    nodes: Vec<Point>,
}

impl ReactionEvaluator {
    pub fn new(spec: &ProblemSpec, grid: &Grid) -> Self {
        Self { spec: spec.clone(), nodes: grid.nodes().to_vec() }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn eval_into(&self, t: f64, u: &[f64], out: &mut [f64]) {
        for ((o, &ui), p) in out.iter_mut().zip(u).zip(&self.nodes) {
            *o = self.spec.f(t, *p, ui);
        }
    }

    pub fn reaction(&self, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.nodes.len(), u.len())?;
        let mut out = vec![0.0; u.len()];
        self.eval_into(t, u, &mut out);
        Ok(out)
    }
}
