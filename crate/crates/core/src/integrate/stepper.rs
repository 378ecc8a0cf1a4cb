use crate::discretize::{
    build_1d, build_2d_5pt, build_2d_split, interior_count, BoundaryValues, Direction, DiscreteOperator, Grid,
    SplitOperator2D,
};
use crate::error::{check_len, Error, Result};
use crate::problems::{ProblemSpec, ReactionEvaluator, TraceSource};

use super::flow::{LineFlow, LinearFlow};
use super::{rk4_step, Backend, IntegratorConfig, Method, SplitDisplay, TraceMode};

#[derive(Debug)]
enum Kind {
    Full { op: DiscreteOperator, flow: LinearFlow },
    Split { op: SplitOperator2D, full: LineFlow, half: Option<LineFlow> },
}

/// Everything one step needs: operator, precomputed linear flows, problem data.
///
/// Steps are pure in `(t_n, U_n)`, so one stepper can serve local and global
/// error runs alike.
#[derive(Debug)]
pub struct Stepper {
    spec: ProblemSpec,
    cfg: IntegratorConfig,
    kind: Kind,
    reaction: ReactionEvaluator,
}

fn n_hat_for(h: f64) -> Result<usize> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::Config(format!("mesh width {h} must lie in (0, 1)")));
    }
    let inv = 1.0 / h;
    if (inv - inv.round()).abs() > 1e-8 * inv {
        return Err(Error::Config(format!("mesh width {h} is not 1/(N+1) for an integer N")));
    }
    Ok(interior_count(h))
}

impl Stepper {
    /// Builds the discretization of `spec` with mesh width `h` matching the method.
    pub fn new(spec: &ProblemSpec, h: f64, cfg: IntegratorConfig) -> Result<Self> {
        let n_hat = n_hat_for(h)?;
        match (spec.dim, cfg.method.is_split_2d()) {
            (1, false) => Self::from_operator(spec, build_1d(n_hat, spec.right_bc())?, cfg),
            (2, false) => Self::from_operator(spec, build_2d_5pt(n_hat)?, cfg),
            (2, true) => Self::from_split(spec, build_2d_split(n_hat)?, cfg),
            (1, true) => Err(Error::Config(format!("{} needs a two-dimensional problem", cfg.method))),
            (d, _) => Err(Error::Config(format!("unsupported dimension {d}"))),
        }
    }

    pub fn from_operator(spec: &ProblemSpec, op: DiscreteOperator, cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.method.is_split_2d() {
            return Err(Error::Config(format!("{} needs a split operator", cfg.method)));
        }
        let flow = match cfg.backend {
            Backend::DensePrecomputed => LinearFlow::dense(&op.a, cfg.k)?,
            Backend::Krylov(kc) => LinearFlow::krylov(&op.a, cfg.k, kc)?,
        };
        let reaction = ReactionEvaluator::new(spec, &op.grid);
        Ok(Self { spec: spec.clone(), cfg, kind: Kind::Full { op, flow }, reaction })
    }

    pub fn from_split(spec: &ProblemSpec, op: SplitOperator2D, cfg: IntegratorConfig) -> Result<Self> {
        cfg.validate()?;
        if !cfg.method.is_split_2d() {
            return Err(Error::Config(format!("{} does not use the dimension splitting", cfg.method)));
        }
        if spec.dim != 2 || spec.faces.iter().any(|(_, k)| !k.is_dirichlet()) {
            return Err(Error::Config("dimension splitting supports 2D Dirichlet problems only".into()));
        }
        let full = LineFlow::new(&op, cfg.k)?;
        let half = match cfg.method {
            Method::StrangSplit2D => Some(LineFlow::new(&op, 0.5 * cfg.k)?),
            _ => None,
        };
        let reaction = ReactionEvaluator::new(spec, op.grid());
        Ok(Self { spec: spec.clone(), cfg, kind: Kind::Split { op, full, half }, reaction })
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn k(&self) -> f64 {
        self.cfg.k
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn grid(&self) -> &Grid {
        match &self.kind {
            Kind::Full { op, .. } => &op.grid,
            Kind::Split { op, .. } => op.grid(),
        }
    }

    /// The unsplit operator, when the method uses one.
    pub fn operator(&self) -> Option<&DiscreteOperator> {
        match &self.kind {
            Kind::Full { op, .. } => Some(op),
            Kind::Split { .. } => None,
        }
    }

    pub fn len(&self) -> usize {
        self.grid().len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid().is_empty()
    }

    /// `U_{n+1}` from `U_n` at `t_n`.
    pub fn step(&self, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        check_len(self.len(), u.len())?;
        match (&self.kind, self.cfg.method) {
            (Kind::Full { op, flow }, Method::LieCorrected) => self.lie_corrected(op, flow, t, u),
            (Kind::Full { op, flow }, Method::StrangCorrected) => self.strang_corrected(op, flow, t, u),
            (Kind::Full { op, flow }, Method::LieStandard) => self.lie_standard(op, flow, t, u),
            (Kind::Full { op, flow }, Method::StrangStandard) => self.strang_standard(op, flow, t, u),
            (Kind::Split { op, full, .. }, Method::LieSplit2D) => self.lie_split(op, full, t, u),
            (Kind::Split { op, full, half: Some(half) }, Method::StrangSplit2D) => {
                self.strang_split(op, full, half, t, u)
            }
            _ => Err(Error::Config(format!("{} does not match the operator", self.cfg.method))),
        }
    }

    fn trace_source<'a>(&self, u: &'a [f64]) -> TraceSource<'a> {
        match self.cfg.trace {
            TraceMode::Numeric => TraceSource::Numerical(u),
            TraceMode::Exact => TraceSource::Exact,
        }
    }

    /// One RK4 step of `U' = f(t, U)` over `[t0, t0 + τ]`.
    fn reaction_flow(&self, t0: f64, u: &[f64], tau: f64) -> Result<Vec<f64>> {
        rk4_step(
            |s, y, out| {
                self.reaction.eval_into(s, y, out);
                Ok(())
            },
            t0,
            u,
            tau,
        )
    }

    /// One RK4 step of `U' = C_h g(t) + f(t, U)`.
    fn forced_reaction_flow(&self, op: &DiscreteOperator, t0: f64, u: &[f64], tau: f64) -> Result<Vec<f64>> {
        rk4_step(
            |s, y, out| {
                self.reaction.eval_into(s, y, out);
                let cg = op.injection.apply(&self.spec.boundary_data(&op.grid, s))?;
                for (o, c) in out.iter_mut().zip(cg) {
                    *o += c;
                }
                Ok(())
            },
            t0,
            u,
            tau,
        )
    }

    /// `(g, g' - ∂f, ∂f)` at `t`.
    fn boundary_terms(
        &self,
        grid: &Grid,
        t: f64,
        u: &[f64],
    ) -> Result<(BoundaryValues, BoundaryValues, BoundaryValues)> {
        let g = self.spec.boundary_data(grid, t);
        let df = self.spec.boundary_f_trace(grid, t, self.trace_source(u))?;
        let rate = self.spec.boundary_data_dt(grid, t).add_scaled(-1.0, &df);
        Ok((g, rate, df))
    }

    fn lie_corrected(&self, op: &DiscreteOperator, flow: &LinearFlow, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let (g, rate, _) = self.boundary_terms(&op.grid, t, u)?;
        let v = flow.apply(u, &op.injection.apply(&g)?, &op.injection.apply(&rate)?)?;
        self.reaction_flow(t, &v, self.cfg.k)
    }

    fn strang_corrected(&self, op: &DiscreteOperator, flow: &LinearFlow, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let k = self.cfg.k;
        let (g, rate, df) = self.boundary_terms(&op.grid, t, u)?;
        let v = self.reaction_flow(t, u, 0.5 * k)?;
        let start = g.add_scaled(0.5 * k, &df);
        let w = flow.apply(&v, &op.injection.apply(&start)?, &op.injection.apply(&rate)?)?;
        self.reaction_flow(t + 0.5 * k, &w, 0.5 * k)
    }

    fn lie_standard(&self, op: &DiscreteOperator, flow: &LinearFlow, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let zero = vec![0.0; u.len()];
        let v = flow.apply(u, &zero, &zero)?;
        self.forced_reaction_flow(op, t, &v, self.cfg.k)
    }

    fn strang_standard(&self, op: &DiscreteOperator, flow: &LinearFlow, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let k = self.cfg.k;
        let zero = vec![0.0; u.len()];
        let v = self.forced_reaction_flow(op, t, u, 0.5 * k)?;
        let w = flow.apply(&v, &zero, &zero)?;
        self.forced_reaction_flow(op, t + 0.5 * k, &w, 0.5 * k)
    }

    /// Face traces of `u`, `A_1 u`, `A_2 u` and `f` from data only.
    ///
    /// On a face `x = const`, `A_2 u = u_yy` is the tangential second
    /// derivative of `g` and `A_1 u = g' - u_yy - f`; symmetrically on `y = const`.
    fn split_traces(&self, grid: &Grid, t: f64, u: &[f64]) -> Result<SplitTraces> {
        let (g, rate, df) = self.boundary_terms(grid, t, u)?;
        let tangential = self.spec.boundary_tangential(grid, t)?;
        let mut a1u = tangential.clone();
        let mut a2u = tangential.clone();
        for (i, node) in grid.boundary().iter().enumerate() {
            let normal = rate.values[i] - tangential.values[i];
            if node.face.is_x_face() {
                a1u.values[i] = normal;
            } else {
                a2u.values[i] = normal;
            }
        }
        Ok(SplitTraces { g, df, a1u, a2u })
    }

    fn lie_split(&self, op: &SplitOperator2D, flow: &LineFlow, t: f64, u: &[f64]) -> Result<Vec<f64>> {
        let k = self.cfg.k;
        let tr = self.split_traces(op.grid(), t, u)?;
        let c1 = op.injection(Direction::X);
        let c2 = op.injection(Direction::Y);
        let z = flow.apply(op, Direction::X, u, &c1.apply(&tr.g)?, &c1.apply(&tr.a1u)?)?;
        let start = match self.cfg.split_display {
            SplitDisplay::Chained => &z,
            SplitDisplay::Literal => u,
        };
        let r = flow.apply(op, Direction::Y, start, &c2.apply(&tr.g.add_scaled(k, &tr.a1u))?, &c2.apply(&tr.a2u)?)?;
        self.reaction_flow(t, &r, k)
    }

    fn strang_split(
        &self,
        op: &SplitOperator2D,
        full: &LineFlow,
        half: &LineFlow,
        t: f64,
        u: &[f64],
    ) -> Result<Vec<f64>> {
        let k = self.cfg.k;
        debug_assert_eq!(half.tau(), 0.5 * k);
        let tr = self.split_traces(op.grid(), t, u)?;
        let c1 = op.injection(Direction::X);
        let c2 = op.injection(Direction::Y);
        let first1 = c1.apply(&tr.a1u)?;

        let v = self.reaction_flow(t, u, 0.5 * k)?;
        let b = tr.g.add_scaled(0.5 * k, &tr.df);
        let r = half.apply(op, Direction::X, &v, &c1.apply(&b)?, &first1)?;
        let b = b.add_scaled(0.5 * k, &tr.a1u);
        let phi = full.apply(op, Direction::Y, &r, &c2.apply(&b)?, &c2.apply(&tr.a2u)?)?;
        let b = b.add_scaled(k, &tr.a2u);
        let mu = half.apply(op, Direction::X, &phi, &c1.apply(&b)?, &first1)?;
        self.reaction_flow(t + 0.5 * k, &mu, 0.5 * k)
    }
}

struct SplitTraces {
    g: BoundaryValues,
    df: BoundaryValues,
    /// `A_1 u` on every boundary node.
    a1u: BoundaryValues,
    a2u: BoundaryValues,
}
