//! Local and global error studies over step-size ladders.

mod report;
mod tables;
pub mod verify;

pub use report::{emit_report, parse_csv, ErrorReport, ErrorRow, Format};
pub use tables::{table_plan, TABLE_COUNT};

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::integrate::{Backend, IntegratorConfig, Method, SplitDisplay, Stepper, TraceMode};
use crate::linalg::max_abs_diff;
use crate::problems::{benchmark, ProblemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Local,
    Global,
    Both,
}

impl ErrorKind {
    pub fn local(self) -> bool {
        matches!(self, ErrorKind::Local | ErrorKind::Both)
    }

    pub fn global(self) -> bool {
        matches!(self, ErrorKind::Global | ErrorKind::Both)
    }
}

impl FromStr for ErrorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "local" => Ok(ErrorKind::Local),
            "global" => Ok(ErrorKind::Global),
            "both" => Ok(ErrorKind::Both),
            _ => Err(Error::InvalidArgument(format!("unknown error kind `{s}`"))),
        }
    }
}

/// How the one-step errors of a local-error run are reduced to one number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    Max,
    Mean,
    /// The error of the step from `t = 0` alone.
    First,
}

impl FromStr for Aggregation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "max" => Ok(Aggregation::Max),
            "mean" => Ok(Aggregation::Mean),
            "first" => Ok(Aggregation::First),
            _ => Err(Error::InvalidArgument(format!("unknown aggregation `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub problem: String,
    pub method: Method,
    pub h: f64,
    /// Strictly decreasing step sizes.
    pub ks: Vec<f64>,
    pub t_end: f64,
    pub backend: Backend,
    pub errors: ErrorKind,
    pub trace: TraceMode,
    pub split_display: SplitDisplay,
    pub aggregation: Aggregation,
}

impl ExperimentPlan {
    pub fn new(problem: &str, method: Method, h: f64, ks: Vec<f64>, t_end: f64) -> Self {
        Self {
            problem: problem.into(),
            method,
            h,
            ks,
            t_end,
            backend: Backend::DensePrecomputed,
            errors: ErrorKind::Both,
            trace: TraceMode::default(),
            split_display: SplitDisplay::default(),
            aggregation: Aggregation::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if benchmark(&self.problem).is_none() {
            return Err(Error::Config(format!("unknown problem `{}`", self.problem)));
        }
        if self.ks.is_empty() || self.ks.iter().any(|k| !(*k > 0.0)) {
            return Err(Error::Config("step sizes must be positive and non-empty".into()));
        }
        if self.ks.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Config("step sizes must be strictly decreasing".into()));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!("horizon {} must be non-negative", self.t_end)));
        }
        Ok(())
    }

    pub fn config(&self, k: f64) -> IntegratorConfig {
        IntegratorConfig::new(self.method, k)
            .with_backend(self.backend)
            .with_trace(self.trace)
            .with_split_display(self.split_display)
    }

    pub fn spec(&self) -> Result<ProblemSpec> {
        benchmark(&self.problem).ok_or_else(|| Error::Config(format!("unknown problem `{}`", self.problem)))
    }
}

/// Full steps of size `k` in `[0, t_end]` and the length of a final partial step.
fn schedule(k: f64, t_end: f64) -> (usize, f64) {
    let n = (t_end / k * (1.0 + 1e-12)).floor() as usize;
    let rest = t_end - n as f64 * k;
    if rest > 1e-9 * k {
        (n, rest)
    } else {
        (n, 0.0)
    }
}

fn at_step(step: usize, time: f64) -> impl FnOnce(Error) -> Error {
    move |e| Error::Step { step, time, source: Box::new(e) }
}

/// `‖P_h u(T) - U_{h,n}‖_∞` starting from `U_{h,0} = P_h u(0)`.
///
/// A final partial step closes the interval when `T` is not a multiple of `k`.
pub fn run_global(spec: &ProblemSpec, h: f64, cfg: IntegratorConfig, t_end: f64) -> Result<f64> {
    let stepper = Stepper::new(spec, h, cfg)?;
    let grid = stepper.grid().clone();
    let mut u = spec.project_exact(&grid, 0.0)?;
    let (n, rest) = schedule(cfg.k, t_end);
    for i in 0..n {
        let t = i as f64 * cfg.k;
        u = stepper.step(t, &u).map_err(at_step(i, t))?;
    }
    if rest > 0.0 {
        let last = Stepper::new(spec, h, IntegratorConfig { k: rest, ..cfg })?;
        let t = n as f64 * cfg.k;
        u = last.step(t, &u).map_err(at_step(n, t))?;
    }
    Ok(max_abs_diff(&spec.project_exact(&grid, t_end)?, &u))
}

/// One step from `P_h u(t_n)` for every full step `n` in `[0, T)`, compared
/// with `P_h u(t_{n+1})` and aggregated.
pub fn run_local(spec: &ProblemSpec, h: f64, cfg: IntegratorConfig, t_end: f64, agg: Aggregation) -> Result<f64> {
    let stepper = Stepper::new(spec, h, cfg)?;
    let grid = stepper.grid();
    let (n, _) = schedule(cfg.k, t_end);
    let n = if agg == Aggregation::First { n.min(1) } else { n };
    let mut max: f64 = 0.0;
    let mut sum = 0.0;
    let mut next = spec.project_exact(grid, 0.0)?;
    for i in 0..n {
        let t = i as f64 * cfg.k;
        let exact = next;
        next = spec.project_exact(grid, t + cfg.k)?;
        let u = stepper.step(t, &exact).map_err(at_step(i, t))?;
        let e = max_abs_diff(&next, &u);
        max = max.max(e);
        sum += e;
    }
    Ok(match agg {
        Aggregation::Max | Aggregation::First => max,
        Aggregation::Mean if n > 0 => sum / n as f64,
        Aggregation::Mean => 0.0,
    })
}

/// `log2(e_i / e_{i+1})` between neighbours; `None` when either error is not positive.
pub fn estimate_orders(errors: &[f64]) -> Vec<Option<f64>> {
    errors.windows(2).map(|w| if w[0] > 0.0 && w[1] > 0.0 { Some((w[0] / w[1]).log2()) } else { None }).collect()
}

/// Runs every ladder entry of `plan`.
pub fn run_plan(plan: &ExperimentPlan) -> Result<ErrorReport> {
    plan.validate()?;
    let spec = plan.spec()?;
    let mut local = Vec::new();
    let mut global = Vec::new();
    for &k in &plan.ks {
        let cfg = plan.config(k);
        if plan.errors.local() {
            local.push(run_local(&spec, plan.h, cfg, plan.t_end, plan.aggregation)?);
        }
        if plan.errors.global() {
            global.push(run_global(&spec, plan.h, cfg, plan.t_end)?);
        }
    }
    Ok(ErrorReport::new(
        &plan.ks,
        plan.errors.local().then_some(local.as_slice()),
        plan.errors.global().then_some(global.as_slice()),
    ))
}
