//! One-step maps `U_n -> U_{n+1}` for the corrected and standard splittings.
//!
//! Every method alternates the linear flow `U' = A_{h,0}U + (boundary terms)`,
//! solved exactly with `e^{τA}` and `φ_j(τA)`, with one classical RK4 step
//! for the nonlinear part.

mod flow;
mod stepper;

pub use stepper::Stepper;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matfun::KrylovConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    LieCorrected,
    StrangCorrected,
    LieStandard,
    StrangStandard,
    LieSplit2D,
    StrangSplit2D,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::LieCorrected,
        Method::StrangCorrected,
        Method::LieStandard,
        Method::StrangStandard,
        Method::LieSplit2D,
        Method::StrangSplit2D,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::LieCorrected => "lie",
            Method::StrangCorrected => "strang",
            Method::LieStandard => "lie-standard",
            Method::StrangStandard => "strang-standard",
            Method::LieSplit2D => "lie-split2d",
            Method::StrangSplit2D => "strang-split2d",
        }
    }

    pub fn is_split_2d(self) -> bool {
        matches!(self, Method::LieSplit2D | Method::StrangSplit2D)
    }

    pub fn is_strang(self) -> bool {
        matches!(self, Method::StrangCorrected | Method::StrangStandard | Method::StrangSplit2D)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('_', "-");
        let alias = match key.as_str() {
            "lie-corrected" => "lie",
            "strang-corrected" => "strang",
            other => other,
        };
        Method::ALL
            .into_iter()
            .find(|m| m.name() == alias)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method `{s}`")))
    }
}

/// How `e^{τA}` and `φ_j(τA)` are applied for the unsplit operator.
///
/// Dimension-split methods ignore this: their blocks are small enough to be
/// tabulated densely.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Backend {
    DensePrecomputed,
    Krylov(KrylovConfig),
}

/// Source of the boundary value in the Neumann/Robin trace of `f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TraceMode {
    /// The current numerical solution.
    #[default]
    Numeric,
    Exact,
}

/// Starting vector of the second stage of the Lie double splitting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SplitDisplay {
    /// `e^{kA_2}` acts on the output of the first stage.
    #[default]
    Chained,
    /// `e^{kA_2}` acts on `U_n`, the written form of the fully discrete stage.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub k: f64,
    pub backend: Backend,
    pub trace: TraceMode,
    pub split_display: SplitDisplay,
}

impl IntegratorConfig {
    pub fn new(method: Method, k: f64) -> Self {
        Self {
            method,
            k,
            backend: Backend::DensePrecomputed,
            trace: TraceMode::default(),
            split_display: SplitDisplay::default(),
        }
    }

    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn with_trace(mut self, trace: TraceMode) -> Self {
        self.trace = trace;
        self
    }

    pub fn with_split_display(mut self, display: SplitDisplay) -> Self {
        self.split_display = display;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Config(format!("time step {} must be positive", self.k)));
        }
        if let Backend::Krylov(cfg) = self.backend {
            cfg.validate()?;
        }
        Ok(())
    }
}

/// One classical RK4 step of `y' = F(t, y)` over `[t0, t0 + τ]`.
///
/// `f(t, y, out)` writes `F(t, y)` into `out`.
pub fn rk4_step<F>(mut f: F, t0: f64, y0: &[f64], tau: f64) -> Result<Vec<f64>>
where
    F: FnMut(f64, &[f64], &mut [f64]) -> Result<()>,
{
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!("RK4 step {tau} must be positive")));
    }
    let n = y0.len();
    let mut k1 = vec![0.0; n];
    let mut k2 = vec![0.0; n];
    let mut k3 = vec![0.0; n];
    let mut k4 = vec![0.0; n];
    let mut y = vec![0.0; n];
    let stage = |y: &mut [f64], k: &[f64], c: f64| {
        for ((yi, y0i), ki) in y.iter_mut().zip(y0).zip(k) {
            *yi = y0i + c * ki;
        }
    };

    f(t0, y0, &mut k1)?;
    stage(&mut y, &k1, 0.5 * tau);
    f(t0 + 0.5 * tau, &y, &mut k2)?;
    stage(&mut y, &k2, 0.5 * tau);
    f(t0 + 0.5 * tau, &y, &mut k3)?;
    stage(&mut y, &k3, tau);
    f(t0 + tau, &y, &mut k4)?;
    for i in 0..n {
        y[i] = y0[i] + tau / 6.0 * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]);
    }
    if [&k1, &k2, &k3, &k4, &y].iter().any(|v| v.iter().any(|x| !x.is_finite())) {
        return Err(Error::NonFinite("RK4 stage"));
    }
    Ok(y)
}
