//! Property checks behind `expsplit verify`: stability and consistency of the
//! discretizations, and equivalences between independent code paths.

use crate::discretize::{
    build_1d, build_2d_5pt, build_2d_split, consistency, log_norm_inf, BoundaryKind, Direction, DiscreteOperator,
};
use crate::error::Result;
use crate::integrate::{Backend, IntegratorConfig, Method, Stepper};
use crate::linalg::{max_abs_diff, norm_max, BandedMatrix};
use crate::matfun::{expm_dense, KrylovConfig, PhiTable, TOL_PHI};
use crate::problems::{benchmark, ProblemSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// `max ‖e^{kA}‖_∞` over the given step sizes, from the dense exponential.
pub fn max_exp_norm(a: &BandedMatrix, ks: &[f64]) -> Result<f64> {
    let dense = a.to_dense();
    let mut worst: f64 = 0.0;
    for &k in ks {
        worst = worst.max(expm_dense(&dense.scaled(k))?.norm_inf());
    }
    Ok(worst)
}

/// Consistency errors `(ε_h, η_h)` of the 1D operator for `u = e^{x³}`.
pub fn consistency_1d(n_hat: usize, right: BoundaryKind) -> Result<(f64, f64)> {
    let op = build_1d(n_hat, right)?;
    let u = |x: f64| (x * x * x).exp();
    let upp = |x: f64| (6.0 * x + 9.0 * x.powi(4)) * u(x);
    let pu = op.grid.project(|p| u(p.x));
    let au = op.grid.project(|p| upp(p.x));
    let bu = op.grid.boundary_values(|n| {
        let (alpha, beta) = n.kind.coefficients();
        alpha * u(n.point.x) + beta * 3.0 * u(1.0)
    });
    consistency(&op, &pu, &au, &bu)
}

/// Least-squares slope of `log e` against `log h`.
pub fn loglog_slope(hs: &[f64], es: &[f64]) -> f64 {
    let n = hs.len() as f64;
    let xs: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = es.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Slopes of `(ε_h, η_h)` over `h ∈ {1/50, 1/100, 1/200}`.
pub fn consistency_slopes(right: BoundaryKind) -> Result<(f64, f64)> {
    let n_hats = [49, 99, 199];
    let hs: Vec<f64> = n_hats.iter().map(|n| 1.0 / (n + 1) as f64).collect();
    let mut eps = Vec::new();
    let mut eta = Vec::new();
    for n in n_hats {
        let (e, t) = consistency_1d(n, right)?;
        eps.push(e);
        eta.push(t);
    }
    Ok((loglog_slope(&hs, &eps), loglog_slope(&hs, &eta)))
}

/// Largest one-step difference between `a` and `b` from `P_h u(t)` over several `t`.
pub fn step_difference(spec: &ProblemSpec, h: f64, a: IntegratorConfig, b: IntegratorConfig) -> Result<f64> {
    let sa = Stepper::new(spec, h, a)?;
    let sb = Stepper::new(spec, h, b)?;
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.05, 0.13] {
        let u = spec.project_exact(sa.grid(), t)?;
        worst = worst.max(max_abs_diff(&sa.step(t, &u)?, &sb.step(t, &u)?));
    }
    Ok(worst)
}

/// Largest difference between two trajectories over `n` steps from `P_h u(0)`.
pub fn trajectory_difference(
    spec: &ProblemSpec,
    h: f64,
    a: IntegratorConfig,
    b: IntegratorConfig,
    n: usize,
) -> Result<f64> {
    let sa = Stepper::new(spec, h, a)?;
    let sb = Stepper::new(spec, h, b)?;
    let mut ua = spec.project_exact(sa.grid(), 0.0)?;
    let mut ub = ua.clone();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let t = i as f64 * a.k;
        ua = sa.step(t, &ua)?;
        ub = sb.step(t, &ub)?;
        worst = worst.max(max_abs_diff(&ua, &ub));
    }
    Ok(worst)
}

/// `(Lie, Strang)` distances between the split exponentials and `e^{kA}` of
/// the five-point matrix, applied to a fixed vector.
pub fn split_sandwich_error(n_hat: usize, k: f64) -> Result<(f64, f64)> {
    let split = build_2d_split(n_hat)?;
    let full = build_2d_5pt(n_hat)?;
    let a1 = split.assemble(Direction::X).to_dense();
    let a2 = split.assemble(Direction::Y).to_dense();
    let e = expm_dense(&full.a.to_dense().scaled(k))?;
    let e1 = expm_dense(&a1.scaled(k))?;
    let e1h = expm_dense(&a1.scaled(0.5 * k))?;
    let e2 = expm_dense(&a2.scaled(k))?;
    let u = full.grid.project(|p| 1.0 + p.x * p.y + (3.0 * p.x).sin());
    let want = e.mat_vec(&u)?;
    let lie = e2.mat_vec(&e1.mat_vec(&u)?)?;
    let strang = e1h.mat_vec(&e2.mat_vec(&e1h.mat_vec(&u)?)?)?;
    let scale = norm_max(&want);
    Ok((max_abs_diff(&lie, &want) / scale, max_abs_diff(&strang, &want) / scale))
}

fn check(name: &'static str, measured: Result<(bool, String)>) -> Check {
    match measured {
        Ok((passed, detail)) => Check { name, passed, detail },
        Err(e) => Check { name, passed: false, detail: format!("error: {e}") },
    }
}

fn operators() -> Result<Vec<(&'static str, DiscreteOperator)>> {
    Ok(vec![
        ("1d-dirichlet", build_1d(99, BoundaryKind::Dirichlet)?),
        ("1d-neumann", build_1d(99, BoundaryKind::Neumann)?),
        ("2d-five-point", build_2d_5pt(19)?),
    ])
}

/// Runs every property check.
pub fn run_all() -> Vec<Check> {
    let ks = [1e-4, 1e-3, 1e-2, 1e-1];
    let mut out = Vec::new();

    out.push(check(
        "exponential is a max-norm contraction",
        (|| {
            let mut worst: f64 = 0.0;
            for (_, op) in operators()? {
                worst = worst.max(max_exp_norm(&op.a, &ks)?);
            }
            let split = build_2d_split(19)?;
            worst = worst.max(max_exp_norm(&split.line_operator().a, &ks)?);
            Ok((worst <= 1.0 + 1e-12, format!("max ‖e^(kA)‖∞ = {worst:.15}")))
        })(),
    ));

    out.push(check(
        "logarithmic norm vanishes",
        (|| {
            let mut detail = Vec::new();
            let mut ok = true;
            for (name, op) in operators()? {
                let mu = log_norm_inf(&op.a);
                ok &= mu == 0.0;
                detail.push(format!("{name}: {mu}"));
            }
            Ok((ok, detail.join(", ")))
        })(),
    ));

    for (name, right, eps_range) in [
        ("Dirichlet consistency is second order", BoundaryKind::Dirichlet, (1.9, 2.1)),
        ("Neumann consistency orders", BoundaryKind::Neumann, (0.9, 1.1)),
    ] {
        out.push(check(
            name,
            consistency_slopes(right).map(|(e, t)| {
                let ok = (eps_range.0..=eps_range.1).contains(&e) && (1.9..=2.1).contains(&t);
                (ok, format!("eps slope {e:.4}, eta slope {t:.4}"))
            }),
        ));
    }

    out.push(check(
        "phi recurrence",
        (|| {
            let op = build_1d(99, BoundaryKind::Neumann)?;
            let mut worst: f64 = 0.0;
            for k in ks {
                worst = worst.max(PhiTable::build(&op.a, k)?.recurrence_residual(&op.a));
            }
            Ok((worst <= TOL_PHI, format!("max residual {worst:e}")))
        })(),
    ));

    out.push(check(
        "corrected equals standard without boundary data",
        (|| {
            let spec = benchmark("sine_homogeneous").expect("catalog entry");
            let lie = step_difference(
                &spec,
                0.01,
                IntegratorConfig::new(Method::LieCorrected, 1e-3),
                IntegratorConfig::new(Method::LieStandard, 1e-3),
            )?;
            let strang = step_difference(
                &spec,
                0.01,
                IntegratorConfig::new(Method::StrangCorrected, 1e-3),
                IntegratorConfig::new(Method::StrangStandard, 1e-3),
            )?;
            let worst = lie.max(strang);
            Ok((worst <= 1e-12, format!("Lie {lie:e}, Strang {strang:e}")))
        })(),
    ));

    out.push(check(
        "Krylov matches dense",
        (|| {
            let spec = benchmark("p1_dirichlet").expect("catalog entry");
            let dense = IntegratorConfig::new(Method::LieCorrected, 2e-3);
            let kry = dense.with_backend(Backend::Krylov(KrylovConfig::default()));
            let d = trajectory_difference(&spec, 0.01, dense, kry, 100)?;
            Ok((d <= 1e-7, format!("max trajectory difference {d:e}")))
        })(),
    ));

    out.push(check(
        "split exponentials commute",
        split_sandwich_error(19, 1e-2).map(|(l, s)| (l.max(s) <= 1e-10, format!("Lie {l:e}, Strang {s:e}"))),
    ));

    out
}
