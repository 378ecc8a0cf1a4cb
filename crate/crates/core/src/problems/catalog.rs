use std::f64::consts::PI;
use std::sync::Arc;

use crate::discretize::{BoundaryKind, Face, Point};

use super::ProblemSpec;

pub const BENCHMARK_NAMES: [&str; 4] = ["p1_dirichlet", "p1_neumann", "p2_dirichlet", "sine_homogeneous"];

pub fn benchmark_catalog() -> Vec<ProblemSpec> {
    BENCHMARK_NAMES.iter().filter_map(|n| benchmark(n)).collect()
}

/// Looks up a catalog entry; `p2` is accepted as a short name for `p2_dirichlet`.
pub fn benchmark(name: &str) -> Option<ProblemSpec> {
    match name {
        "p1_dirichlet" | "p1" => Some(p1(false)),
        "p1_neumann" => Some(p1(true)),
        "p2_dirichlet" | "p2" => Some(p2()),
        "sine_homogeneous" => Some(sine_homogeneous()),
        _ => None,
    }
}

fn square(u: f64) -> f64 {
    u * u
}

fn twice(u: f64) -> f64 {
    2.0 * u
}

/// `u = e^{t+x³}` on `[0, 1]`.
fn p1(neumann: bool) -> ProblemSpec {
    let e = |t: f64, x: f64| (t + x.powi(3)).exp();
    let source = move |t: f64, p: Point| {
        let x = p.x;
        let ex = e(t, x);
        -ex * (9.0 * x.powi(4) + 6.0 * x + ex - 1.0)
    };
    let source_x = move |t: f64, x: f64| {
        let ex = e(t, x);
        let x2 = x * x;
        -3.0 * x2 * ex * (9.0 * x2 * x2 + 6.0 * x + ex - 1.0) - ex * (36.0 * x2 * x + 6.0 + 3.0 * x2 * ex)
    };
    // Both faces carry time factor e^t, so g' = g.
    let boundary = move |face: Face, t: f64, _p: Point| match face {
        Face::Left => t.exp(),
        _ if neumann => 3.0 * (1.0 + t).exp(),
        _ => (1.0 + t).exp(),
    };
    let (name, faces) = if neumann {
        ("p1_neumann", vec![(Face::Left, BoundaryKind::Dirichlet), (Face::Right, BoundaryKind::Neumann)])
    } else {
        ("p1_dirichlet", vec![(Face::Left, BoundaryKind::Dirichlet), (Face::Right, BoundaryKind::Dirichlet)])
    };
    ProblemSpec {
        name: name.into(),
        dim: 1,
        faces,
        reaction: Arc::new(square),
        reaction_du: Arc::new(twice),
        source: Arc::new(source),
        source_normal: Some(Arc::new(move |face, t, p| match face {
            Face::Left => -source_x(t, p.x),
            _ => source_x(t, p.x),
        })),
        boundary: Arc::new(boundary),
        boundary_dt: Arc::new(boundary),
        boundary_tangential_dd: None,
        initial: Arc::new(move |p| e(0.0, p.x)),
        exact: Some(Arc::new(move |t, p| e(t, p.x))),
        exact_dt: Some(Arc::new(move |t, p| e(t, p.x))),
        exact_laplacian: Some(Arc::new(move |t, p| (6.0 * p.x + 9.0 * p.x.powi(4)) * e(t, p.x))),
    }
}

/// `u = e^{t+x³+y³}` on the unit square, Dirichlet everywhere.
fn p2() -> ProblemSpec {
    let e = |t: f64, p: Point| (t + p.x.powi(3) + p.y.powi(3)).exp();
    let curv = |s: f64| 6.0 * s + 9.0 * s.powi(4);
    let source = move |t: f64, p: Point| {
        let ex = e(t, p);
        -ex * (9.0 * (p.x.powi(4) + p.y.powi(4)) + 6.0 * (p.x + p.y) + ex - 1.0)
    };
    let exact = move |_face: Face, t: f64, p: Point| e(t, p);
    ProblemSpec {
        name: "p2_dirichlet".into(),
        dim: 2,
        faces: Vec::new(),
        reaction: Arc::new(square),
        reaction_du: Arc::new(twice),
        source: Arc::new(source),
        source_normal: None,
        boundary: Arc::new(exact),
        boundary_dt: Arc::new(exact),
        boundary_tangential_dd: Some(Arc::new(move |face: Face, t, p| {
            let s = if face.is_x_face() { p.y } else { p.x };
            curv(s) * e(t, p)
        })),
        initial: Arc::new(move |p| e(0.0, p)),
        exact: Some(Arc::new(e)),
        exact_dt: Some(Arc::new(e)),
        exact_laplacian: Some(Arc::new(move |t, p| (curv(p.x) + curv(p.y)) * e(t, p))),
    }
}

/// `u = e^t sin(πx)` with homogeneous Dirichlet data and vanishing boundary
/// source, so every boundary term of the corrected schemes is zero.
fn sine_homogeneous() -> ProblemSpec {
    let u = |t: f64, x: f64| t.exp() * (PI * x).sin();
    ProblemSpec {
        name: "sine_homogeneous".into(),
        dim: 1,
        faces: vec![(Face::Left, BoundaryKind::Dirichlet), (Face::Right, BoundaryKind::Dirichlet)],
        reaction: Arc::new(square),
        reaction_du: Arc::new(twice),
        source: Arc::new(move |t, p| {
            let v = u(t, p.x);
            (1.0 + PI * PI) * v - v * v
        }),
        source_normal: None,
        boundary: Arc::new(|_, _, _| 0.0),
        boundary_dt: Arc::new(|_, _, _| 0.0),
        boundary_tangential_dd: None,
        initial: Arc::new(move |p| u(0.0, p.x)),
        exact: Some(Arc::new(move |t, p| u(t, p.x))),
        exact_dt: Some(Arc::new(move |t, p| u(t, p.x))),
        exact_laplacian: Some(Arc::new(move |t, p| -PI * PI * u(t, p.x))),
    }
}
