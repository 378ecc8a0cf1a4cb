//! Krylov approximation of `e^{τA}u_0 + Σ_j τ^j φ_j(τA) u_j`.
//!
//! The linear combination is the exact solution at `τ` of the augmented system
//!
//! ```text
//!     d/ds [x]   [A  ηW] [x]        [x(0)]   [u_0       ]
//!          [y] = [0   J] [y],       [y(0)] = [e_p / η   ]
//! ```
//!
//! with `W = [u_p, …, u_1]` and `J` the nilpotent shift, so a single Arnoldi
//! decomposition serves every `φ_j`. The decomposition is built for the
//! shift-and-invert operator `(I - γÃ)^{-1}`, whose convergence does not
//! degrade with `τ||A||` the way polynomial Krylov does on stiff operators.
//! Only `I - γA` has to be factored; the augmented block is triangular.

use std::sync::OnceLock;

use crate::error::{check_len, Error, Result};
use crate::linalg::{BandedLu, BandedMatrix, DenseMatrix};

use super::expm::expm_dense;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovConfig {
    /// Maximum Krylov subspace dimension.
    pub max_dim: usize,
    /// Relative tolerance on the successive-iterate error estimate.
    pub tol: f64,
    /// Split the step in halves when `max_dim` is reached instead of failing.
    pub restart: bool,
    /// Shift `γ = shift_ratio · τ`.
    pub shift_ratio: f64,
}

impl Default for KrylovConfig {
    fn default() -> Self {
        Self { max_dim: 60, tol: 1e-10, restart: true, shift_ratio: 0.1 }
    }
}

impl KrylovConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_dim < 2 {
            return Err(Error::Config(format!("Krylov dimension {} must be at least 2", self.max_dim)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("Krylov tolerance {} must be positive", self.tol)));
        }
        if !(self.shift_ratio > 0.0) {
            return Err(Error::Config(format!("shift ratio {} must be positive", self.shift_ratio)));
        }
        Ok(())
    }
}

const MAX_HALVINGS: usize = 8;

/// Reusable propagator for one operator and one step size.
#[derive(Debug)]
pub struct KrylovPropagator {
    a: BandedMatrix,
    tau: f64,
    cfg: KrylovConfig,
    /// LU of `I - γA` for the step `τ / 2^level`.
    factors: [OnceLock<BandedLu>; MAX_HALVINGS + 1],
}

impl KrylovPropagator {
    pub fn new(a: &BandedMatrix, tau: f64, cfg: KrylovConfig) -> Result<Self> {
        cfg.validate()?;
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("step {tau} must be positive")));
        }
        let p = Self { a: a.clone(), tau, cfg, factors: Default::default() };
        p.factor(0)?;
        Ok(p)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    fn factor(&self, level: usize) -> Result<&BandedLu> {
        if let Some(f) = self.factors[level].get() {
            return Ok(f);
        }
        let gamma = self.cfg.shift_ratio * self.tau / (1u64 << level) as f64;
        let lu = self.a.shifted(1.0, -gamma).lu()?;
        Ok(self.factors[level].get_or_init(|| lu))
    }

    /// `e^{τA}u_0 + Σ_{j≥1} τ^j φ_j(τA) terms[j-1]`.
    pub fn apply(&self, u0: &[f64], terms: &[&[f64]]) -> Result<Vec<f64>> {
        let n = self.n();
        check_len(n, u0.len())?;
        for t in terms {
            check_len(n, t.len())?;
        }
        // Trailing zero terms only enlarge the augmented system.
        let p = terms.iter().rposition(|t| t.iter().any(|v| *v != 0.0)).map_or(0, |i| i + 1);
        let terms = &terms[..p];

        let mut scale = norm2(u0);
        let mut tau_j = 1.0;
        for t in terms {
            tau_j *= self.tau;
            scale = scale.max(tau_j * norm2(t));
        }
        if scale == 0.0 {
            return Ok(vec![0.0; n]);
        }
        let eta = 1.0 / scale;
        // Columns of ηW in augmented order: [u_p, …, u_1].
        let w: Vec<Vec<f64>> = terms.iter().rev().map(|t| t.iter().map(|v| v * eta).collect()).collect();
        let mut v = Vec::with_capacity(n + p);
        v.extend_from_slice(u0);
        v.resize(n + p, 0.0);
        if p > 0 {
            v[n + p - 1] = scale;
        }
        let aug = Augmented { n, w };
        let out = self.advance(&aug, v, 0)?;
        Ok(out[..n].to_vec())
    }

    fn advance(&self, aug: &Augmented, v: Vec<f64>, level: usize) -> Result<Vec<f64>> {
        let tau = self.tau / (1u64 << level) as f64;
        let gamma = self.cfg.shift_ratio * tau;
        let lu = self.factor(level)?;
        match shift_invert_arnoldi(aug, lu, gamma, tau, &v, &self.cfg) {
            Ok(out) => Ok(out),
            Err(Error::KrylovNotConverged { .. }) if self.cfg.restart && level < MAX_HALVINGS => {
                let half = self.advance(aug, v, level + 1)?;
                self.advance(aug, half, level + 1)
            }
            Err(e) => Err(e),
        }
    }
}

/// `φ_j(τA)v` for `j` in `0..=3` (`j = 0` is the exponential).
pub fn krylov_phi_apply(a: &BandedMatrix, v: &[f64], tau: f64, j: usize, cfg: &KrylovConfig) -> Result<Vec<f64>> {
    if j > 3 {
        return Err(Error::InvalidArgument(format!("phi index {j} outside 0..=3")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("Krylov input vector"));
    }
    let prop = KrylovPropagator::new(a, tau, *cfg)?;
    if j == 0 {
        return prop.apply(v, &[]);
    }
    let zero = vec![0.0; v.len()];
    let mut terms: Vec<&[f64]> = vec![&zero; j];
    terms[j - 1] = v;
    let mut out = prop.apply(&zero, &terms)?;
    let inv = tau.powi(-(j as i32));
    out.iter_mut().for_each(|x| *x *= inv);
    Ok(out)
}

struct Augmented {
    n: usize,
    /// Scaled coupling columns `η[u_p, …, u_1]`.
    w: Vec<Vec<f64>>,
}

impl Augmented {
    fn p(&self) -> usize {
        self.w.len()
    }

    /// Solves `(I - γÃ) z = r` in place.
    fn shifted_solve(&self, lu: &BandedLu, gamma: f64, r: &mut [f64]) {
        let (n, p) = (self.n, self.p());
        let (top, tail) = r.split_at_mut(n);
        // (I - γJ) y = r_y, J shifting entries up by one.
        for i in (0..p.saturating_sub(1)).rev() {
            tail[i] += gamma * tail[i + 1];
        }
        for (col, &y) in self.w.iter().zip(tail.iter()) {
            if y != 0.0 {
                crate::linalg::axpy(top, gamma * y, col);
            }
        }
        lu.solve_in_place(top);
    }
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Small-space approximation `β exp(τ(I - H_m^{-1})/γ) e_1`.
fn projected(h: &[Vec<f64>], m: usize, gamma: f64, tau: f64, beta: f64) -> Result<Vec<f64>> {
    let hm = DenseMatrix::from_fn(m, |i, j| h[j].get(i).copied().unwrap_or(0.0));
    let hinv = hm.lu()?.solve_matrix(&DenseMatrix::identity(m))?;
    let mut gen = hinv.scaled(-tau / gamma);
    gen.add_to_diagonal(tau / gamma);
    let e = expm_dense(&gen)?;
    Ok((0..m).map(|i| beta * e[(i, 0)]).collect())
}

fn shift_invert_arnoldi(
    aug: &Augmented,
    lu: &BandedLu,
    gamma: f64,
    tau: f64,
    v0: &[f64],
    cfg: &KrylovConfig,
) -> Result<Vec<f64>> {
    let beta = norm2(v0);
    if beta == 0.0 {
        return Ok(v0.to_vec());
    }
    let dim = v0.len();
    let max_dim = cfg.max_dim.min(dim);
    let mut basis: Vec<Vec<f64>> = vec![v0.iter().map(|x| x / beta).collect()];
    // h[j] holds column j of the Hessenberg matrix (length j + 2).
    let mut h: Vec<Vec<f64>> = Vec::with_capacity(max_dim);
    let mut previous: Option<Vec<f64>> = None;
    let mut estimate = f64::INFINITY;
    let mut small_in_a_row = 0;

    for j in 0..max_dim {
        let mut w = basis[j].clone();
        aug.shifted_solve(lu, gamma, &mut w);
        let mut col = vec![0.0; j + 2];
        // Classical Gram-Schmidt with one reorthogonalization pass.
        for _ in 0..2 {
            for (i, b) in basis.iter().enumerate() {
                let c = dot(b, &w);
                col[i] += c;
                crate::linalg::axpy(&mut w, -c, b);
            }
        }
        let norm = norm2(&w);
        col[j + 1] = norm;
        h.push(col);
        let m = j + 1;
        let breakdown = norm <= 1e-14 * h[j][..=j].iter().fold(0.0_f64, |a, v| a.max(v.abs()));
        let y = projected(&h, m, gamma, tau, beta)?;
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("Krylov projected exponential"));
        }
        if let Some(prev) = &previous {
            let diff = y.iter().enumerate().map(|(i, yi)| {
                let pi = prev.get(i).copied().unwrap_or(0.0);
                (yi - pi) * (yi - pi)
            });
            estimate = diff.sum::<f64>().sqrt();
            if estimate <= cfg.tol * beta {
                small_in_a_row += 1;
            } else {
                small_in_a_row = 0;
            }
        }
        if breakdown || small_in_a_row >= 2 || m == dim {
            let mut out = vec![0.0; dim];
            for (yi, b) in y.iter().zip(&basis) {
                crate::linalg::axpy(&mut out, *yi, b);
            }
            return Ok(out);
        }
        basis.push(w.into_iter().map(|x| x / norm).collect());
        previous = Some(y);
    }
    Err(Error::KrylovNotConverged { dimension: max_dim, estimate: estimate / beta })
}
