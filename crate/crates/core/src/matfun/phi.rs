use crate::error::{Error, Result};
use crate::linalg::{BandedMatrix, DenseMatrix};

use super::expm::expm_dense;

/// Tolerance on the recurrence identities `τA φ_1 = e^{τA} - I`, `τA φ_2 = φ_1 - I`.
pub const TOL_PHI: f64 = 1e-9;

/// Below this 1-norm the recurrence loses accuracy to cancellation and the
/// Taylor series is used instead.
const TAYLOR_NORM: f64 = 1.0;
const TAYLOR_TERMS: usize = 24;

fn factorial(j: usize) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

/// Scalar `φ_j(z)`, by series near zero and by the closed recurrence elsewhere.
pub fn phi_scalar(j: usize, z: f64) -> f64 {
    if z.abs() < 0.5 {
        let mut term = 1.0 / factorial(j);
        let mut sum = term;
        for i in 1..30 {
            term *= z / (i + j) as f64;
            sum += term;
        }
        return sum;
    }
    let mut p = z.exp();
    for i in 0..j {
        p = (p - 1.0 / factorial(i)) / z;
    }
    p
}

/// `φ_j(M)` for `j` in `1..=3`.
///
/// Uses `φ_{i+1}(M) = M^{-1}(φ_i(M) - I/i!)` seeded with `e^M`; for `||M||_1 < 1`
/// the Taylor series `Σ M^i/(i+j)!` is summed instead.
pub fn phi_dense(j: usize, m: &DenseMatrix) -> Result<DenseMatrix> {
    if !(1..=3).contains(&j) {
        return Err(Error::InvalidArgument(format!("phi index {j} outside 1..=3")));
    }
    if m.norm_1() < TAYLOR_NORM {
        return Ok(phi_taylor(j, m));
    }
    let lu = m.lu()?;
    let mut p = expm_dense(m)?;
    for i in 0..j {
        p.add_to_diagonal(-1.0 / factorial(i));
        p = lu.solve_matrix(&p)?;
    }
    Ok(p)
}

fn phi_taylor(j: usize, m: &DenseMatrix) -> DenseMatrix {
    let n = m.n();
    let mut acc = DenseMatrix::identity(n).scaled(1.0 / factorial(j + TAYLOR_TERMS));
    for i in (0..TAYLOR_TERMS).rev() {
        acc = acc.matmul(m);
        acc.add_to_diagonal(1.0 / factorial(i + j));
    }
    acc
}

/// Dense `e^{τA}`, `φ_1(τA)`, `φ_2(τA)` for one step size.
#[derive(Debug, Clone)]
pub struct PhiTable {
    pub tau: f64,
    pub exp: DenseMatrix,
    pub phi1: DenseMatrix,
    pub phi2: DenseMatrix,
}

impl PhiTable {
    /// Builds the table for a band operator, solving with its band LU.
    pub fn build(a: &BandedMatrix, tau: f64) -> Result<Self> {
        if !(tau > 0.0) {
            return Err(Error::InvalidArgument(format!("step {tau} must be positive")));
        }
        let m = a.scaled(tau);
        let dense = m.to_dense();
        if dense.norm_1() < TAYLOR_NORM {
            return Ok(Self {
                tau,
                exp: expm_dense(&dense)?,
                phi1: phi_taylor(1, &dense),
                phi2: phi_taylor(2, &dense),
            });
        }
        let lu = m.lu()?;
        let exp = expm_dense(&dense)?;
        let mut phi1 = exp.clone();
        phi1.add_to_diagonal(-1.0);
        let phi1 = lu.solve_matrix(&phi1)?;
        let mut phi2 = phi1.clone();
        phi2.add_to_diagonal(-1.0);
        let phi2 = lu.solve_matrix(&phi2)?;
        Ok(Self { tau, exp, phi1, phi2 })
    }

    pub fn n(&self) -> usize {
        self.exp.n()
    }

    /// Largest entry of `τA φ_1 - (e^{τA} - I)` and `τA φ_2 - (φ_1 - I)`.
    pub fn recurrence_residual(&self, a: &BandedMatrix) -> f64 {
        let m = a.scaled(self.tau).to_dense();
        let mut e_minus = self.exp.clone();
        e_minus.add_to_diagonal(-1.0);
        let mut p1_minus = self.phi1.clone();
        p1_minus.add_to_diagonal(-1.0);
        let r1 = m.matmul(&self.phi1).max_abs_diff(&e_minus);
        let r2 = m.matmul(&self.phi2).max_abs_diff(&p1_minus);
        r1.max(r2)
    }
}
