//! Scaling-and-squaring Padé approximation of the matrix exponential.
//!
//! Degree selection follows the backward-error bounds of Higham (2005): the
//! smallest degree in {3, 5, 7, 9, 13} whose θ bound covers `||M||_1` is used,
//! otherwise degree 13 after scaling by `2^-s`.

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

const THETA: [(usize, f64); 5] = [
    (3, 1.495_585_217_958_292e-2),
    (5, 2.539_398_330_063_23e-1),
    (7, 9.504_178_996_162_932e-1),
    (9, 2.097_847_961_257_068),
    (13, 5.371_920_351_148_152),
];

/// Coefficients `b_j` of the diagonal Padé approximant of degree `m`.
fn pade_coefficients(m: usize) -> Vec<f64> {
    let mut b = vec![1.0; m + 1];
    for j in 1..=m {
        // b_j / b_{j-1} = (m - j + 1) / (j (2m - j + 1))
        b[j] = b[j - 1] * (m - j + 1) as f64 / (j as f64 * (2 * m - j + 1) as f64);
    }
    b
}

/// `e^M` for a square finite matrix.
pub fn expm_dense(m: &DenseMatrix) -> Result<DenseMatrix> {
    if !m.is_finite() {
        return Err(Error::NonFinite("matrix exponential argument"));
    }
    let n = m.n();
    if n == 0 {
        return Ok(DenseMatrix::zeros(0));
    }
    if n == 1 {
        let v = m[(0, 0)].exp();
        if !v.is_finite() {
            return Err(Error::Overflow);
        }
        return DenseMatrix::from_row_major(1, vec![v]);
    }
    let norm = m.norm_1();
    let result = if let Some(&(deg, _)) = THETA[..4].iter().find(|(_, theta)| norm <= *theta) {
        pade_low(m, deg)?
    } else {
        let theta13 = THETA[4].1;
        let s = if norm > theta13 { (norm / theta13).log2().ceil() as i32 } else { 0 };
        let scaled = m.scaled(2f64.powi(-s));
        let mut r = pade13(&scaled)?;
        for _ in 0..s {
            r = r.matmul(&r);
        }
        r
    };
    if !result.is_finite() {
        return Err(Error::Overflow);
    }
    Ok(result)
}

fn pade_low(a: &DenseMatrix, deg: usize) -> Result<DenseMatrix> {
    let n = a.n();
    let b = pade_coefficients(deg);
    let a2 = a.matmul(a);
    // Even powers A^0, A^2, ..., A^(deg-1)
    let mut powers = vec![DenseMatrix::identity(n), a2.clone()];
    while powers.len() < deg.div_ceil(2) {
        let next = powers.last().unwrap().matmul(&a2);
        powers.push(next);
    }
    let mut u = DenseMatrix::zeros(n);
    let mut v = DenseMatrix::zeros(n);
    for (k, p) in powers.iter().enumerate() {
        u = u.add_scaled(b[2 * k + 1], p);
        v = v.add_scaled(b[2 * k], p);
    }
    let u = a.matmul(&u);
    rational(&u, &v)
}

fn pade13(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.n();
    let b = pade_coefficients(13);
    let ident = DenseMatrix::identity(n);
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a4.matmul(&a2);

    let w1 = a6.scaled(b[13]).add_scaled(b[11], &a4).add_scaled(b[9], &a2);
    let w2 = a6.scaled(b[7]).add_scaled(b[5], &a4).add_scaled(b[3], &a2).add_scaled(b[1], &ident);
    let u = a.matmul(&a6.matmul(&w1).add_scaled(1.0, &w2));

    let z1 = a6.scaled(b[12]).add_scaled(b[10], &a4).add_scaled(b[8], &a2);
    let z2 = a6.scaled(b[6]).add_scaled(b[4], &a4).add_scaled(b[2], &a2).add_scaled(b[0], &ident);
    let v = a6.matmul(&z1).add_scaled(1.0, &z2);
    rational(&u, &v)
}

/// `(V - U)^{-1} (V + U)`
fn rational(u: &DenseMatrix, v: &DenseMatrix) -> Result<DenseMatrix> {
    let num = v.add_scaled(1.0, u);
    let den = v.add_scaled(-1.0, u);
    den.lu()?.solve_matrix(&num)
}
