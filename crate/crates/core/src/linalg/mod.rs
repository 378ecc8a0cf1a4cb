//! Dense and banded kernels over `f64`.
//!
//! Vectors are plain slices; the matrix types only add what the integrators
//! need (products, LU solves, induced norms).

mod banded;
mod dense;

pub use banded::{BandedLu, BandedMatrix};
pub use dense::{DenseLu, DenseMatrix};

pub(crate) use dense::axpy;

use crate::error::{Error, Result};

/// Relative backward-error tolerance accepted by the checked solves.
pub const TOL_SOLVE: f64 = 1e-10;

/// `max_i |v_i|`, zero for an empty vector.
pub fn norm_max(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Checks `||M x - b|| <= TOL_SOLVE (||M|| ||x|| + ||b||)`, applying one step of
/// iterative refinement when the first solution misses it.
pub(crate) fn refine_once(
    x: &mut [f64],
    b: &[f64],
    matrix_norm: f64,
    apply: impl Fn(&[f64]) -> Result<Vec<f64>>,
    solve: impl Fn(&[f64]) -> Result<Vec<f64>>,
    condition: f64,
) -> Result<()> {
    let residual = |x: &[f64]| -> Result<(Vec<f64>, f64)> {
        let mx = apply(x)?;
        let r: Vec<f64> = b.iter().zip(&mx).map(|(bi, mi)| bi - mi).collect();
        let scale = matrix_norm * norm_max(x) + norm_max(b);
        let rel = if scale > 0.0 { norm_max(&r) / scale } else { 0.0 };
        Ok((r, rel))
    };
    let (r, rel) = residual(x)?;
    if !rel.is_finite() {
        return Err(Error::Singular { condition });
    }
    if rel <= TOL_SOLVE {
        return Ok(());
    }
    let dx = solve(&r)?;
    x.iter_mut().zip(&dx).for_each(|(xi, d)| *xi += d);
    let (_, rel) = residual(x)?;
    if rel <= TOL_SOLVE {
        Ok(())
    } else {
        Err(Error::IllConditioned { residual: rel, condition })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn norm_max_examples() {
        assert_eq!(norm_max(&[0.0, 0.0, 0.0]), 0.0);
        assert_eq!(norm_max(&[-3.0, 2.0]), 3.0);
        assert_eq!(norm_max(&[1.5, -1.5]), 1.5);
    }

    fn diagonally_dominant(n: usize, kl: usize, ku: usize, seeds: &[f64]) -> BandedMatrix {
        let mut a = BandedMatrix::zeros(n, kl, ku).unwrap();
        let mut it = seeds.iter().cycle();
        for i in 0..n {
            let mut off = 0.0;
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                if j != i {
                    let v = *it.next().unwrap();
                    a.set(i, j, v);
                    off += v.abs();
                }
            }
            let sign = if *it.next().unwrap() >= 0.0 { 1.0 } else { -1.0 };
            a.set(i, i, sign * (off + 1.0));
        }
        a
    }

    proptest! {
        #[test]
        fn solve_inverts_mat_vec(
            n in 3usize..40,
            kl in 0usize..3,
            ku in 0usize..3,
            seeds in prop::collection::vec(-1.0f64..1.0, 16),
            x in prop::collection::vec(-10.0f64..10.0, 40),
        ) {
            let a = diagonally_dominant(n, kl, ku, &seeds);
            let x = &x[..n];
            let b = a.mat_vec(x).unwrap();
            let y = a.solve(&b).unwrap();
            let scale = norm_max(x).max(1.0);
            prop_assert!(max_abs_diff(&y, x) <= TOL_SOLVE * scale * 10.0);
        }

        #[test]
        fn norm_max_is_a_norm(
            u in prop::collection::vec(-1e3f64..1e3, 1..30),
            w in prop::collection::vec(-1e3f64..1e3, 30),
            s in -50.0f64..50.0,
        ) {
            let w = &w[..u.len()];
            let sum: Vec<f64> = u.iter().zip(w).map(|(a, b)| a + b).collect();
            prop_assert!(norm_max(&sum) <= norm_max(&u) + norm_max(w) + 1e-12);
            let scaled: Vec<f64> = u.iter().map(|a| s * a).collect();
            prop_assert!((norm_max(&scaled) - s.abs() * norm_max(&u)).abs() <= 1e-12 * norm_max(&scaled).max(1.0));
        }
    }
}
