use std::ops::{Index, IndexMut};

use crate::error::{check_len, Error, Result};

/// Square real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        check_len(n * n, data.len())?;
        Ok(Self { n, data })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|v| v * s).collect() }
    }

    /// `self + s * other`
    pub fn add_scaled(&self, s: f64, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        Self { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + s * b).collect() }
    }

    pub fn add_to_diagonal(&mut self, s: f64) {
        for i in 0..self.n {
            self[(i, i)] += s;
        }
    }

    pub fn mat_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, v.len())?;
        Ok(self.data.chunks_exact(self.n.max(1)).take(self.n).map(|row| dot(row, v)).collect())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        if n == 0 {
            return out;
        }
        // SAFETY: all three buffers hold n*n elements laid out row-major with
        // row stride n and column stride 1, and `out` does not alias the inputs.
        unsafe {
            matrixmultiply::dgemm(
                n,
                n,
                n,
                1.0,
                self.data.as_ptr(),
                n as isize,
                1,
                other.data.as_ptr(),
                n as isize,
                1,
                0.0,
                out.data.as_mut_ptr(),
                n as isize,
                1,
            );
        }
        out
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_1(&self) -> f64 {
        let mut sums = vec![0.0; self.n];
        for row in self.data.chunks_exact(self.n.max(1)) {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v.abs();
            }
        }
        sums.into_iter().fold(0.0, f64::max)
    }

    /// Induced max-norm (maximum absolute row sum).
    pub fn norm_inf(&self) -> f64 {
        self.data.chunks_exact(self.n.max(1)).map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn lu(&self) -> Result<DenseLu> {
        DenseLu::factor(self.clone())
    }

    /// Solves `self * x = b`, checking the normwise backward error of the result.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, b.len())?;
        let lu = self.lu()?;
        let mut x = lu.solve(b)?;
        let norm = self.norm_inf();
        super::refine_once(&mut x, b, norm, |v| self.mat_vec(v), |r| lu.solve(r), lu.condition_estimate())?;
        Ok(x)
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Debug, Clone)]
pub struct DenseLu {
    lu: DenseMatrix,
    pivots: Vec<usize>,
}

impl DenseLu {
    pub fn factor(mut a: DenseMatrix) -> Result<Self> {
        let n = a.n;
        let scale = a.max_abs();
        let mut pivots = Vec::with_capacity(n);
        for c in 0..n {
            let (p, pmax) =
                (c..n)
                    .map(|r| (r, a[(r, c)].abs()))
                    .fold((c, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if !(pmax > f64::EPSILON * scale * n as f64) {
                return Err(Error::Singular { condition: f64::INFINITY });
            }
            pivots.push(p);
            if p != c {
                let (lo, hi) = a.data.split_at_mut(p * n);
                lo[c * n..(c + 1) * n].swap_with_slice(&mut hi[..n]);
            }
            let (head, tail) = a.data.split_at_mut((c + 1) * n);
            let pivot_row = &head[c * n..];
            let inv = 1.0 / pivot_row[c];
            for row in tail.chunks_exact_mut(n) {
                let l = row[c] * inv;
                row[c] = l;
                if l != 0.0 {
                    for (x, &u) in row[c + 1..].iter_mut().zip(&pivot_row[c + 1..]) {
                        *x -= l * u;
                    }
                }
            }
        }
        Ok(Self { lu: a, pivots })
    }

    pub fn n(&self) -> usize {
        self.lu.n
    }

    /// Ratio of extreme pivot magnitudes; a cheap lower bound on the condition number.
    pub fn condition_estimate(&self) -> f64 {
        let diag = (0..self.lu.n).map(|i| self.lu[(i, i)].abs());
        let (lo, hi) = diag.fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        hi / lo
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let n = self.lu.n;
        check_len(n, b.len())?;
        let mut x = b.to_vec();
        for (c, &p) in self.pivots.iter().enumerate() {
            x.swap(c, p);
        }
        for i in 0..n {
            let s = dot(&self.lu.row(i)[..i], &x[..i]);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = self.lu.row(i);
            let s = dot(&row[i + 1..], &x[i + 1..]);
            x[i] = (x[i] - s) / row[i];
        }
        Ok(x)
    }

    /// Solves `A X = B` for a square right-hand side, overwriting nothing.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.lu.n;
        check_len(n, b.n)?;
        let mut x = b.clone();
        for (c, &p) in self.pivots.iter().enumerate() {
            if p != c {
                let (lo, hi) = x.data.split_at_mut(p * n);
                lo[c * n..(c + 1) * n].swap_with_slice(&mut hi[..n]);
            }
        }
        // Forward substitution with unit L, row-oriented.
        for i in 1..n {
            let (done, rest) = x.data.split_at_mut(i * n);
            let target = &mut rest[..n];
            for (j, &l) in self.lu.row(i)[..i].iter().enumerate() {
                if l != 0.0 {
                    axpy(target, -l, &done[j * n..(j + 1) * n]);
                }
            }
        }
        for i in (0..n).rev() {
            let (head, rest) = x.data.split_at_mut((i + 1) * n);
            let target = &mut head[i * n..];
            let row = self.lu.row(i);
            for (off, &u) in row[i + 1..].iter().enumerate() {
                if u != 0.0 {
                    let j = off;
                    axpy(target, -u, &rest[j * n..(j + 1) * n]);
                }
            }
            let inv = 1.0 / row[i];
            target.iter_mut().for_each(|v| *v *= inv);
        }
        Ok(x)
    }
}

#[inline]
pub(crate) fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}
