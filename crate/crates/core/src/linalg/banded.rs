use crate::error::{check_len, Error, Result};

use super::dense::{axpy, DenseMatrix};

/// Square band matrix stored by diagonals.
///
/// Diagonal `d` (in `-kl..=ku`) holds `a[i][i + d]` at position `i`; slots that
/// fall outside the matrix stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    diags: Vec<f64>,
    active: Vec<bool>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("band matrix must have n > 0".into()));
        }
        if kl >= n.max(2) || ku >= n.max(2) {
            return Err(Error::InvalidArgument(format!("bandwidths ({kl}, {ku}) must be smaller than n = {n}")));
        }
        let bands = kl + ku + 1;
        Ok(Self { n, kl, ku, diags: vec![0.0; bands * n], active: vec![false; bands] })
    }

    /// Constant-coefficient tridiagonal matrix `tridiag(lower, diag, upper)`.
    pub fn tridiagonal(n: usize, lower: f64, diag: f64, upper: f64) -> Result<Self> {
        let mut m = Self::zeros(n, 1.min(n - 1), 1.min(n - 1))?;
        for i in 0..n {
            m.set(i, i, diag);
            if i > 0 {
                m.set(i, i - 1, lower);
            }
            if i + 1 < n {
                m.set(i, i + 1, upper);
            }
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, 0, 0).expect("n > 0");
        for i in 0..n {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lower_bandwidth(&self) -> usize {
        self.kl
    }

    pub fn upper_bandwidth(&self) -> usize {
        self.ku
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let d = j as isize - i as isize;
        if d < -(self.kl as isize) || d > self.ku as isize || i >= self.n || j >= self.n {
            None
        } else {
            Some((d + self.kl as isize) as usize * self.n + i)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |s| self.diags[s])
    }

    /// Panics when `(i, j)` lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let s = self.slot(i, j).unwrap_or_else(|| panic!("({i}, {j}) is outside the band"));
        self.diags[s] = value;
        if value != 0.0 {
            self.active[s / self.n] = true;
        }
    }

    /// Entries of row `i` within the band as `(column, value)` pairs.
    pub fn row_entries(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let start = i.saturating_sub(self.kl);
        let end = (i + self.ku).min(self.n - 1);
        (start..=end).map(move |j| (j, self.get(i, j)))
    }

    pub fn is_finite(&self) -> bool {
        self.diags.iter().all(|v| v.is_finite())
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.diags.iter_mut().for_each(|v| *v *= s);
        m
    }

    /// `alpha * I + beta * self`
    pub fn shifted(&self, alpha: f64, beta: f64) -> Self {
        let mut m = self.scaled(beta);
        for i in 0..self.n {
            let v = m.get(i, i) + alpha;
            m.set(i, i, v);
        }
        m
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.n, |i, j| self.get(i, j))
    }

    pub fn mat_vec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, v.len())?;
        let mut out = vec![0.0; self.n];
        self.mat_vec_into(v, &mut out);
        Ok(out)
    }

    /// `out = self * v`; lengths must already match.
    pub fn mat_vec_into(&self, v: &[f64], out: &mut [f64]) {
        let n = self.n;
        out.iter_mut().for_each(|o| *o = 0.0);
        for (band, diag) in self.diags.chunks_exact(n).enumerate() {
            if !self.active[band] {
                continue;
            }
            let d = band as isize - self.kl as isize;
            if d >= 0 {
                let d = d as usize;
                for ((o, a), x) in out[..n - d].iter_mut().zip(&diag[..n - d]).zip(&v[d..]) {
                    *o += a * x;
                }
            } else {
                let d = (-d) as usize;
                for ((o, a), x) in out[d..].iter_mut().zip(&diag[d..]).zip(&v[..n - d]) {
                    *o += a * x;
                }
            }
        }
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.n).map(|i| self.row_entries(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn lu(&self) -> Result<BandedLu> {
        BandedLu::factor(self)
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

/// Band LU factorization with partial pivoting.
///
/// Rows store columns `i - kl ..= i + kl + ku` so that the fill created by row
/// interchanges fits in place.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    width: usize,
    /// Upper bandwidth of U actually produced (ku without interchanges).
    ku_eff: usize,
    data: Vec<f64>,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn factor(a: &BandedMatrix) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let width = 2 * kl + ku + 1;
        let mut data = vec![0.0; n * width];
        for i in 0..n {
            for (j, v) in a.row_entries(i) {
                data[i * width + (j + kl - i)] = v;
            }
        }
        let scale = a.diags.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let at = |i: usize, j: usize| i * width + (j + kl - i);
        let mut pivots = Vec::with_capacity(n);
        let mut swapped = false;
        for c in 0..n {
            let last_row = (c + kl).min(n - 1);
            let mut p = c;
            let mut pmax = data[at(c, c)].abs();
            for r in c + 1..=last_row {
                let v = data[at(r, c)].abs();
                if v > pmax {
                    p = r;
                    pmax = v;
                }
            }
            if !(pmax > f64::EPSILON * scale) {
                return Err(Error::Singular { condition: f64::INFINITY });
            }
            pivots.push(p);
            let last_col = (c + kl + ku).min(n - 1);
            if p != c {
                swapped = true;
                for j in c..=last_col {
                    data.swap(at(c, j), at(p, j));
                }
            }
            let inv = 1.0 / data[at(c, c)];
            for r in c + 1..=last_row {
                let l = data[at(r, c)] * inv;
                data[at(r, c)] = l;
                if l != 0.0 {
                    for j in c + 1..=last_col {
                        let u = data[at(c, j)];
                        data[at(r, j)] -= l * u;
                    }
                }
            }
        }
        let ku_eff = if swapped { (kl + ku).min(n - 1) } else { ku };
        Ok(Self { n, kl, width, ku_eff, data, pivots })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + (j + self.kl - i)]
    }

    pub fn condition_estimate(&self) -> f64 {
        let (lo, hi) = (0..self.n)
            .map(|i| self.at(i, i).abs())
            .fold((f64::INFINITY, 0.0_f64), |(lo, hi), d| (lo.min(d), hi.max(d)));
        hi / lo
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, b.len())?;
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        Ok(x)
    }

    pub fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        for c in 0..n {
            let p = self.pivots[c];
            x.swap(c, p);
            let xc = x[c];
            if xc != 0.0 {
                for r in c + 1..=(c + self.kl).min(n - 1) {
                    x[r] -= self.at(r, c) * xc;
                }
            }
        }
        for i in (0..n).rev() {
            let base = i * self.width + self.kl;
            let last = (i + self.ku_eff).min(n - 1);
            let row = &self.data[base + 1..base + 1 + (last - i)];
            let s: f64 = row.iter().zip(&x[i + 1..=last]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / self.data[base];
        }
    }

    /// Solves `A X = B` for a dense square right-hand side.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.n;
        check_len(n, b.n())?;
        let mut x = b.as_slice().to_vec();
        for c in 0..n {
            let p = self.pivots[c];
            if p != c {
                let (lo, hi) = x.split_at_mut(p * n);
                lo[c * n..(c + 1) * n].swap_with_slice(&mut hi[..n]);
            }
            let (head, tail) = x.split_at_mut((c + 1) * n);
            let src = &head[c * n..];
            for r in c + 1..=(c + self.kl).min(n - 1) {
                let l = self.at(r, c);
                if l != 0.0 {
                    axpy(&mut tail[(r - c - 1) * n..(r - c) * n], -l, src);
                }
            }
        }
        for i in (0..n).rev() {
            let last = (i + self.ku_eff).min(n - 1);
            let (head, rest) = x.split_at_mut((i + 1) * n);
            let target = &mut head[i * n..];
            for j in i + 1..=last {
                let u = self.at(i, j);
                if u != 0.0 {
                    let off = j - i - 1;
                    axpy(target, -u, &rest[off * n..(off + 1) * n]);
                }
            }
            let inv = 1.0 / self.at(i, i);
            target.iter_mut().for_each(|v| *v *= inv);
        }
        DenseMatrix::from_row_major(n, x)
    }
}
