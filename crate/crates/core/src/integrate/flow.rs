use crate::discretize::{Direction, SplitOperator2D};
use crate::error::{check_len, Error, Result};
use crate::linalg::{BandedMatrix, DenseMatrix};
use crate::matfun::{KrylovConfig, KrylovPropagator, PhiTable};

/// `e^{τA}u + τφ_1(τA)c_1 + τ²φ_2(τA)c_2` for one operator and one `τ`.
#[derive(Debug)]
pub(crate) enum LinearFlow {
    Dense(PhiTable),
    Krylov(KrylovPropagator),
}

impl LinearFlow {
    pub(crate) fn dense(a: &BandedMatrix, tau: f64) -> Result<Self> {
        Ok(LinearFlow::Dense(PhiTable::build(a, tau)?))
    }

    pub(crate) fn krylov(a: &BandedMatrix, tau: f64, cfg: KrylovConfig) -> Result<Self> {
        Ok(LinearFlow::Krylov(KrylovPropagator::new(a, tau, cfg)?))
    }

    pub(crate) fn apply(&self, u: &[f64], c1: &[f64], c2: &[f64]) -> Result<Vec<f64>> {
        match self {
            LinearFlow::Dense(t) => dense_combination(t, u, c1, c2),
            LinearFlow::Krylov(p) => p.apply(u, &[c1, c2]),
        }
    }
}

fn dense_combination(t: &PhiTable, u: &[f64], c1: &[f64], c2: &[f64]) -> Result<Vec<f64>> {
    let mut out = t.exp.mat_vec(u)?;
    add_times(&mut out, &t.phi1, c1, t.tau)?;
    add_times(&mut out, &t.phi2, c2, t.tau * t.tau)?;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("linear flow"));
    }
    Ok(out)
}

/// `out += s·M v`. Boundary vectors are supported on a few rows only, so
/// sparse `v` takes a combination of the matching columns of `M`.
fn add_times(out: &mut [f64], m: &DenseMatrix, v: &[f64], s: f64) -> Result<()> {
    let n = m.n();
    check_len(n, v.len())?;
    let nnz = v.iter().filter(|x| **x != 0.0).count();
    if nnz == 0 {
        return Ok(());
    }
    if nnz * 8 > n {
        for (o, mv) in out.iter_mut().zip(m.mat_vec(v)?) {
            *o += s * mv;
        }
        return Ok(());
    }
    for (j, &vj) in v.iter().enumerate() {
        if vj != 0.0 {
            let w = s * vj;
            for (i, o) in out.iter_mut().enumerate() {
                *o += w * m[(i, j)];
            }
        }
    }
    Ok(())
}

/// Flow of one direction of the dimension splitting, applied line by line
/// with the dense tables of the 1D block.
#[derive(Debug)]
pub(crate) struct LineFlow {
    table: PhiTable,
}

impl LineFlow {
    pub(crate) fn new(split: &SplitOperator2D, tau: f64) -> Result<Self> {
        Ok(Self { table: PhiTable::build(&split.line_operator().a, tau)? })
    }

    pub(crate) fn tau(&self) -> f64 {
        self.table.tau
    }

    pub(crate) fn apply(
        &self,
        split: &SplitOperator2D,
        dir: Direction,
        u: &[f64],
        c1: &[f64],
        c2: &[f64],
    ) -> Result<Vec<f64>> {
        let m = split.n_hat();
        let u = split.to_line_order(dir, u)?;
        let c1 = split.to_line_order(dir, c1)?;
        let c2 = split.to_line_order(dir, c2)?;
        let mut out = Vec::with_capacity(u.len());
        for ((ul, c1l), c2l) in u.chunks(m).zip(c1.chunks(m)).zip(c2.chunks(m)) {
            out.extend(dense_combination(&self.table, ul, c1l, c2l)?);
        }
        split.from_line_order(dir, &out)
    }
}
