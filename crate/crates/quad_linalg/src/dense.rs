use nalgebra::{DMatrix, DVector, LU};

use crate::band::{cond2_band, inv_frobenius_band, BandMatrix};
use crate::error::LinalgError;

/// Relative singular-value floor below which a matrix counts as singular.
pub const SINGULAR_RATIO: f64 = 1e-14;

/// Above this dimension `cond2_auto` and `inv_frobenius` switch to the banded path
/// when the matrix bandwidth is small.
pub const DENSE_LIMIT: usize = 400;

#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
    pub u: DMatrix<f64>,
    pub v_t: DMatrix<f64>,
}

fn check_finite(a: &DMatrix<f64>) -> Result<(), LinalgError> {
    if a.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(LinalgError::NonFinite)
    }
}

fn check_square(a: &DMatrix<f64>) -> Result<(), LinalgError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(LinalgError::NotSquare { rows: a.nrows(), cols: a.ncols() })
    }
}

pub fn svd(a: &DMatrix<f64>) -> Result<SvdResult, LinalgError> {
    check_finite(a)?;
    let s = a.clone().svd(true, true);
    let (u, v_t) = (s.u.expect("requested U"), s.v_t.expect("requested V^T"));
    let mut order: Vec<usize> = (0..s.singular_values.len()).collect();
    order.sort_by(|&i, &j| s.singular_values[j].total_cmp(&s.singular_values[i]));
    let singular_values = order.iter().map(|&i| s.singular_values[i]).collect();
    let u = DMatrix::from_fn(u.nrows(), order.len(), |r, c| u[(r, order[c])]);
    let v_t = DMatrix::from_fn(order.len(), v_t.ncols(), |r, c| v_t[(order[r], c)]);
    Ok(SvdResult { singular_values, u, v_t })
}

fn sigma_extremes(a: &DMatrix<f64>) -> Result<(f64, f64), LinalgError> {
    check_finite(a)?;
    let s = a.clone().singular_values();
    let max = s.iter().cloned().fold(0.0, f64::max);
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok((max, min))
}

/// Spectral condition number σ_max/σ_min.
pub fn cond2(a: &DMatrix<f64>) -> Result<f64, LinalgError> {
    check_square(a)?;
    let (max, min) = sigma_extremes(a)?;
    if min == 0.0 || min <= f64::MIN_POSITIVE * max {
        return Err(LinalgError::SingularMatrix { ratio: min / max });
    }
    Ok(max / min)
}

/// `cond2`, routed through the banded Lanczos estimator for large matrices
/// with narrow bandwidth.
pub fn cond2_auto(a: &DMatrix<f64>) -> Result<f64, LinalgError> {
    check_square(a)?;
    if a.nrows() > DENSE_LIMIT {
        let b = BandMatrix::from_dense(a);
        if b.kl() + b.ku() < a.nrows() / 8 {
            return cond2_band(&b);
        }
    }
    cond2(a)
}

/// Frobenius condition number ‖A‖_F·‖A⁻¹‖_F.
pub fn cond_frobenius(a: &DMatrix<f64>) -> Result<f64, LinalgError> {
    Ok(frobenius(a) * inv_frobenius(a)?)
}

/// ‖A⁻¹‖_F.
pub fn inv_frobenius(a: &DMatrix<f64>) -> Result<f64, LinalgError> {
    check_square(a)?;
    check_finite(a)?;
    if a.nrows() > DENSE_LIMIT {
        let b = BandMatrix::from_dense(a);
        if b.kl() + b.ku() < a.nrows() / 8 {
            return inv_frobenius_band(&b);
        }
    }
    let lu = LuSolver::new(a)?;
    let n = a.nrows();
    let mut acc = 0.0;
    let mut e = DVector::zeros(n);
    for i in 0..n {
        e.fill(0.0);
        e[i] = 1.0;
        acc += lu.solve(&e).norm_squared();
    }
    Ok(acc.sqrt())
}

pub fn frobenius(a: &DMatrix<f64>) -> f64 {
    a.norm()
}

/// Spectral norm σ_max.
pub fn op_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().iter().cloned().fold(0.0, f64::max)
}

/// LU factorization with partial pivoting, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct LuSolver {
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
    n: usize,
}

impl LuSolver {
    /// Singularity is judged from the pivot magnitudes of U, a cheap proxy for
    /// the singular-value ratio.
    pub fn new(a: &DMatrix<f64>) -> Result<Self, LinalgError> {
        check_square(a)?;
        check_finite(a)?;
        let lu = a.clone().lu();
        let diag = lu.u().diagonal();
        let max = diag.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let min = diag.iter().fold(f64::INFINITY, |m, x| m.min(x.abs()));
        if max == 0.0 || min / max <= SINGULAR_RATIO {
            return Err(LinalgError::SingularMatrix { ratio: if max == 0.0 { 0.0 } else { min / max } });
        }
        Ok(Self { lu, n: a.nrows() })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.lu.solve(b).expect("factor checked nonsingular")
    }
}

/// Solves A x = b by LU with partial pivoting.
pub fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>, LinalgError> {
    if b.len() != a.nrows() {
        return Err(LinalgError::DimensionMismatch { expected: a.nrows(), got: b.len() });
    }
    if !b.iter().all(|x| x.is_finite()) {
        return Err(LinalgError::NonFinite);
    }
    Ok(LuSolver::new(a)?.solve(b))
}
