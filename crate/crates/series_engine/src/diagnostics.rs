use fem1d::{BoundaryTreatment, FemSpace, Operators};
use nalgebra::DMatrix;
use quad_linalg::{cond2, cond_frobenius, op_norm, svd, LuSolver};

use crate::model::{ModelKind, RecurrenceModel};
use crate::SeriesError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AmplificationNorm {
    /// Hilbert–Schmidt norms throughout.
    Frobenius,
    /// Operator 2-norms for M and K; the tensor keeps its Frobenius norm.
    Spectral,
}

/// Error amplification per term.
///
/// Heat: ν·κ(M)·‖K‖/‖M‖. Burgers: κ(M)/k·(ν‖K‖ + k‖D‖)/‖M‖.
pub fn amplification_factor(
    model: &RecurrenceModel,
    ops: &Operators,
    space: &FemSpace,
    k: usize,
    treatment: BoundaryTreatment,
    norm: AmplificationNorm,
) -> Result<f64, SeriesError> {
    if model.kind == ModelKind::Heat && model.nu == 0.0 {
        return Err(SeriesError::NoDiffusion);
    }
    let m = treatment.apply(&ops.m, space, 1.0);
    let kk = treatment.apply(&ops.k, space, 0.0);
    let (kappa, nm, nk) = match norm {
        AmplificationNorm::Frobenius => (cond_frobenius(&m)?, m.norm(), kk.norm()),
        AmplificationNorm::Spectral => (cond2(&m)?, op_norm(&m), op_norm(&kk)),
    };
    Ok(match model.kind {
        ModelKind::Heat => model.nu * kappa * nk / nm,
        ModelKind::Burgers => {
            let k = k.max(1) as f64;
            kappa / k * (model.nu * nk + k * ops.d.frobenius()) / nm
        }
    })
}

fn truncated_exp(z: f64, m: usize) -> f64 {
    let (mut term, mut sum) = (1.0, 1.0);
    for j in 1..=m {
        term *= -z / j as f64;
        sum += term;
    }
    sum
}

/// ‖Σ_{j≤m} (−νt)^j/j! (M⁻¹K)^j‖₂ on the interior blocks.
pub fn dmp_norm(m_in: &DMatrix<f64>, k_in: &DMatrix<f64>, nu: f64, t: f64, m: usize) -> Result<f64, SeriesError> {
    if t == 0.0 || nu == 0.0 {
        return Ok(1.0);
    }
    let a = minv_k(m_in, k_in)?;
    Ok(op_norm(&series_operator(&a, nu * t, m)))
}

fn minv_k(m_in: &DMatrix<f64>, k_in: &DMatrix<f64>) -> Result<DMatrix<f64>, SeriesError> {
    let lu = LuSolver::new(m_in)?;
    let mut a = DMatrix::zeros(k_in.nrows(), k_in.ncols());
    for j in 0..k_in.ncols() {
        a.set_column(j, &lu.solve(&k_in.column(j).into_owned()));
    }
    Ok(a)
}

fn series_operator(a: &DMatrix<f64>, z: f64, m: usize) -> DMatrix<f64> {
    let n = a.nrows();
    let mut term = DMatrix::identity(n, n);
    let mut sum = term.clone();
    for j in 1..=m {
        term = (&term * a) * (-z / j as f64);
        sum += &term;
    }
    sum
}

const DMP_TOL: f64 = 1e-12;

/// First root of `exceeds` on (0, ∞): geometric bracketing from `unit`, then
/// bisection.
fn first_crossing(unit: f64, mut exceeds: impl FnMut(f64) -> bool) -> f64 {
    let step = unit / 200.0;
    let mut lo = 0.0;
    let mut hi = step;
    let mut n = 1;
    while !exceeds(hi) {
        lo = hi;
        n += 1;
        hi = step * n as f64;
        if n > 200_000 {
            return f64::INFINITY;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if exceeds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-13 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Smallest t > 0 at which `dmp_norm` exceeds one.
pub fn dmp_threshold(m_in: &DMatrix<f64>, k_in: &DMatrix<f64>, nu: f64, m: usize) -> Result<f64, SeriesError> {
    if nu == 0.0 {
        return Ok(f64::INFINITY);
    }
    let a = minv_k(m_in, k_in)?;
    let unit = 1.0 / (nu * op_norm(&a));
    Ok(first_crossing(unit, |t| op_norm(&series_operator(&a, nu * t, m)) > 1.0 + DMP_TOL))
}

/// Eigenvalue route: z* = first z > 0 with |Σ_{j≤m} (−z)^j/j!| > 1, divided by
/// ν·λ_max of the generalized problem K v = λ M v.
pub fn dmp_threshold_oracle(m_in: &DMatrix<f64>, k_in: &DMatrix<f64>, nu: f64, m: usize) -> Result<f64, SeriesError> {
    if nu == 0.0 {
        return Ok(f64::INFINITY);
    }
    let chol = m_in.clone().cholesky().ok_or(quad_linalg::LinalgError::SingularMatrix { ratio: 0.0 })?;
    let l = chol.l();
    let li = l.clone().try_inverse().ok_or(quad_linalg::LinalgError::SingularMatrix { ratio: 0.0 })?;
    let s = &li * k_in * li.transpose();
    let lam_max = svd(&s)?.singular_values[0];
    let z_star = first_crossing(1.0, |z| truncated_exp(z, m).abs() > 1.0 + DMP_TOL);
    Ok(z_star / (nu * lam_max))
}
