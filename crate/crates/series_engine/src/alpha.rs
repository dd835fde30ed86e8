use fem1d::{BoundaryTreatment, FemSpace};
use nalgebra::DMatrix;
use quad_linalg::{cond2_auto, inv_frobenius, DENSE_LIMIT};

use crate::SeriesError;

/// Uniform decimal grid start + i·step, evaluated exactly in scaled integers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    start: i64,
    step: i64,
    count: usize,
    scale: f64,
}

impl Grid {
    pub fn new(start: f64, stop: f64, step: f64, decimals: i32) -> Self {
        let scale = 10f64.powi(decimals);
        let (s, e, d) = ((start * scale).round() as i64, (stop * scale).round() as i64, (step * scale).round() as i64);
        Self { start: s, step: d, count: ((e - s) / d) as usize + 1, scale }
    }

    /// 1.50:0.02:3.50
    pub fn c_default() -> Self {
        Self::new(1.5, 3.5, 0.02, 2)
    }

    /// 1.0:0.1:10.0
    pub fn r_default() -> Self {
        Self::new(1.0, 10.0, 0.1, 1)
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn value(&self, i: usize) -> f64 {
        (self.start + i as i64 * self.step) as f64 / self.scale
    }
}

/// Matrix presentation and mesh size for the α scans.
#[derive(Debug, Clone)]
pub struct AlphaSearch {
    pub h: f64,
    pub treatment: BoundaryTreatment,
    space: FemSpace,
}

impl AlphaSearch {
    pub fn new(space: &FemSpace, treatment: BoundaryTreatment) -> Self {
        Self { h: space.h(), treatment, space: space.clone() }
    }

    pub fn treat(&self, a: &DMatrix<f64>, diag: f64) -> DMatrix<f64> {
        self.treatment.apply(a, &self.space, diag)
    }
}

/// Norm of (M + rα₀K)⁻¹ in the R objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InverseNorm {
    Frobenius,
    Spectral,
}

/// Grid argmin with smallest-index tie-break. Large problems scan every fifth
/// point and then refine exhaustively around the coarse minimum.
fn grid_argmin(grid: &Grid, dim: usize, mut f: impl FnMut(f64) -> Result<f64, SeriesError>) -> Result<usize, SeriesError> {
    let mut eval = |i: usize, best: &mut Option<(usize, f64)>| -> Result<(), SeriesError> {
        let v = f(grid.value(i))?;
        if best.is_none_or(|(j, b)| v < b || (v == b && i < j)) {
            *best = Some((i, v));
        }
        Ok(())
    };
    let mut best = None;
    if dim <= DENSE_LIMIT {
        for i in 0..grid.len() {
            eval(i, &mut best)?;
        }
    } else {
        const STRIDE: usize = 5;
        for i in (0..grid.len()).step_by(STRIDE) {
            eval(i, &mut best)?;
        }
        let (c, _) = best.expect("non-empty grid");
        let (lo, hi) = (c.saturating_sub(STRIDE - 1), (c + STRIDE - 1).min(grid.len() - 1));
        for i in lo..=hi {
            if i % STRIDE != 0 {
                eval(i, &mut best)?;
            }
        }
    }
    Ok(best.expect("non-empty grid").0)
}

/// c minimizing κ₂(M + h^c K) over `grid`; returns (c, α₀ = h^c).
pub fn find_alpha0(m: &DMatrix<f64>, k: &DMatrix<f64>, cfg: &AlphaSearch, grid: &Grid) -> Result<(f64, f64), SeriesError> {
    let mt = cfg.treat(m, 1.0);
    let kt = cfg.treat(k, 0.0);
    let i = grid_argmin(grid, mt.nrows(), |c| Ok(cond2_auto(&(&mt + &kt * cfg.h.powf(c)))?))?;
    let c = grid.value(i);
    Ok((c, cfg.h.powf(c)))
}

/// r minimizing κ₂(A)·‖A⁻¹‖ with A = M + r·α₀·K.
pub fn find_ratio(
    m: &DMatrix<f64>,
    k: &DMatrix<f64>,
    cfg: &AlphaSearch,
    alpha0: f64,
    grid: &Grid,
    norm: InverseNorm,
) -> Result<f64, SeriesError> {
    let mt = cfg.treat(m, 1.0);
    let kt = cfg.treat(k, 0.0);
    let i = grid_argmin(grid, mt.nrows(), |r| {
        let a = &mt + &kt * (r * alpha0);
        Ok(match norm {
            InverseNorm::Frobenius => cond2_auto(&a)? * inv_frobenius(&a)?,
            InverseNorm::Spectral => {
                // ‖A⁻¹‖₂ = κ₂/‖A‖₂
                let kappa = cond2_auto(&a)?;
                kappa * kappa / quad_linalg::op_norm(&a)
            }
        })
    })?;
    Ok(grid.value(i))
}
