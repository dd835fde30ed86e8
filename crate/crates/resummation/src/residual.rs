use fem1d::Operators;
use nalgebra::{DMatrix, DVector};
use series_engine::RecurrenceModel;

use crate::ResumError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualNorm {
    #[default]
    Euclidean,
    /// √(vᵀMv) for both the defect and the derivative.
    MassWeighted,
}

impl ResidualNorm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Euclidean => "euclidean",
            Self::MassWeighted => "mass-weighted",
        }
    }

    fn apply(self, v: &DVector<f64>, m: &DMatrix<f64>) -> f64 {
        match self {
            Self::Euclidean => v.norm(),
            Self::MassWeighted => v.dot(&(m * v)).max(0.0).sqrt(),
        }
    }
}

impl std::str::FromStr for ResidualNorm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "euclidean" => Ok(Self::Euclidean),
            "mass-weighted" | "mass" => Ok(Self::MassWeighted),
            other => Err(format!("unknown residual norm '{other}'")),
        }
    }
}

/// ‖M u̇ − A(u)‖ / ‖u̇‖ for the operator set the vectors live in.
pub fn residual(
    model: &RecurrenceModel,
    ops: &Operators,
    u: &DVector<f64>,
    dudt: &DVector<f64>,
    norm: ResidualNorm,
) -> Result<f64, ResumError> {
    let n = ops.m.nrows();
    for v in [u, dudt] {
        if v.len() != n {
            return Err(ResumError::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let a = model.semi_discrete_rhs(u, ops);
    let mdu = &ops.m * dudt;
    if mdu.norm() <= 1e-300 {
        return Err(ResumError::ZeroDerivative { residual: norm.apply(&a, &ops.m) });
    }
    Ok(norm.apply(&(mdu - a), &ops.m) / norm.apply(dudt, &ops.m))
}
