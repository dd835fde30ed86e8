use nalgebra::DVector;
use quad_linalg::{gauss_rule, QuadKind, QuadratureRule};

use crate::pade::PadeSet;
use crate::ResumError;

/// |den| below this fraction of Σ|b_j||z|^j counts as a pole.
const POLE_TOL: f64 = 1e-10;

/// Φ_t(u₀) = u₀ + t Σ_j P(ξ_j t) ω_j with Gauss–Laguerre (ξ_j, ω_j).
#[derive(Debug, Clone)]
pub struct FlowEvaluator {
    u0: DVector<f64>,
    pade: PadeSet,
    rule: QuadratureRule,
}

impl FlowEvaluator {
    pub fn new(u0: DVector<f64>, pade: PadeSet, n_g: usize) -> Result<Self, ResumError> {
        if pade.len() != u0.len() {
            return Err(ResumError::DimensionMismatch { expected: u0.len(), got: pade.len() });
        }
        Ok(Self { u0, pade, rule: gauss_rule(QuadKind::Laguerre, n_g)? })
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    pub fn pade(&self) -> &PadeSet {
        &self.pade
    }

    pub fn u0(&self) -> &DVector<f64> {
        &self.u0
    }

    pub fn flow(&self, t: f64) -> Result<DVector<f64>, ResumError> {
        Ok(self.evaluate(t)?.0)
    }

    pub fn flow_derivative(&self, t: f64) -> Result<DVector<f64>, ResumError> {
        Ok(self.evaluate(t)?.1)
    }

    /// (Φ_t, dΦ_t/dt) in one pass; dΦ/dt = Σ_j [P(z) + z P′(z)] ω_j, z = ξ_j t.
    pub fn evaluate(&self, t: f64) -> Result<(DVector<f64>, DVector<f64>), ResumError> {
        let n = self.u0.len();
        let mut u = self.u0.clone();
        let mut du = DVector::zeros(n);
        for (i, p) in self.pade.iter().enumerate() {
            let (mut acc, mut dacc) = (0.0, 0.0);
            for (&xi, &w) in self.rule.nodes.iter().zip(&self.rule.weights) {
                let z = xi * t;
                let (v, dv, d, scale) = p.eval_full(z);
                if d < POLE_TOL * scale || !v.is_finite() {
                    return Err(ResumError::PoleOnPath { node: i, t });
                }
                acc += w * v;
                dacc += w * (v + z * dv);
            }
            u[i] += t * acc;
            du[i] = dacc;
        }
        Ok((u, du))
    }
}
