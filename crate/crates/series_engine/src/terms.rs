use fem1d::Operators;
use nalgebra::{DMatrix, DVector};
use quad_linalg::{BandLu, BandMatrix};

use crate::model::RecurrenceModel;
use crate::plan::StabilizationPlan;
use crate::SeriesError;

#[derive(Debug, Clone)]
pub struct SeriesTerms {
    pub m: usize,
    /// u_0..u_m on interior dofs.
    pub terms: Vec<DVector<f64>>,
    pub plan: StabilizationPlan,
}

/// Prefactored stabilized systems for repeated term generation from new
/// initial states (continuation restarts reuse the same recurrence).
#[derive(Debug, Clone)]
pub struct TermEngine {
    model: RecurrenceModel,
    ops: Operators,
    plan: StabilizationPlan,
    m: usize,
    stiffness: BandMatrix,
    // solver index per k
    which: Vec<usize>,
    solvers: Vec<BandLu>,
}

impl TermEngine {
    /// `ops` must be the Dirichlet-reduced operators.
    pub fn new(model: RecurrenceModel, ops: &Operators, plan: StabilizationPlan, m: usize) -> Result<Self, SeriesError> {
        let mut alphas: Vec<f64> = Vec::new();
        let mut which = Vec::with_capacity(m);
        let mut solvers = Vec::new();
        for k in 0..m {
            let a = plan.alpha(k);
            let idx = match alphas.iter().position(|&x| x == a) {
                Some(i) => i,
                None => {
                    let sys: DMatrix<f64> = &ops.m + &ops.k * a;
                    solvers.push(BandLu::new(&BandMatrix::from_dense(&sys))?);
                    alphas.push(a);
                    alphas.len() - 1
                }
            };
            which.push(idx);
        }
        Ok(Self { model, ops: ops.clone(), plan, m, stiffness: BandMatrix::from_dense(&ops.k), which, solvers })
    }

    pub fn model(&self) -> &RecurrenceModel {
        &self.model
    }

    pub fn ops(&self) -> &Operators {
        &self.ops
    }

    pub fn plan(&self) -> &StabilizationPlan {
        &self.plan
    }

    pub fn order(&self) -> usize {
        self.m
    }

    fn rhs(&self, k: usize, terms: &[DVector<f64>]) -> DVector<f64> {
        let ku = self.stiffness.matvec(terms[k].as_slice());
        let mut out = DVector::from_iterator(ku.len(), ku.iter().map(|v| -self.model.nu * v));
        if self.model.kind == crate::model::ModelKind::Burgers {
            for r in 0..=k {
                let c = self.ops.d.contract(terms[r].as_slice(), terms[k - r].as_slice());
                out.iter_mut().zip(&c).for_each(|(o, v)| *o -= v);
            }
        }
        out
    }

    pub fn terms(&self, u0: &DVector<f64>) -> Result<SeriesTerms, SeriesError> {
        let n = self.ops.m.nrows();
        if u0.len() != n {
            return Err(SeriesError::DimensionMismatch { expected: n, got: u0.len() });
        }
        let mut terms = vec![u0.clone()];
        for k in 0..self.m {
            let b = self.rhs(k, &terms) / (k as f64 + 1.0);
            let next = DVector::from_vec(self.solvers[self.which[k]].solve(b.as_slice()));
            if next.iter().any(|v| !v.is_finite()) {
                return Err(SeriesError::NonFinite { k: k + 1 });
            }
            terms.push(next);
        }
        Ok(SeriesTerms { m: self.m, terms, plan: self.plan })
    }
}

pub fn compute_terms(
    model: &RecurrenceModel,
    ops: &Operators,
    u0: &DVector<f64>,
    m: usize,
    plan: &StabilizationPlan,
) -> Result<SeriesTerms, SeriesError> {
    TermEngine::new(*model, ops, *plan, m)?.terms(u0)
}
