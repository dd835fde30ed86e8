use fem1d::{assemble, reduce_dirichlet, FemSpace, Operators};
use nalgebra::DVector;
use resummation::{borel, residual, FlowEvaluator, PadeSet, ResidualNorm, ResumError};
use series_engine::{RecurrenceModel, SeriesTerms, StabilizationPlan, TermEngine};

use crate::ContinuationError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepPolicy {
    Adaptive,
    Fixed(f64),
}

/// Which rows enter the residual.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ResidualScope {
    /// Interior (Dirichlet-reduced) system.
    #[default]
    Interior,
    /// Full assembled system with zero boundary values, boundary rows included.
    Full,
}

impl ResidualScope {
    pub fn name(self) -> &'static str {
        match self {
            Self::Interior => "interior",
            Self::Full => "full",
        }
    }
}

impl std::str::FromStr for ResidualScope {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "interior" => Ok(Self::Interior),
            "full" => Ok(Self::Full),
            other => Err(format!("unknown residual scope '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationParams {
    pub m: usize,
    pub eps: f64,
    pub r: usize,
    pub s: usize,
    pub n_g: usize,
    pub t_final: f64,
    pub growth: f64,
    pub policy: StepPolicy,
    pub max_steps: usize,
    pub residual_norm: ResidualNorm,
    pub residual_scope: ResidualScope,
    /// Fixed-step runs stop once Res exceeds this.
    pub explosion: f64,
}

impl Default for ContinuationParams {
    fn default() -> Self {
        Self {
            m: 5,
            eps: 1e-3,
            r: 2,
            s: 2,
            n_g: 20,
            t_final: 1.0,
            growth: 1.1,
            policy: StepPolicy::Adaptive,
            max_steps: 100_000,
            residual_norm: ResidualNorm::Euclidean,
            residual_scope: ResidualScope::Interior,
            explosion: 1e3,
        }
    }
}

impl ContinuationParams {
    pub fn validate(&self) -> Result<(), ContinuationError> {
        let bad = |m: &str| Err(ContinuationError::InvalidParams(m.into()));
        if self.m < 2 {
            return bad("m must be at least 2");
        }
        if self.r + self.s + 1 > self.m {
            return bad("r + s must be at most m − 1");
        }
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if !(self.growth > 1.0) {
            return bad("growth factor must exceed 1");
        }
        if !(self.t_final >= 0.0) {
            return bad("final time must be nonnegative");
        }
        if let StepPolicy::Fixed(dt) = self.policy {
            if !(dt > 0.0) {
                return bad("fixed step must be positive");
            }
        }
        if self.n_g == 0 {
            return bad("need at least one Laguerre node");
        }
        Ok(())
    }
}

/// Model, discretization and stabilization shared by every restart.
#[derive(Debug, Clone)]
pub struct Problem {
    pub model: RecurrenceModel,
    pub space: FemSpace,
    pub full: Operators,
    pub reduced: Operators,
    pub plan: StabilizationPlan,
}

/// State after one trial step.
pub(crate) enum Trial {
    Pass { u: DVector<f64>, res: f64 },
    /// Residual too large, pole on the Laplace path, or non-finite values.
    Fail,
}

impl Problem {
    pub fn new(model: RecurrenceModel, space: &FemSpace, plan: StabilizationPlan) -> Self {
        let full = assemble(space);
        let reduced = reduce_dirichlet(&full, space);
        Self { model, space: space.clone(), full, reduced, plan }
    }

    /// Interior nodal values of f.
    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> DVector<f64> {
        let x = self.space.nodes();
        DVector::from_iterator(self.full.interior.len(), self.full.interior.iter().map(|&i| f(x[i])))
    }

    /// Embeds interior values into the full vector with zero boundary values.
    pub fn pad(&self, v: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.full.m.nrows());
        for (k, &i) in self.full.interior.iter().enumerate() {
            out[i] = v[k];
        }
        out
    }

    pub(crate) fn engine(&self, m: usize) -> Result<TermEngine, ContinuationError> {
        Ok(TermEngine::new(self.model, &self.reduced, self.plan, m)?)
    }

    pub(crate) fn flow(&self, terms: &SeriesTerms, p: &ContinuationParams) -> Result<FlowEvaluator, ContinuationError> {
        let set = PadeSet::fit(&borel(&terms.terms)?, p.r, p.s)?;
        Ok(FlowEvaluator::new(terms.terms[0].clone(), set, p.n_g)?)
    }

    pub fn residual(&self, u: &DVector<f64>, du: &DVector<f64>, p: &ContinuationParams) -> Result<f64, ContinuationError> {
        let r = match p.residual_scope {
            ResidualScope::Interior => residual(&self.model, &self.reduced, u, du, p.residual_norm),
            ResidualScope::Full => residual(&self.model, &self.full, &self.pad(u), &self.pad(du), p.residual_norm),
        };
        match r {
            // Steady state: fall back to the absolute defect.
            Err(ResumError::ZeroDerivative { residual }) => Ok(residual),
            other => Ok(other?),
        }
    }

    pub(crate) fn try_step(&self, flow: &FlowEvaluator, dt: f64, p: &ContinuationParams, limit: f64) -> Result<Trial, ContinuationError> {
        let (u, du) = match flow.evaluate(dt) {
            Ok(v) => v,
            Err(ResumError::PoleOnPath { .. }) => return Ok(Trial::Fail),
            Err(e) => return Err(e.into()),
        };
        if u.iter().chain(du.iter()).any(|v| !v.is_finite()) {
            return Ok(Trial::Fail);
        }
        let res = self.residual(&u, &du, p)?;
        Ok(if res <= limit { Trial::Pass { u, res } } else { Trial::Fail })
    }

    /// Residual of a single step of length `dt` from `u` against ε, or `None`
    /// when the step cannot be evaluated.
    pub fn trial(&self, u: &DVector<f64>, dt: f64, p: &ContinuationParams) -> Result<Option<f64>, ContinuationError> {
        let terms = self.engine(p.m)?.terms(u)?;
        let flow = self.flow(&terms, p)?;
        Ok(match self.try_step(&flow, dt, p, f64::INFINITY)? {
            Trial::Pass { res, .. } => Some(res),
            Trial::Fail => None,
        })
    }
}
