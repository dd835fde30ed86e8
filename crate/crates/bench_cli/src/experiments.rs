//! Computations shared by the subcommands and recipes.

use continuation::{advance, fixed_step_integrate, ContinuationParams, ContinuationTrace, Problem, StepPolicy};
use fem1d::{assemble, build_space, reduce_dirichlet, BoundaryTreatment, FemSpace, Operators};
use nalgebra::{DMatrix, DVector};
use quad_linalg::{cond2_auto, cond_frobenius, inv_frobenius, op_norm};
use series_engine::{
    compute_terms, exact_heat_term, exact_inviscid_term, exact_viscous_term, find_alpha0, find_ratio, AlphaSearch,
    ErrorNorm, Grid, InverseNorm, ModelKind, PlanMode, RecurrenceModel, SeriesError, StabilizationPlan,
    INVISCID_MAX_ORDER,
};

use crate::config::Initial;
use crate::error::CliError;
use crate::golden::plan_reference;

/// Boundary presentation used by the α₀/R scans.
pub const SEARCH_TREATMENT: BoundaryTreatment = BoundaryTreatment::IdentityRows;
pub const RATIO_NORM: InverseNorm = InverseNorm::Frobenius;

#[derive(Debug, Clone)]
pub struct Discretization {
    pub space: FemSpace,
    pub full: Operators,
    pub reduced: Operators,
    /// Interior node coordinates.
    pub x: Vec<f64>,
}

impl Discretization {
    pub fn new(domain: [f64; 2], n: usize, p: usize) -> Result<Self, CliError> {
        let space = build_space(domain[0], domain[1], n, p)?;
        let full = assemble(&space);
        let reduced = reduce_dirichlet(&full, &space);
        let x = space.interior().iter().map(|&i| space.nodes()[i]).collect();
        Ok(Self { space, full, reduced, x })
    }

    pub fn h(&self) -> f64 {
        self.space.h()
    }

    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> DVector<f64> {
        DVector::from_iterator(self.x.len(), self.x.iter().map(|&x| f(x)))
    }
}

pub fn model(kind: ModelKind, nu: f64) -> RecurrenceModel {
    match kind {
        ModelKind::Heat => RecurrenceModel::heat(nu),
        ModelKind::Burgers => RecurrenceModel::burgers(nu),
    }
}

/// (c, R) minimizing κ₂(M + h^c K) and κ₂·‖A⁻¹‖_F.
pub fn search_parameters(d: &Discretization) -> Result<(f64, f64), CliError> {
    let cfg = AlphaSearch::new(&d.space, SEARCH_TREATMENT);
    let (c, a0) = find_alpha0(&d.full.m, &d.full.k, &cfg, &Grid::c_default())?;
    let r = find_ratio(&d.full.m, &d.full.k, &cfg, a0, &Grid::r_default(), RATIO_NORM)?;
    Ok((c, r))
}

/// Explicit values first, then the stabilization table, then a fresh search.
pub fn plan_parameters(d: &Discretization, c: Option<f64>, r: Option<f64>) -> Result<(f64, f64), CliError> {
    if let (Some(c), Some(r)) = (c, r) {
        return Ok((c, r));
    }
    let (tc, tr) = match plan_reference(d.space.p, d.space.mesh.n_cells) {
        Some(v) => v,
        None => search_parameters(d)?,
    };
    Ok((c.unwrap_or(tc), r.unwrap_or(tr)))
}

pub fn make_plan(mode: PlanMode, d: &Discretization, c: Option<f64>, r: Option<f64>) -> Result<StabilizationPlan, CliError> {
    if mode == PlanMode::None {
        return Ok(StabilizationPlan::none(d.h()));
    }
    let (c, r) = plan_parameters(d, c, r)?;
    Ok(StabilizationPlan::new(mode, d.h(), c, r))
}

/// Exact series terms u_0..u_k at the interior nodes, where a closed form exists.
pub fn exact_terms(model: &RecurrenceModel, initial: Initial, k_max: usize, x: &[f64]) -> Result<Vec<DVector<f64>>, CliError> {
    let none = |why: &str| CliError::Config(format!("no exact terms for {} with {why}", model.kind.name()));
    (0..=k_max)
        .map(|k| {
            let v = match (model.kind, initial) {
                (ModelKind::Heat, Initial::SinPi) => exact_heat_term(k, model.nu, x),
                (ModelKind::Heat, Initial::Sin2Pi) => {
                    let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
                    exact_heat_term(k, 4.0 * model.nu, &x2)
                }
                // Closed form where tabulated; the sine-mode recursion is exact beyond.
                (ModelKind::Burgers, Initial::Sin2Pi) if model.nu == 0.0 && k_max <= INVISCID_MAX_ORDER => {
                    exact_inviscid_term(k, x)?
                }
                (ModelKind::Burgers, Initial::Sin2Pi) => exact_viscous_term(k, model.nu, 2 * k_max + 4, x),
                (ModelKind::Burgers, Initial::SinPi) => return Err(none("u₀ = sin(πx)")),
            };
            Ok(DVector::from_vec(v))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct TermRun {
    /// u_0..u_j for the largest j computed with finite values.
    pub terms: Vec<DVector<f64>>,
    /// First order that came out non-finite.
    pub failed_at: Option<usize>,
}

/// Terms up to order m; stops at the first non-finite term instead of failing.
pub fn terms_until_failure(model: &RecurrenceModel, d: &Discretization, u0: &DVector<f64>, m: usize, plan: &StabilizationPlan) -> Result<TermRun, CliError> {
    match compute_terms(model, &d.reduced, u0, m, plan) {
        Ok(t) => Ok(TermRun { terms: t.terms, failed_at: None }),
        Err(SeriesError::NonFinite { k }) => {
            let terms = if k <= 1 { vec![u0.clone()] } else { compute_terms(model, &d.reduced, u0, k - 1, plan)?.terms };
            Ok(TermRun { terms, failed_at: Some(k) })
        }
        Err(e) => Err(e.into()),
    }
}

/// e_k = ‖u_k − u_k^exact‖_M (optionally relative), one per computed term.
pub fn term_errors(run: &TermRun, exact: &[DVector<f64>], m: &DMatrix<f64>, relative: bool) -> Vec<f64> {
    let norm = ErrorNorm::MassWeighted(m);
    run.terms
        .iter()
        .zip(exact)
        .map(|(u, x)| {
            let e = norm.norm(&(u - x));
            if relative {
                e / norm.norm(x)
            } else {
                e
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CondNorm {
    Spectral,
    Frobenius,
}

impl CondNorm {
    pub fn name(self) -> &'static str {
        match self {
            Self::Spectral => "spectral",
            Self::Frobenius => "frobenius",
        }
    }
}

/// Every (boundary treatment, norm) convention for a mass-matrix condition number.
pub const COND_CONVENTIONS: [(BoundaryTreatment, CondNorm); 6] = [
    (BoundaryTreatment::Full, CondNorm::Spectral),
    (BoundaryTreatment::Reduced, CondNorm::Spectral),
    (BoundaryTreatment::IdentityRows, CondNorm::Spectral),
    (BoundaryTreatment::Full, CondNorm::Frobenius),
    (BoundaryTreatment::Reduced, CondNorm::Frobenius),
    (BoundaryTreatment::IdentityRows, CondNorm::Frobenius),
];

pub fn convention_name(c: (BoundaryTreatment, CondNorm)) -> String {
    format!("{}-{}", c.0.name(), c.1.name())
}

pub fn mass_condition(d: &Discretization, conv: (BoundaryTreatment, CondNorm)) -> Result<f64, CliError> {
    let m = conv.0.apply(&d.full.m, &d.space, 1.0);
    Ok(match conv.1 {
        CondNorm::Spectral => cond2_auto(&m)?,
        CondNorm::Frobenius => cond_frobenius(&m)?,
    })
}

/// κ₂(M + h^c K) along the c grid.
pub fn alpha_curve(d: &Discretization, grid: &Grid) -> Result<Vec<(f64, f64)>, CliError> {
    let cfg = AlphaSearch::new(&d.space, SEARCH_TREATMENT);
    let (m, k) = (cfg.treat(&d.full.m, 1.0), cfg.treat(&d.full.k, 0.0));
    (0..grid.len())
        .map(|i| {
            let c = grid.value(i);
            Ok((c, cond2_auto(&(&m + &k * d.h().powf(c)))?))
        })
        .collect()
}

/// κ₂(A)·‖A⁻¹‖ with A = M + rα₀K along the r grid.
pub fn ratio_curve(d: &Discretization, alpha0: f64, grid: &Grid) -> Result<Vec<(f64, f64)>, CliError> {
    let cfg = AlphaSearch::new(&d.space, SEARCH_TREATMENT);
    let (m, k) = (cfg.treat(&d.full.m, 1.0), cfg.treat(&d.full.k, 0.0));
    (0..grid.len())
        .map(|i| {
            let r = grid.value(i);
            let a = &m + &k * (r * alpha0);
            let inv = match RATIO_NORM {
                InverseNorm::Frobenius => inv_frobenius(&a)?,
                InverseNorm::Spectral => cond2_auto(&a)? / op_norm(&a),
            };
            Ok((r, cond2_auto(&a)? * inv))
        })
        .collect()
}

pub fn problem(model: RecurrenceModel, d: &Discretization, plan: StabilizationPlan) -> Problem {
    Problem::new(model, &d.space, plan)
}

/// Runs the fixed-step driver for `StepPolicy::Fixed`, the adaptive one otherwise.
pub fn integrate(pb: &Problem, u0: &DVector<f64>, params: &ContinuationParams) -> Result<ContinuationTrace, CliError> {
    params.validate()?;
    Ok(match params.policy {
        StepPolicy::Fixed(_) => fixed_step_integrate(pb, u0, params)?,
        StepPolicy::Adaptive => advance(pb, u0, params)?,
    })
}

/// Executes `f` over `items` on a pool of `jobs` threads, keeping input order.
pub fn par_map<T: Sync, R: Send>(jobs: usize, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Result<Vec<R>, CliError> {
    use rayon::prelude::*;
    if jobs <= 1 {
        return Ok(items.iter().map(f).collect());
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(pool.install(|| items.par_iter().map(f).collect()))
}
