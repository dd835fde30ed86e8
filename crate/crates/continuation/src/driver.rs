use nalgebra::DVector;
use resummation::{partial_sum_radius, ResumError};
use series_engine::{SeriesError, SeriesTerms};

use crate::problem::{ContinuationParams, Problem, StepPolicy, Trial};
use crate::trace::{ContinuationTrace, StepRecord, Termination};
use crate::ContinuationError;

const MAX_HALVINGS: usize = 40;

/// Residual of the initial state against the derivative the first flow
/// assigns to it (t = 0 local time).
fn initial_record(pb: &Problem, terms: &SeriesTerms, p: &ContinuationParams) -> Result<StepRecord, ContinuationError> {
    let flow = pb.flow(terms, p)?;
    let du = flow.flow_derivative(0.0)?;
    let u = terms.terms[0].clone();
    let res = pb.residual(&u, &du, p)?;
    Ok(StepRecord { n: 0, t: 0.0, dt: 0.0, res, u })
}

fn reached(t: f64, t_final: f64) -> bool {
    t >= t_final - 1e-12 * t_final.max(1.0)
}

/// Adaptive continuation: seed Δt from the partial-sum bound, grow it by the
/// growth factor while Res ≤ ε, keep the last passing trial, restart.
pub fn advance(pb: &Problem, u0: &DVector<f64>, p: &ContinuationParams) -> Result<ContinuationTrace, ContinuationError> {
    p.validate()?;
    let engine = pb.engine(p.m)?;
    let mut terms = engine.terms(u0)?;
    let mut records = vec![initial_record(pb, &terms, p)?];
    let mut t = 0.0;
    let mut prev_dt: Option<f64> = None;
    while !reached(t, p.t_final) {
        if records.len() > p.max_steps {
            return Ok(ContinuationTrace::from_records(records, Termination::MaxSteps));
        }
        let flow = pb.flow(&terms, p)?;
        let remaining = p.t_final - t;
        let seed = match partial_sum_radius(&terms.terms, p.eps) {
            Ok(r) => r,
            Err(ResumError::ZeroHighestTerm | ResumError::ZeroFirstTerm) => prev_dt.unwrap_or(p.t_final / 100.0),
            Err(e) => return Err(e.into()),
        };
        let mut dt = seed.min(remaining);
        let mut accepted = None;
        for _ in 0..=MAX_HALVINGS {
            if dt < 1e-12 * p.t_final {
                break;
            }
            if let Trial::Pass { u, res } = pb.try_step(&flow, dt, p, p.eps)? {
                accepted = Some((dt, u, res));
                break;
            }
            dt *= 0.5;
        }
        let Some((mut dt, mut un, mut res)) = accepted else {
            return Ok(ContinuationTrace::from_records(records, Termination::StepCollapse { t }));
        };
        while dt < remaining {
            let next = (dt * p.growth).min(remaining);
            match pb.try_step(&flow, next, p, p.eps)? {
                Trial::Pass { u, res: r } => (dt, un, res) = (next, u, r),
                Trial::Fail => break,
            }
        }
        t = if dt == remaining { p.t_final } else { t + dt };
        prev_dt = Some(dt);
        if !reached(t, p.t_final) {
            terms = engine.terms(&un)?;
        }
        records.push(StepRecord { n: records.len(), t, dt, res, u: un });
    }
    Ok(ContinuationTrace::from_records(records, Termination::Completed))
}

/// Steps t_n = nΔt (last one clamped to T); Res is evaluated at the end of each step.
pub fn fixed_step_integrate(pb: &Problem, u0: &DVector<f64>, p: &ContinuationParams) -> Result<ContinuationTrace, ContinuationError> {
    p.validate()?;
    let StepPolicy::Fixed(dt) = p.policy else {
        return Err(ContinuationError::InvalidParams("fixed-step driver needs a fixed Δt".into()));
    };
    let engine = pb.engine(p.m)?;
    let explode = |records: Vec<StepRecord>, step, t| {
        Ok(ContinuationTrace::from_records(records, Termination::ResidualExplosion { step, t }))
    };
    let terms = match engine.terms(u0) {
        Ok(t) => t,
        Err(SeriesError::NonFinite { .. }) => return explode(Vec::new(), 0, 0.0),
        Err(e) => return Err(e.into()),
    };
    let mut records = vec![initial_record(pb, &terms, p)?];
    let mut terms = Some(terms);
    let mut u = u0.clone();
    let mut n = 0usize;
    let mut t = 0.0;
    while !reached(t, p.t_final) {
        if n >= p.max_steps {
            return Ok(ContinuationTrace::from_records(records, Termination::MaxSteps));
        }
        let t_next = (((n + 1) as f64) * dt).min(p.t_final);
        let h = t_next - t;
        let current = match terms.take() {
            Some(t) => t,
            None => match engine.terms(&u) {
                Ok(t) => t,
                Err(SeriesError::NonFinite { .. }) => return explode(records, n + 1, t_next),
                Err(e) => return Err(e.into()),
            },
        };
        let flow = pb.flow(&current, p)?;
        match pb.try_step(&flow, h, p, p.explosion)? {
            Trial::Pass { u: un, res } => {
                n += 1;
                t = t_next;
                u = un;
                records.push(StepRecord { n, t, dt: h, res, u: u.clone() });
            }
            Trial::Fail => return explode(records, n + 1, t_next),
        }
    }
    Ok(ContinuationTrace::from_records(records, Termination::Completed))
}
