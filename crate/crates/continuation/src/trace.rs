use std::io::Write;

use nalgebra::DVector;

use crate::ContinuationError;

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub n: usize,
    pub t: f64,
    /// Step that produced this record (0 for the initial state).
    pub dt: f64,
    pub res: f64,
    /// Interior state.
    pub u: DVector<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    Completed,
    MaxSteps,
    StepCollapse { t: f64 },
    /// Non-finite values or Res above the explosion bound.
    ResidualExplosion { step: usize, t: f64 },
}

impl Termination {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Completed => "completed",
            Self::MaxSteps => "max-steps",
            Self::StepCollapse { .. } => "step-collapse",
            Self::ResidualExplosion { .. } => "residual-explosion",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationTrace {
    pub records: Vec<StepRecord>,
    pub termination: Termination,
}

impl ContinuationTrace {
    pub fn from_records(records: Vec<StepRecord>, termination: Termination) -> Self {
        Self { records, termination }
    }

    pub fn completed(&self) -> bool {
        self.termination == Termination::Completed
    }

    pub fn final_state(&self) -> &DVector<f64> {
        &self.records.last().expect("trace has an initial record").u
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ContinuationError> {
        let err = |e: csv::Error| ContinuationError::Csv(e.to_string());
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        out.write_record(["n", "t_n", "dt_n", "res_n"]).map_err(err)?;
        for r in &self.records {
            out.write_record([r.n.to_string(), format!("{:.16e}", r.t), format!("{:.16e}", r.dt), format!("{:.16e}", r.res)])
                .map_err(err)?;
        }
        out.flush().map_err(|e| ContinuationError::Csv(e.to_string()))
    }

    /// "IRes=<v> termination=<reason> steps=<n>"
    pub fn summary(&self) -> String {
        let ires = integrated_residual(self).map_or("n/a".to_string(), |v| format!("{v:.16e}"));
        format!("IRes={ires} termination={} steps={}", self.termination.name(), self.records.len().saturating_sub(1))
    }
}

/// Trapezoidal ∫ Res dt over the recorded times.
pub fn integrated_residual(trace: &ContinuationTrace) -> Result<f64, ContinuationError> {
    let r = &trace.records;
    if r.len() < 2 {
        return Err(ContinuationError::TooFewPoints { got: r.len() });
    }
    Ok(r.windows(2).map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].res + w[1].res)).sum())
}
