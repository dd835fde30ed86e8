use std::path::{Path, PathBuf};

use continuation::ResidualScope;
use resummation::ResidualNorm;
use serde::{Deserialize, Serialize};
use series_engine::{ModelKind, PlanMode};

use crate::error::CliError;

pub const OUT_ENV: &str = "RESUMFEM_OUT";
const DEFAULT_OUT: &str = "resumfem-out";

/// Run configuration; every field may come from a JSON file and be
/// overridden on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// heat | burgers
    pub model: String,
    pub nu: f64,
    pub domain: [f64; 2],
    pub cells: Vec<usize>,
    pub degrees: Vec<usize>,
    pub m: usize,
    pub eps: f64,
    /// [r, s]
    pub pade: [usize; 2],
    pub ng: usize,
    /// Fixed step; absent means adaptive.
    pub dt: Option<f64>,
    /// none | constant | doubling | geometric
    pub plan: String,
    /// Exponent in α₀ = h^c; looked up or searched when absent.
    pub c: Option<f64>,
    /// Geometric ratio R; looked up or searched when absent.
    pub ratio: Option<f64>,
    pub t_final: f64,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    /// euclidean | mass-weighted
    pub residual_norm: Option<String>,
    /// interior | full
    pub residual_scope: Option<String>,
    /// sin-pi | sin-2pi; defaults per model.
    pub initial: Option<String>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: "heat".into(),
            nu: 1.0,
            domain: [0.0, 1.0],
            cells: vec![20],
            degrees: vec![1],
            m: 5,
            eps: 1e-3,
            pade: [2, 2],
            ng: 20,
            dt: None,
            plan: "geometric".into(),
            c: None,
            ratio: None,
            t_final: 1.0,
            out: None,
            jobs: 1,
            residual_norm: None,
            residual_scope: None,
            initial: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Initial {
    SinPi,
    Sin2Pi,
}

impl Initial {
    pub fn eval(self, x: f64) -> f64 {
        use std::f64::consts::PI;
        match self {
            Self::SinPi => (PI * x).sin(),
            Self::Sin2Pi => (2.0 * PI * x).sin(),
        }
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn model_kind(&self) -> Result<ModelKind, CliError> {
        self.model.parse().map_err(CliError::Config)
    }

    pub fn plan_mode(&self) -> Result<PlanMode, CliError> {
        self.plan.parse().map_err(CliError::Config)
    }

    pub fn residual_norm(&self) -> Result<Option<ResidualNorm>, CliError> {
        self.residual_norm.as_deref().map(|s| s.parse().map_err(CliError::Config)).transpose()
    }

    pub fn residual_scope(&self) -> Result<Option<ResidualScope>, CliError> {
        self.residual_scope.as_deref().map(|s| s.parse().map_err(CliError::Config)).transpose()
    }

    pub fn initial(&self) -> Result<Initial, CliError> {
        match self.initial.as_deref() {
            Some("sin-pi") => Ok(Initial::SinPi),
            Some("sin-2pi") => Ok(Initial::Sin2Pi),
            Some(other) => bad(format!("unknown initial condition '{other}' (sin-pi|sin-2pi)")),
            None => Ok(match self.model_kind()? {
                ModelKind::Heat => Initial::SinPi,
                ModelKind::Burgers => Initial::Sin2Pi,
            }),
        }
    }

    /// --out, then the config file, then $RESUMFEM_OUT, then ./resumfem-out.
    pub fn out_dir(&self) -> PathBuf {
        self.out
            .clone()
            .or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.model_kind()?;
        self.plan_mode()?;
        self.residual_norm()?;
        self.residual_scope()?;
        self.initial()?;
        if !(self.nu >= 0.0) {
            return bad("nu must be nonnegative");
        }
        if !(self.domain[1] > self.domain[0]) {
            return bad("domain must satisfy a < b");
        }
        if self.cells.is_empty() || self.cells.iter().any(|&n| n < 2) {
            return bad("cells must be a non-empty list of counts ≥ 2");
        }
        if self.degrees.is_empty() || self.degrees.iter().any(|&p| !(1..=fem1d::MAX_DEGREE).contains(&p)) {
            return bad(format!("degrees must be a non-empty list within 1..={}", fem1d::MAX_DEGREE));
        }
        let [r, s] = self.pade;
        if self.m < 2 || r + s + 1 > self.m {
            return bad("need m ≥ 2 and r + s ≤ m − 1");
        }
        if !(self.eps > 0.0) {
            return bad("eps must be positive");
        }
        if self.ng == 0 || self.ng > quad_linalg::MAX_ORDER {
            return bad(format!("ng must be within 1..={}", quad_linalg::MAX_ORDER));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0) {
                return bad("dt must be positive");
            }
        }
        if !(self.t_final >= 0.0) {
            return bad("t-final must be nonnegative");
        }
        if self.c.is_some_and(|c| !c.is_finite()) || self.ratio.is_some_and(|r| !(r > 0.0)) {
            return bad("c must be finite and ratio positive");
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1");
        }
        Ok(())
    }
}
