//! Reference values for the reproduction recipes and the comparison logic.

use serde::Serialize;

/// Mesh sizes 1/n indexing the reference grids below.
pub const SLOPE_CELLS: [usize; 4] = [20, 50, 100, 200];
pub const COND_CELLS: [usize; 4] = [10, 30, 50, 100];
pub const EXPONENT_CELLS: [usize; 6] = [50, 100, 200, 300, 400, 500];
pub const IRES_CELLS: [usize; 3] = [20, 50, 100];
pub const BURGERS_STEPS: [f64; 4] = [5e-2, 1e-2, 1e-3, 1e-4];

/// Unstabilized heat error slopes, p = 2..4.
pub const SLOPES: [[f64; 4]; 3] = [[3.47, 4.27, 4.87, 5.48], [3.48, 4.27, 4.88, 5.48], [4.28, 5.07, 5.68, 6.27]];
/// p = 1: early slope, last k of the early regime, and slope after the jump.
pub const P1_EARLY_SLOPE: f64 = 0.69;
pub const P1_BREAK: [usize; 4] = [5, 4, 3, 2];
pub const P1_LATE_SLOPES: [f64; 4] = [2.74, 3.56, 4.17, 4.77];

/// κ₂ of the mass matrix, p = 1..4.
pub const MASS_COND: [[f64; 4]; 4] = [
    [28.60, 89.51, 149.70, 299.85],
    [63.63, 195.22, 325.97, 652.44],
    [106.87, 325.48, 543.14, 1086.85],
    [158.52, 480.73, 801.92, 1604.43],
];

/// Optimal α₀ exponents c, p = 1..4.
pub const EXPONENTS: [[f64; 6]; 4] = [
    [1.96, 1.96, 1.96, 1.96, 1.96, 1.96],
    [2.18, 2.02, 1.9, 1.86, 1.82, 1.80],
    [2.52, 2.28, 2.14, 2.06, 2.02, 2.00],
    [2.68, 2.4, 2.22, 2.14, 2.10, 2.06],
];

/// Stabilization parameters (c, R), p = 2..5, over `SLOPE_CELLS`.
pub const PLAN_C: [[f64; 4]; 4] =
    [[2.0, 1.86, 1.8, 1.76], [2.3, 2.12, 2.0, 1.94], [2.5, 2.26, 2.1, 2.02], [2.8, 2.4, 2.3, 2.1]];
pub const PLAN_R: [[f64; 4]; 4] = [[1.9, 2.85, 3.8, 5.4], [2.1, 3.5, 4.7, 6.3], [1.7, 2.7, 3.4, 4.4], [1.9, 2.1, 3.5, 3.0]];

/// Heat IRes, p = 1..3, over `IRES_CELLS`.
pub const HEAT_IRES: [[f64; 3]; 3] = [[0.0573, 0.0357, 0.0251], [0.0363, 0.0225, 0.0159], [0.0274, 0.0170, 0.0120]];

/// log₁₀ amplification factors, p = 1..4, over `SLOPE_CELLS`.
pub const HEAT_AMPLIFICATION: [[f64; 4]; 4] =
    [[3.35, 5.10, 5.77, 6.39], [4.99, 5.81, 6.43, 7.03], [5.40, 6.21, 6.81, 7.42], [5.70, 6.53, 7.14, 7.75]];
pub const BURGERS_AMPLIFICATION: [[f64; 4]; 4] =
    [[0.99, 2.13, 2.35, 2.52], [2.20, 2.42, 2.58, 2.73], [2.34, 2.55, 2.70, 2.85], [2.45, 2.68, 2.83, 2.99]];

const X: Option<f64> = None;

/// Burgers IRes indexed [Δt][plan none/constant/geometric][h in `SLOPE_CELLS`][p = 1..3];
/// `None` marks runs that do not reach the final time.
pub const BURGERS_IRES: [[[[Option<f64>; 3]; 4]; 3]; 4] = [
    [
        [[X; 3]; 4],
        [[X; 3]; 4],
        [[Some(0.029671), Some(0.0194313), Some(0.017131)], [Some(0.018912), X, X], [X; 3], [X; 3]],
    ],
    [
        [[X; 3]; 4],
        [[Some(0.02718), Some(0.017171), X], [Some(0.01750), X, X], [X; 3], [X; 3]],
        [[Some(0.02714), Some(0.017159), Some(0.01306)], [Some(0.01733), Some(0.01094), X], [Some(0.01225), X, X], [X; 3]],
    ],
    [
        [[Some(0.02750), X, X], [X; 3], [X; 3], [X; 3]],
        [
            [Some(0.027244), Some(0.017220), Some(0.013100)],
            [Some(0.017284), Some(0.010977), Some(0.008315)],
            [Some(0.012294), Some(0.007778), X],
            [X; 3],
        ],
        [
            [Some(0.027246), Some(0.017222), Some(0.013101)],
            [Some(0.017286), Some(0.010977), Some(0.008315)],
            [Some(0.012295), Some(0.007778), Some(0.005884)],
            [Some(0.008704), Some(0.005504), X],
        ],
    ],
    [
        [[Some(0.027516), Some(0.017424), Some(0.013171)], [Some(0.017420), X, X], [Some(0.012320), X, X], [X; 3]],
        [
            [Some(0.027263), Some(0.017233), Some(0.013108)],
            [Some(0.017295), Some(0.010983), Some(0.008320)],
            [Some(0.012301), Some(0.007782), Some(0.005887)],
            [Some(0.008708), Some(0.005507), Some(0.004164)],
        ],
        [
            [Some(0.027263), Some(0.017233), Some(0.013108)],
            [Some(0.017295), Some(0.010983), Some(0.008320)],
            [Some(0.012301), Some(0.007783), Some(0.005887)],
            [Some(0.008709), Some(0.005507), Some(0.004164)],
        ],
    ],
];

/// Viscous Burgers, h = 1/100, p = 1: (ν, last k of early regime, early slope, late slope).
pub const VISCOUS_REGIMES: [(f64, usize, f64, f64); 2] = [(0.1, 5, 1.33, 3.17), (1.0, 4, 1.84, 4.17)];

fn index_of<T: PartialEq>(list: &[T], v: &T) -> Option<usize> {
    list.iter().position(|x| x == v)
}

/// (c, R) from the stabilization table, when tabulated.
pub fn plan_reference(p: usize, n: usize) -> Option<(f64, f64)> {
    let j = index_of(&SLOPE_CELLS, &n)?;
    let i = p.checked_sub(2).filter(|&i| i < PLAN_C.len())?;
    Some((PLAN_C[i][j], PLAN_R[i][j]))
}

pub fn burgers_reference(dt: f64, plan: usize, n: usize, p: usize) -> Option<Option<f64>> {
    let d = BURGERS_STEPS.iter().position(|&x| (x - dt).abs() <= 1e-12 * x)?;
    let j = index_of(&SLOPE_CELLS, &n)?;
    let row = BURGERS_IRES[d].get(plan)?[j];
    row.get(p.checked_sub(1)?).copied()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Tolerance {
    Abs { tol: f64 },
    Rel { tol: f64 },
}

impl Tolerance {
    pub fn accepts(self, reference: f64, observed: f64) -> bool {
        let dev = (observed - reference).abs();
        observed.is_finite()
            && match self {
                Self::Abs { tol } => dev <= tol + 1e-12,
                Self::Rel { tol } => dev <= tol * reference.abs() * (1.0 + 1e-12),
            }
    }

    pub fn describe(self) -> String {
        match self {
            Self::Abs { tol } => format!("±{tol}"),
            Self::Rel { tol } => format!("±{}%", tol * 100.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expected {
    Value { reference: f64, tolerance: Tolerance },
    /// The run must not reach the final time.
    Failure,
    /// A qualitative property must hold.
    Holds,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Observed {
    Value { value: f64 },
    Failure { reason: String },
    Property { holds: bool, detail: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub recipe: String,
    pub cell: String,
    pub quantity: String,
    pub expected: Expected,
    pub observed: Observed,
    pub pass: bool,
}

impl Check {
    pub fn new(recipe: &str, cell: impl Into<String>, quantity: impl Into<String>, expected: Expected, observed: Observed) -> Self {
        let pass = match (&expected, &observed) {
            (Expected::Value { reference, tolerance }, Observed::Value { value }) => tolerance.accepts(*reference, *value),
            (Expected::Failure, Observed::Failure { .. }) => true,
            (Expected::Holds, Observed::Property { holds, .. }) => *holds,
            _ => false,
        };
        Self { recipe: recipe.into(), cell: cell.into(), quantity: quantity.into(), expected, observed, pass }
    }

    pub fn value(recipe: &str, cell: impl Into<String>, quantity: impl Into<String>, reference: f64, tolerance: Tolerance, observed: Option<f64>, failure: &str) -> Self {
        let observed = match observed {
            Some(value) => Observed::Value { value },
            None => Observed::Failure { reason: failure.into() },
        };
        Self::new(recipe, cell, quantity, Expected::Value { reference, tolerance }, observed)
    }

    pub fn property(recipe: &str, cell: impl Into<String>, quantity: impl Into<String>, holds: bool, detail: impl Into<String>) -> Self {
        Self::new(recipe, cell, quantity, Expected::Holds, Observed::Property { holds, detail: detail.into() })
    }

    pub fn expected_text(&self) -> String {
        match &self.expected {
            Expected::Value { reference, .. } => reference.to_string(),
            Expected::Failure => "x".into(),
            Expected::Holds => "holds".into(),
        }
    }

    pub fn tolerance_text(&self) -> String {
        match &self.expected {
            Expected::Value { tolerance, .. } => tolerance.describe(),
            _ => String::new(),
        }
    }

    pub fn observed_text(&self) -> String {
        match &self.observed {
            Observed::Value { value } => crate::output::fmt17(*value),
            Observed::Failure { reason } => format!("x ({reason})"),
            Observed::Property { holds, detail } => format!("{} ({detail})", if *holds { "holds" } else { "violated" }),
        }
    }
}
