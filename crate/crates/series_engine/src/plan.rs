#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlanMode {
    None,
    Constant,
    Doubling,
    Geometric,
}

impl PlanMode {
    pub fn name(self) -> &'static str {
        match self {
            Self::None => "none",
            Self::Constant => "constant",
            Self::Doubling => "doubling",
            Self::Geometric => "geometric",
        }
    }
}

impl std::str::FromStr for PlanMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Self::None),
            "constant" => Ok(Self::Constant),
            "doubling" => Ok(Self::Doubling),
            "geometric" => Ok(Self::Geometric),
            other => Err(format!("unknown plan '{other}' (expected none|constant|doubling|geometric)")),
        }
    }
}

/// Artificial-diffusion schedule α_k with α₀ = h^c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilizationPlan {
    pub mode: PlanMode,
    pub h: f64,
    pub c: f64,
    pub r: f64,
}

impl StabilizationPlan {
    pub fn new(mode: PlanMode, h: f64, c: f64, r: f64) -> Self {
        Self { mode, h, c, r }
    }

    pub fn none(h: f64) -> Self {
        Self { mode: PlanMode::None, h, c: 0.0, r: 1.0 }
    }

    pub fn alpha0(&self) -> f64 {
        match self.mode {
            PlanMode::None => 0.0,
            _ => self.h.powf(self.c),
        }
    }

    pub fn alpha(&self, k: usize) -> f64 {
        match self.mode {
            PlanMode::None => 0.0,
            PlanMode::Constant => self.alpha0(),
            PlanMode::Doubling => (2f64.powi(k as i32) * self.h).powf(self.c),
            PlanMode::Geometric => self.alpha0() * self.r.powi(k as i32),
        }
    }
}
