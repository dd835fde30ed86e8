use fem1d::Operators;
use nalgebra::DVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Heat,
    Burgers,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Heat => "heat",
            Self::Burgers => "burgers",
        }
    }
}

impl std::str::FromStr for ModelKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "heat" => Ok(Self::Heat),
            "burgers" => Ok(Self::Burgers),
            other => Err(format!("unknown model '{other}' (expected heat|burgers)")),
        }
    }
}

/// u_t = ν u_xx (heat) or u_t + u u_x = ν u_xx (Burgers).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecurrenceModel {
    pub kind: ModelKind,
    pub nu: f64,
}

impl RecurrenceModel {
    pub fn heat(nu: f64) -> Self {
        Self { kind: ModelKind::Heat, nu }
    }

    pub fn burgers(nu: f64) -> Self {
        Self { kind: ModelKind::Burgers, nu }
    }

    /// A_k(u_0..u_k): −νK u_k, minus Σ_r D:(u_r, u_{k−r}) for Burgers.
    pub fn rhs(&self, k: usize, terms: &[DVector<f64>], ops: &Operators) -> DVector<f64> {
        let mut out = &ops.k * &terms[k] * (-self.nu);
        if self.kind == ModelKind::Burgers {
            for r in 0..=k {
                let c = ops.d.contract(terms[r].as_slice(), terms[k - r].as_slice());
                out.iter_mut().zip(&c).for_each(|(o, v)| *o -= v);
            }
        }
        out
    }

    /// Semi-discrete right-hand side A(u) with M du/dt = A(u).
    pub fn semi_discrete_rhs(&self, u: &DVector<f64>, ops: &Operators) -> DVector<f64> {
        let mut out = &ops.k * u * (-self.nu);
        if self.kind == ModelKind::Burgers {
            let c = ops.d.contract(u.as_slice(), u.as_slice());
            out.iter_mut().zip(&c).for_each(|(o, v)| *o -= v);
        }
        out
    }
}
