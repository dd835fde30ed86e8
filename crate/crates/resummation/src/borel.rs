use nalgebra::DVector;

use crate::ResumError;

/// b_k = u_{k+1}/k!, k = 0..m−1; u_0 is carried by the flow.
#[derive(Debug, Clone, PartialEq)]
pub struct BorelSeries {
    pub coeffs: Vec<DVector<f64>>,
}

impl BorelSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.coeffs.first().map_or(0, |v| v.len())
    }

    pub fn node(&self, i: usize) -> Vec<f64> {
        self.coeffs.iter().map(|b| b[i]).collect()
    }
}

pub fn borel(terms: &[DVector<f64>]) -> Result<BorelSeries, ResumError> {
    if terms.len() < 2 {
        return Err(ResumError::TooFewTerms { min: 2, got: terms.len() });
    }
    let mut fact = 1.0;
    let coeffs = terms[1..]
        .iter()
        .enumerate()
        .map(|(k, u)| {
            if k > 0 {
                fact *= k as f64;
            }
            u / fact
        })
        .collect();
    Ok(BorelSeries { coeffs })
}

/// Inverse of [`borel`] on coefficient lists: returns u_1..u_m.
pub fn formal_laplace(b: &BorelSeries) -> Vec<DVector<f64>> {
    let mut fact = 1.0;
    b.coeffs
        .iter()
        .enumerate()
        .map(|(k, v)| {
            if k > 0 {
                fact *= k as f64;
            }
            v * fact
        })
        .collect()
}

/// Step bound (ε‖u₁‖/‖u_m‖)^{1/(m−1)} from the partial sum.
pub fn partial_sum_radius(terms: &[DVector<f64>], eps: f64) -> Result<f64, ResumError> {
    let m = terms.len().saturating_sub(1);
    if m < 2 {
        return Err(ResumError::TooFewTerms { min: 3, got: terms.len() });
    }
    let (n1, nm) = (terms[1].norm(), terms[m].norm());
    if nm <= 1e-300 {
        return Err(ResumError::ZeroHighestTerm);
    }
    if n1 <= 1e-300 {
        return Err(ResumError::ZeroFirstTerm);
    }
    Ok((eps * n1 / nm).powf(1.0 / (m as f64 - 1.0)))
}
