use crate::basis::LagrangeBasis;
use crate::FemError;

pub const MAX_DEGREE: usize = 5;

/// Uniform mesh of ]a, b[.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mesh1D {
    pub a: f64,
    pub b: f64,
    pub n_cells: usize,
    pub h: f64,
}

#[derive(Debug, Clone)]
pub struct FemSpace {
    pub mesh: Mesh1D,
    pub p: usize,
    nodes: Vec<f64>,
    basis: LagrangeBasis,
}

pub fn build_space(a: f64, b: f64, n_cells: usize, p: usize) -> Result<FemSpace, FemError> {
    if p == 0 || p > MAX_DEGREE {
        return Err(FemError::BadDegree(p));
    }
    if n_cells < 2 {
        return Err(FemError::BadMesh { reason: format!("need at least 2 cells, got {n_cells}") });
    }
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(FemError::BadMesh { reason: format!("empty or non-finite domain [{a}, {b}]") });
    }
    let h = (b - a) / n_cells as f64;
    let n_dofs = p * n_cells + 1;
    let nodes = (0..n_dofs)
        .map(|i| {
            let (c, r) = (i / p, i % p);
            if i == n_dofs - 1 {
                b
            } else {
                a + h * (c as f64 + r as f64 / p as f64)
            }
        })
        .collect();
    Ok(FemSpace { mesh: Mesh1D { a, b, n_cells, h }, p, nodes, basis: LagrangeBasis::new(p) })
}

impl FemSpace {
    pub fn n_dofs(&self) -> usize {
        self.nodes.len()
    }

    pub fn h(&self) -> f64 {
        self.mesh.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn basis(&self) -> &LagrangeBasis {
        &self.basis
    }

    /// Local → global map of cell c (left to right).
    pub fn cell_dofs(&self, c: usize) -> Vec<usize> {
        (c * self.p..=c * self.p + self.p).collect()
    }

    pub fn cell_bounds(&self, c: usize) -> (f64, f64) {
        let Mesh1D { a, h, .. } = self.mesh;
        (a + h * c as f64, a + h * (c + 1) as f64)
    }

    pub fn interior(&self) -> Vec<usize> {
        (1..self.n_dofs() - 1).collect()
    }

    pub fn boundary(&self) -> Vec<usize> {
        vec![0, self.n_dofs() - 1]
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let Mesh1D { a, h, n_cells, .. } = self.mesh;
        let t = (x - a) / h;
        let c = (t.floor().max(0.0) as usize).min(n_cells - 1);
        (c, t - c as f64)
    }

    /// Value of the finite-element function with nodal coefficients `coeffs` at x.
    pub fn evaluate(&self, coeffs: &[f64], x: f64) -> f64 {
        let (c, xi) = self.locate(x);
        self.cell_dofs(c).iter().enumerate().map(|(a, &g)| coeffs[g] * self.basis.value(a, xi)).sum()
    }

    /// Global basis function i at x (zero outside its support).
    pub fn basis_value(&self, i: usize, x: f64) -> f64 {
        let (c, xi) = self.locate(x);
        self.cell_dofs(c).iter().position(|&g| g == i).map_or(0.0, |a| self.basis.value(a, xi))
    }

    pub fn basis_derivative(&self, i: usize, x: f64) -> f64 {
        let (c, xi) = self.locate(x);
        self.cell_dofs(c)
            .iter()
            .position(|&g| g == i)
            .map_or(0.0, |a| self.basis.derivative(a, xi) / self.mesh.h)
    }

    pub fn interpolate(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&x| f(x)).collect()
    }
}
