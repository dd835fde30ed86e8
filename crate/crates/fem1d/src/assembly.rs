use nalgebra::DMatrix;
use quad_linalg::{gauss_rule, QuadKind};

use crate::space::FemSpace;

/// Convection tensor D_{ijl} = ∫ φⁱ φʲ_x φˡ, kept as per-cell local blocks.
///
/// Dense storage would need N³ entries; contraction on the fly costs
/// O(n_cells·(p+1)³).
#[derive(Debug, Clone)]
pub struct ConvectionTensor {
    q: usize,
    local: Vec<f64>,
    cells: Vec<Vec<usize>>,
    // Global dof → position in the (possibly reduced) vector.
    map: Vec<Option<usize>>,
    dim: usize,
}

impl ConvectionTensor {
    #[inline]
    fn loc(&self, a: usize, b: usize, c: usize) -> f64 {
        self.local[(a * self.q + b) * self.q + c]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Entry (i, j, l) in the vector numbering of this tensor.
    pub fn get(&self, i: usize, j: usize, l: usize) -> f64 {
        let mut s = 0.0;
        for cell in &self.cells {
            let pos = |g: usize| cell.iter().position(|&d| self.map[d] == Some(g));
            if let (Some(a), Some(b), Some(c)) = (pos(i), pos(j), pos(l)) {
                s += self.loc(a, b, c);
            }
        }
        s
    }

    /// (D : (u, w))_l = Σ_{i,j} D_{ijl} u_i w_j, the Galerkin form of u·w_x.
    pub fn contract(&self, u: &[f64], w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        let q = self.q;
        let mut ul = vec![0.0; q];
        let mut wl = vec![0.0; q];
        for cell in &self.cells {
            for (a, &g) in cell.iter().enumerate() {
                let idx = self.map[g];
                ul[a] = idx.map_or(0.0, |k| u[k]);
                wl[a] = idx.map_or(0.0, |k| w[k]);
            }
            for (c, &g) in cell.iter().enumerate() {
                let Some(k) = self.map[g] else { continue };
                let mut s = 0.0;
                for a in 0..q {
                    if ul[a] == 0.0 {
                        continue;
                    }
                    for b in 0..q {
                        s += self.loc(a, b, c) * ul[a] * wl[b];
                    }
                }
                out[k] += s;
            }
        }
        out
    }

    /// Frobenius norm of the assembled tensor.
    pub fn frobenius(&self) -> f64 {
        let mut acc = std::collections::HashMap::new();
        for cell in &self.cells {
            for (a, &i) in cell.iter().enumerate() {
                for (b, &j) in cell.iter().enumerate() {
                    for (c, &l) in cell.iter().enumerate() {
                        if let (Some(i), Some(j), Some(l)) = (self.map[i], self.map[j], self.map[l]) {
                            *acc.entry((i, j, l)).or_insert(0.0) += self.loc(a, b, c);
                        }
                    }
                }
            }
        }
        acc.values().map(|v: &f64| v * v).sum::<f64>().sqrt()
    }

    fn restricted(&self, keep: &[usize]) -> Self {
        let mut map = vec![None; self.map.len()];
        for (k, &g) in keep.iter().enumerate() {
            map[g] = Some(k);
        }
        Self { map, dim: keep.len(), ..self.clone() }
    }
}

#[derive(Debug, Clone)]
pub struct Operators {
    pub m: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub d: ConvectionTensor,
    pub interior: Vec<usize>,
    pub boundary: Vec<usize>,
}

struct Element {
    m: DMatrix<f64>,
    k: DMatrix<f64>,
    d: Vec<f64>,
}

fn element(space: &FemSpace) -> Element {
    let p = space.p;
    let h = space.h();
    let q = p + 1;
    // Exact for the degree-(3p-1) convection integrand.
    let rule = gauss_rule(QuadKind::Legendre, (3 * p + 2) / 2).expect("small order");
    let basis = space.basis();
    let mut m = DMatrix::zeros(q, q);
    let mut k = DMatrix::zeros(q, q);
    let mut d = vec![0.0; q * q * q];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let xi = 0.5 * (x + 1.0);
        let wt = 0.5 * w * h;
        let v: Vec<f64> = (0..q).map(|a| basis.value(a, xi)).collect();
        let dv: Vec<f64> = (0..q).map(|a| basis.derivative(a, xi) / h).collect();
        for a in 0..q {
            for b in 0..q {
                m[(a, b)] += wt * v[a] * v[b];
                k[(a, b)] += wt * dv[a] * dv[b];
                for c in 0..q {
                    d[(a * q + b) * q + c] += wt * v[a] * dv[b] * v[c];
                }
            }
        }
    }
    Element { m, k, d }
}

pub fn assemble(space: &FemSpace) -> Operators {
    let n = space.n_dofs();
    let el = element(space);
    let mut m = DMatrix::zeros(n, n);
    let mut k = DMatrix::zeros(n, n);
    let cells: Vec<Vec<usize>> = (0..space.mesh.n_cells).map(|c| space.cell_dofs(c)).collect();
    for dofs in &cells {
        for (a, &i) in dofs.iter().enumerate() {
            for (b, &j) in dofs.iter().enumerate() {
                m[(i, j)] += el.m[(a, b)];
                k[(i, j)] += el.k[(a, b)];
            }
        }
    }
    let d = ConvectionTensor { q: space.p + 1, local: el.d, cells, map: (0..n).map(Some).collect(), dim: n };
    Operators { m, k, d, interior: space.interior(), boundary: space.boundary() }
}

/// Interior blocks M^in, K^in, D^in for homogeneous Dirichlet data.
pub fn reduce_dirichlet(ops: &Operators, space: &FemSpace) -> Operators {
    let keep = space.interior();
    let n = keep.len();
    let m = DMatrix::from_fn(n, n, |i, j| ops.m[(keep[i], keep[j])]);
    let k = DMatrix::from_fn(n, n, |i, j| ops.k[(keep[i], keep[j])]);
    Operators { m, k, d: ops.d.restricted(&keep), interior: (0..n).collect(), boundary: Vec::new() }
}

/// Replaces the Dirichlet rows of a full matrix by `diag`·identity rows
/// (columns untouched).
pub fn dirichlet_identity(a: &DMatrix<f64>, space: &FemSpace, diag: f64) -> DMatrix<f64> {
    let mut out = a.clone();
    for b in space.boundary() {
        out.row_mut(b).fill(0.0);
        out[(b, b)] = diag;
    }
    out
}

/// How a full assembled matrix is presented to condition-number diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryTreatment {
    /// No boundary handling.
    Full,
    /// Interior block only.
    Reduced,
    /// Dirichlet rows replaced by identity rows.
    IdentityRows,
}

impl BoundaryTreatment {
    pub const ALL: [BoundaryTreatment; 3] = [Self::Full, Self::Reduced, Self::IdentityRows];

    pub fn name(self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::Reduced => "reduced",
            Self::IdentityRows => "dirichlet-identity",
        }
    }

    /// Applies the treatment; `diag` is the boundary diagonal for identity rows
    /// (1 for mass-like matrices, 0 for stiffness-like ones).
    pub fn apply(self, a: &DMatrix<f64>, space: &FemSpace, diag: f64) -> DMatrix<f64> {
        match self {
            Self::Full => a.clone(),
            Self::Reduced => {
                let keep = space.interior();
                DMatrix::from_fn(keep.len(), keep.len(), |i, j| a[(keep[i], keep[j])])
            }
            Self::IdentityRows => dirichlet_identity(a, space, diag),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LumpKind {
    RowSum,
    /// Mass integrated with p+1 Lobatto points per cell, then row-summed; this is
    /// already diagonal whenever the nodes coincide with Lobatto points (p ≤ 2).
    GaussLobatto,
}

pub fn lump_mass(space: &FemSpace, kind: LumpKind) -> DMatrix<f64> {
    let n = space.n_dofs();
    let mut diag = vec![0.0; n];
    match kind {
        LumpKind::RowSum => {
            let m = assemble(space).m;
            for (i, d) in diag.iter_mut().enumerate() {
                *d = m.row(i).sum();
            }
        }
        LumpKind::GaussLobatto => {
            let rule = gauss_rule(QuadKind::Lobatto, space.p + 1).expect("p+1 >= 2");
            let basis = space.basis();
            let h = space.h();
            for c in 0..space.mesh.n_cells {
                for (a, &g) in space.cell_dofs(c).iter().enumerate() {
                    diag[g] += rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(&x, &w)| 0.5 * h * w * basis.value(a, 0.5 * (x + 1.0)))
                        .sum::<f64>();
                }
            }
        }
    }
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
}
