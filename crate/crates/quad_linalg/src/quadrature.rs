use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::LinalgError;

pub const MAX_ORDER: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadKind {
    /// ∫_{-1}^{1} f
    Legendre,
    /// ∫_0^∞ f e^{-ξ}
    Laguerre,
    /// ∫_{-1}^{1} f, endpoints included
    Lobatto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub kind: QuadKind,
    /// Ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Golub–Welsch: nodes are eigenvalues of the Jacobi matrix, weights are
/// μ₀ times the squared first eigenvector components.
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = diag.len();
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Legendre polynomial P_n and its derivative at x.
fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Laguerre L_n and L_{n+1} at x by the three-term recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let (mut l0, mut l1) = (1.0, 1.0 - x);
    if n == 0 {
        return (l0, l1);
    }
    for k in 1..=n {
        let k = k as f64;
        let l2 = ((2.0 * k + 1.0 - x) * l1 - k * l0) / (k + 1.0);
        l0 = l1;
        l1 = l2;
    }
    (l0, l1)
}

/// Newton-refines Golub–Welsch nodes on L_n and recomputes the weights from
/// w = x / ((n+1)² L_{n+1}(x)²); eigenvector weights lose relative accuracy in
/// the tail.
fn laguerre_polish(n: usize, mut x: Vec<f64>) -> (Vec<f64>, Vec<f64>) {
    for xi in x.iter_mut() {
        for _ in 0..3 {
            let (ln, ln1) = laguerre_pair(n, *xi);
            // x L_n' = (n+1) L_{n+1} - (n+1-x) L_n, and L_n = 0 at a root.
            let dl = ((n + 1) as f64 * ln1 - (n as f64 + 1.0 - *xi) * ln) / *xi;
            let step = ln / dl;
            if !step.is_finite() {
                break;
            }
            *xi -= step;
        }
    }
    let w = x
        .iter()
        .map(|&xi| {
            let (_, ln1) = laguerre_pair(n, xi);
            xi / (((n + 1) as f64).powi(2) * ln1 * ln1)
        })
        .collect();
    (x, w)
}

fn lobatto(n: usize) -> (Vec<f64>, Vec<f64>) {
    let m = n - 1;
    let mut nodes = vec![0.0; n];
    nodes[0] = -1.0;
    nodes[m] = 1.0;
    // Interior nodes: roots of P'_m, by Newton from Chebyshev–Lobatto guesses.
    for (i, node) in nodes.iter_mut().enumerate().take(m).skip(1) {
        let mut x = -(std::f64::consts::PI * i as f64 / m as f64).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_pd(m, x);
            // P''_m from the Legendre ODE.
            let d2 = (2.0 * x * dp - (m * (m + 1)) as f64 * p) / (1.0 - x * x);
            let step = dp / d2;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        *node = x;
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (p, _) = legendre_pd(m, x);
            2.0 / ((m * n) as f64 * p * p)
        })
        .collect();
    (nodes, weights)
}

pub fn gauss_rule(kind: QuadKind, n: usize) -> Result<QuadratureRule, LinalgError> {
    let min = if kind == QuadKind::Lobatto { 2 } else { 1 };
    if n < min || n > MAX_ORDER {
        return Err(LinalgError::UnsupportedOrder { n, min, max: MAX_ORDER });
    }
    let (nodes, weights) = match kind {
        QuadKind::Legendre => {
            let off: Vec<f64> = (1..n).map(|k| k as f64 / ((4 * k * k - 1) as f64).sqrt()).collect();
            let (mut x, w) = golub_welsch(&vec![0.0; n], &off, 2.0);
            // Symmetrize away eigensolver rounding.
            for i in 0..n / 2 {
                let a = 0.5 * (x[n - 1 - i] - x[i]);
                x[i] = -a;
                x[n - 1 - i] = a;
            }
            if n % 2 == 1 {
                x[n / 2] = 0.0;
            }
            (x, w)
        }
        QuadKind::Laguerre => {
            let diag: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64).collect();
            let off: Vec<f64> = (1..n).map(|k| k as f64).collect();
            let (x, _) = golub_welsch(&diag, &off, 1.0);
            laguerre_polish(n, x)
        }
        QuadKind::Lobatto => lobatto(n),
    };
    Ok(QuadratureRule { kind, nodes, weights })
}
