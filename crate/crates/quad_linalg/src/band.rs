use nalgebra::DMatrix;

use crate::error::LinalgError;

/// Square band matrix, row-oriented: row `i` stores columns `i-kl ..= i+ku`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        Self { n, kl, ku, data: vec![0.0; n * (kl + ku + 1)] }
    }

    /// Bandwidths are detected from exact zeros.
    pub fn from_dense(a: &DMatrix<f64>) -> Self {
        let n = a.nrows();
        let (mut kl, mut ku) = (0, 0);
        for i in 0..n {
            for j in 0..n {
                if a[(i, j)] != 0.0 {
                    if j < i {
                        kl = kl.max(i - j);
                    } else {
                        ku = ku.max(j - i);
                    }
                }
            }
        }
        let mut b = Self::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                b.set(i, j, a[(i, j)]);
            }
        }
        b
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn kl(&self) -> usize {
        self.kl
    }
    pub fn ku(&self) -> usize {
        self.ku
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        if j + self.kl < i || j > i + self.ku || j >= self.n {
            None
        } else {
            Some(i * (self.kl + self.ku + 1) + j + self.kl - i)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Panics when (i, j) lies outside the band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j).expect("entry outside band");
        self.data[k] = v;
    }

    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.kl)..(i + self.ku + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.cols(i).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            for j in self.cols(i) {
                y[j] += self.get(i, j) * x[i];
            }
        }
        y
    }
}

/// Banded LU with partial pivoting (fill-in widens U to kl+ku).
#[derive(Debug, Clone)]
pub struct BandLu {
    n: usize,
    kl: usize,
    w: usize,
    // Position-based rows: row i holds columns i-kl ..= i+kl+ku.
    u: Vec<f64>,
    l: Vec<f64>,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn new(a: &BandMatrix) -> Result<Self, LinalgError> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let w = 2 * kl + ku + 1;
        let at = |i: usize, j: usize| i * w + j + kl - i;
        let mut u = vec![0.0; n * w];
        for i in 0..n {
            for j in a.cols(i) {
                u[at(i, j)] = a.get(i, j);
            }
        }
        if u.iter().any(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite);
        }
        let mut l = vec![0.0; n * kl.max(1)];
        let mut piv = vec![0; n];
        let (mut umax, mut umin) = (0.0f64, f64::INFINITY);
        for k in 0..n {
            let last_row = (k + kl).min(n - 1);
            let last_col = (k + kl + ku).min(n - 1);
            let p = (k..=last_row).max_by(|&x, &y| u[at(x, k)].abs().total_cmp(&u[at(y, k)].abs())).unwrap();
            piv[k] = p;
            if p != k {
                for j in k..=last_col {
                    u.swap(at(k, j), at(p, j));
                }
            }
            let pivot = u[at(k, k)];
            umax = umax.max(pivot.abs());
            umin = umin.min(pivot.abs());
            if pivot == 0.0 {
                return Err(LinalgError::SingularMatrix { ratio: 0.0 });
            }
            for i in k + 1..=last_row {
                let m = u[at(i, k)] / pivot;
                l[k * kl + i - k - 1] = m;
                if m != 0.0 {
                    for j in k..=last_col {
                        u[at(i, j)] -= m * u[at(k, j)];
                    }
                }
            }
        }
        if umin / umax <= crate::dense::SINGULAR_RATIO {
            return Err(LinalgError::SingularMatrix { ratio: umin / umax });
        }
        Ok(Self { n, kl, w, u, l, piv })
    }

    #[inline]
    fn ue(&self, i: usize, j: usize) -> f64 {
        self.u[i * self.w + j + self.kl - i]
    }

    fn ucols(&self, k: usize) -> std::ops::Range<usize> {
        k..(k + self.w - self.kl).min(self.n)
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, kl) = (self.n, self.kl);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= self.l[k * kl + i - k - 1] * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in self.ucols(k).skip(1) {
                s -= self.ue(k, j) * x[j];
            }
            x[k] = s / self.ue(k, k);
        }
        x
    }

    pub fn solve_transpose(&self, b: &[f64]) -> Vec<f64> {
        let (n, kl) = (self.n, self.kl);
        let mut x = b.to_vec();
        for k in 0..n {
            x[k] /= self.ue(k, k);
            let xk = x[k];
            for j in self.ucols(k).skip(1) {
                x[j] -= self.ue(k, j) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                s -= self.l[k * kl + i - k - 1] * x[i];
            }
            x[k] = s;
            x.swap(k, self.piv[k]);
        }
        x
    }
}

/// Largest eigenvalue of the symmetric tridiagonal (alpha, beta) by bisection.
fn tridiag_max_eig(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = if i > 0 { beta[i - 1].abs() } else { 0.0 } + if i + 1 < k { beta[i].abs() } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    // Number of eigenvalues strictly below x (Sturm count).
    let count_below = |x: f64| {
        let mut c = 0;
        let mut d = 1.0;
        for i in 0..k {
            let b2 = if i > 0 { beta[i - 1] * beta[i - 1] } else { 0.0 };
            d = alpha[i] - x - b2 / d;
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + 1.0);
            }
            if d < 0.0 {
                c += 1;
            }
        }
        c
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) < k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Eigenvector residual |β_k·s_k| of the top Ritz pair, by inverse iteration on T.
fn ritz_residual(alpha: &[f64], beta: &[f64], theta: f64, beta_next: f64) -> f64 {
    let k = alpha.len();
    let shift = theta + 1e-12 * theta.abs().max(1e-300);
    // Thomas solve of (T - shift) x = 1, twice.
    let solve = |rhs: &[f64]| {
        let mut c = vec![0.0; k];
        let mut d = vec![0.0; k];
        let mut den = alpha[0] - shift;
        c[0] = if k > 1 { beta[0] / den } else { 0.0 };
        d[0] = rhs[0] / den;
        for i in 1..k {
            den = alpha[i] - shift - beta[i - 1] * c[i - 1];
            if den == 0.0 {
                den = 1e-300;
            }
            c[i] = if i + 1 < k { beta[i] / den } else { 0.0 };
            d[i] = (rhs[i] - beta[i - 1] * d[i - 1]) / den;
        }
        for i in (0..k - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        let nrm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        d.iter().map(|v| v / nrm).collect::<Vec<_>>()
    };
    let x = solve(&vec![1.0; k]);
    let x = solve(&x);
    (beta_next * x[k - 1]).abs()
}

const LANCZOS_TOL: f64 = 1e-11;

/// Largest eigenvalue of a symmetric positive operator via Lanczos with full
/// reorthogonalization.
fn lanczos_max(n: usize, mut apply: impl FnMut(&[f64]) -> Vec<f64>) -> f64 {
    let max_iter = n.min(1500);
    let mut q: Vec<Vec<f64>> = Vec::new();
    let mut v: Vec<f64> = (0..n).map(|i| ((i as f64 * 12.9898 + 1.0).sin() * 43758.5453).fract() - 0.25).collect();
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= nrm);
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut theta = 0.0;
    for it in 0..max_iter {
        let mut w = apply(&v);
        let a: f64 = w.iter().zip(&v).map(|(x, y)| x * y).sum();
        alpha.push(a);
        q.push(v);
        for _ in 0..2 {
            for qj in &q {
                let d: f64 = w.iter().zip(qj).map(|(x, y)| x * y).sum();
                w.iter_mut().zip(qj).for_each(|(x, y)| *x -= d * y);
            }
        }
        let b = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        let done = it + 1 == max_iter || b <= 1e-14 * a.abs();
        if done || (it + 1) % 8 == 0 {
            theta = tridiag_max_eig(&alpha, &beta);
            if done || ritz_residual(&alpha, &beta, theta, b) <= LANCZOS_TOL * theta {
                break;
            }
        }
        beta.push(b);
        v = w.iter().map(|x| x / b).collect();
    }
    theta
}

/// (σ_max, σ_min) of a square band matrix.
pub fn extreme_singular_values(a: &BandMatrix) -> Result<(f64, f64), LinalgError> {
    let lu = BandLu::new(a)?;
    let smax2 = lanczos_max(a.n, |x| a.tr_matvec(&a.matvec(x)));
    let inv_smin2 = lanczos_max(a.n, |x| lu.solve(&lu.solve_transpose(x)));
    Ok((smax2.sqrt(), (1.0 / inv_smin2).sqrt()))
}

pub fn cond2_band(a: &BandMatrix) -> Result<f64, LinalgError> {
    let (max, min) = extreme_singular_values(a)?;
    Ok(max / min)
}

/// ‖A⁻¹‖_F from n banded solves.
pub fn inv_frobenius_band(a: &BandMatrix) -> Result<f64, LinalgError> {
    let lu = BandLu::new(a)?;
    let mut acc = 0.0;
    let mut e = vec![0.0; a.n];
    for i in 0..a.n {
        e[i] = 1.0;
        acc += lu.solve(&e).iter().map(|x| x * x).sum::<f64>();
        e[i] = 0.0;
    }
    Ok(acc.sqrt())
}
