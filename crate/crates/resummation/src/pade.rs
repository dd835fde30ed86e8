use std::io::Write;

use nalgebra::DMatrix;
use quad_linalg::svd;

use crate::borel::BorelSeries;
use crate::ResumError;

/// Relative singular-value threshold for the Toeplitz block.
pub const RANK_TOL: f64 = 1e-13;

/// num(ξ)/den(ξ), ascending coefficients, den[0] = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Rational {
    pub num: Vec<f64>,
    pub den: Vec<f64>,
}

fn horner(c: &[f64], z: f64) -> (f64, f64) {
    let (mut p, mut dp) = (0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

impl Rational {
    pub fn new(num: Vec<f64>, den: Vec<f64>) -> Self {
        Self { num, den }
    }

    pub fn constant(c: f64) -> Self {
        Self { num: vec![c], den: vec![1.0] }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn r_eff(&self) -> usize {
        self.num.len() - 1
    }

    pub fn s_eff(&self) -> usize {
        self.den.len() - 1
    }

    pub fn eval(&self, z: f64) -> f64 {
        horner(&self.num, z).0 / horner(&self.den, z).0
    }

    /// (value, derivative, |den|, Σ|den_j||z|^j)
    pub(crate) fn eval_full(&self, z: f64) -> (f64, f64, f64, f64) {
        let (n, dn) = horner(&self.num, z);
        let (d, dd) = horner(&self.den, z);
        let scale = self.den.iter().rev().fold(0.0, |acc, b| acc * z.abs() + b.abs());
        (n / d, (dn * d - n * dd) / (d * d), d.abs(), scale)
    }

    /// First `n` Maclaurin coefficients.
    pub fn taylor(&self, n: usize) -> Vec<f64> {
        let mut t = vec![0.0; n];
        for i in 0..n {
            let conv: f64 = (1..=i.min(self.s_eff())).map(|j| self.den[j] * t[i - j]).sum();
            t[i] = self.num.get(i).copied().unwrap_or(0.0) - conv;
        }
        t
    }
}

fn trim(v: &mut Vec<f64>, tol: f64) {
    while v.len() > 1 && v.last().is_some_and(|x| x.abs() <= tol) {
        v.pop();
    }
}

/// Robust [r/s] Padé approximant of the series c_0 + c_1ξ + … .
///
/// The denominator is the null vector of the s×(s+1) Toeplitz block; a
/// rank-deficient block lowers s (and r with it) before re-solving.
pub fn pade(c: &[f64], r: usize, s: usize) -> Result<Rational, ResumError> {
    if c.len() < r + s + 1 {
        return Err(ResumError::BadOrders { r, s, len: c.len() });
    }
    let c = &c[..=r + s];
    let scale = c.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return Err(ResumError::AllZeroSeries);
    }
    let tol = RANK_TOL * scale;
    let at = |i: isize| if i >= 0 { c[i as usize] } else { 0.0 };
    let (mut r, mut s) = (r, s);
    let mut den = loop {
        if s == 0 {
            break vec![1.0];
        }
        // Padded with a zero row so the SVD returns the full right basis.
        let block = DMatrix::from_fn(s + 1, s + 1, |i, j| if i < s { at((r + 1 + i) as isize - j as isize) } else { 0.0 });
        let dec = svd(&block)?;
        let rank = dec.singular_values[..s].iter().filter(|&&x| x > tol).count();
        if rank < s {
            let d = s - rank;
            s -= d;
            r = r.saturating_sub(d);
            continue;
        }
        let b: Vec<f64> = dec.v_t.row(s).iter().copied().collect();
        let bn = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        if b[0].abs() <= RANK_TOL * bn {
            s -= 1;
            continue;
        }
        break b.iter().map(|x| x / b[0]).collect();
    };
    let bn = den.iter().map(|x| x * x).sum::<f64>().sqrt();
    trim(&mut den, RANK_TOL * bn);
    let mut num: Vec<f64> =
        (0..=r).map(|i| (0..=i.min(den.len() - 1)).map(|j| den[j] * c[i - j]).sum()).collect();
    trim(&mut num, tol);
    Ok(Rational { num, den })
}

/// Pointwise approximants, one per node.
#[derive(Debug, Clone, PartialEq)]
pub struct PadeSet {
    approximants: Vec<Rational>,
    pub r: usize,
    pub s: usize,
}

impl PadeSet {
    /// Nodes whose Borel coefficients are all zero get the zero function.
    pub fn fit(b: &BorelSeries, r: usize, s: usize) -> Result<Self, ResumError> {
        let approximants = (0..b.n_nodes())
            .map(|i| match pade(&b.node(i), r, s) {
                Err(ResumError::AllZeroSeries) => Ok(Rational::zero()),
                other => other,
            })
            .collect::<Result<_, _>>()?;
        Ok(Self { approximants, r, s })
    }

    pub fn from_rationals(approximants: Vec<Rational>, r: usize, s: usize) -> Self {
        Self { approximants, r, s }
    }

    pub fn len(&self) -> usize {
        self.approximants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.approximants.is_empty()
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.approximants[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rational> {
        self.approximants.iter()
    }

    /// Columns: node, r_eff, s_eff, a_0..a_r, b_0..b_s (missing degrees as 0).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), ResumError> {
        let err = |e: csv::Error| ResumError::Csv(e.to_string());
        let mut out = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
        let mut header = vec!["node".to_string(), "r_eff".into(), "s_eff".into()];
        header.extend((0..=self.r).map(|i| format!("a{i}")));
        header.extend((0..=self.s).map(|i| format!("b{i}")));
        out.write_record(&header).map_err(err)?;
        for (i, p) in self.approximants.iter().enumerate() {
            let mut row = vec![i.to_string(), p.r_eff().to_string(), p.s_eff().to_string()];
            let pad = |v: &[f64], n: usize| (0..=n).map(|j| format!("{:.16e}", v.get(j).copied().unwrap_or(0.0))).collect::<Vec<_>>();
            row.extend(pad(&p.num, self.r));
            row.extend(pad(&p.den, self.s));
            out.write_record(&row).map_err(err)?;
        }
        out.flush().map_err(|e| ResumError::Csv(e.to_string()))
    }
}
