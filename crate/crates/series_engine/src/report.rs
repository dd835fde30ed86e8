use std::ops::RangeInclusive;

use nalgebra::{DMatrix, DVector};

use crate::terms::SeriesTerms;
use crate::SeriesError;

#[derive(Debug, Clone, Copy)]
pub enum ErrorNorm<'a> {
    /// √(vᵀ M v)
    MassWeighted(&'a DMatrix<f64>),
    Euclidean,
}

impl ErrorNorm<'_> {
    pub fn norm(&self, v: &DVector<f64>) -> f64 {
        match self {
            Self::MassWeighted(m) => v.dot(&(*m * v)).max(0.0).sqrt(),
            Self::Euclidean => v.norm(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::MassWeighted(_) => "mass-weighted",
            Self::Euclidean => "euclidean",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ErrorReport {
    /// Index k = term order (e_0 included).
    pub e_k: Vec<f64>,
    /// Least-squares slope of log₁₀ e_k against k.
    pub slope: f64,
    /// log₁₀ C in e_k ≈ C·10^{slope·k}.
    pub log10_c: f64,
    pub norm: &'static str,
    pub relative: bool,
}

/// Least-squares (slope, intercept) of log₁₀ e_k over k in `range`; points
/// that are zero or non-finite are skipped.
pub fn fit_slope(e: &[f64], range: RangeInclusive<usize>) -> Result<(f64, f64), SeriesError> {
    let pts: Vec<(f64, f64)> = range
        .filter(|&k| k < e.len() && e[k] > 0.0 && e[k].is_finite())
        .map(|k| (k as f64, e[k].log10()))
        .collect();
    line_fit(&pts).ok_or(SeriesError::DegenerateFit)
}

fn line_fit(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() < 3 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

pub fn error_report(
    terms: &SeriesTerms,
    exact: &[DVector<f64>],
    norm: ErrorNorm<'_>,
    relative: bool,
    fit_range: RangeInclusive<usize>,
) -> Result<ErrorReport, SeriesError> {
    if exact.len() < terms.terms.len() {
        return Err(SeriesError::DimensionMismatch { expected: terms.terms.len(), got: exact.len() });
    }
    let e_k: Vec<f64> = terms
        .terms
        .iter()
        .zip(exact)
        .map(|(u, x)| {
            let e = norm.norm(&(u - x));
            if relative {
                e / norm.norm(x)
            } else {
                e
            }
        })
        .collect();
    let (slope, log10_c) = fit_slope(&e_k, fit_range)?;
    Ok(ErrorReport { e_k, slope, log10_c, norm: norm.name(), relative })
}

/// Two-segment piecewise-linear fit of log₁₀ e_k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoRegime {
    /// Last k of the first regime.
    pub k_break: usize,
    pub slope_before: f64,
    pub slope_after: f64,
}

fn fit_sse(pts: &[(f64, f64)]) -> Option<(f64, f64)> {
    if pts.len() == 2 {
        let s = (pts[1].1 - pts[0].1) / (pts[1].0 - pts[0].0);
        return Some((s, 0.0));
    }
    let (s, b) = line_fit(pts)?;
    Some((s, pts.iter().map(|p| (p.1 - s * p.0 - b).powi(2)).sum()))
}

/// Chooses the break minimizing the total squared residual; each regime
/// keeps at least two points. A point shared by both lines (equal fits) is
/// assigned to the first regime.
pub fn two_regime_fit(ks: &[usize], log_e: &[f64]) -> Result<TwoRegime, SeriesError> {
    let pts: Vec<(f64, f64)> =
        ks.iter().zip(log_e).filter(|(_, y)| y.is_finite()).map(|(&k, &y)| (k as f64, y)).collect();
    if pts.len() < 4 {
        return Err(SeriesError::DegenerateFit);
    }
    let mut best: Option<(f64, TwoRegime)> = None;
    for split in 2..=pts.len() - 2 {
        let (a, b) = pts.split_at(split);
        let (Some((s1, e1)), Some((s2, e2))) = (fit_sse(a), fit_sse(b)) else { continue };
        let cand = TwoRegime { k_break: a[a.len() - 1].0 as usize, slope_before: s1, slope_after: s2 };
        if best.as_ref().is_none_or(|(e, _)| e1 + e2 <= *e + 1e-12) {
            best = Some((e1 + e2, cand));
        }
    }
    best.map(|b| b.1).ok_or(SeriesError::DegenerateFit)
}
