use std::f64::consts::PI;

use crate::SeriesError;

pub const INVISCID_MAX_ORDER: usize = 6;

/// (−νπ²)^k/k! · sin(πx).
pub fn exact_heat_term(k: usize, nu: f64, x: &[f64]) -> Vec<f64> {
    let mut coef = 1.0;
    for j in 1..=k {
        coef *= -nu * PI * PI / j as f64;
    }
    x.iter().map(|&xi| coef * (PI * xi).sin()).collect()
}

/// Closed-form inviscid Burgers terms for u₀ = sin(2πx), as sine-mode lists
/// (mode, coefficient of π^k/k!).
fn inviscid_modes(k: usize) -> &'static [(f64, f64)] {
    match k {
        0 => &[(2.0, 1.0)],
        1 => &[(4.0, -1.0)],
        2 => &[(6.0, 3.0), (2.0, -1.0)],
        3 => &[(8.0, -16.0), (4.0, 8.0)],
        4 => &[(10.0, 125.0), (6.0, -81.0), (2.0, 2.0)],
        5 => &[(12.0, -1296.0), (8.0, 1024.0), (4.0, -80.0)],
        6 => &[(14.0, 16807.0), (10.0, -15625.0), (6.0, 2187.0), (2.0, -5.0)],
        _ => &[],
    }
}

pub fn exact_inviscid_term(k: usize, x: &[f64]) -> Result<Vec<f64>, SeriesError> {
    if k > INVISCID_MAX_ORDER {
        return Err(SeriesError::OrderTooHigh { k, max: INVISCID_MAX_ORDER });
    }
    let scale = PI.powi(k as i32) / (1..=k).map(|j| j as f64).product::<f64>();
    Ok(x.iter()
        .map(|&xi| scale * inviscid_modes(k).iter().map(|&(n, a)| a * (n * PI * xi).sin()).sum::<f64>())
        .collect())
}

/// Sine coefficients (index = mode number) of the viscous Burgers terms for
/// u₀ = sin(2πx) on ]0,1[ with homogeneous Dirichlet data.
fn viscous_coefficients(k: usize, nu: f64, modes: usize) -> Vec<f64> {
    let mut terms: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut u0 = vec![0.0; modes + 1];
    if modes >= 2 {
        u0[2] = 1.0;
    }
    terms.push(u0);
    for j in 0..k {
        let mut next = vec![0.0; modes + 1];
        for n in 1..=modes {
            next[n] = -nu * (n as f64 * PI).powi(2) * terms[j][n];
        }
        // sin(aπx)·∂x sin(bπx) = (bπ/2)[sin((a+b)πx) + sin((a−b)πx)]
        for r in 0..=j {
            let (u, w) = (&terms[r], &terms[j - r]);
            for a in 1..=modes {
                if u[a] == 0.0 {
                    continue;
                }
                for b in 1..=modes {
                    if w[b] == 0.0 {
                        continue;
                    }
                    let c = u[a] * w[b] * b as f64 * PI / 2.0;
                    if a + b <= modes {
                        next[a + b] -= c;
                    }
                    if a > b {
                        next[a - b] -= c;
                    } else if b > a {
                        next[b - a] += c;
                    }
                }
            }
        }
        let inv = 1.0 / (j as f64 + 1.0);
        next.iter_mut().for_each(|v| *v *= inv);
        terms.push(next);
    }
    terms.pop().unwrap()
}

/// Viscous Burgers term by sine-mode recursion (exact within `modes`).
pub fn exact_viscous_term(k: usize, nu: f64, modes: usize, x: &[f64]) -> Vec<f64> {
    let c = viscous_coefficients(k, nu, modes);
    x.iter()
        .map(|&xi| {
            c.iter().enumerate().skip(1).filter(|(_, a)| **a != 0.0).map(|(n, a)| a * (n as f64 * PI * xi).sin()).sum()
        })
        .collect()
}
