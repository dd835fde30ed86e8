use nalgebra::{DMatrix, DVector};
use quad_linalg::{cond2, cond2_auto, inv_frobenius, BandLu, BandMatrix};

// Nonsymmetric banded test matrix resembling a stabilized FE operator with
// identity Dirichlet rows.
fn banded(n: usize, bw: usize, alpha: f64) -> DMatrix<f64> {
    let h = 1.0 / (n as f64 - 1.0);
    let mut a = DMatrix::zeros(n, n);
    for i in 1..n - 1 {
        for j in i.saturating_sub(bw)..=(i + bw).min(n - 1) {
            let d = i.abs_diff(j) as f64;
            let mass = h * if d == 0.0 { 0.6 } else { 0.2 / d - 0.03 * d };
            let stiff = if d == 0.0 { 2.0 / h } else { -1.0 / (h * d * d) } * (1.0 + 0.01 * (i % 3) as f64);
            a[(i, j)] = mass + alpha * stiff;
        }
    }
    a[(0, 0)] = 1.0;
    a[(n - 1, n - 1)] = 1.0;
    a
}

#[test]
fn band_roundtrip_and_matvec() {
    let a = banded(30, 2, 1e-3);
    let b = BandMatrix::from_dense(&a);
    assert_eq!((b.kl(), b.ku()), (2, 2));
    let x = DVector::from_fn(30, |i, _| (i as f64 * 0.3).sin());
    let y = b.matvec(x.as_slice());
    let yd = &a * &x;
    for i in 0..30 {
        assert!((y[i] - yd[i]).abs() < 1e-13);
    }
    let yt = b.tr_matvec(x.as_slice());
    let ytd = a.transpose() * &x;
    for i in 0..30 {
        assert!((yt[i] - ytd[i]).abs() < 1e-13);
    }
}

#[test]
fn band_lu_solves_both_ways() {
    let a = banded(40, 3, 1e-2);
    let lu = BandLu::new(&BandMatrix::from_dense(&a)).unwrap();
    let rhs = DVector::from_fn(40, |i, _| 1.0 + (i as f64).cos());
    let x = DVector::from_vec(lu.solve(rhs.as_slice()));
    assert!((&a * &x - &rhs).norm() < 1e-10 * rhs.norm());
    let xt = DVector::from_vec(lu.solve_transpose(rhs.as_slice()));
    assert!((a.transpose() * &xt - &rhs).norm() < 1e-10 * rhs.norm());
}

#[test]
fn banded_condition_matches_dense() {
    for (n, bw, alpha) in [(150, 1, 1e-3), (201, 2, 1e-4), (301, 3, 1e-5)] {
        let a = banded(n, bw, alpha);
        let dense = cond2(&a).unwrap();
        let band = quad_linalg::cond2_band(&BandMatrix::from_dense(&a)).unwrap();
        assert!(((band - dense) / dense).abs() < 1e-8, "n={n}: {band} vs {dense}");
        let auto = cond2_auto(&a).unwrap();
        assert!(((auto - dense) / dense).abs() < 1e-8);
    }
}

#[test]
fn inverse_frobenius_matches_dense() {
    let a = banded(60, 2, 1e-3);
    let inv = a.clone().try_inverse().unwrap();
    let f = inv_frobenius(&a).unwrap();
    assert!((f - inv.norm()).abs() < 1e-9 * inv.norm());
}
