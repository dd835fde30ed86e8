use nalgebra::DVector;
use resummation::{borel, formal_laplace, pade, PadeSet, ResumError};

fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
}

#[test]
fn exponential_one_one() {
    let p = pade(&[1.0, 1.0, 0.5], 1, 1).unwrap();
    assert!(close(&p.num, &[1.0, 0.5], 1e-14), "{:?}", p.num);
    assert!(close(&p.den, &[1.0, -0.5], 1e-14), "{:?}", p.den);
}

#[test]
fn geometric_recovered() {
    let p = pade(&[1.0, 1.0, 1.0], 0, 1).unwrap();
    assert!(close(&p.num, &[1.0], 1e-14));
    assert!(close(&p.den, &[1.0, -1.0], 1e-14));
    assert!((p.eval(0.3) - 1.0 / 0.7).abs() < 1e-14);
}

#[test]
fn polynomial_input_is_degenerate() {
    // 2 − x + 3x², padded with zeros.
    let p = pade(&[2.0, -1.0, 3.0, 0.0, 0.0], 2, 2).unwrap();
    assert_eq!(p.s_eff(), 0);
    assert!(close(&p.num, &[2.0, -1.0, 3.0], 1e-13), "{:?}", p.num);
}

#[test]
fn rational_reconstruction() {
    // (1 + 2x)/(1 − 0.5x + 0.25x²)
    let (a, b) = ([1.0, 2.0], [1.0, -0.5, 0.25]);
    let mut c = vec![0.0; 6];
    for i in 0..6 {
        let conv: f64 = (1..=i.min(2)).map(|j| b[j] * c[i - j]).sum();
        c[i] = a.get(i).copied().unwrap_or(0.0) - conv;
    }
    let p = pade(&c, 2, 2).unwrap();
    for x in [0.0, 0.3, -1.7, 5.0] {
        let exact = (1.0 + 2.0 * x) / (1.0 - 0.5 * x + 0.25 * x * x);
        assert!((p.eval(x) - exact).abs() < 1e-12 * exact.abs().max(1.0), "{x}");
    }
}

#[test]
fn taylor_match_through_effective_order() {
    let c = [0.3, -1.2, 0.7, 2.0, -0.4];
    let p = pade(&c, 2, 2).unwrap();
    let n = p.r_eff() + p.s_eff();
    let t = p.taylor(n + 1);
    assert!(close(&t, &c[..=n], 1e-12), "{t:?}");
}

#[test]
fn zero_series_flagged() {
    assert!(matches!(pade(&[0.0; 5], 2, 2), Err(ResumError::AllZeroSeries)));
}

#[test]
fn bad_orders_rejected() {
    assert!(matches!(pade(&[1.0, 2.0], 2, 2), Err(ResumError::BadOrders { .. })));
}

#[test]
fn borel_coefficients() {
    // u_k = k!
    let terms: Vec<DVector<f64>> = (0..6).map(|k| DVector::from_element(1, (1..=k).product::<usize>() as f64)).collect();
    let b = borel(&terms).unwrap();
    let node: Vec<f64> = b.node(0);
    assert!(close(&node, &[1.0, 2.0, 3.0, 4.0, 5.0], 1e-12));
    // t³ alone → ξ²/2
    let mut t3 = vec![DVector::zeros(1); 4];
    t3[3][0] = 1.0;
    assert!(close(&borel(&t3).unwrap().node(0), &[0.0, 0.0, 0.5], 1e-15));
    let zero = borel(&vec![DVector::zeros(3); 4]).unwrap();
    assert!(zero.coeffs.iter().all(|v| v.iter().all(|&x| x == 0.0)));
}

#[test]
fn borel_laplace_roundtrip() {
    let terms: Vec<DVector<f64>> = (0..7).map(|k| DVector::from_vec(vec![k as f64 - 2.5, (k * k) as f64])).collect();
    let back = formal_laplace(&borel(&terms).unwrap());
    for k in 1..7 {
        assert!((&back[k - 1] - &terms[k]).norm() < 1e-12);
    }
}

#[test]
fn pade_set_zero_node_and_csv() {
    let terms: Vec<DVector<f64>> =
        (0..6).map(|k| DVector::from_vec(vec![0.0, (-1f64).powi(k as i32) / (1..=k).product::<usize>() as f64])).collect();
    let set = PadeSet::fit(&borel(&terms).unwrap(), 2, 2).unwrap();
    assert_eq!(set.len(), 2);
    assert_eq!(set.get(0).eval(1.3), 0.0);
    let mut buf = Vec::new();
    set.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("node,"));
    assert!(!text.contains('\r'));
}
