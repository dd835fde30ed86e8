use quad_linalg::{gauss_rule, LinalgError, QuadKind};

fn factorial(d: u32) -> f64 {
    (1..=d).map(f64::from).product()
}

#[test]
fn legendre_one_point() {
    let r = gauss_rule(QuadKind::Legendre, 1).unwrap();
    assert!(r.nodes[0].abs() < 1e-15);
    assert!((r.weights[0] - 2.0).abs() < 1e-14);
}

#[test]
fn laguerre_one_point() {
    let r = gauss_rule(QuadKind::Laguerre, 1).unwrap();
    assert!((r.nodes[0] - 1.0).abs() < 1e-14);
    assert!((r.weights[0] - 1.0).abs() < 1e-14);
}

#[test]
fn laguerre_two_points() {
    let r = gauss_rule(QuadKind::Laguerre, 2).unwrap();
    let s = 2f64.sqrt();
    assert!((r.nodes[0] - (2.0 - s)).abs() < 1e-14);
    assert!((r.nodes[1] - (2.0 + s)).abs() < 1e-14);
    assert!((r.weights[0] - (2.0 + s) / 4.0).abs() < 1e-14);
    assert!((r.weights[1] - (2.0 - s) / 4.0).abs() < 1e-14);
}

#[test]
fn laguerre_moments_exact() {
    for n in [1usize, 2, 5, 10, 20, 30] {
        let r = gauss_rule(QuadKind::Laguerre, n).unwrap();
        for d in 0..(2 * n as u32) {
            let q: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(d as i32)).sum();
            let exact = factorial(d);
            assert!(((q - exact) / exact).abs() <= 1e-12, "n={n} d={d} q={q} exact={exact}");
        }
    }
}

#[test]
fn legendre_and_lobatto_moments_exact() {
    for n in 2usize..=12 {
        let leg = gauss_rule(QuadKind::Legendre, n).unwrap();
        let lob = gauss_rule(QuadKind::Lobatto, n).unwrap();
        for (rule, deg) in [(&leg, 2 * n - 1), (&lob, 2 * n - 3)] {
            for d in 0..=deg as i32 {
                let q: f64 = rule.nodes.iter().zip(&rule.weights).map(|(x, w)| w * x.powi(d)).sum();
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                assert!((q - exact).abs() < 1e-13, "{:?} n={n} d={d}", rule.kind);
            }
        }
        assert!((lob.nodes[0] + 1.0).abs() < 1e-15 && (lob.nodes[n - 1] - 1.0).abs() < 1e-15);
    }
}

#[test]
fn weight_sums_and_ranges() {
    for n in 2..=64 {
        let leg = gauss_rule(QuadKind::Legendre, n).unwrap();
        assert!((leg.weights.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!(leg.nodes.iter().all(|x| x.abs() <= 1.0));
        let lag = gauss_rule(QuadKind::Laguerre, n).unwrap();
        assert!((lag.weights.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(lag.nodes.iter().all(|&x| x > 0.0));
        assert!(lag.weights.iter().all(|&w| w >= 0.0));
    }
}

#[test]
fn order_limits() {
    assert!(matches!(gauss_rule(QuadKind::Laguerre, 65), Err(LinalgError::UnsupportedOrder { .. })));
    assert!(gauss_rule(QuadKind::Legendre, 0).is_err());
    assert!(gauss_rule(QuadKind::Lobatto, 1).is_err());
}
