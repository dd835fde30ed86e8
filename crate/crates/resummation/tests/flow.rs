use nalgebra::DVector;
use resummation::{borel, partial_sum_radius, FlowEvaluator, PadeSet, Rational, ResumError};

fn scalar_exp_terms(lambda: f64, m: usize) -> Vec<DVector<f64>> {
    (0..=m).map(|k| DVector::from_element(1, lambda.powi(k as i32) / (1..=k).product::<usize>() as f64)).collect()
}

fn evaluator(terms: &[DVector<f64>], r: usize, s: usize, ng: usize) -> FlowEvaluator {
    FlowEvaluator::new(terms[0].clone(), PadeSet::fit(&borel(terms).unwrap(), r, s).unwrap(), ng).unwrap()
}

#[test]
fn radius_examples() {
    let mut t = vec![DVector::zeros(1); 6];
    t[1][0] = 1.0;
    t[5][0] = 16.0;
    let r = partial_sum_radius(&t, 1e-3).unwrap();
    assert!((r - 6.25e-5f64.powf(0.25)).abs() < 1e-14);
    assert!((r - 0.0889).abs() < 1e-4);
    t[5][0] = 1.0;
    assert!((partial_sum_radius(&t, 1.0).unwrap() - 1.0).abs() < 1e-15);
    t[5][0] = 0.0;
    assert!(matches!(partial_sum_radius(&t, 1e-3), Err(ResumError::ZeroHighestTerm)));
}

#[test]
fn heat_radius_grows_with_order() {
    // ‖u_k‖ = π^{2k}/k!
    let norms = |m: usize| -> Vec<DVector<f64>> {
        (0..=m).map(|k| DVector::from_element(1, std::f64::consts::PI.powi(2 * k as i32) / (1..=k).product::<usize>() as f64)).collect()
    };
    let r: Vec<f64> = [12, 16, 20].iter().map(|&m| partial_sum_radius(&norms(m), 1e-3).unwrap()).collect();
    assert!(r[0] < r[1] && r[1] < r[2], "{r:?}");
}

#[test]
fn decaying_exponential() {
    let f = evaluator(&scalar_exp_terms(-1.0, 5), 2, 2, 20);
    let u = f.flow(0.1).unwrap()[0];
    assert!((u - (-0.1f64).exp()).abs() < 1e-6, "{u}");
    let d = f.flow_derivative(0.1).unwrap()[0];
    assert!((d + (-0.1f64).exp()).abs() < 1e-5, "{d}");
    assert_eq!(f.flow(0.0).unwrap()[0], 1.0);
}

#[test]
fn growing_exponential() {
    let f = evaluator(&scalar_exp_terms(2.0, 5), 2, 2, 20);
    let u = f.flow(0.1).unwrap()[0];
    assert!((u - 0.2f64.exp()).abs() < 1e-6, "{u}");
}

#[test]
fn constant_rational() {
    let set = PadeSet::from_rationals(vec![Rational::constant(2.5)], 0, 0);
    let f = FlowEvaluator::new(DVector::zeros(1), set, 12).unwrap();
    for t in [0.0, 0.3, 2.0] {
        assert!((f.flow(t).unwrap()[0] - 2.5 * t).abs() < 1e-13);
        assert!((f.flow_derivative(t).unwrap()[0] - 2.5).abs() < 1e-13);
    }
}

#[test]
fn degree_one_rational_matches_laplace() {
    // P(ξ) = 1 + 3ξ ⇒ t∫e^{-ξ}(1+3ξt)dξ = t + 3t².
    let set = PadeSet::from_rationals(vec![Rational::new(vec![1.0, 3.0], vec![1.0])], 1, 0);
    let f = FlowEvaluator::new(DVector::from_element(1, 0.5), set, 4).unwrap();
    let t = 0.7;
    assert!((f.flow(t).unwrap()[0] - (0.5 + t + 3.0 * t * t)).abs() < 1e-13);
}

#[test]
fn derivative_matches_finite_differences() {
    let terms: Vec<DVector<f64>> = (0..=5)
        .map(|k| {
            let f = (1..=k).product::<usize>() as f64;
            DVector::from_vec(vec![(-1.3f64).powi(k as i32) / f, 0.4f64.powi(k as i32) / f, (-0.2f64).powi(k as i32)])
        })
        .collect();
    let f = evaluator(&terms, 2, 2, 20);
    let dt = 1e-4;
    for i in 1..=10 {
        let t = 0.05 * i as f64;
        let fd = (f.flow(t + dt).unwrap() - f.flow(t - dt).unwrap()) / (2.0 * dt);
        let d = f.flow_derivative(t).unwrap();
        assert!((fd - d).amax() < 1e-6, "t={t}");
    }
}

#[test]
fn derivative_at_zero_is_first_term() {
    let terms = scalar_exp_terms(-0.7, 5);
    let f = evaluator(&terms, 2, 2, 20);
    assert!((f.flow_derivative(0.0).unwrap()[0] - terms[1][0]).abs() < 1e-12);
}

#[test]
fn taylor_consistency() {
    // Smooth convergent input: exact exponential series, Ng = 40.
    let lambda = -1.5;
    let terms = scalar_exp_terms(lambda, 5);
    let f = evaluator(&terms, 2, 2, 40);
    // Interpolate flow on t = jh, j = 0..7 and read off the monomial coefficients.
    let h = 0.02;
    let n = 8;
    let vander = nalgebra::DMatrix::from_fn(n, n, |i, j| (i as f64 * h).powi(j as i32));
    let vals = nalgebra::DVector::from_fn(n, |i, _| f.flow(i as f64 * h).unwrap()[0]);
    let coef = vander.lu().solve(&vals).unwrap();
    let (c1, c2, c3) = (coef[1], coef[2], coef[3]);
    for (got, k) in [(c1, 1), (c2, 2), (c3, 3)] {
        let want = terms[k][0];
        assert!(((got - want) / want).abs() < 1e-4, "k={k}: {got} vs {want}");
    }
}

#[test]
fn pole_on_path_detected() {
    // 1/(1 − ξ) has a pole at ξ = 1, hit exactly by a node when t = 1/ξ_j.
    let set = PadeSet::from_rationals(vec![Rational::new(vec![1.0], vec![1.0, -1.0])], 0, 1);
    let f = FlowEvaluator::new(DVector::zeros(1), set, 5).unwrap();
    let t = 1.0 / f.rule().nodes[2];
    assert!(matches!(f.flow(t), Err(ResumError::PoleOnPath { node: 0, .. })));
    assert!(f.flow(1e-3).is_ok());
}
