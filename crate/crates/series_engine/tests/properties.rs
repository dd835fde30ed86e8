use fem1d::{assemble, build_space, reduce_dirichlet};
use nalgebra::DVector;
use proptest::prelude::*;
use series_engine::RecurrenceModel;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rhs_multilinearity(n in 3usize..10, p in 1usize..=3, c in -4.0f64..4.0, nu in 0.0f64..2.0) {
        let s = build_space(0.0, 1.0, n, p).unwrap();
        let ops = reduce_dirichlet(&assemble(&s), &s);
        let dim = ops.m.nrows();
        let terms: Vec<DVector<f64>> = (0..3)
            .map(|k| DVector::from_fn(dim, |i, _| ((i + 1) as f64 * (k + 2) as f64 * 0.71).sin()))
            .collect();
        let scaled: Vec<DVector<f64>> = terms.iter().map(|t| t * c).collect();
        let heat = RecurrenceModel::heat(nu);
        let a = heat.rhs(2, &terms, &ops);
        let b = heat.rhs(2, &scaled, &ops);
        prop_assert!((b - a * c).amax() < 1e-9);
        // Convective part is bilinear: scaling all terms by c scales it by c².
        let burg = RecurrenceModel::burgers(0.0);
        let a = burg.rhs(2, &terms, &ops);
        let b = burg.rhs(2, &scaled, &ops);
        prop_assert!((b - a * (c * c)).amax() < 1e-9 * (1.0 + c * c));
    }
}
