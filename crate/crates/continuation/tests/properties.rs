use continuation::{integrated_residual, ContinuationTrace, StepRecord, Termination};
use nalgebra::DVector;
use proptest::prelude::*;

fn trace(pts: &[(f64, f64)]) -> ContinuationTrace {
    ContinuationTrace::from_records(
        pts.iter().enumerate().map(|(n, &(t, res))| StepRecord { n, t, dt: 0.0, res, u: DVector::zeros(0) }).collect(),
        Termination::Completed,
    )
}

proptest! {
    #[test]
    fn ires_additive_and_nonnegative(
        steps in prop::collection::vec((0.01f64..1.0, 0.0f64..5.0), 3..20),
        split in 1usize..100,
    ) {
        let mut pts = vec![(0.0, 1.0)];
        for (dt, r) in &steps {
            let t = pts.last().unwrap().0 + dt;
            pts.push((t, *r));
        }
        let k = 1 + split % (pts.len() - 2);
        let whole = integrated_residual(&trace(&pts)).unwrap();
        let parts = integrated_residual(&trace(&pts[..=k])).unwrap() + integrated_residual(&trace(&pts[k..])).unwrap();
        prop_assert!(whole >= 0.0);
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.max(1.0));
    }
}
