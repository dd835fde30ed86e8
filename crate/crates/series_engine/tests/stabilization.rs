use fem1d::{assemble, build_space, BoundaryTreatment};
use nalgebra::DMatrix;
use series_engine::{find_alpha0, find_ratio, AlphaSearch, Grid, InverseNorm};

fn search(n: usize, p: usize) -> (f64, f64) {
    let s = build_space(0.0, 1.0, n, p).unwrap();
    let ops = assemble(&s);
    let cfg = AlphaSearch::new(&s, BoundaryTreatment::IdentityRows);
    let (c, a0) = find_alpha0(&ops.m, &ops.k, &cfg, &Grid::c_default()).unwrap();
    let r = find_ratio(&ops.m, &ops.k, &cfg, a0, &Grid::r_default(), InverseNorm::Frobenius).unwrap();
    (c, r)
}

#[test]
fn grids() {
    let c = Grid::c_default();
    assert_eq!(c.len(), 101);
    assert_eq!(c.value(0), 1.5);
    assert_eq!(c.value(100), 3.5);
    assert_eq!(c.value(23), 1.96);
    let r = Grid::r_default();
    assert_eq!(r.len(), 91);
    assert_eq!(r.value(90), 10.0);
}

#[test]
fn alpha_ratio_p3_h20() {
    // Reported: c = 2.3, R = 2.1.
    let (c, r) = search(20, 3);
    assert!((c - 2.3).abs() < 0.061, "{c}");
    assert!((r - 2.1).abs() < 0.11, "{r}");
}

#[test]
fn ratio_with_reported_c_p2_h100() {
    // Reported: c = 1.8, R = 3.8 for h = 1/100, p = 2.
    let s = build_space(0.0, 1.0, 100, 2).unwrap();
    let ops = assemble(&s);
    let cfg = AlphaSearch::new(&s, BoundaryTreatment::IdentityRows);
    let r = find_ratio(&ops.m, &ops.k, &cfg, 0.01f64.powf(1.8), &Grid::r_default(), InverseNorm::Frobenius).unwrap();
    assert!((r - 3.8).abs() < 0.11, "{r}");
}

#[test]
fn stabilized_condition_not_worse() {
    let s = build_space(0.0, 1.0, 30, 2).unwrap();
    let ops = assemble(&s);
    let cfg = AlphaSearch::new(&s, BoundaryTreatment::Reduced);
    let (_, a0) = find_alpha0(&ops.m, &ops.k, &cfg, &Grid::c_default()).unwrap();
    let m = cfg.treat(&ops.m, 1.0);
    let a = &m + cfg.treat(&ops.k, 0.0) * a0;
    assert!(quad_linalg::cond2(&a).unwrap() <= quad_linalg::cond2(&m).unwrap());
}

#[test]
fn zero_stiffness_tie_breaks_to_first() {
    let s = build_space(0.0, 1.0, 5, 1).unwrap();
    let ops = assemble(&s);
    let cfg = AlphaSearch::new(&s, BoundaryTreatment::Reduced);
    let k0 = DMatrix::zeros(ops.k.nrows(), ops.k.ncols());
    let (c, _) = find_alpha0(&ops.m, &k0, &cfg, &Grid::c_default()).unwrap();
    assert_eq!(c, 1.5);
}

#[test]
fn identity_matrices_pick_largest_ratio() {
    let s = build_space(0.0, 1.0, 4, 1).unwrap();
    let cfg = AlphaSearch::new(&s, BoundaryTreatment::Full);
    let i = DMatrix::identity(5, 5);
    let r = find_ratio(&i, &i, &cfg, 0.1, &Grid::r_default(), InverseNorm::Spectral).unwrap();
    assert_eq!(r, 10.0);
}
