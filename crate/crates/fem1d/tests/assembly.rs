use fem1d::{assemble, build_space, dirichlet_identity, lump_mass, reduce_dirichlet, LumpKind};
use quad_linalg::cond2;

#[test]
fn p1_interior_rows() {
    let h = 0.125;
    let s = build_space(0.0, 1.0, 8, 1).unwrap();
    let ops = assemble(&s);
    for (j, e) in [(2usize, 1.0), (3, 4.0), (4, 1.0)] {
        assert!((ops.m[(3, j)] - h / 6.0 * e).abs() < 1e-15);
    }
    for (j, e) in [(2usize, -1.0), (3, 2.0), (4, -1.0)] {
        assert!((ops.k[(3, j)] - e / h).abs() < 1e-12);
    }
}

#[test]
fn partition_of_unity_and_kernel() {
    for p in 1..=5 {
        let s = build_space(0.5, 2.0, 5, p).unwrap();
        let ops = assemble(&s);
        assert!((ops.m.sum() - 1.5).abs() < 1e-12);
        let k1 = &ops.k * nalgebra::DVector::from_element(s.n_dofs(), 1.0);
        assert!(k1.amax() < 1e-10);
        assert!((&ops.m - ops.m.transpose()).amax() < 1e-15);
        assert!((&ops.k - ops.k.transpose()).amax() < 1e-12);
        assert!(ops.m.clone().cholesky().is_some());
        assert_eq!(ops.boundary, vec![0, s.n_dofs() - 1]);
    }
}

#[test]
fn convection_column_sum_identity() {
    // Σ_l D_ijl = ∫ φ^i φ^j_x, checked against independent quadrature.
    let s = build_space(0.0, 1.0, 3, 2).unwrap();
    let ops = assemble(&s);
    let n = s.n_dofs();
    let rule = quad_linalg::gauss_rule(quad_linalg::QuadKind::Legendre, 6).unwrap();
    for i in 0..n {
        for j in 0..n {
            let sum: f64 = (0..n).map(|l| ops.d.get(i, j, l)).sum();
            let mut direct = 0.0;
            for c in 0..3 {
                let (xl, xr) = s.cell_bounds(c);
                for (q, w) in rule.nodes.iter().zip(&rule.weights) {
                    let x = 0.5 * (xl + xr) + 0.5 * (xr - xl) * q;
                    direct += 0.5 * (xr - xl) * w * s.basis_value(i, x) * s.basis_derivative(j, x);
                }
            }
            assert!((sum - direct).abs() < 1e-12, "i={i} j={j}");
        }
    }
}

#[test]
fn convection_trilinear_form() {
    // u = x, w = x², v = x² on [0,1]: ∫ u w_x v = 2/5.
    let s = build_space(0.0, 1.0, 4, 2).unwrap();
    let ops = assemble(&s);
    let u = s.interpolate(|x| x);
    let w = s.interpolate(|x| x * x);
    let v = s.interpolate(|x| x * x);
    let c = ops.d.contract(&u, &w);
    let val: f64 = c.iter().zip(&v).map(|(a, b)| a * b).sum();
    assert!((val - 0.4).abs() < 1e-13);
}

#[test]
fn lumping_examples() {
    let h = 0.1;
    let s = build_space(0.0, 1.0, 10, 1).unwrap();
    let rs = lump_mass(&s, LumpKind::RowSum);
    assert!((rs[(4, 4)] - h).abs() < 1e-14);
    assert!((rs[(0, 0)] - h / 2.0).abs() < 1e-14);
    assert!((rs.trace() - 1.0).abs() < 1e-13);
    for p in 1..=5 {
        let s = build_space(0.0, 1.0, 6, p).unwrap();
        let gl = lump_mass(&s, LumpKind::GaussLobatto);
        assert!(gl.diagonal().iter().all(|&d| d > 0.0), "p={p}");
        assert!((gl.trace() - 1.0).abs() < 1e-12);
        let mut off = gl.clone();
        off.fill_diagonal(0.0);
        assert_eq!(off.amax(), 0.0);
    }
}

#[test]
fn reduced_blocks() {
    let s = build_space(0.0, 1.0, 4, 1).unwrap();
    let r = reduce_dirichlet(&assemble(&s), &s);
    assert_eq!(r.m.shape(), (3, 3));
    let expect = [[8.0, -4.0, 0.0], [-4.0, 8.0, -4.0], [0.0, -4.0, 8.0]];
    for i in 0..3 {
        for j in 0..3 {
            assert!((r.k[(i, j)] - expect[i][j]).abs() < 1e-12);
        }
    }
    assert!(r.m.clone().cholesky().is_some());
    assert!(r.boundary.is_empty());
}

#[test]
fn scaling_and_translation() {
    let a = assemble(&build_space(0.0, 1.0, 10, 2).unwrap());
    let b = assemble(&build_space(0.0, 1.0, 20, 2).unwrap());
    let t = assemble(&build_space(3.0, 4.0, 10, 2).unwrap());
    assert!((&a.m - &t.m).amax() < 1e-14 && (&a.k - &t.k).amax() < 1e-10);
    assert!((a.m[(2, 2)] / b.m[(2, 2)] - 2.0).abs() < 1e-12);
    assert!((a.k[(2, 2)] / b.k[(2, 2)] - 0.5).abs() < 1e-12);
}

#[test]
fn condition_grows_with_refinement_and_degree() {
    let kappa = |n, p| {
        let s = build_space(0.0, 1.0, n, p).unwrap();
        cond2(&reduce_dirichlet(&assemble(&s), &s).m).unwrap()
    };
    assert!(kappa(20, 2) > kappa(10, 2));
    assert!(kappa(10, 3) > kappa(10, 2));
}

#[test]
fn identity_row_mass_condition_p1() {
    // Mass matrix with Dirichlet rows replaced by identity rows; P1, h = 1/10.
    let s = build_space(0.0, 1.0, 10, 1).unwrap();
    let m = dirichlet_identity(&assemble(&s).m, &s, 1.0);
    let k = cond2(&m).unwrap();
    assert!((k - 28.60).abs() / 28.60 < 0.005, "{k}");
}
