//! Acceptance criteria 1–9. Prints one PASS/FAIL line per criterion; a
//! criterion that evaluates to FAIL does not abort the run, but any error or
//! panic while evaluating does.

use std::time::Instant;

use bench_cli::experiments::{exact_terms, terms_until_failure, Discretization};
use bench_cli::golden::Check;
use bench_cli::recipes::{bpl_cell, RecipeContext, TableReport};
use bench_cli::{run_recipe, Initial};
use continuation::{ContinuationParams, ResidualScope, StepPolicy, Termination};
use nalgebra::{DMatrix, DVector};
use quad_linalg::{gauss_rule, QuadKind};
use resummation::{borel, pade, FlowEvaluator, PadeSet, ResidualNorm};
use series_engine::{
    dmp_norm, dmp_threshold, dmp_threshold_oracle, exact_inviscid_term, exact_viscous_term, PlanMode, RecurrenceModel,
    StabilizationPlan,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn recipe(name: &str, ctx: &RecipeContext) -> TableReport {
    run_recipe(name, ctx).unwrap_or_else(|e| panic!("{name}: {e}")).remove(0)
}

fn summarize<'a>(checks: impl IntoIterator<Item = &'a Check>) -> Verdict {
    let checks: Vec<&Check> = checks.into_iter().collect();
    let failed: Vec<String> =
        checks.iter().filter(|c| !c.pass).map(|c| format!("{} {}: {}", c.cell, c.quantity, c.observed_text())).collect();
    Verdict {
        pass: !checks.is_empty() && failed.is_empty(),
        detail: if failed.is_empty() {
            format!("{}/{} cells", checks.len(), checks.len())
        } else {
            format!("{}/{} cells; failing: {}", checks.len() - failed.len(), checks.len(), failed.join("; "))
        },
    }
}

fn criterion1() -> Verdict {
    let rep = recipe("table2", &RecipeContext::default());
    let mut v = summarize(&rep.checks);
    v.detail = format!("{} ({})", v.detail, rep.notes.join(", "));
    v
}

fn criterion2() -> Verdict {
    let rep = recipe("table3", &RecipeContext::default());
    let mut v = summarize(&rep.checks);
    let p1: Vec<String> = rep.checks.iter().filter(|c| c.cell.starts_with("p=1,")).map(|c| c.observed_text()).collect();
    v.detail = format!("p=1 c = [{}]; {}", p1.join(", "), v.detail);
    v
}

fn criterion3() -> Verdict {
    let rep = recipe("table1", &RecipeContext { degrees: Some(vec![1, 2, 3, 4]), ..Default::default() });
    // Slopes for p ≥ 2 and the p = 1 breakpoint; the p = 1 regime slopes are reported by the recipe only.
    summarize(rep.checks.iter().filter(|c| c.quantity == "slope" || c.quantity == "k_break"))
}

fn criterion4() -> Verdict {
    let rep = recipe("fig7", &RecipeContext { cells: Some(vec![100]), degrees: Some(vec![2]), ..Default::default() });
    let mut v = summarize(&rep.checks);
    let (ie, ig) = (rep.column("e_none").unwrap(), rep.column("e_geometric").unwrap());
    let e: Vec<String> = rep.rows.iter().map(|r| format!("k={}: {}/{}", r[0].render(), r[ie].render(), r[ig].render())).collect();
    v.detail = format!("{}; e_k none/geometric: {}", v.detail, e.join(", "));
    v
}

fn criterion5() -> Verdict {
    summarize(&recipe("table4", &RecipeContext::default()).checks)
}

fn burgers(ctx: &RecipeContext, p: usize, n: usize, mode: PlanMode, dt: f64) -> bench_cli::recipes::BplCell {
    bpl_cell(ctx, RecurrenceModel::burgers(1.0), Initial::Sin2Pi, p, n, mode, &ContinuationParams {
        m: 5,
        r: 2,
        s: 2,
        n_g: 20,
        t_final: 0.5,
        policy: StepPolicy::Fixed(dt),
        residual_norm: ResidualNorm::MassWeighted,
        residual_scope: ResidualScope::Full,
        ..Default::default()
    })
}

fn criterion6() -> Verdict {
    let ctx = RecipeContext::default();
    let ires = |c: &bench_cli::recipes::BplCell| c.ires.map_or(format!("x ({})", c.outcome), |v| format!("{v:.6}"));
    let within = |v: Option<f64>, r: f64| v.is_some_and(|v| (v - r).abs() <= 0.1 * r);

    let a = burgers(&ctx, 1, 20, PlanMode::Geometric, 1e-4);
    let pass_a = within(a.ires, 0.027263);

    let b = burgers(&ctx, 2, 20, PlanMode::Geometric, 5e-2);
    let mut exploded = 0;
    let mut none_cells = 0;
    for n in [20, 50, 100, 200] {
        for p in 1..=3 {
            none_cells += 1;
            let c = burgers(&ctx, p, n, PlanMode::None, 5e-2);
            let blew_up = matches!(c.trace.as_ref().map(|t| &t.termination), Some(Termination::ResidualExplosion { .. }));
            exploded += usize::from(blew_up);
        }
    }
    let pass_b = within(b.ires, 0.0194) && exploded == none_cells;

    let cc = burgers(&ctx, 3, 20, PlanMode::Constant, 1e-2);
    let cg = burgers(&ctx, 3, 20, PlanMode::Geometric, 1e-2);
    let pass_c = cc.ires.is_none() && cg.ires.is_some();

    let mark = |p: bool| if p { "ok" } else { "FAIL" };
    Verdict {
        pass: pass_a && pass_b && pass_c,
        detail: format!(
            "(a) {} IRes={} vs 0.027263; (b) {} geometric IRes={} vs 0.0194, none exploded in {exploded}/{none_cells}; (c) {} constant={} geometric={}",
            mark(pass_a),
            ires(&a),
            mark(pass_b),
            ires(&b),
            mark(pass_c),
            ires(&cc),
            ires(&cg)
        ),
    }
}

fn exp_terms(lambda: f64, m: usize) -> Vec<DVector<f64>> {
    (0..=m).map(|k| DVector::from_element(1, lambda.powi(k as i32) / (1..=k).product::<usize>() as f64)).collect()
}

fn evaluator(terms: &[DVector<f64>], ng: usize) -> FlowEvaluator {
    FlowEvaluator::new(terms[0].clone(), PadeSet::fit(&borel(terms).unwrap(), 2, 2).unwrap(), ng).unwrap()
}

fn criterion7() -> Verdict {
    let mut notes = Vec::new();
    // Exponential model.
    let mut exp_err: f64 = 0.0;
    for lambda in [-1.0, 2.0] {
        let u = evaluator(&exp_terms(lambda, 5), 20).flow(0.1).unwrap()[0];
        exp_err = exp_err.max((u - (lambda * 0.1f64).exp()).abs());
    }
    let ok_exp = exp_err <= 1e-6;
    notes.push(format!("exp err {exp_err:.1e}"));
    // Rational reconstruction.
    let (a, b) = ([1.0, 2.0], [1.0, -0.5, 0.25]);
    let mut c = vec![0.0; 6];
    for i in 0..6 {
        let conv: f64 = (1..=i.min(2)).map(|j| b[j] * c[i - j]).sum();
        c[i] = a.get(i).copied().unwrap_or(0.0) - conv;
    }
    let r = pade(&c, 2, 2).unwrap();
    let rat_err = [0.0, 0.3, -1.7, 5.0]
        .iter()
        .map(|&x: &f64| {
            let exact = (1.0 + 2.0 * x) / (1.0 - 0.5 * x + 0.25 * x * x);
            (r.eval(x) - exact).abs() / exact.abs().max(1.0)
        })
        .fold(0.0, f64::max);
    let ok_rat = rat_err <= 1e-12;
    notes.push(format!("rational err {rat_err:.1e}"));
    // Laguerre exactness: ∫ ξ^k e^{-ξ} = k! for k ≤ 2n − 1.
    let mut lag_err: f64 = 0.0;
    for n in [2, 5, 10, 20] {
        let rule = gauss_rule(QuadKind::Laguerre, n).unwrap();
        for k in 0..2 * n {
            let exact: f64 = (1..=k).map(|j| j as f64).product();
            lag_err = lag_err.max((rule.integrate(|x| x.powi(k as i32)) - exact).abs() / exact);
        }
    }
    let ok_lag = lag_err <= 1e-12;
    notes.push(format!("Laguerre rel err {lag_err:.1e}"));
    // Derivative vs central differences.
    let terms: Vec<DVector<f64>> = (0..=5)
        .map(|k| {
            let f = (1..=k).product::<usize>() as f64;
            DVector::from_vec(vec![(-1.3f64).powi(k as i32) / f, 0.4f64.powi(k as i32) / f, (-0.2f64).powi(k as i32)])
        })
        .collect();
    let f = evaluator(&terms, 20);
    let dt = 1e-4;
    let fd_err = (1..=10)
        .map(|i| {
            let t = 0.05 * i as f64;
            let fd = (f.flow(t + dt).unwrap() - f.flow(t - dt).unwrap()) / (2.0 * dt);
            (fd - f.flow_derivative(t).unwrap()).amax()
        })
        .fold(0.0, f64::max);
    let ok_fd = fd_err <= 1e-6;
    notes.push(format!("derivative err {fd_err:.1e}"));
    // Taylor consistency.
    let terms = exp_terms(-1.5, 5);
    let f = evaluator(&terms, 40);
    let (h, n) = (0.02, 8);
    let vander = DMatrix::from_fn(n, n, |i, j| (i as f64 * h).powi(j as i32));
    let vals = DVector::from_fn(n, |i, _| f.flow(i as f64 * h).unwrap()[0]);
    let coef = vander.lu().solve(&vals).unwrap();
    let tay_err = (1..=3).map(|k| ((coef[k] - terms[k][0]) / terms[k][0]).abs()).fold(0.0, f64::max);
    let ok_tay = tay_err <= 1e-4;
    notes.push(format!("Taylor rel err {tay_err:.1e}"));
    Verdict { pass: ok_exp && ok_rat && ok_lag && ok_fd && ok_tay, detail: notes.join(", ") }
}

fn criterion8() -> Verdict {
    let x: Vec<f64> = (0..=200).map(|i| i as f64 / 200.0).collect();
    let mut osc: f64 = 0.0;
    for k in 0..=6 {
        let a = exact_viscous_term(k, 0.0, 40, &x);
        let b = exact_inviscid_term(k, &x).unwrap();
        // Relative to max(1, ‖u_k‖_∞): the terms reach O(1e4) by k = 6.
        let scale = b.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        osc = osc.max(a.iter().zip(&b).map(|(u, v)| (u - v).abs() / scale).fold(0.0, f64::max));
    }
    let ok_oracle = osc <= 1e-12;
    // e_1 order under h-halving against the empirical rates.
    let e1 = |n: usize, p: usize| {
        let d = Discretization::new([0.0, 1.0], n, p).unwrap();
        let model = RecurrenceModel::heat(1.0);
        let u0 = d.interpolate(|x| (std::f64::consts::PI * x).sin());
        let run = terms_until_failure(&model, &d, &u0, 1, &StabilizationPlan::none(d.h())).unwrap();
        let ex = exact_terms(&model, Initial::SinPi, 1, &d.x).unwrap();
        let diff = &run.terms[1] - &ex[1];
        diff.dot(&(&d.reduced.m * &diff)).sqrt()
    };
    let mut orders = Vec::new();
    let mut ok_order = true;
    for p in 1..=5usize {
        let expect = if p <= 2 { 2.0 } else { (p - 1) as f64 };
        let order = (e1(10, p) / e1(20, p)).log2();
        ok_order &= order >= expect / 4.0 && order <= expect * 4.0;
        orders.push(format!("p={p}: {order:.2} (≈{expect})"));
    }
    Verdict { pass: ok_oracle && ok_order, detail: format!("viscous(ν=0) vs inviscid rel {osc:.1e}; orders {}", orders.join(", ")) }
}

fn criterion9() -> Verdict {
    let d = Discretization::new([0.0, 1.0], 10, 1).unwrap();
    let (m, k) = (&d.reduced.m, &d.reduced.k);
    let at_zero = dmp_norm(m, k, 1.0, 0.0, 8).unwrap();
    let t = dmp_threshold(m, k, 1.0, 8).unwrap();
    let o = dmp_threshold_oracle(m, k, 1.0, 8).unwrap();
    let rel = ((t - o) / o).abs();
    Verdict { pass: at_zero == 1.0 && rel <= 0.01, detail: format!("dmp_norm(0)={at_zero}, threshold {t:.6e} vs oracle {o:.6e} (rel {rel:.1e})") }
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("mass-matrix condition numbers", criterion1),
        ("optimal α exponents", criterion2),
        ("unstabilized error slopes", criterion3),
        ("stabilization efficacy", criterion4),
        ("heat BPL integrated residual", criterion5),
        ("Burgers stabilization payoff", criterion6),
        ("resummation core properties", criterion7),
        ("oracle cross-checks", criterion8),
        ("DMP diagnostic", criterion9),
    ];
    let only: Option<usize> = std::env::var("ACCEPTANCE_ONLY").ok().and_then(|v| v.parse().ok());
    let mut passed = 0;
    let mut ran = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let start = Instant::now();
        let v = f();
        ran += 1;
        passed += usize::from(v.pass);
        println!(
            "criterion {}: {} — {name} [{:.1}s] {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            v.detail
        );
    }
    println!("acceptance: {passed}/{ran} criteria pass");
}
