use bench_cli::recipes::{bpl_cell, breaks_down, RecipeContext};
use bench_cli::{run_recipe, CliError, Initial, TableReport};
use continuation::{ContinuationParams, StepPolicy, Termination};
use series_engine::{PlanMode, RecurrenceModel};

fn one(name: &str, ctx: RecipeContext) -> TableReport {
    run_recipe(name, &ctx).unwrap().remove(0)
}

fn restricted(cells: &[usize], degrees: &[usize]) -> RecipeContext {
    RecipeContext { cells: Some(cells.to_vec()), degrees: Some(degrees.to_vec()), ..Default::default() }
}

#[test]
fn unknown_recipe() {
    let e = run_recipe("table99", &RecipeContext::default()).err().unwrap();
    assert!(matches!(e, CliError::UnknownRecipe(_)));
    assert_eq!(e.exit_code(), 3);
}

#[test]
fn mass_condition_coarse_p1() {
    let rep = one("table2", restricted(&[10], &[1]));
    let c = rep.check("p=1,h=1/10", &rep.checks[0].quantity).unwrap();
    assert!(c.pass, "{}", c.observed_text());
    assert_eq!(rep.rows.len(), 1);
}

#[test]
fn grids_outside_the_reference_have_no_checks() {
    let rep = one("table2", restricted(&[12], &[1]));
    assert!(rep.checks.is_empty());
    assert!(rep.passed());
}

#[test]
fn exponent_search_reports_a_grid_value() {
    let rep = one("table3", restricted(&[50], &[1]));
    let c = &rep.checks[0];
    assert_eq!(c.cell, "p=1,h=1/50");
    let v: f64 = rep.rows[0][3].as_f64().unwrap();
    assert!((1.5..=3.5).contains(&v));
    assert!(((v - 1.5) / 0.02 - ((v - 1.5) / 0.02).round()).abs() < 1e-9);
}

#[test]
fn heat_slope_p2_coarse() {
    let rep = one("table1", restricted(&[20], &[2]));
    assert!(rep.check("p=2,h=1/20", "slope").unwrap().pass);
}

#[test]
fn p1_breakpoint_detected() {
    let rep = one("table1", restricted(&[20], &[1]));
    assert!(rep.check("p=1,h=1/20", "k_break").unwrap().pass);
}

#[test]
fn viscous_burgers_two_regimes() {
    let rep = one("fig11", restricted(&[100], &[1]));
    for nu in ["0.1", "1"] {
        assert!(rep.check(&format!("ν={nu},p=1,h=1/100"), "k_break").unwrap().pass);
    }
}

#[test]
fn unstabilized_heat_breaks_down() {
    let rep = one("fig7", restricted(&[100], &[2]));
    assert!(rep.check("p=2,h=1/100", "unstabilized terms break down by k=3").unwrap().pass);
    assert_eq!(rep.plots.len(), 5);
}

#[test]
fn breakdown_rule() {
    use bench_cli::experiments::TermRun;
    let run = TermRun { terms: vec![], failed_at: Some(3) };
    assert!(breaks_down(&run, &[0.0, 0.1], 3));
    let run = TermRun { terms: vec![], failed_at: None };
    assert!(!breaks_down(&run, &[0.0, 0.1, 0.5, 0.9, 100.0], 3));
    assert!(breaks_down(&run, &[0.0, 0.1, 2.0], 3));
}

#[test]
fn burgers_large_step_without_stabilization_explodes() {
    let p = ContinuationParams { t_final: 0.5, policy: StepPolicy::Fixed(5e-2), ..Default::default() };
    let c = bpl_cell(&RecipeContext::default(), RecurrenceModel::burgers(1.0), Initial::Sin2Pi, 2, 50, PlanMode::None, &p);
    assert!(c.ires.is_none());
    assert!(matches!(c.trace.unwrap().termination, Termination::ResidualExplosion { .. }));
}

#[test]
fn burgers_block_filtered_by_context() {
    let ctx = RecipeContext { dt: Some(5e-2), plan: Some(PlanMode::None), ..restricted(&[20], &[1, 2]) };
    let rep = one("table8", ctx);
    assert_eq!(rep.rows.len(), 2);
    assert_eq!(rep.checks.len(), 2);
    assert!(rep.passed(), "{:?}", rep.failures().map(|c| c.observed_text()).collect::<Vec<_>>());
}

#[test]
fn heat_run_reaches_final_time() {
    let ctx = RecipeContext { dt: Some(2e-2), ..restricted(&[20], &[1]) };
    let rep = one("table4", ctx);
    // No reference at this step size: the run is reported without checks.
    assert!(rep.checks.is_empty());
    let i = rep.column("termination").unwrap();
    assert_eq!(rep.rows[0][i].render(), "completed");
}

#[test]
fn recipes_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let ctx = restricted(&[10, 30], &[1, 2]);
    let a = one("table2", ctx.clone());
    let b = one("table2", ctx);
    let fa = bench_cli::write_report(&a, &dir.path().join("a")).unwrap();
    let fb = bench_cli::write_report(&b, &dir.path().join("b")).unwrap();
    assert_eq!(fa.len(), fb.len());
    for (x, y) in fa.iter().zip(&fb) {
        assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap(), "{}", x.display());
    }
}
