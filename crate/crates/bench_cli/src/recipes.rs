//! Reproduction recipes: each computes a grid of cells, compares them with
//! the reference values and collects CSV rows, checks and plots.

use std::path::{Path, PathBuf};

use continuation::{integrated_residual, ContinuationParams, ContinuationTrace, ResidualScope, StepPolicy};
use fem1d::BoundaryTreatment;
use resummation::ResidualNorm;
use serde::Serialize;
use series_engine::{
    amplification_factor, find_alpha0, fit_slope, two_regime_fit, AlphaSearch, AmplificationNorm, Grid, ModelKind,
    PlanMode, RecurrenceModel, StabilizationPlan,
};

use crate::config::Initial;
use crate::error::CliError;
use crate::experiments::{
    convention_name, exact_terms, integrate, make_plan, mass_condition, model, par_map, problem, search_parameters,
    term_errors, terms_until_failure, Discretization, COND_CONVENTIONS, SEARCH_TREATMENT,
};
use crate::golden::{self, Check, Tolerance};
use crate::output::{write_csv, write_json, Value};
use crate::plot::{emit_plot, PlotSpec, Series};

pub const RECIPES: [&str; 17] = [
    "table1", "table2", "table3", "alpha-r", "table4", "table6", "table7", "table8", "fig1", "fig6-patterns", "fig7",
    "fig8", "fig9", "fig10", "fig11", "fig12", "all",
];

const DOMAIN: [f64; 2] = [0.0, 1.0];
const BURGERS_T: f64 = 0.5;
const HEAT_DT: f64 = 5e-3;
const SLOPE_TOL: Tolerance = Tolerance::Abs { tol: 0.3 };
const BREAK_TOL: Tolerance = Tolerance::Abs { tol: 1.0 };
const IRES_TOL: Tolerance = Tolerance::Rel { tol: 0.1 };
const PLANS: [PlanMode; 3] = [PlanMode::None, PlanMode::Constant, PlanMode::Geometric];

/// Grid restrictions and overrides a recipe honours.
#[derive(Debug, Clone, Default)]
pub struct RecipeContext {
    pub cells: Option<Vec<usize>>,
    pub degrees: Option<Vec<usize>>,
    pub dt: Option<f64>,
    pub plan: Option<PlanMode>,
    pub c: Option<f64>,
    pub ratio: Option<f64>,
    pub residual_norm: Option<ResidualNorm>,
    pub residual_scope: Option<ResidualScope>,
    pub jobs: usize,
}

impl RecipeContext {
    fn cells(&self, default: &[usize]) -> Vec<usize> {
        self.cells.clone().unwrap_or_else(|| default.to_vec())
    }

    fn degrees(&self, default: impl IntoIterator<Item = usize>) -> Vec<usize> {
        self.degrees.clone().unwrap_or_else(|| default.into_iter().collect())
    }

    fn grid(&self, cells: &[usize], degrees: impl IntoIterator<Item = usize>) -> Vec<(usize, usize)> {
        let cells = self.cells(cells);
        self.degrees(degrees).into_iter().flat_map(|p| cells.iter().map(move |&n| (p, n))).collect()
    }

    fn jobs(&self) -> usize {
        self.jobs.max(1)
    }

    /// Mass-weighted residual over all rows unless overridden.
    fn bpl_params(&self, dt: f64, t_final: f64) -> ContinuationParams {
        ContinuationParams {
            m: 5,
            r: 2,
            s: 2,
            n_g: 20,
            t_final,
            policy: StepPolicy::Fixed(dt),
            residual_norm: self.residual_norm.unwrap_or(ResidualNorm::MassWeighted),
            residual_scope: self.residual_scope.unwrap_or(ResidualScope::Full),
            ..Default::default()
        }
    }
}

pub struct Plot {
    pub name: String,
    pub spec: PlotSpec,
    pub series: Vec<Series>,
}

pub struct TableReport {
    pub recipe: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub checks: Vec<Check>,
    pub plots: Vec<Plot>,
    pub notes: Vec<String>,
}

impl TableReport {
    fn new(recipe: &str, header: &[&str]) -> Self {
        Self {
            recipe: recipe.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            checks: Vec::new(),
            plots: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, cell: &str, quantity: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.cell == cell && c.quantity == quantity)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[derive(Serialize)]
struct Summary<'a> {
    recipe: &'a str,
    passed: bool,
    checks: usize,
    failed: usize,
    notes: &'a [String],
    failures: Vec<&'a Check>,
    files: Vec<String>,
}

/// Writes `<recipe>.csv`, `<recipe>_checks.csv`, `<recipe>.json` and any SVGs.
pub fn write_report(report: &TableReport, dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    let mut files = vec![dir.join(format!("{}.csv", report.recipe))];
    write_csv(&files[0], &report.header, &report.rows)?;
    let checks = dir.join(format!("{}_checks.csv", report.recipe));
    let header: Vec<String> =
        ["recipe", "cell", "quantity", "reference", "tolerance", "observed", "status"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<Value>> = report
        .checks
        .iter()
        .map(|c| {
            vec![
                c.recipe.clone().into(),
                c.cell.clone().into(),
                c.quantity.clone().into(),
                c.expected_text().into(),
                c.tolerance_text().into(),
                c.observed_text().into(),
                (if c.pass { "PASS" } else { "FAIL" }).into(),
            ]
        })
        .collect();
    write_csv(&checks, &header, &rows)?;
    files.push(checks);
    for plot in &report.plots {
        let path = dir.join(format!("{}.svg", plot.name));
        emit_plot(&plot.spec, &plot.series, &path)?;
        files.push(path);
    }
    let json = dir.join(format!("{}.json", report.recipe));
    files.push(json.clone());
    let summary = Summary {
        recipe: &report.recipe,
        passed: report.passed(),
        checks: report.checks.len(),
        failed: report.failures().count(),
        notes: &report.notes,
        failures: report.failures().collect(),
        files: files.iter().map(|p| p.file_name().unwrap_or_default().to_string_lossy().into_owned()).collect(),
    };
    write_json(&json, &summary)?;
    Ok(files)
}

pub fn run_recipe(name: &str, ctx: &RecipeContext) -> Result<Vec<TableReport>, CliError> {
    if name == "all" {
        let mut out = Vec::new();
        for r in RECIPES.iter().filter(|r| **r != "all") {
            out.push(run_one(r, ctx)?);
        }
        return Ok(out);
    }
    Ok(vec![run_one(name, ctx)?])
}

fn run_one(name: &str, ctx: &RecipeContext) -> Result<TableReport, CliError> {
    match name {
        "table1" => table1(ctx),
        "table2" => table2(ctx),
        "table3" => table3(ctx),
        "alpha-r" => alpha_r(ctx),
        "table4" => table4(ctx),
        "table6" => amplification(ctx, ModelKind::Heat),
        "table7" => amplification(ctx, ModelKind::Burgers),
        "table8" => table8(ctx),
        "fig1" => fig1(ctx),
        "fig6-patterns" => fig6_patterns(ctx),
        "fig7" => heat_terms_figure(ctx, "fig7", 2),
        "fig8" => heat_terms_figure(ctx, "fig8", 3),
        "fig9" => heat_terms_figure(ctx, "fig9", 4),
        "fig10" => fig10(ctx),
        "fig11" => fig11(ctx),
        "fig12" => fig12(ctx),
        other => Err(CliError::UnknownRecipe(other.into())),
    }
}

fn cell(p: usize, n: usize) -> String {
    format!("p={p},h=1/{n}")
}

fn col<T: PartialEq>(list: &[T], v: &T) -> Option<usize> {
    list.iter().position(|x| x == v)
}

/// Error sequence of unstabilized terms against the closed form.
struct ErrorCurve {
    p: usize,
    n: usize,
    e: Vec<f64>,
    failed_at: Option<usize>,
}

fn error_curve(model: RecurrenceModel, initial: Initial, p: usize, n: usize, m: usize, relative: bool) -> Result<ErrorCurve, CliError> {
    let d = Discretization::new(DOMAIN, n, p)?;
    let u0 = d.interpolate(|x| initial.eval(x));
    let run = terms_until_failure(&model, &d, &u0, m, &StabilizationPlan::none(d.h()))?;
    let exact = exact_terms(&model, initial, m, &d.x)?;
    Ok(ErrorCurve { p, n, e: term_errors(&run, &exact, &d.reduced.m, relative), failed_at: run.failed_at })
}

fn log_points(e: &[f64], from: usize) -> (Vec<usize>, Vec<f64>) {
    e.iter().enumerate().skip(from).filter(|(_, v)| **v > 0.0 && v.is_finite()).map(|(k, v)| (k, v.log10())).unzip()
}

fn e_columns(m: usize) -> Vec<String> {
    (1..=m).map(|k| format!("e_{k}")).collect()
}

const HEAT_M: usize = 8;

fn heat_error_grid(ctx: &RecipeContext, degrees: std::ops::RangeInclusive<usize>) -> Result<Vec<ErrorCurve>, CliError> {
    let grid = ctx.grid(&golden::SLOPE_CELLS, degrees);
    par_map(ctx.jobs(), &grid, |&(p, n)| error_curve(RecurrenceModel::heat(1.0), Initial::SinPi, p, n, HEAT_M, false))?
        .into_iter()
        .collect()
}

fn table1(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let mut header = vec!["p", "n_cells", "h", "slope", "k_break", "slope_before", "slope_after"];
    let ecols = e_columns(HEAT_M);
    header.extend(ecols.iter().map(String::as_str));
    let mut rep = TableReport::new("table1", &header);
    rep.notes.push(format!("heat ν=1, u₀=sin(πx), no stabilization, m={HEAT_M}, mass-weighted absolute errors, fit over k=1..{HEAT_M}"));
    for c in heat_error_grid(ctx, 1..=4)? {
        let id = cell(c.p, c.n);
        let last = c.e.len().saturating_sub(1).min(HEAT_M);
        let slope = fit_slope(&c.e, 1..=last).ok().map(|s| s.0);
        let (ks, ys) = log_points(&c.e, 1);
        let two = if c.p == 1 { two_regime_fit(&ks, &ys).ok() } else { None };
        let j = col(&golden::SLOPE_CELLS, &c.n);
        let mut row: Vec<Value> = vec![c.p.into(), c.n.into(), (1.0 / c.n as f64).into(), slope.into()];
        row.push(two.map_or(Value::Missing, |t| t.k_break.into()));
        row.push(two.map(|t| t.slope_before).into());
        row.push(two.map(|t| t.slope_after).into());
        row.extend((1..=HEAT_M).map(|k| c.e.get(k).copied().into()));
        rep.rows.push(row);
        let failed = c.failed_at.map_or("fit failed".to_string(), |k| format!("term {k} non-finite"));
        match (c.p, j) {
            (2..=4, Some(j)) => {
                rep.checks.push(Check::value("table1", &id, "slope", golden::SLOPES[c.p - 2][j], SLOPE_TOL, slope, &failed))
            }
            (1, Some(j)) => {
                rep.checks.push(Check::value(
                    "table1",
                    &id,
                    "k_break",
                    golden::P1_BREAK[j] as f64,
                    BREAK_TOL,
                    two.map(|t| t.k_break as f64),
                    &failed,
                ));
                rep.checks.push(Check::value("table1", &id, "slope_before", golden::P1_EARLY_SLOPE, SLOPE_TOL, two.map(|t| t.slope_before), &failed));
                rep.checks.push(Check::value("table1", &id, "slope_after", golden::P1_LATE_SLOPES[j], SLOPE_TOL, two.map(|t| t.slope_after), &failed));
            }
            _ => {}
        }
    }
    Ok(rep)
}

fn fig1(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let mut rep = TableReport::new("fig1", &["p", "n_cells", "k", "e_k"]);
    let curves = heat_error_grid(ctx, 1..=4)?;
    let mut degrees: Vec<usize> = curves.iter().map(|c| c.p).collect();
    degrees.dedup();
    for p in degrees {
        let mut series = Vec::new();
        for c in curves.iter().filter(|c| c.p == p) {
            for (k, e) in c.e.iter().enumerate() {
                rep.rows.push(vec![c.p.into(), c.n.into(), k.into(), (*e).into()]);
            }
            let last = c.e.len().saturating_sub(1).min(HEAT_M);
            let label = match fit_slope(&c.e, 1..=last) {
                Ok((s, _)) => format!("h=1/{} slope {s:.2}", c.n),
                Err(_) => format!("h=1/{}", c.n),
            };
            series.push(Series::new(label, c.e.iter().enumerate().skip(1).map(|(k, &e)| (k as f64, e)).collect()));
        }
        rep.plots.push(Plot {
            name: format!("fig1_p{p}"),
            spec: PlotSpec { title: format!("heat term errors, p={p}"), x_label: "k".into(), y_label: "e_k".into(), log_y: true },
            series,
        });
    }
    Ok(rep)
}

fn table2(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let grid = ctx.grid(&golden::COND_CELLS, 1..=4);
    let values: Vec<Vec<f64>> = par_map(ctx.jobs(), &grid, |&(p, n)| -> Result<Vec<f64>, CliError> {
        let d = Discretization::new(DOMAIN, n, p)?;
        COND_CONVENTIONS.iter().map(|&conv| mass_condition(&d, conv)).collect()
    })?
    .into_iter()
    .collect::<Result<_, _>>()?;
    let reference = |p: usize, n: usize| Some(golden::MASS_COND.get(p.checked_sub(1)?)?[col(&golden::COND_CELLS, &n)?]);
    // One convention for the whole table: the one with the smallest worst-case deviation.
    let worst = |ci: usize| {
        grid.iter()
            .zip(&values)
            .filter_map(|(&(p, n), v)| reference(p, n).map(|r| ((v[ci] - r) / r).abs()))
            .fold(0.0, f64::max)
    };
    let best = (0..COND_CONVENTIONS.len()).min_by(|&a, &b| worst(a).total_cmp(&worst(b))).unwrap_or(0);
    let best_name = convention_name(COND_CONVENTIONS[best]);
    let names: Vec<String> = COND_CONVENTIONS.iter().map(|&c| convention_name(c)).collect();
    let mut header = vec!["p", "n_cells", "h"];
    header.extend(names.iter().map(String::as_str));
    header.push("selected");
    let mut rep = TableReport::new("table2", &header);
    rep.notes.push(format!("selected convention: {best_name}"));
    for (&(p, n), v) in grid.iter().zip(&values) {
        let mut row: Vec<Value> = vec![p.into(), n.into(), (1.0 / n as f64).into()];
        row.extend(v.iter().map(|&x| x.into()));
        row.push(v[best].into());
        rep.rows.push(row);
        if let Some(r) = reference(p, n) {
            rep.checks.push(Check::value("table2", cell(p, n), format!("cond2({best_name})"), r, Tolerance::Rel { tol: 0.05 }, Some(v[best]), ""));
        }
    }
    Ok(rep)
}

fn table3(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let grid = ctx.grid(&golden::EXPONENT_CELLS, 1..=4);
    let found = par_map(ctx.jobs(), &grid, |&(p, n)| -> Result<(f64, f64), CliError> {
        let d = Discretization::new(DOMAIN, n, p)?;
        Ok(find_alpha0(&d.full.m, &d.full.k, &AlphaSearch::new(&d.space, SEARCH_TREATMENT), &Grid::c_default())?)
    })?;
    let mut rep = TableReport::new("table3", &["p", "n_cells", "h", "c", "alpha0"]);
    rep.notes.push(format!("argmin of κ₂(M + h^c K) over c ∈ 1.50:0.02:3.50, boundary rows: {}", SEARCH_TREATMENT.name()));
    for (&(p, n), r) in grid.iter().zip(found) {
        let (c, a0) = r?;
        rep.rows.push(vec![p.into(), n.into(), (1.0 / n as f64).into(), c.into(), a0.into()]);
        if let (Some(row), Some(j)) = (golden::EXPONENTS.get(p.wrapping_sub(1)), col(&golden::EXPONENT_CELLS, &n)) {
            rep.checks.push(Check::value("table3", cell(p, n), "c", row[j], Tolerance::Abs { tol: 0.06 }, Some(c), ""));
        }
    }
    Ok(rep)
}

fn alpha_r(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let grid = ctx.grid(&golden::SLOPE_CELLS, 1..=5);
    let found = par_map(ctx.jobs(), &grid, |&(p, n)| search_parameters(&Discretization::new(DOMAIN, n, p)?))?;
    let mut rep = TableReport::new("alpha-r", &["p", "n_cells", "h", "c", "ratio"]);
    rep.notes.push("R minimizes κ₂(A)·‖A⁻¹‖_F with A = M + R·h^c·K over 1.0:0.1:10.0".into());
    for (&(p, n), r) in grid.iter().zip(found) {
        let (c, ratio) = r?;
        rep.rows.push(vec![p.into(), n.into(), (1.0 / n as f64).into(), c.into(), ratio.into()]);
        if let Some((rc, rr)) = golden::plan_reference(p, n) {
            rep.checks.push(Check::value("alpha-r", cell(p, n), "c", rc, Tolerance::Abs { tol: 0.06 }, Some(c), ""));
            rep.checks.push(Check::value("alpha-r", cell(p, n), "ratio", rr, Tolerance::Rel { tol: 0.1 }, Some(ratio), ""));
        }
    }
    Ok(rep)
}

/// One fixed-step BPL run.
pub struct BplCell {
    pub p: usize,
    pub n: usize,
    pub plan: Option<StabilizationPlan>,
    pub trace: Option<ContinuationTrace>,
    /// Present only when the run reached the final time.
    pub ires: Option<f64>,
    pub outcome: String,
}

pub fn bpl_cell(ctx: &RecipeContext, model: RecurrenceModel, initial: Initial, p: usize, n: usize, mode: PlanMode, params: &ContinuationParams) -> BplCell {
    let run = || -> Result<(StabilizationPlan, ContinuationTrace), CliError> {
        let d = Discretization::new(DOMAIN, n, p)?;
        let plan = make_plan(mode, &d, ctx.c, ctx.ratio)?;
        let pb = problem(model, &d, plan);
        let u0 = pb.interpolate(|x| initial.eval(x));
        Ok((plan, integrate(&pb, &u0, params)?))
    };
    match run() {
        Ok((plan, trace)) => {
            let ires = if trace.completed() { integrated_residual(&trace).ok() } else { None };
            let outcome = match &trace.termination {
                continuation::Termination::ResidualExplosion { t, .. } => format!("residual-explosion at t={t}"),
                other => other.name().to_string(),
            };
            BplCell { p, n, plan: Some(plan), trace: Some(trace), ires, outcome }
        }
        Err(e) => BplCell { p, n, plan: None, trace: None, ires: None, outcome: format!("error: {e}") },
    }
}

fn bpl_row(c: &BplCell, lead: Vec<Value>) -> Vec<Value> {
    let mut row = lead;
    row.extend([c.p.into(), c.n.into(), (1.0 / c.n as f64).into()]);
    row.push(c.plan.map(|p| p.c).into());
    row.push(c.plan.map(|p| p.r).into());
    row.push(c.ires.into());
    row.push(c.outcome.clone().into());
    row.push(c.trace.as_ref().map_or(Value::Missing, |t| (t.records.len() - 1).into()));
    row
}

fn residual_plot(name: &str, title: &str, cells: &[BplCell]) -> Option<Plot> {
    let series: Vec<Series> = cells
        .iter()
        .filter_map(|c| {
            let t = c.trace.as_ref()?;
            Some(Series::new(cell(c.p, c.n), t.records.iter().skip(1).map(|r| (r.t, r.res)).collect()))
        })
        .collect();
    series.iter().any(|s| !s.points.is_empty()).then(|| Plot {
        name: name.into(),
        spec: PlotSpec { title: title.into(), x_label: "t".into(), y_label: "Res".into(), log_y: true },
        series,
    })
}

fn table4(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let dt = ctx.dt.unwrap_or(HEAT_DT);
    let mode = ctx.plan.unwrap_or(PlanMode::Geometric);
    let params = ctx.bpl_params(dt, 1.0);
    let grid = ctx.grid(&golden::IRES_CELLS, 1..=3);
    let cells = par_map(ctx.jobs(), &grid, |&(p, n)| bpl_cell(ctx, RecurrenceModel::heat(1.0), Initial::SinPi, p, n, mode, &params))?;
    let mut rep = TableReport::new("table4", &["p", "n_cells", "h", "c", "ratio", "ires", "termination", "steps"]);
    rep.notes.push(format!(
        "heat ν=1, u₀=sin(πx), plan {}, Δt={dt}, T=1, m=5, r=s=2, N_g=20, residual {}/{}",
        mode.name(),
        params.residual_norm.name(),
        params.residual_scope.name()
    ));
    let reference_applies = dt == HEAT_DT && mode == PlanMode::Geometric;
    for c in &cells {
        rep.rows.push(bpl_row(c, vec![]));
        let j = col(&golden::IRES_CELLS, &c.n);
        if let (true, Some(j), Some(row)) = (reference_applies, j, golden::HEAT_IRES.get(c.p.wrapping_sub(1))) {
            rep.checks.push(Check::value("table4", cell(c.p, c.n), "ires", row[j], IRES_TOL, c.ires, &c.outcome));
        }
    }
    if reference_applies && cells.len() > 1 {
        let (holds, detail) = monotone(&cells);
        rep.checks.push(Check::property("table4", "all", "ires decreasing in h and p", holds, detail));
    }
    rep.plots.extend(residual_plot("table4_residual", "heat BPL residual", &cells));
    Ok(rep)
}

/// IRes strictly decreases along the partial order (h smaller, p larger).
fn monotone(cells: &[BplCell]) -> (bool, String) {
    let mut bad = Vec::new();
    for a in cells {
        for b in cells {
            let ordered = (a.n <= b.n && a.p <= b.p) && (a.n, a.p) != (b.n, b.p);
            if !ordered {
                continue;
            }
            match (a.ires, b.ires) {
                (Some(x), Some(y)) if y < x => {}
                _ => bad.push(format!("{} vs {}", cell(a.p, a.n), cell(b.p, b.n))),
            }
        }
    }
    (bad.is_empty(), if bad.is_empty() { "all comparable pairs decrease".into() } else { format!("violations: {}", bad.join("; ")) })
}

fn amplification(ctx: &RecipeContext, kind: ModelKind) -> Result<TableReport, CliError> {
    let (name, reference) = match kind {
        ModelKind::Heat => ("table6", &golden::HEAT_AMPLIFICATION),
        ModelKind::Burgers => ("table7", &golden::BURGERS_AMPLIFICATION),
    };
    let grid = ctx.grid(&golden::SLOPE_CELLS, 1..=4);
    let m = match kind {
        ModelKind::Heat => RecurrenceModel::heat(1.0),
        ModelKind::Burgers => RecurrenceModel::burgers(0.0),
    };
    let values = par_map(ctx.jobs(), &grid, |&(p, n)| -> Result<f64, CliError> {
        let d = Discretization::new(DOMAIN, n, p)?;
        Ok(amplification_factor(&m, &d.full, &d.space, 1, BoundaryTreatment::Full, AmplificationNorm::Spectral)?.log10())
    })?;
    let mut rep = TableReport::new(name, &["p", "n_cells", "h", "log10_amplification"]);
    rep.notes.push("assembled matrices, spectral norms for M and K, Frobenius norm for the convection tensor".into());
    for (&(p, n), v) in grid.iter().zip(values) {
        let v = v?;
        rep.rows.push(vec![p.into(), n.into(), (1.0 / n as f64).into(), v.into()]);
        if let (Some(row), Some(j)) = (reference.get(p.wrapping_sub(1)), col(&golden::SLOPE_CELLS, &n)) {
            rep.checks.push(Check::value(name, cell(p, n), "log10_amplification", row[j], SLOPE_TOL, Some(v), ""));
        }
    }
    Ok(rep)
}

fn table8(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    let steps: Vec<f64> = ctx.dt.map_or(golden::BURGERS_STEPS.to_vec(), |d| vec![d]);
    let plans: Vec<PlanMode> = ctx.plan.map_or(PLANS.to_vec(), |p| vec![p]);
    let grid = ctx.grid(&golden::SLOPE_CELLS, 1..=3);
    let mut jobs: Vec<(f64, PlanMode, usize, usize)> = Vec::new();
    for &dt in &steps {
        for &pl in &plans {
            jobs.extend(grid.iter().map(|&(p, n)| (dt, pl, p, n)));
        }
    }
    let cells = par_map(ctx.jobs(), &jobs, |&(dt, pl, p, n)| {
        bpl_cell(ctx, RecurrenceModel::burgers(1.0), Initial::Sin2Pi, p, n, pl, &ctx.bpl_params(dt, BURGERS_T))
    })?;
    let mut rep = TableReport::new("table8", &["dt", "plan", "p", "n_cells", "h", "c", "ratio", "ires", "termination", "steps"]);
    let p0 = ctx.bpl_params(1.0, BURGERS_T);
    rep.notes.push(format!(
        "Burgers ν=1, u₀=sin(2πx), T={BURGERS_T}, m=5, r=s=2, N_g=20, residual {}/{}",
        p0.residual_norm.name(),
        p0.residual_scope.name()
    ));
    for (&(dt, pl, _, _), c) in jobs.iter().zip(&cells) {
        rep.rows.push(bpl_row(c, vec![dt.into(), pl.name().into()]));
        let id = format!("dt={dt:e},plan={},{}", pl.name(), cell(c.p, c.n));
        let plan_idx = col(&PLANS, &pl).unwrap_or(usize::MAX);
        match golden::burgers_reference(dt, plan_idx, c.n, c.p) {
            Some(Some(r)) => rep.checks.push(Check::value("table8", id, "ires", r, IRES_TOL, c.ires, &c.outcome)),
            Some(None) => {
                let observed = match c.ires {
                    Some(value) => golden::Observed::Value { value },
                    None => golden::Observed::Failure { reason: c.outcome.clone() },
                };
                rep.checks.push(Check::new("table8", id, "ires", golden::Expected::Failure, observed));
            }
            None => {}
        }
    }
    Ok(rep)
}

/// Term errors under several plans at one discretization.
struct PlanErrors {
    label: String,
    plan: StabilizationPlan,
    run: crate::experiments::TermRun,
    e: Vec<f64>,
}

fn plan_errors(model: RecurrenceModel, initial: Initial, d: &Discretization, m: usize, plans: Vec<(String, StabilizationPlan)>) -> Result<Vec<PlanErrors>, CliError> {
    let u0 = d.interpolate(|x| initial.eval(x));
    let exact = exact_terms(&model, initial, m, &d.x)?;
    plans
        .into_iter()
        .map(|(label, plan)| {
            let run = terms_until_failure(&model, d, &u0, m, &plan)?;
            let e = term_errors(&run, &exact, &d.reduced.m, false);
            Ok(PlanErrors { label, plan, run, e })
        })
        .collect()
}

fn error_table(name: &str, list: &[PlanErrors], m: usize) -> TableReport {
    let labels: Vec<String> = list.iter().map(|p| format!("e_{}", p.label)).collect();
    let mut header = vec!["k"];
    header.extend(labels.iter().map(String::as_str));
    let mut rep = TableReport::new(name, &header);
    for k in 0..=m {
        let mut row: Vec<Value> = vec![k.into()];
        row.extend(list.iter().map(|p| p.e.get(k).copied().into()));
        rep.rows.push(row);
    }
    rep.plots.push(Plot {
        name: format!("{name}_errors"),
        spec: PlotSpec { title: format!("{name}: term errors"), x_label: "k".into(), y_label: "e_k".into(), log_y: true },
        series: list.iter().map(|p| Series::new(&p.label, p.e.iter().enumerate().map(|(k, &e)| (k as f64, e)).collect())).collect(),
    });
    for p in list {
        rep.notes.push(format!(
            "{}: α₀={:e}, plan {} (c={}, R={}){}",
            p.label,
            p.plan.alpha0(),
            p.plan.mode.name(),
            p.plan.c,
            p.plan.r,
            p.run.failed_at.map_or(String::new(), |k| format!(", term {k} non-finite"))
        ));
    }
    rep
}

fn single_cell(ctx: &RecipeContext, n: usize, p: usize) -> (usize, usize) {
    let n = ctx.cells.as_ref().and_then(|c| c.first().copied()).unwrap_or(n);
    let p = ctx.degrees.as_ref().and_then(|c| c.first().copied()).unwrap_or(p);
    (n, p)
}

fn fig6_patterns(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    const M: usize = 5;
    let (n, p) = single_cell(ctx, 100, 2);
    let d = Discretization::new(DOMAIN, n, p)?;
    let h = d.h();
    let list = plan_errors(
        RecurrenceModel::heat(1.0),
        Initial::SinPi,
        &d,
        M,
        vec![
            ("constant".into(), StabilizationPlan::new(PlanMode::Constant, h, 2.0, 1.0)),
            ("doubling".into(), StabilizationPlan::new(PlanMode::Doubling, h, 2.0, 1.0)),
        ],
    )?;
    let mut rep = error_table("fig6-patterns", &list, M);
    let (ec, ed) = (&list[0].e, &list[1].e);
    let bad: Vec<usize> = (3..=M).filter(|&k| !(ed.get(k).copied().unwrap_or(f64::INFINITY) > ec.get(k).copied().unwrap_or(f64::INFINITY))).collect();
    rep.checks.push(Check::property(
        "fig6-patterns",
        cell(p, n),
        "α_k=(2^k h)² errors exceed α_k=h² errors for k≥3",
        bad.is_empty(),
        if bad.is_empty() { format!("k=3..{M}") } else { format!("fails at k={bad:?}") },
    ));
    Ok(rep)
}

/// Largest e_k/e_1 over k = 2..=k_max; infinite when a term is missing.
fn growth(e: &[f64], k_max: usize) -> f64 {
    (2..=k_max).map(|k| e.get(k).map_or(f64::INFINITY, |v| v / e[1])).fold(0.0, f64::max)
}

/// Whether the unstabilized terms break down by k: non-finite or error above one.
pub fn breaks_down(run: &crate::experiments::TermRun, e: &[f64], k: usize) -> bool {
    run.failed_at.is_some_and(|f| f <= k) || e.iter().take(k + 1).any(|v| !v.is_finite() || *v > 1.0)
}

fn terms_figure(name: &str, list: &[PlanErrors], exact: &[nalgebra::DVector<f64>], x: &[f64], k_max: usize, what: &str) -> Vec<Plot> {
    (1..=k_max)
        .map(|k| {
            let mut series = vec![Series::new("exact", x.iter().zip(exact[k].iter()).map(|(&a, &b)| (a, b)).collect())];
            for p in list {
                if let Some(u) = p.run.terms.get(k) {
                    series.push(Series::new(&p.label, x.iter().zip(u.iter()).map(|(&a, &b)| (a, b)).collect()));
                }
            }
            Plot {
                name: format!("{name}_u{k}"),
                spec: PlotSpec { title: format!("{what}: u_{k}"), x_label: "x".into(), y_label: format!("u_{k}"), log_y: false },
                series,
            }
        })
        .collect()
}

fn heat_terms_figure(ctx: &RecipeContext, name: &str, p_default: usize) -> Result<TableReport, CliError> {
    const K: usize = 4;
    let (n, p) = single_cell(ctx, 100, p_default);
    let d = Discretization::new(DOMAIN, n, p)?;
    let mode = ctx.plan.filter(|m| *m != PlanMode::None).unwrap_or(PlanMode::Geometric);
    let model = RecurrenceModel::heat(1.0);
    let list = plan_errors(model, Initial::SinPi, &d, K, vec![
        ("none".into(), StabilizationPlan::none(d.h())),
        (mode.name().into(), make_plan(mode, &d, ctx.c, ctx.ratio)?),
    ])?;
    let mut rep = error_table(name, &list, K);
    let exact = exact_terms(&model, Initial::SinPi, K, &d.x)?;
    rep.plots.extend(terms_figure(name, &list, &exact, &d.x, K, &format!("heat p={p}, h=1/{n}")));
    let g = growth(&list[1].e, K);
    rep.checks.push(Check::property(name, cell(p, n), format!("{} e_k < 100·e_1 for k≤{K}", mode.name()), g < 100.0, format!("max e_k/e_1 = {g:.3e}")));
    if p == 2 {
        let broke = breaks_down(&list[0].run, &list[0].e, 3);
        rep.checks.push(Check::property(name, cell(p, n), "unstabilized terms break down by k=3", broke, format!("{:?}", &list[0].e)));
    }
    Ok(rep)
}

fn fig10(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    const K: usize = 4;
    let (n, p) = single_cell(ctx, 100, 2);
    let d = Discretization::new(DOMAIN, n, p)?;
    let model = RecurrenceModel::burgers(0.0);
    let list = plan_errors(model, Initial::Sin2Pi, &d, K, vec![("none".into(), StabilizationPlan::none(d.h()))])?;
    let mut rep = error_table("fig10", &list, K);
    let exact = exact_terms(&model, Initial::Sin2Pi, K, &d.x)?;
    rep.plots.extend(terms_figure("fig10", &list, &exact, &d.x, K, &format!("inviscid Burgers p={p}, h=1/{n}")));
    Ok(rep)
}

const VISCOSITIES: [f64; 5] = [0.0, 1e-3, 1e-2, 0.1, 1.0];

fn fig11(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    const M: usize = 8;
    let n = ctx.cells.as_ref().and_then(|c| c.first().copied()).unwrap_or(100);
    let degrees = ctx.degrees(1..=4);
    let jobs: Vec<(usize, f64)> = degrees.iter().flat_map(|&p| VISCOSITIES.iter().map(move |&nu| (p, nu))).collect();
    let curves = par_map(ctx.jobs(), &jobs, |&(p, nu)| error_curve(RecurrenceModel::burgers(nu), Initial::Sin2Pi, p, n, M, false))?;
    let mut header = vec!["p", "nu", "n_cells", "slope", "k_break", "slope_before", "slope_after"];
    let ecols = e_columns(M);
    header.extend(ecols.iter().map(String::as_str));
    let mut rep = TableReport::new("fig11", &header);
    rep.notes.push(format!("Burgers, u₀=sin(2πx), no stabilization, m={M}, absolute mass-weighted errors"));
    let mut plots: Vec<Plot> = Vec::new();
    for (&(p, nu), c) in jobs.iter().zip(curves) {
        let c = c?;
        let last = c.e.len().saturating_sub(1).min(M);
        let slope = fit_slope(&c.e, 1..=last).ok().map(|s| s.0);
        let (ks, ys) = log_points(&c.e, 1);
        let two = two_regime_fit(&ks, &ys).ok();
        let mut row: Vec<Value> = vec![p.into(), nu.into(), n.into(), slope.into()];
        row.push(two.map_or(Value::Missing, |t| t.k_break.into()));
        row.push(two.map(|t| t.slope_before).into());
        row.push(two.map(|t| t.slope_after).into());
        row.extend((1..=M).map(|k| c.e.get(k).copied().into()));
        rep.rows.push(row);
        let label = format!("ν={nu}{}", slope.map_or(String::new(), |s| format!(" slope {s:.2}")));
        let series = Series::new(label, c.e.iter().enumerate().skip(1).map(|(k, &e)| (k as f64, e)).collect());
        match plots.iter_mut().find(|pl| pl.name == format!("fig11_p{p}")) {
            Some(pl) => pl.series.push(series),
            None => plots.push(Plot {
                name: format!("fig11_p{p}"),
                spec: PlotSpec { title: format!("Burgers term errors, p={p}, h=1/{n}"), x_label: "k".into(), y_label: "e_k".into(), log_y: true },
                series: vec![series],
            }),
        }
        if let (1, 100) = (p, n) {
            for &(rnu, kb, s1, s2) in golden::VISCOUS_REGIMES.iter().filter(|r| r.0 == nu) {
                let id = format!("ν={rnu},{}", cell(p, n));
                rep.checks.push(Check::value("fig11", &id, "k_break", kb as f64, BREAK_TOL, two.map(|t| t.k_break as f64), "fit failed"));
                rep.checks.push(Check::value("fig11", &id, "slope_before", s1, SLOPE_TOL, two.map(|t| t.slope_before), "fit failed"));
                rep.checks.push(Check::value("fig11", &id, "slope_after", s2, SLOPE_TOL, two.map(|t| t.slope_after), "fit failed"));
            }
        }
    }
    rep.plots = plots;
    Ok(rep)
}

fn fig12(ctx: &RecipeContext) -> Result<TableReport, CliError> {
    const K: usize = 4;
    let (n, p) = single_cell(ctx, 100, 2);
    let d = Discretization::new(DOMAIN, n, p)?;
    let model = model(ModelKind::Burgers, 1.0);
    let list = plan_errors(model, Initial::Sin2Pi, &d, K, vec![
        ("none".into(), StabilizationPlan::none(d.h())),
        ("constant".into(), make_plan(PlanMode::Constant, &d, ctx.c, ctx.ratio)?),
        ("geometric".into(), make_plan(PlanMode::Geometric, &d, ctx.c, ctx.ratio)?),
    ])?;
    let mut rep = error_table("fig12", &list, K);
    let exact = exact_terms(&model, Initial::Sin2Pi, K, &d.x)?;
    rep.plots.extend(terms_figure("fig12", &list, &exact, &d.x, K, &format!("Burgers ν=1, p={p}, h=1/{n}")));
    let g = growth(&list[2].e, K);
    rep.checks.push(Check::property("fig12", cell(p, n), format!("geometric e_k < 100·e_1 for k≤{K}"), g < 100.0, format!("max e_k/e_1 = {g:.3e}")));
    Ok(rep)
}
