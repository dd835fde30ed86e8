use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use continuation::{integrated_residual, ContinuationParams, StepPolicy};
use nalgebra::DVector;
use serde::Serialize;
use series_engine::{fit_slope, Grid};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::experiments::{
    alpha_curve, convention_name, exact_terms, integrate, make_plan, mass_condition, model, par_map, problem,
    ratio_curve, search_parameters, term_errors, terms_until_failure, Discretization, COND_CONVENTIONS,
};
use crate::output::{write_csv, write_json, Value};
use crate::plot::{emit_plot, PlotSpec, Series};
use crate::recipes::{run_recipe, write_report, RecipeContext};

#[derive(Debug, Parser)]
#[command(name = "resumfem", version, about = "Borel–Padé–Laplace finite-element experiments")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_pade(s: &str) -> Result<[usize; 2], String> {
    let (r, s) = s.split_once(',').ok_or("expected r,s")?;
    Ok([r.trim().parse().map_err(|e| format!("r: {e}"))?, s.trim().parse().map_err(|e| format!("s: {e}"))?])
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// heat | burgers
    #[arg(long, global = true)]
    pub model: Option<String>,
    #[arg(long, global = true)]
    pub nu: Option<f64>,
    /// Comma-separated cell counts (h = 1/n on the unit interval).
    #[arg(long, global = true, value_delimiter = ',')]
    pub cells: Option<Vec<usize>>,
    /// Comma-separated polynomial degrees.
    #[arg(long, global = true, value_delimiter = ',')]
    pub degree: Option<Vec<usize>>,
    /// Number of series terms.
    #[arg(short = 'm', global = true)]
    pub m: Option<usize>,
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Gauss–Laguerre nodes.
    #[arg(long, global = true)]
    pub ng: Option<usize>,
    /// Padé orders as r,s.
    #[arg(long, global = true, value_parser = parse_pade)]
    pub pade: Option<[usize; 2]>,
    /// Fixed time step; adaptive when absent.
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// none | constant | doubling | geometric
    #[arg(long, global = true)]
    pub plan: Option<String>,
    #[arg(long = "t-final", global = true)]
    pub t_final: Option<f64>,
    /// Output directory (default: $RESUMFEM_OUT, then ./resumfem-out).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Exponent c in α₀ = h^c.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Geometric ratio R.
    #[arg(long, global = true)]
    pub ratio: Option<f64>,
    /// euclidean | mass-weighted
    #[arg(long = "residual-norm", global = true)]
    pub residual_norm: Option<String>,
    /// interior | full
    #[arg(long = "residual-scope", global = true)]
    pub residual_scope: Option<String>,
    /// sin-pi | sin-2pi
    #[arg(long, global = true)]
    pub initial: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Series terms and their errors against the closed form.
    Terms {
        /// Relative instead of absolute errors.
        #[arg(long)]
        relative: bool,
    },
    /// Mass-matrix condition numbers under every boundary/norm convention.
    Condnum,
    /// Optimal α₀ = h^c and ratio R.
    Alpha {
        /// Also write the objective along the c and R grids.
        #[arg(long)]
        curves: bool,
    },
    /// Time integration by Borel–Padé–Laplace continuation.
    Integrate,
    /// Reproduce a reference table or figure (`all` runs every recipe).
    Recipe { name: String },
    /// Render columns of a CSV file as an SVG line chart.
    Plot {
        input: PathBuf,
        #[arg(long)]
        x: String,
        /// Columns to draw; all others when omitted.
        #[arg(long, value_delimiter = ',')]
        y: Vec<String>,
        #[arg(long)]
        log_y: bool,
        #[arg(long)]
        title: Option<String>,
    },
}

/// Keys set by either the config file or a flag.
#[derive(Debug, Default)]
pub struct Explicit(BTreeSet<&'static str>);

impl Explicit {
    pub fn has(&self, key: &str) -> bool {
        self.0.contains(key)
    }
}

const KEYS: [&str; 19] = [
    "model", "nu", "domain", "cells", "degrees", "m", "eps", "pade", "ng", "dt", "plan", "c", "ratio", "t_final", "out",
    "jobs", "residual_norm", "residual_scope", "initial",
];

pub fn load_config(a: &CommonArgs) -> Result<(ExperimentConfig, Explicit), CliError> {
    let mut explicit = Explicit::default();
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let raw: serde_json::Value =
                serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if let Some(obj) = raw.as_object() {
                explicit.0.extend(KEYS.iter().filter(|k| obj.contains_key(**k)));
            }
            serde_json::from_value(raw).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    macro_rules! set {
        ($($flag:ident => $field:ident),*) => {$(
            if let Some(v) = a.$flag.clone() {
                cfg.$field = v.into();
                explicit.0.insert(stringify!($field));
            }
        )*};
    }
    set!(model => model, nu => nu, cells => cells, degree => degrees, m => m, eps => eps, ng => ng, pade => pade,
         plan => plan, t_final => t_final, jobs => jobs);
    macro_rules! set_opt {
        ($($flag:ident),*) => {$(
            if a.$flag.is_some() {
                cfg.$flag = a.$flag.clone();
                explicit.0.insert(stringify!($flag));
            }
        )*};
    }
    set_opt!(dt, c, ratio, out, residual_norm, residual_scope, initial);
    cfg.validate()?;
    Ok((cfg, explicit))
}

pub fn recipe_context(cfg: &ExperimentConfig, explicit: &Explicit) -> Result<RecipeContext, CliError> {
    Ok(RecipeContext {
        cells: explicit.has("cells").then(|| cfg.cells.clone()),
        degrees: explicit.has("degrees").then(|| cfg.degrees.clone()),
        dt: cfg.dt,
        plan: if explicit.has("plan") { Some(cfg.plan_mode()?) } else { None },
        c: cfg.c,
        ratio: cfg.ratio,
        residual_norm: cfg.residual_norm()?,
        residual_scope: cfg.residual_scope()?,
        jobs: cfg.jobs,
    })
}

/// Parses arguments, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let (cfg, explicit) = load_config(&cli.common)?;
    let out = cfg.out_dir();
    match &cli.command {
        Command::Terms { relative } => terms(&cfg, &out, *relative),
        Command::Condnum => condnum(&cfg, &out),
        Command::Alpha { curves } => alpha(&cfg, &out, *curves),
        Command::Integrate => integrate_cmd(&cfg, &out),
        Command::Recipe { name } => recipe(&cfg, &explicit, &out, name),
        Command::Plot { input, x, y, log_y, title } => plot(&out, input, x, y, *log_y, title.as_deref()),
    }
}

fn grid(cfg: &ExperimentConfig) -> Vec<(usize, usize)> {
    cfg.degrees.iter().flat_map(|&p| cfg.cells.iter().map(move |&n| (p, n))).collect()
}

fn header(cols: &[&str]) -> Vec<String> {
    cols.iter().map(|s| s.to_string()).collect()
}

#[derive(Serialize)]
struct Run<'a, T: Serialize> {
    command: &'a str,
    config: &'a ExperimentConfig,
    results: T,
}

#[derive(Serialize)]
struct TermsSummary {
    p: usize,
    n_cells: usize,
    plan: String,
    c: f64,
    ratio: f64,
    computed: usize,
    failed_at: Option<usize>,
    errors: Option<Vec<f64>>,
    slope: Option<f64>,
}

fn terms(cfg: &ExperimentConfig, out: &Path, relative: bool) -> Result<i32, CliError> {
    let kind = cfg.model_kind()?;
    let mode = cfg.plan_mode()?;
    let initial = cfg.initial()?;
    let mdl = model(kind, cfg.nu);
    let results = par_map(cfg.jobs, &grid(cfg), |&(p, n)| -> Result<TermsSummary, CliError> {
        let d = Discretization::new(cfg.domain, n, p)?;
        let plan = make_plan(mode, &d, cfg.c, cfg.ratio)?;
        let u0 = d.interpolate(|x| initial.eval(x));
        let run = terms_until_failure(&mdl, &d, &u0, cfg.m, &plan)?;
        let mut head = vec!["x".to_string()];
        head.extend((0..run.terms.len()).map(|k| format!("u_{k}")));
        let rows: Vec<Vec<Value>> = (0..d.x.len())
            .map(|i| std::iter::once(d.x[i].into()).chain(run.terms.iter().map(|u| u[i].into())).collect())
            .collect();
        write_csv(&out.join(format!("terms_{}_n{n}_p{p}.csv", kind.name())), &head, &rows)?;
        let errors = exact_terms(&mdl, initial, cfg.m, &d.x).ok().map(|ex| term_errors(&run, &ex, &d.reduced.m, relative));
        let slope = errors.as_ref().and_then(|e| fit_slope(e, 1..=e.len().saturating_sub(1)).ok().map(|s| s.0));
        Ok(TermsSummary {
            p,
            n_cells: n,
            plan: mode.name().into(),
            c: plan.c,
            ratio: plan.r,
            computed: run.terms.len() - 1,
            failed_at: run.failed_at,
            errors,
            slope,
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for s in &results {
        for (k, e) in s.errors.iter().flatten().enumerate() {
            rows.push(vec![s.p.into(), s.n_cells.into(), s.plan.clone().into(), k.into(), (*e).into()]);
        }
        println!(
            "p={} h=1/{}: {} terms{}{}",
            s.p,
            s.n_cells,
            s.computed,
            s.failed_at.map_or(String::new(), |k| format!(", term {k} non-finite")),
            s.slope.map_or(String::new(), |v| format!(", slope {v:.4}"))
        );
    }
    write_csv(&out.join("terms.csv"), &header(&["p", "n_cells", "plan", "k", "e_k"]), &rows)?;
    write_json(&out.join("terms.json"), &Run { command: "terms", config: cfg, results: &results })?;
    Ok(0)
}

fn condnum(cfg: &ExperimentConfig, out: &Path) -> Result<i32, CliError> {
    let cells = grid(cfg);
    let values = par_map(cfg.jobs, &cells, |&(p, n)| -> Result<Vec<f64>, CliError> {
        let d = Discretization::new(cfg.domain, n, p)?;
        COND_CONVENTIONS.iter().map(|&c| mass_condition(&d, c)).collect()
    })?;
    let names: Vec<String> = COND_CONVENTIONS.iter().map(|&c| convention_name(c)).collect();
    let mut head = header(&["p", "n_cells", "h"]);
    head.extend(names.iter().cloned());
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (&(p, n), v) in cells.iter().zip(values) {
        let v = v?;
        let mut row: Vec<Value> = vec![p.into(), n.into(), (1.0 / n as f64).into()];
        row.extend(v.iter().map(|&x| x.into()));
        rows.push(row);
        println!("p={p} h=1/{n}: {}", names.iter().zip(&v).map(|(k, x)| format!("{k}={x:.2}")).collect::<Vec<_>>().join(" "));
        results.push(serde_json::json!({ "p": p, "n_cells": n, "cond": names.iter().cloned().zip(v).collect::<std::collections::BTreeMap<_, _>>() }));
    }
    write_csv(&out.join("condnum.csv"), &head, &rows)?;
    write_json(&out.join("condnum.json"), &Run { command: "condnum", config: cfg, results })?;
    Ok(0)
}

fn alpha(cfg: &ExperimentConfig, out: &Path, curves: bool) -> Result<i32, CliError> {
    let cells = grid(cfg);
    let found = par_map(cfg.jobs, &cells, |&(p, n)| -> Result<(f64, f64), CliError> {
        let d = Discretization::new(cfg.domain, n, p)?;
        let (c, r) = search_parameters(&d)?;
        if curves {
            let ac = alpha_curve(&d, &Grid::c_default())?;
            let rc = ratio_curve(&d, d.h().powf(c), &Grid::r_default())?;
            for (name, xl, yl, pts) in [("alpha_curve", "c", "cond2", &ac), ("ratio_curve", "r", "objective", &rc)] {
                let rows: Vec<Vec<Value>> = pts.iter().map(|&(a, b)| vec![a.into(), b.into()]).collect();
                write_csv(&out.join(format!("{name}_n{n}_p{p}.csv")), &header(&[xl, yl]), &rows)?;
                let spec = PlotSpec { title: format!("{name}, p={p}, h=1/{n}"), x_label: xl.into(), y_label: yl.into(), log_y: true };
                emit_plot(&spec, &[Series::new(format!("p={p}"), pts.clone())], &out.join(format!("{name}_n{n}_p{p}.svg")))?;
            }
        }
        Ok((c, r))
    })?;
    let mut rows = Vec::new();
    let mut results = Vec::new();
    for (&(p, n), f) in cells.iter().zip(found) {
        let (c, r) = f?;
        let h = 1.0 / n as f64;
        println!("p={p} h=1/{n}: c={c} alpha0={:e} R={r}", h.powf(c));
        rows.push(vec![p.into(), n.into(), h.into(), c.into(), h.powf(c).into(), r.into()]);
        results.push(serde_json::json!({ "p": p, "n_cells": n, "c": c, "ratio": r }));
    }
    write_csv(&out.join("alpha.csv"), &header(&["p", "n_cells", "h", "c", "alpha0", "ratio"]), &rows)?;
    write_json(&out.join("alpha.json"), &Run { command: "alpha", config: cfg, results })?;
    Ok(0)
}

#[derive(Serialize)]
struct IntegrateSummary {
    p: usize,
    n_cells: usize,
    plan: String,
    c: f64,
    ratio: f64,
    termination: String,
    steps: usize,
    t_reached: f64,
    ires: Option<f64>,
}

fn integrate_cmd(cfg: &ExperimentConfig, out: &Path) -> Result<i32, CliError> {
    let kind = cfg.model_kind()?;
    let mode = cfg.plan_mode()?;
    let initial = cfg.initial()?;
    let mdl = model(kind, cfg.nu);
    let defaults = ContinuationParams::default();
    let params = ContinuationParams {
        m: cfg.m,
        eps: cfg.eps,
        r: cfg.pade[0],
        s: cfg.pade[1],
        n_g: cfg.ng,
        t_final: cfg.t_final,
        policy: cfg.dt.map_or(StepPolicy::Adaptive, StepPolicy::Fixed),
        residual_norm: cfg.residual_norm()?.unwrap_or(defaults.residual_norm),
        residual_scope: cfg.residual_scope()?.unwrap_or(defaults.residual_scope),
        ..defaults
    };
    let results = par_map(cfg.jobs, &grid(cfg), |&(p, n)| -> Result<IntegrateSummary, CliError> {
        let d = Discretization::new(cfg.domain, n, p)?;
        let plan = make_plan(mode, &d, cfg.c, cfg.ratio)?;
        let pb = problem(mdl, &d, plan);
        let u0: DVector<f64> = pb.interpolate(|x| initial.eval(x));
        let trace = integrate(&pb, &u0, &params)?;
        let path = out.join(format!("trace_{}_n{n}_p{p}.csv", kind.name()));
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        trace.write_csv(std::fs::File::create(&path)?)?;
        Ok(IntegrateSummary {
            p,
            n_cells: n,
            plan: mode.name().into(),
            c: plan.c,
            ratio: plan.r,
            termination: trace.termination.name().into(),
            steps: trace.records.len() - 1,
            t_reached: trace.records.last().map_or(0.0, |r| r.t),
            ires: if trace.completed() { integrated_residual(&trace).ok() } else { None },
        })
    })?
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for s in &results {
        println!(
            "p={} h=1/{}: {} after {} steps at t={}, IRes={}",
            s.p,
            s.n_cells,
            s.termination,
            s.steps,
            s.t_reached,
            s.ires.map_or("x".into(), |v| format!("{v:.6e}"))
        );
        rows.push(vec![
            s.p.into(),
            s.n_cells.into(),
            s.plan.clone().into(),
            s.c.into(),
            s.ratio.into(),
            s.termination.clone().into(),
            s.steps.into(),
            s.t_reached.into(),
            s.ires.into(),
        ]);
    }
    let head = header(&["p", "n_cells", "plan", "c", "ratio", "termination", "steps", "t_reached", "ires"]);
    write_csv(&out.join("integrate.csv"), &head, &rows)?;
    write_json(&out.join("integrate.json"), &Run { command: "integrate", config: cfg, results: &results })?;
    Ok(0)
}

fn recipe(cfg: &ExperimentConfig, explicit: &Explicit, out: &Path, name: &str) -> Result<i32, CliError> {
    let ctx = recipe_context(cfg, explicit)?;
    if !crate::RECIPES.contains(&name) {
        return Err(CliError::UnknownRecipe(name.into()));
    }
    let mut failed = false;
    for rep in run_recipe(name, &ctx)? {
        write_report(&rep, out)?;
        let n_fail = rep.failures().count();
        println!("{}: {} checks, {} failed", rep.recipe, rep.checks.len(), n_fail);
        for c in rep.failures() {
            println!("  FAIL {} {}: expected {} {} observed {}", c.cell, c.quantity, c.expected_text(), c.tolerance_text(), c.observed_text());
        }
        failed |= n_fail > 0;
    }
    Ok(if failed { 2 } else { 0 })
}

fn plot(out: &Path, input: &Path, x: &str, y: &[String], log_y: bool, title: Option<&str>) -> Result<i32, CliError> {
    let mut rdr = csv::Reader::from_path(input).map_err(|e| CliError::Config(format!("{}: {e}", input.display())))?;
    let head: Vec<String> = rdr.headers()?.iter().map(String::from).collect();
    let find = |c: &str| head.iter().position(|h| h == c).ok_or_else(|| CliError::Config(format!("no column '{c}' in {}", input.display())));
    let xi = find(x)?;
    let ys: Vec<usize> = if y.is_empty() {
        (0..head.len()).filter(|&i| i != xi).collect()
    } else {
        y.iter().map(|c| find(c)).collect::<Result<_, _>>()?
    };
    let mut series: Vec<Series> = ys.iter().map(|&i| Series::new(head[i].clone(), Vec::new())).collect();
    for rec in rdr.records() {
        let rec = rec?;
        let Some(xv) = rec.get(xi).and_then(|s| s.parse::<f64>().ok()) else { continue };
        for (s, &i) in series.iter_mut().zip(&ys) {
            if let Some(v) = rec.get(i).and_then(|s| s.parse::<f64>().ok()) {
                s.points.push((xv, v));
            }
        }
    }
    let stem = input.file_stem().map_or("plot".into(), |s| s.to_string_lossy().into_owned());
    let spec = PlotSpec { title: title.unwrap_or(&stem).into(), x_label: x.into(), y_label: String::new(), log_y };
    let path = out.join(format!("{stem}.svg"));
    emit_plot(&spec, &series, &path)?;
    println!("{}", path.display());
    Ok(0)
}

