use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use hardy_lab::asymptotics::{
    diagnose_hankel, diagnose_toeplitz, ConvergenceReport, DiagnoseOptions, TestVectorFamily,
};
use hardy_lab::constants::SCHEMA_VERSION;
use hardy_lab::essential::{
    classify, compactness_probe, default_cut_grid, defect_expr, ClassifyOptions, DefectKind,
    Family, ProbeOptions,
};
use hardy_lab::harness::{run_scenario, to_json, verify, NGrid, RunConfig};
use hardy_lab::operators::{evaluate, evaluate_section, Evaluated, Expr};
use hardy_lab::scalar::{lift, rational_to_string, Real};
use hardy_lab::sections::{FiniteSection, Operand};
use hardy_lab::series::{Coefficient, SymbolSpec};
use hardy_lab::{ExactSection, Rule64, Section64};

#[derive(Parser)]
#[command(
    name = "hardy-lab",
    version,
    about = "Finite-section experiments for operators on H²"
)]
struct Cli {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    window: Option<usize>,
    /// `a:b:step`, `a:b:xk` or a comma list.
    #[arg(long = "n-grid", global = true)]
    n_grid: Option<NGrid>,
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write tabular data (matrices, metrics) here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Force exact rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build or apply operator sections.
    #[command(subcommand)]
    Op(OpCommand),
    /// Toeplitz and Hankel step diagnostics.
    #[command(subcommand)]
    Asym(AsymCommand),
    /// Commutator defects, compactness probes and classification.
    #[command(subcommand)]
    Ess(EssCommand),
    /// Run identity suites (`all` for every suite).
    Verify {
        #[arg(required = true)]
        suites: Vec<String>,
    },
    /// Run a named scenario.
    Scenario {
        name: String,
        /// Symbol overriding the scenario default (registry name or JSON).
        #[arg(long)]
        symbol: Option<String>,
    },
}

#[derive(Args)]
struct ExprArg {
    /// Operator expression as JSON, `@file`, or omitted to use the config.
    #[arg(long)]
    expr: Option<String>,
}

#[derive(Subcommand)]
enum OpCommand {
    /// Materialize a window as CSV `m,l,re,im`.
    Build(ExprArg),
    /// Apply a window to a coefficient vector.
    Apply {
        #[command(flatten)]
        expr: ExprArg,
        /// JSON array of coefficients, e.g. `[1, "1/2", [0, 1]]`.
        #[arg(long)]
        vector: String,
    },
}

#[derive(Subcommand)]
enum AsymCommand {
    Toeplitz(AsymArgs),
    Hankel(AsymArgs),
}

#[derive(Args)]
struct AsymArgs {
    #[command(flatten)]
    expr: ExprArg,
    /// Expected limit; without it the extracted symbol is used.
    #[arg(long)]
    candidate: Option<String>,
    /// Number of monomial test vectors `e_0, …`.
    #[arg(long, default_value_t = 8)]
    vectors: usize,
}

#[derive(Subcommand)]
enum EssCommand {
    Defect {
        #[command(flatten)]
        expr: ExprArg,
        #[arg(long)]
        kind: DefectKind,
    },
    Probe {
        #[command(flatten)]
        expr: ExprArg,
        /// Probe this defect of the operator instead of the operator itself.
        #[arg(long)]
        kind: Option<DefectKind>,
        /// Comma-separated cut points.
        #[arg(long, value_delimiter = ',')]
        cuts: Option<Vec<usize>>,
    },
    Classify {
        #[arg(long)]
        symbol: String,
        #[arg(long)]
        family: Family,
        /// Theorem facts only, no numeric probes.
        #[arg(long)]
        no_numeric: bool,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(p) => RunConfig::from_json(&read(p)?)?,
        None => RunConfig::default(),
    };
    if cli.window.is_some() {
        c.window = cli.window;
    }
    if cli.n_grid.is_some() {
        c.n_grid = cli.n_grid.clone();
    }
    if cli.tol.is_some() {
        c.tol = cli.tol;
    }
    if let Some(s) = cli.seed {
        c.seed = s;
    }
    if cli.out.is_some() {
        c.out = cli.out.clone();
    }
    if cli.csv.is_some() {
        c.csv = cli.csv.clone();
    }
    if cli.exact {
        c.exact = Some(true);
    }
    Ok(c)
}

fn read(p: &Path) -> Result<String> {
    fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
}

/// Inline JSON, or the contents of the file named after a leading `@`.
fn json_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => read(Path::new(path)),
        None => Ok(s.to_string()),
    }
}

fn parse_expr(arg: &ExprArg, config: &RunConfig) -> Result<Expr> {
    match &arg.expr {
        Some(s) => Ok(serde_json::from_str(&json_arg(s)?).context("parsing --expr")?),
        None => config
            .expression
            .clone()
            .context("no expression: pass --expr or set `expression` in the config"),
    }
}

fn parse_symbol(s: &str) -> Result<SymbolSpec> {
    if let Ok(g) = SymbolSpec::named(s) {
        return Ok(g);
    }
    serde_json::from_str(&json_arg(s)?).context("parsing symbol")
}

fn single_rule(expr: &Expr, window: usize) -> Result<Rule64> {
    match evaluate::<f64>(expr, window, window, None)? {
        Evaluated::Rule(r) => Ok(r),
        Evaluated::Section(_) => {
            bail!("step diagnostics need a single operator rule, not a product")
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn exact_csv(s: &ExactSection) -> String {
    let mut out = String::from("m,l,re,im\n");
    for m in 0..s.rows() {
        for l in 0..s.cols() {
            let v = s.get(m, l);
            if v.re != Default::default() || v.im != Default::default() {
                out.push_str(&format!(
                    "{m},{l},{},{}\n",
                    rational_to_string(&v.re),
                    rational_to_string(&v.im)
                ));
            }
        }
    }
    out
}

fn float_csv(s: &Section64) -> Result<String> {
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    Ok(String::from_utf8(buf)?)
}

fn section_summary<R: Real>(
    expr: &Expr,
    s: &FiniteSection<R>,
    exact: bool,
    extra: serde_json::Value,
) -> Result<String> {
    let mut v = json!({
        "schema_version": SCHEMA_VERSION,
        "expression": expr,
        "rows": s.rows(),
        "cols": s.cols(),
        "exact_path": exact,
        "certified_entries": s.exact_window().exact_count(),
        "frobenius": s.frobenius(),
    });
    if let (Some(obj), serde_json::Value::Object(more)) = (v.as_object_mut(), extra) {
        obj.extend(more);
    }
    Ok(to_json(&v)?)
}

/// CSV goes to `--csv`, or to stdout when no JSON report is requested.
fn emit_matrix(csv: String, summary: String, config: &RunConfig) -> Result<()> {
    match (&config.csv, &config.out) {
        (Some(c), out) => {
            emit(&csv, Some(c))?;
            emit(&summary, out.as_deref())
        }
        (None, Some(o)) => emit(&summary, Some(o)),
        (None, None) => emit(&csv, None),
    }
}

fn run_op(cmd: &OpCommand, config: &RunConfig) -> Result<bool> {
    let window = config.window.unwrap_or(8);
    let exact = config.exact == Some(true);
    match cmd {
        OpCommand::Build(arg) => {
            let expr = parse_expr(arg, config)?;
            if exact {
                let s = evaluate_section::<num_rational::BigRational>(&expr, window, window, None)?;
                emit_matrix(
                    exact_csv(&s),
                    section_summary(&expr, &s, true, json!({}))?,
                    config,
                )?;
            } else {
                let s = evaluate_section::<f64>(&expr, window, window, None)?;
                emit_matrix(
                    float_csv(&s)?,
                    section_summary(&expr, &s, false, json!({}))?,
                    config,
                )?;
            }
        }
        OpCommand::Apply { expr, vector } => {
            let expr = parse_expr(expr, config)?;
            let v: Vec<Coefficient> =
                serde_json::from_str(&json_arg(vector)?).context("parsing --vector")?;
            let cols = v.len();
            let image: Vec<serde_json::Value> = if exact {
                let s = evaluate_section::<num_rational::BigRational>(&expr, window, cols, None)?;
                let x: Vec<_> = v.iter().map(|c| c.0.clone()).collect();
                s.apply(&x)
                    .into_iter()
                    .map(|z| json!(Coefficient(z)))
                    .collect()
            } else {
                let s = evaluate_section::<f64>(&expr, window, cols, None)?;
                let x: Vec<_> = v.iter().map(|c| lift::<f64>(&c.0)).collect();
                s.apply(&x)
                    .into_iter()
                    .map(|z| json!([z.re, z.im]))
                    .collect()
            };
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "expression": expr,
                "input": v,
                "rows": window,
                "exact_path": exact,
                "image": image,
            });
            emit(&to_json(&report)?, config.out.as_deref())?;
        }
    }
    Ok(true)
}

fn run_asym(cmd: &AsymCommand, config: &RunConfig) -> Result<bool> {
    let (args, hankel) = match cmd {
        AsymCommand::Toeplitz(a) => (a, false),
        AsymCommand::Hankel(a) => (a, true),
    };
    let grid = config
        .n_grid
        .clone()
        .unwrap_or_else(|| NGrid::doubling(4, 64))
        .0;
    let window = config
        .window
        .unwrap_or(4 * grid.last().copied().unwrap_or(16))
        .max(16);
    let expr = parse_expr(&args.expr, config)?;
    let rule = single_rule(&expr, window)?;
    let candidate = match &args.candidate {
        Some(c) => Some(single_rule(
            &serde_json::from_str(&json_arg(c)?).context("parsing --candidate")?,
            window,
        )?),
        None => None,
    };
    let family = TestVectorFamily::monomials(0..args.vectors.max(1));
    let opts = DiagnoseOptions {
        window: Some(window),
        thresholds: config.thresholds,
        seed: config.seed,
        ..Default::default()
    };
    let report: ConvergenceReport = if hankel {
        diagnose_hankel(&rule, &family, &grid, candidate.as_ref(), &opts)?
    } else {
        diagnose_toeplitz(&rule, &family, &grid, candidate.as_ref(), &opts)?
    };
    if let Some(c) = &config.csv {
        emit(&report.to_csv(), Some(c))?;
    }
    let mut v = serde_json::to_value(&report)?;
    v.as_object_mut()
        .map(|o| o.insert("schema_version".into(), json!(SCHEMA_VERSION)));
    emit(&to_json(&v)?, config.out.as_deref())?;
    Ok(true)
}

fn probe_options(config: &RunConfig) -> ProbeOptions {
    let mut p = ProbeOptions::default();
    if let Some(t) = config.tol {
        p.tolerance = t;
    }
    p
}

fn run_ess(cmd: &EssCommand, config: &RunConfig) -> Result<bool> {
    match cmd {
        EssCommand::Defect { expr, kind } => {
            let window = config.window.unwrap_or(16);
            let expr = parse_expr(expr, config)?;
            let extra = |zero: bool| json!({ "defect": kind, "formula": kind.formula(), "identically_zero": zero });
            if config.exact == Some(true) {
                let d =
                    defect_expr::<num_rational::BigRational>(&expr, *kind, window, window, None)?;
                emit_matrix(
                    exact_csv(&d),
                    section_summary(&expr, &d, true, extra(d.is_zero()))?,
                    config,
                )?;
            } else {
                let d = defect_expr::<f64>(&expr, *kind, window, window, None)?;
                emit_matrix(
                    float_csv(&d)?,
                    section_summary(&expr, &d, false, extra(d.is_zero()))?,
                    config,
                )?;
            }
            Ok(true)
        }
        EssCommand::Probe { expr, kind, cuts } => {
            let window = config.window.unwrap_or(256);
            let expr = parse_expr(expr, config)?;
            let cuts = cuts
                .clone()
                .or_else(|| config.cut_grid.clone())
                .unwrap_or_else(|| default_cut_grid(window));
            let section = match kind {
                Some(k) => defect_expr::<f64>(&expr, *k, window, window, None)?,
                None => evaluate_section::<f64>(&expr, window, window, None)?,
            };
            let est = compactness_probe(
                Operand::Section(&section),
                window,
                &cuts,
                &probe_options(config),
            )?;
            let report = json!({
                "schema_version": SCHEMA_VERSION,
                "expression": expr,
                "defect": kind,
                "estimate": est,
            });
            emit(&to_json(&report)?, config.out.as_deref())?;
            Ok(true)
        }
        EssCommand::Classify {
            symbol,
            family,
            no_numeric,
        } => {
            let g = parse_symbol(symbol)?;
            let opts = ClassifyOptions {
                numeric: !no_numeric,
                window: config.window.unwrap_or(256),
                probe: probe_options(config),
                seed: config.seed,
            };
            let record = classify(&g, *family, &opts)?;
            let mut v = serde_json::to_value(&record)?;
            v.as_object_mut()
                .map(|o| o.insert("schema_version".into(), json!(SCHEMA_VERSION)));
            emit(&to_json(&v)?, config.out.as_deref())?;
            Ok(true)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let mut config = load_config(cli)?;
    match &cli.command {
        Command::Op(cmd) => run_op(cmd, &config),
        Command::Asym(cmd) => run_asym(cmd, &config),
        Command::Ess(cmd) => run_ess(cmd, &config),
        Command::Verify { suites } => {
            let report = verify(suites, &config)?;
            emit(&to_json(&report)?, config.out.as_deref())?;
            for s in &report.suites {
                eprintln!(
                    "{:<20} {} ({} cases, {} skipped)",
                    s.suite,
                    if s.pass { "pass" } else { "FAIL" },
                    s.cases.len(),
                    s.skipped
                );
            }
            Ok(report.pass)
        }
        Command::Scenario { name, symbol } => {
            if let Some(s) = symbol {
                config.symbols = vec![parse_symbol(s)?];
            }
            let report = run_scenario(name, &config)?;
            emit(&to_json(&report)?, config.out.as_deref())?;
            if let Some(c) = &config.csv {
                let csv: String = report
                    .diagnostics
                    .iter()
                    .map(ConvergenceReport::to_csv)
                    .collect();
                emit(&csv, Some(c))?;
            }
            for c in &report.checks {
                eprintln!("{:<45} {}", c.name, if c.pass { "pass" } else { "FAIL" });
            }
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
