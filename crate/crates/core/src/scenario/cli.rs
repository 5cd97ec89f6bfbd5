use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use nalgebra::DMatrix;
use serde_json::{json, Value};

use crate::bochner::{generalized_bochner, rk_bochner};
use crate::charts::{ModelDefaults, ModelSpec};
use crate::curvature::{ricci_family, star, HermitianPoint};
use crate::error::{Error, Result};
use crate::multilinear::{curvature_symmetry_defects, CurvTensor, SymBilinear};
use crate::tol::Tolerances;

use super::document::{dump_tensor, load_tensor, TensorDocument};
use super::report::{to_canonical_json, ScenarioReport, Status, SuiteReport};
use super::runner::{identities_report, run_all, run_scenario, ScenarioInput};

#[derive(Parser, Debug)]
#[command(
    name = "bochner",
    version,
    about = "Bochner-type curvature tensors of almost Hermitian models"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Tolerance for exact-formula algebra.
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol_alg: f64,
    /// Tolerance for first-derivative chart identities.
    #[arg(long, global = true, default_value_t = 1e-6)]
    tol_fd1: f64,
    /// Tolerance for second-derivative chart identities.
    #[arg(long, global = true, default_value_t = 1e-4)]
    tol_fd2: f64,
    /// Finite-difference step.
    #[arg(long, global = true, default_value_t = 1e-3)]
    fd_step: f64,
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    /// Write the JSON output to this file instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall time in reports (makes them run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Args, Debug, Default)]
struct ModelArgs {
    /// Complex dimension for bare model names.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
}

impl ModelArgs {
    fn parse(&self, text: &str) -> Result<ModelSpec> {
        let d = ModelDefaults::default();
        ModelSpec::parse_with(
            text,
            ModelDefaults {
                m: self.m,
                c: self.c.unwrap_or(d.c),
                mu: self.mu.unwrap_or(d.mu),
            },
        )
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Load a tensor document and report its invariants.
    Validate { file: PathBuf },
    /// Curvature, R*, B*, B and the Ricci family of a model space.
    Tensor {
        model: String,
        /// Also write the model as a tensor document.
        #[arg(long)]
        dump: Option<PathBuf>,
        #[command(flatten)]
        args: ModelArgs,
    },
    /// Finite-difference identity residuals on a model chart.
    Identities {
        chart: String,
        #[arg(long, default_value_t = 3)]
        points: usize,
        #[command(flatten)]
        args: ModelArgs,
    },
    /// Run one verification scenario.
    Scenario {
        id: String,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        c: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Run every scenario.
    All,
}

impl Global {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            tol_alg: self.tol_alg,
            tol_fd1: self.tol_fd1,
            tol_fd2: self.tol_fd2,
            h: self.fd_step,
            ..Tolerances::default()
        }
    }

    fn input(&self) -> ScenarioInput {
        ScenarioInput {
            seed: self.seed,
            h: self.fd_step,
            ..ScenarioInput::default()
        }
    }

    /// JSON goes to `--json` if given, else to stdout unless `--quiet`.
    fn emit(&self, text: &str, human: impl FnOnce() -> String) -> Result<()> {
        match &self.json {
            Some(path) => {
                std::fs::write(path, text)?;
                if !self.quiet {
                    print!("{}", human());
                }
            }
            None if !self.quiet => print!("{text}"),
            None => {}
        }
        Ok(())
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Value {
    json!((0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect::<Vec<f64>>())
        .collect::<Vec<_>>())
}

fn sym(q: &SymBilinear) -> Value {
    matrix_rows(q.as_matrix())
}

fn flat(t: &CurvTensor) -> Value {
    json!(t.as_slice())
}

fn tensor_summary(point: &HermitianPoint, r: &CurvTensor, label: Option<String>) -> Result<Value> {
    let fam = ricci_family(point, r)?;
    let b_star = generalized_bochner(point, r)?;
    let b = if point.m() >= 3 {
        match rk_bochner(point, r) {
            Ok(b) => json!({"norm": b.norm, "components": flat(&b.tensor)}),
            Err(e @ Error::NotRk { .. }) => json!({"error": e.to_string()}),
            Err(e) => return Err(e),
        }
    } else {
        Value::Null
    };
    let defects = curvature_symmetry_defects(r)?;
    Ok(json!({
        "schema_version": super::report::SCHEMA_VERSION,
        "label": label,
        "dim": point.dim(),
        "index_order": super::document::INDEX_ORDER,
        "r": flat(r),
        "r_star": flat(&star(point, r)?),
        "b_star": {"norm": b_star.norm, "components": flat(&b_star.tensor)},
        "b": b,
        "ricci": {
            "s": sym(&fam.s),
            "s_prime": sym(&fam.s_prime),
            "s_star": sym(&fam.s_star),
            "tau": fam.tau,
            "tau_prime": fam.tau_prime,
            "tau_star": fam.tau_star,
        },
        "symmetry_defects": serde_json::to_value(defects)?,
    }))
}

fn report_line(r: &ScenarioReport) -> String {
    let fails = r.checks.iter().filter(|c| c.status == Status::Fail).count();
    let tag = if r.passed() { "PASS" } else { "FAIL" };
    let mut s = format!(
        "{tag} {} ({} checks, {fails} failed)\n",
        r.id,
        r.checks.len()
    );
    for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
        s.push_str(&format!(
            "  {}: defect {:?} vs {:e}\n",
            c.name, c.defect, c.tolerance
        ));
    }
    s
}

fn exit_for(pass: bool) -> i32 {
    if pass {
        0
    } else {
        1
    }
}

fn timed<T>(on: bool, f: impl FnOnce() -> Result<T>) -> Result<(T, Option<f64>)> {
    let start = Instant::now();
    let v = f()?;
    Ok((v, on.then(|| start.elapsed().as_secs_f64())))
}

fn run(cli: Cli) -> Result<i32> {
    let g = &cli.global;
    let tol = g.tolerances();
    match cli.command {
        Command::Validate { file } => {
            let doc = load_tensor(&file, tol.tol_alg)?;
            let (point, r) = doc.validate(tol.tol_alg)?;
            let summary = tensor_summary(&point, &r, doc.label.clone())?;
            g.emit(&to_canonical_json(&summary)?, || {
                format!("valid: {} (dim {})\n", file.display(), doc.dim)
            })?;
            Ok(0)
        }
        Command::Tensor { model, dump, args } => {
            let spec = args.parse(&model)?;
            let (point, r) = spec.algebraic()?;
            if let Some(path) = dump {
                dump_tensor(
                    &TensorDocument::from_parts(&point, &r, Some(spec.to_string())),
                    &path,
                )?;
            }
            let summary = tensor_summary(&point, &r, Some(spec.to_string()))?;
            g.emit(&to_canonical_json(&summary)?, || {
                format!("{spec}: dim {}\n", spec.dim())
            })?;
            Ok(0)
        }
        Command::Identities {
            chart,
            points,
            args,
        } => {
            let spec = args.parse(&chart)?;
            let (mut report, t) = timed(g.timings, || {
                identities_report(&spec, points, &g.input(), &tol)
            })?;
            report.wall_time_s = t;
            g.emit(&to_canonical_json(&report)?, || report_line(&report))?;
            Ok(exit_for(report.passed()))
        }
        Command::Scenario { id, m, k, c, mu } => {
            let d = g.input();
            let input = ScenarioInput {
                m,
                k,
                c: c.unwrap_or(d.c),
                mu: mu.unwrap_or(d.mu),
                ..d
            };
            let (mut report, t) = timed(g.timings, || run_scenario(&id, &input, &tol))?;
            report.wall_time_s = t;
            g.emit(&to_canonical_json(&report)?, || report_line(&report))?;
            Ok(exit_for(report.passed()))
        }
        Command::All => {
            let (mut reports, t) = timed(g.timings, || run_all(&g.input(), &tol))?;
            if let Some(t) = t {
                // Per-scenario times are not separable from the pooled run.
                for r in &mut reports {
                    r.wall_time_s = Some(t);
                }
            }
            let suite = SuiteReport::new(reports);
            g.emit(&to_canonical_json(&suite)?, || {
                suite.reports.iter().map(report_line).collect()
            })?;
            Ok(exit_for(suite.status == Status::Pass))
        }
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// code: 0 all checks passed, 1 some check failed, 2 usage or input error.
pub fn cli_dispatch<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            2
        }
    }
}
