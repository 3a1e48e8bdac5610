//! Command-line front end. Exit codes: 0 all checks pass, 1 a threshold or
//! numeric failure, 2 a configuration error.

pub mod report;
pub mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::error::{NumError, Result};
use crate::forms::{load_maass_coefficients, Eigenform, HolomorphicForm};
use crate::lfunction::{exponent_scan, parse_t_grid, LSeriesContext};
use crate::pipeline::preset;
use crate::voronoi::{phi_maass, VoronoiTestFunction};

use report::{Check, Outcome, Report};
use suites::{Thresholds, DEFAULT_SEED, TABLE};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "oscillax", version, about = "Desk-scale checks for delta-method, Voronoi and L-value machinery")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Precision::Double)]
    pub precision: Precision,
    /// Override a named threshold, e.g. `--threshold h.localization=2e-3`.
    #[arg(long = "threshold", global = true, value_name = "NAME=VALUE")]
    pub thresholds: Vec<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Double,
    Extended,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormArg {
    Delta,
    E4delta,
    Maass,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exactness, decay and near-1 behaviour of the delta expansion.
    VerifyDelta {
        #[arg(long = "Q", default_value_t = 10.0)]
        q_param: f64,
    },
    /// Voronoi identity and dual-transform expansion.
    VerifyVoronoi {
        #[arg(long, value_enum)]
        form: Option<FormArg>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long = "N")]
        n: Option<f64>,
        /// Maass coefficient file (JSON) for `--form maass`.
        #[arg(long)]
        coeff_file: Option<PathBuf>,
    },
    /// Oscillatory-integral lemmas, Psi, K and H at a preset.
    VerifyIntegrals {
        #[arg(long, default_value = "desk1")]
        preset: String,
    },
    /// Stirling series and gamma-factor envelope.
    VerifyGamma,
    /// Rankin-Selberg L-values on the critical line.
    EvalL {
        #[arg(long, default_value = "delta-e4delta")]
        pair: String,
        /// Inclusive grid `start:end:count`.
        #[arg(long, default_value = "0:16:8")]
        t: String,
        #[arg(long)]
        coeff_file: Option<PathBuf>,
        /// Write (t, |L|) pairs here for plotting.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifyDelta { .. } => "verify-delta",
            Command::VerifyVoronoi { .. } => "verify-voronoi",
            Command::VerifyIntegrals { .. } => "verify-integrals",
            Command::VerifyGamma => "verify-gamma",
            Command::EvalL { .. } => "eval-l",
        }
    }
}

/// What a command produced before formatting.
struct Produced {
    config: BTreeMap<String, Value>,
    outcome: Outcome,
    /// CSV body for `--format csv` when the command has tabular data of its own.
    table: Option<String>,
    plot: Option<(PathBuf, Vec<(f64, f64)>)>,
}

/// Parse arguments, run, print, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(NumError::Config(m)) => {
            eprintln!("config error: {m}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_FAIL
        }
    }
}

fn as_config(e: NumError) -> NumError {
    match e {
        NumError::Config(m) => NumError::Config(m),
        other => NumError::Config(other.to_string()),
    }
}

fn thresholds(g: &Global) -> Result<Thresholds> {
    let mut th = Thresholds::default();
    for kv in &g.thresholds {
        let (k, v) = kv.split_once('=').ok_or_else(|| NumError::Config(format!("threshold `{kv}` is not NAME=VALUE")))?;
        let v: f64 = v.trim().parse().map_err(|_| NumError::Config(format!("threshold `{kv}` has a bad value")))?;
        th.set(k.trim(), v)?;
    }
    Ok(th)
}

fn execute(cli: &Cli) -> Result<i32> {
    let g = &cli.global;
    if g.precision == Precision::Extended {
        return Err(NumError::Config("only double precision is implemented".into()));
    }
    let th = thresholds(g)?;
    let started = std::time::Instant::now();
    let p = match &cli.command {
        Command::VerifyDelta { q_param } => verify_delta(&th, *q_param)?,
        Command::VerifyVoronoi { form, q, n, coeff_file } => verify_voronoi(&th, *form, *q, *n, coeff_file.as_deref())?,
        Command::VerifyIntegrals { preset } => verify_integrals(&th, g.seed, preset)?,
        Command::VerifyGamma => Produced { config: BTreeMap::new(), outcome: suites::gamma_machinery(&th), table: None, plot: None },
        Command::EvalL { pair, t, coeff_file, plot_data } => eval_l(&th, pair, t, coeff_file.as_deref(), plot_data.clone())?,
    };
    eprintln!("{} finished in {:.2}s", cli.command.name(), started.elapsed().as_secs_f64());

    let mut config = p.config;
    config.insert("precision".into(), json!("double"));
    config.insert("thresholds".into(), serde_json::to_value(th.as_map()).unwrap_or(Value::Null));
    let report = Report::new(cli.command.name(), g.seed, config, p.outcome);
    for f in &report.failures {
        eprintln!("FAIL {f}");
    }

    if let Some((path, pts)) = &p.plot {
        let mut s = String::from("t,abs_L\n");
        for (x, y) in pts {
            s.push_str(&format!("{x:e},{y:e}\n"));
        }
        fs::write(path, s).map_err(|e| NumError::Io(format!("{}: {e}", path.display())))?;
    }
    let body = match g.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => match p.table {
            Some(t) => {
                // the checks still need a home when stdout carries the table
                eprintln!("{}", report.to_json());
                t
            }
            None => checks_csv(&report.checks)?,
        },
    };
    emit(g.output.as_deref(), &body)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAIL })
}

fn emit(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| NumError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| NumError::Io(e.to_string()))
        }
    }
}

fn checks_csv(checks: &[Check]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "value", "relation", "threshold", "pass"]).map_err(|e| NumError::Io(e.to_string()))?;
    for c in checks {
        let rel = serde_json::to_value(c.relation).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
        w.write_record([c.name.clone(), format!("{:e}", c.value), rel, format!("{:e}", c.threshold), c.pass.to_string()])
            .map_err(|e| NumError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| NumError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| NumError::Io(e.to_string()))
}

fn verify_delta(th: &Thresholds, q_param: f64) -> Result<Produced> {
    if !(4.0..=64.0).contains(&q_param) {
        return Err(NumError::Config(format!("--Q must lie in [4, 64], got {q_param}")));
    }
    let mut out = suites::delta_exactness(th, q_param);
    out.merge(suites::delta_g_properties(th, q_param));
    let config = BTreeMap::from([("Q".to_string(), json!(q_param))]);
    Ok(Produced { config, outcome: out, table: None, plot: None })
}

fn verify_voronoi(th: &Thresholds, form: Option<FormArg>, q: Option<u64>, n: Option<f64>, coeff: Option<&Path>) -> Result<Produced> {
    let mut config = BTreeMap::new();
    if let Some(q) = q {
        if q == 0 {
            return Err(NumError::Config("--q must be positive".into()));
        }
    }
    if let Some(n) = n {
        if !(n.is_finite() && n >= 1.0) {
            return Err(NumError::Config(format!("--N must be at least 1, got {n}")));
        }
    }
    if form == Some(FormArg::Maass) {
        let path = coeff.ok_or_else(|| NumError::Config("--form maass needs --coeff-file".into()))?;
        let data = load_maass_coefficients(path).map_err(as_config)?;
        config.insert("form".into(), json!("maass"));
        config.insert("coeff_sha256".into(), json!(data.provenance));
        return Ok(Produced { config, outcome: maass_transforms(&data, n.unwrap_or(1.0)), table: None, plot: None });
    }
    if coeff.is_some() {
        return Err(NumError::Config("--coeff-file only applies to --form maass".into()));
    }
    let (d, w) = suites::load_forms(TABLE)?;
    let forms: Vec<&HolomorphicForm> = match form {
        Some(FormArg::Delta) => vec![&d],
        Some(FormArg::E4delta) => vec![&w],
        _ => vec![&d, &w],
    };
    let single = q.is_some() || n.is_some();
    let points = if single { vec![(q.unwrap_or(1), n.unwrap_or(100.0))] } else { suites::voronoi_default_grid() };
    let mut out = suites::voronoi_identity(th, &forms, &points);
    if !single {
        out.merge(suites::voronoi_expansion(th));
    }
    config.insert("forms".into(), json!(forms.iter().map(|f| f.id.clone()).collect::<Vec<_>>()));
    config.insert("points".into(), json!(points));
    config.insert("a".into(), json!(1));
    Ok(Produced { config, outcome: out, table: None, plot: None })
}

/// Dual transforms for a Maass form; the identity itself needs genuine
/// automorphic data and a dual sum we do not tabulate, so it is skipped.
fn maass_transforms(data: &crate::forms::MaassFormData, n: f64) -> Outcome {
    let mut out = Outcome::default();
    let rows: Vec<Value> = match VoronoiTestFunction::canonical(n) {
        Ok(tf) => [10.0, 100.0, 1000.0]
            .iter()
            .filter_map(|&x| match phi_maass(x, &tf, data.mu, data.epsilon) {
                Ok((p, m)) => {
                    let finite = p.re.is_finite() && p.im.is_finite() && m.re.is_finite() && m.im.is_finite();
                    out.push(Check::equal(format!("maass.phi_finite[x={x}]"), if finite { 1.0 } else { 0.0 }, 1.0));
                    Some(json!({ "x": x, "plus": [p.re, p.im], "minus": [m.re, m.im] }))
                }
                Err(e) => {
                    out.errors.push(format!("phi_maass x={x}: {e}"));
                    None
                }
            })
            .collect(),
        Err(e) => {
            out.errors.push(format!("test function: {e}"));
            Vec::new()
        }
    };
    out.put("transforms", rows);
    let reason = if data.is_synthetic() { "synthetic coefficients are not automorphic" } else { "Maass dual sum not implemented" };
    out.put("identity", json!({ "status": "SKIPPED", "reason": reason }));
    out
}

fn verify_integrals(th: &Thresholds, seed: u64, preset_name: &str) -> Result<Produced> {
    preset(preset_name).map_err(as_config)?;
    let mut out = suites::quadrature_lemmas(th, seed);
    out.merge(suites::psi_trichotomy(th));
    out.merge(suites::k_asymptotic(th));
    out.merge(suites::h_suite(th, preset_name));
    let config = BTreeMap::from([("preset".to_string(), json!(preset_name))]);
    Ok(Produced { config, outcome: out, table: None, plot: None })
}

fn eval_l(th: &Thresholds, pair: &str, t: &str, coeff: Option<&Path>, plot: Option<PathBuf>) -> Result<Produced> {
    let grid = parse_t_grid(t).map_err(as_config)?;
    let (d, w) = suites::load_forms(TABLE)?;
    let maass;
    let (f, g): (&dyn Eigenform, &dyn Eigenform) = match pair {
        "delta-e4delta" => (&d, &w),
        "maass-delta" => {
            let path = coeff.ok_or_else(|| NumError::Config("pair maass-delta needs --coeff-file".into()))?;
            maass = load_maass_coefficients(path).map_err(as_config)?;
            (&maass, &d)
        }
        other => return Err(NumError::Config(format!("unknown pair `{other}`"))),
    };
    let budget = f.table_len().min(g.table_len()).min(TABLE);
    let ctx = LSeriesContext::new(f, g, budget)?;
    let automorphic = f.is_automorphic() && g.is_automorphic();
    let mut out = if automorphic { suites::l_values(th, &ctx, true) } else { Outcome::default() };
    if !automorphic {
        out.put("residuals", json!({ "status": "SKIPPED", "reason": "synthetic coefficients have no functional equation" }));
    }
    let scan = exponent_scan(&ctx, &grid)?;
    let mut csv = Vec::new();
    scan.write_csv(&mut csv)?;
    let plot = plot.map(|p| (p, scan.plot_data()));
    out.put("scan", &scan);
    let config = BTreeMap::from([
        ("pair".to_string(), json!(pair)),
        ("t".to_string(), json!(grid)),
        ("coeff_budget".to_string(), json!(budget)),
    ]);
    Ok(Produced { config, outcome: out, table: Some(String::from_utf8_lossy(&csv).into_owned()), plot })
}
