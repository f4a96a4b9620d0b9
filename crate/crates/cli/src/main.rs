//! `mockperiods`: L-values, period polynomials and verification reports.
//!
//! Exit status: 0 on success, 1 when a verified identity fails (the report is
//! still written), 2 for bad input, 3 when a numerical procedure does not
//! converge. Errors are printed as JSON on stdout.

mod config;
mod error;
mod forms;
mod suites;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mockperiods::eichler::{period_integral, period_polynomial, PeriodPolynomial, PolynomialC};
use mockperiods::kernel::{parse_float, Complex, PrecisionContext};
use mockperiods::lfun::{dirichlet_terms_needed, l_completed, l_dirichlet, LMethod, LValue};
use mockperiods::mockcore::{noncritical_lvalue, MAX_DERIVATIVE};
use mockperiods::report::relative_diff;
use mockperiods::RelationReport;
use serde::Serialize;
use serde_json::{json, Value};

use config::{PointSet, Suite, SuiteConfig};
use error::CliError;
use forms::FormId;
use suites::Runner;

/// Largest q-expansion the Dirichlet method will request.
const MAX_DIRICHLET_TERMS: usize = 200_000;

#[derive(Parser)]
#[command(name = "mockperiods", version, about = "Period polynomials, non-critical L-values and mock period functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Dirichlet,
    Completed,
    Mockperiod,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate L_f(s).
    Lvalue {
        #[arg(long)]
        form: String,
        /// `re` or `re,im`.
        #[arg(long)]
        s: String,
        #[arg(long, value_enum, default_value = "completed")]
        method: MethodArg,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        /// q-expansion length; chosen from the tail bound when omitted.
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// JSON suite configuration; flags below override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        digits: Option<u32>,
        /// Repeatable; replaces the configured forms.
        #[arg(long)]
        form: Vec<String>,
        /// Named grid: generic3, generic5 or generic10.
        #[arg(long)]
        points: Option<String>,
        #[arg(long)]
        terms: Option<usize>,
        /// Report path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Residual table `identity,re,im,residual`.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Print the period polynomial r_f and the critical values behind it.
    Periodpoly {
        #[arg(long)]
        form: String,
        /// Compare against the defining integral at three points.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 50)]
        digits: u32,
        #[arg(long, default_value_t = 100)]
        terms: usize,
    },
}

#[derive(Serialize)]
struct Envelope<'a> {
    tool_version: &'static str,
    config: &'a SuiteConfig,
    reports: &'a [RelationReport],
}

fn parse_s(s: &str, prec: u32) -> Result<Complex, CliError> {
    let part = |t: &str| parse_float(prec, t.trim()).ok_or_else(|| CliError::Usage(format!("bad number `{t}`")));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex::new(part(re)?, part(im)?)),
        None => Ok(Complex::from_real(part(s)?)),
    }
}

fn load_cusp(id: &FormId, terms: usize) -> Result<mockperiods::qforms::QSeries, CliError> {
    id.load(terms)?
        .ok_or_else(|| CliError::Usage(format!("the cusp space of `{id}` is zero")))
}

fn cmd_lvalue(form: &str, s: &str, method: MethodArg, digits: u32, terms: Option<usize>) -> Result<Value, CliError> {
    let ctx = PrecisionContext::new(digits)?;
    let id: FormId = form.parse()?;
    let s = parse_s(s, ctx.prec())?;
    let value: LValue = match method {
        MethodArg::Completed => l_completed(&load_cusp(&id, terms.unwrap_or(100))?, &s, &ctx)?,
        MethodArg::Dirichlet => {
            let f = match terms {
                Some(n) => load_cusp(&id, n)?,
                None => {
                    let probe = load_cusp(&id, 16)?;
                    // Outside the region of convergence the probe itself reports the error.
                    match dirichlet_terms_needed(probe.tail(), s.re.to_f64(), ctx.tol_tight) {
                        Some(n) if n > 16 => load_cusp(&id, n.min(MAX_DIRICHLET_TERMS))?,
                        _ => probe,
                    }
                }
            };
            l_dirichlet(&f, &s, &ctx)?
        }
        MethodArg::Mockperiod => {
            let f = load_cusp(&id, terms.unwrap_or(100))?;
            let k = f.weight() as f64;
            let re = s.re.to_f64();
            let m = re - k;
            if !s.im.is_zero() || !s.re.is_integer() || m < 0.0 || m > MAX_DERIVATIVE as f64 {
                return Err(CliError::Usage(format!(
                    "the mock period method needs s = k + m with integer 0 <= m <= {MAX_DERIVATIVE}"
                )));
            }
            noncritical_lvalue(&f, m as u32, &ctx)?
        }
    };
    let mut v = serde_json::to_value(&value).map_err(|e| CliError::Usage(e.to_string()))?;
    v["form"] = json!(id.to_string());
    Ok(v)
}

fn cmd_periodpoly(form: &str, check: bool, digits: u32, terms: usize) -> Result<Value, CliError> {
    let ctx = PrecisionContext::new(digits)?;
    let id: FormId = form.parse()?;
    let out_digits = digits as usize;
    let Some(f) = id.load(terms)? else {
        // S_k = 0: the zero polynomial, with vanishing critical values.
        let FormId::Cusp(k) = id else { unreachable!("only cusp spaces can be empty") };
        let p = ctx.prec();
        let critical_values = (1..k as i64)
            .map(|j| LValue { s: Complex::from_int(p, j), value: Complex::zero(p), method: LMethod::Completed, est_error: 0.0 })
            .collect();
        let pp = PeriodPolynomial { weight: k, poly: PolynomialC::zero(k as usize - 2, p), critical_values };
        let mut v = pp.to_json(out_digits);
        v["form"] = json!(id.to_string());
        return Ok(v);
    };
    let pp = period_polynomial(&f, &ctx)?;
    let mut v = pp.to_json(out_digits);
    v["form"] = json!(id.to_string());
    if check {
        let p = ctx.prec();
        let pts = [Complex::from_f64(p, 0.3, 1.1), Complex::from_f64(p, -0.2, 0.7), Complex::from_f64(p, 0.0, 1.0)];
        let mut worst = 0f64;
        for z in &pts {
            let q = period_integral(&f, z, &ctx)?;
            worst = worst.max(relative_diff(&pp.poly.eval(z), &q));
        }
        v["check"] = json!({ "points": pts.len(), "max_deviation": format!("{worst:.6e}") });
    }
    Ok(v)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    suite: Suite,
    config: Option<PathBuf>,
    digits: Option<u32>,
    form: Vec<String>,
    points: Option<String>,
    terms: Option<usize>,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<bool, CliError> {
    let mut cfg = match config {
        Some(path) => SuiteConfig::parse(&std::fs::read_to_string(path)?)?,
        None => SuiteConfig::default(),
    };
    if let Some(d) = digits {
        cfg.digits = d;
    }
    if !form.is_empty() {
        cfg.forms = form;
    }
    if let Some(name) = points {
        cfg.points = PointSet::Named(name);
    }
    if let Some(n) = terms {
        cfg.terms = n;
    }
    cfg.suites = suite.expand();
    let runner = Runner::new(&cfg)?;
    let mut reports = Vec::new();
    for s in &cfg.suites {
        reports.extend(runner.run(*s)?);
    }
    let envelope = Envelope { tool_version: env!("CARGO_PKG_VERSION"), config: &cfg, reports: &reports };
    let text = serde_json::to_string_pretty(&envelope).map_err(|e| CliError::Usage(e.to_string()))? + "\n";
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    if let Some(path) = csv {
        let mut table = String::from("identity,re,im,residual\n");
        for r in &reports {
            for row in r.csv_rows() {
                table.push_str(&row);
                table.push('\n');
            }
        }
        std::fs::write(path, table)?;
    }
    Ok(reports.iter().all(|r| r.pass))
}

fn print_json(v: &Value) {
    let text = serde_json::to_string_pretty(v).unwrap_or_else(|_| v.to_string());
    // A closed pipe downstream is not an error worth a panic.
    let _ = writeln!(std::io::stdout(), "{text}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lvalue { form, s, method, digits, terms } => cmd_lvalue(&form, &s, method, digits, terms).map(|v| {
            print_json(&v);
            true
        }),
        Command::Periodpoly { form, check, digits, terms } => cmd_periodpoly(&form, check, digits, terms).map(|v| {
            print_json(&v);
            true
        }),
        Command::Verify { suite, config, digits, form, points, terms, out, csv } => {
            cmd_verify(suite, config, digits, form, points, terms, out, csv)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            print_json(&e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}
