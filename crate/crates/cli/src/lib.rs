//! Command-line front end: brackets of parsed sections and seeded
//! verification suites with text or JSON reports.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use courant_core::courant::{
    axiom_suite, identity_suite, partial_image_suite, stability_suite, structure_suite, CheckReport, CourantStructure,
    SuiteConfig,
};
use courant_core::extension::{foliation_checks, oracle_bigtangent_compare, verify_extension, ExtAlgebroid};
use courant_core::models::{big_tangent, q_algebroid, transverse_e};
use courant_core::parse::parse_poly;
use courant_core::{Chart, Error, PolyBounds, Rational, Splitting};

#[derive(Parser, Debug, Clone)]
#[command(
    name = "courant",
    version,
    about = "Exact Courant algebroid brackets and axiom checks on a foliated chart"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print the bracket of `--lhs` and `--rhs`.
    Bracket,
    /// Run a seeded verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Axioms,
    Identities,
    Theorem,
    Oracle,
    Foliation,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Model {
    #[value(name = "bigtangent")]
    #[serde(rename = "bigtangent")]
    BigTangent,
    #[value(name = "Q")]
    #[serde(rename = "Q")]
    Q,
    #[value(name = "E")]
    #[serde(rename = "E")]
    E,
    #[value(name = "A0")]
    #[serde(rename = "A0")]
    A0,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
}

#[derive(clap::Args, Debug, Clone)]
pub struct Options {
    #[arg(long, global = true, value_enum, default_value = "A0")]
    pub model: Model,
    /// Transverse dimension (default 2, or the splitting file's value).
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Leaf dimension (default 2, or the splitting file's value).
    #[arg(long, global = true)]
    pub q: Option<usize>,
    /// `flat`, `random:DEG:SEED` or `file:PATH`.
    #[arg(long, global = true, default_value = "flat")]
    pub splitting: String,
    #[arg(long, global = true, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 2)]
    pub max_degree: u32,
    #[arg(long, global = true, default_value_t = 3)]
    pub max_terms: usize,
    #[arg(long, global = true, default_value_t = 3)]
    pub coeff_bound: i64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, global = true)]
    pub lhs: Option<String>,
    #[arg(long, global = true)]
    pub rhs: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplittingSource {
    Flat,
    Random { degree: u32, seed: u64 },
    File(PathBuf),
}

impl std::str::FromStr for SplittingSource {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "flat" {
            return Ok(SplittingSource::Flat);
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let (deg, seed) = rest
                .split_once(':')
                .ok_or_else(|| format!("expected random:DEG:SEED, got {s:?}"))?;
            return Ok(SplittingSource::Random {
                degree: deg.parse().map_err(|e| format!("bad splitting degree {deg:?}: {e}"))?,
                seed: seed.parse().map_err(|e| format!("bad splitting seed {seed:?}: {e}"))?,
            });
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(SplittingSource::File(path.into()));
        }
        Err(format!(
            "unknown splitting {s:?}; use flat, random:DEG:SEED or file:PATH"
        ))
    }
}

/// On-disk splitting: `t[a][i]` is the coefficient of `∂y_a` in `e_i`.
#[derive(Deserialize, Serialize, Debug, Clone, PartialEq, Eq)]
pub struct SplittingFile {
    pub p: usize,
    pub q: usize,
    pub t: Vec<Vec<String>>,
}

/// Echo of the effective configuration, first field of every JSON report.
#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: String,
    pub model: Model,
    pub p: usize,
    pub q: usize,
    pub splitting: String,
    pub trials: usize,
    pub seed: u64,
    pub max_degree: u32,
    pub max_terms: usize,
    pub coeff_bound: i64,
    pub format: Format,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub id: usize,
    #[serde(flatten)]
    pub report: CheckReport,
}

#[derive(Serialize, Debug, Clone, Copy, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub config: RunConfig,
    pub cases: Vec<Case>,
    pub summary: Summary,
}

impl Report {
    pub fn new(config: RunConfig, reports: Vec<CheckReport>) -> Self {
        let cases: Vec<Case> = reports
            .into_iter()
            .enumerate()
            .map(|(id, report)| Case { id, report })
            .collect();
        let passed = cases.iter().filter(|c| c.report.pass).count();
        let summary = Summary {
            total: cases.len(),
            passed,
            failed: cases.len() - passed,
        };
        Report { config, cases, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.summary.failed == 0
    }

    /// Per-check tallies, then every failing case in full.
    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "{} model={} p={} q={} splitting={} trials={} seed={}\n",
            c.command,
            serde_json::to_value(c.model)
                .map(|v| v.as_str().unwrap_or_default().to_string())
                .unwrap_or_default(),
            c.p,
            c.q,
            c.splitting,
            c.trials,
            c.seed
        );
        let mut tally: Vec<(String, String, usize, usize)> = Vec::new();
        for case in &self.cases {
            let r = &case.report;
            match tally.iter_mut().find(|(m, k, _, _)| *m == r.model && *k == r.check) {
                Some(t) => {
                    t.2 += 1;
                    t.3 += usize::from(r.pass);
                }
                None => tally.push((r.model.clone(), r.check.clone(), 1, usize::from(r.pass))),
            }
        }
        for (model, check, total, passed) in &tally {
            let mark = if passed == total { "ok  " } else { "FAIL" };
            let _ = writeln!(out, "{mark} {model:<4} {check:<40} {passed}/{total}");
        }
        for case in self.cases.iter().filter(|c| !c.report.pass) {
            let r = &case.report;
            let _ = writeln!(out, "case {} {} {} failed", case.id, r.model, r.check);
            for input in &r.inputs {
                let _ = writeln!(out, "  input    {input}");
            }
            if let Some(res) = &r.residual {
                let _ = writeln!(out, "  residual {res}");
            }
        }
        let s = self.summary;
        let _ = writeln!(out, "total {} passed {} failed {}", s.total, s.passed, s.failed);
        out
    }
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct BracketReport {
    pub config: RunConfig,
    pub lhs: String,
    pub rhs: String,
    pub result: String,
    pub rendered: String,
}

/// A failed run: exit status 2 for usage and input errors, 1 otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }

    fn input(e: Error) -> Self {
        Self::usage(e.to_string())
    }

    fn engine(e: Error) -> Self {
        CliError {
            code: 1,
            message: e.to_string(),
        }
    }
}

/// Rendered output and exit status of a successful run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

fn load_splitting(opts: &Options, bounds: &PolyBounds) -> Result<Splitting, CliError> {
    let source: SplittingSource = opts.splitting.parse().map_err(CliError::usage)?;
    let chart_of =
        |p: Option<usize>, q: Option<usize>| Chart::new(p.unwrap_or(2), q.unwrap_or(2)).map_err(CliError::input);
    match source {
        SplittingSource::Flat => Ok(Splitting::flat(chart_of(opts.p, opts.q)?)),
        SplittingSource::Random { degree, seed } => {
            let chart = chart_of(opts.p, opts.q)?;
            Ok(Splitting::random_seeded(chart, &bounds.with_degree(degree), seed))
        }
        SplittingSource::File(path) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
            let file: SplittingFile = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("bad splitting file {}: {e}", path.display())))?;
            for (flag, given, stored) in [("--p", opts.p, file.p), ("--q", opts.q, file.q)] {
                if given.is_some_and(|g| g != stored) {
                    return Err(CliError::usage(format!(
                        "{flag} disagrees with the splitting file ({stored})"
                    )));
                }
            }
            let chart = chart_of(Some(file.p), Some(file.q))?;
            let t = file
                .t
                .iter()
                .map(|row| row.iter().map(|s| parse_poly(s, chart)).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(CliError::input)?;
            Splitting::new(chart, t).map_err(CliError::input)
        }
    }
}

fn build_model(model: Model, splitting: Splitting) -> Result<Box<dyn CourantStructure<Rational>>, CliError> {
    Ok(match model {
        Model::BigTangent => Box::new(big_tangent::<Rational>(splitting.chart())),
        Model::Q => Box::new(q_algebroid(splitting)),
        Model::E => Box::new(transverse_e(splitting)),
        Model::A0 => Box::new(ExtAlgebroid::new(splitting).map_err(CliError::engine)?),
    })
}

fn run_suite(
    suite: Suite,
    opts: &Options,
    splitting: Splitting,
    cfg: &SuiteConfig,
) -> Result<Vec<CheckReport>, CliError> {
    let engine = CliError::engine;
    match suite {
        Suite::Axioms => {
            let m = build_model(opts.model, splitting)?;
            axiom_suite(m.as_ref(), cfg).map_err(engine)
        }
        Suite::Identities => {
            let m = build_model(opts.model, splitting)?;
            let mut out = identity_suite(m.as_ref(), cfg).map_err(engine)?;
            for r in stability_suite(m.as_ref(), cfg).map_err(engine)? {
                out.extend(r.into_reports());
            }
            out.extend(partial_image_suite(m.as_ref(), cfg).map_err(engine)?);
            out.extend(structure_suite(m.as_ref(), cfg).map_err(engine)?);
            Ok(out)
        }
        Suite::Theorem | Suite::Oracle | Suite::Foliation => {
            if opts.model != Model::A0 {
                return Err(CliError::usage(
                    format!("verify {suite:?} runs on the A0 model only").to_lowercase(),
                ));
            }
            let a = ExtAlgebroid::new(splitting).map_err(engine)?;
            match suite {
                Suite::Theorem => {
                    let mut out = verify_extension(&a, cfg).map_err(engine)?;
                    out.extend(foliation_checks(&a, cfg).map_err(engine)?);
                    out.extend(oracle_bigtangent_compare(&a, cfg).map_err(engine)?);
                    Ok(out)
                }
                Suite::Oracle => oracle_bigtangent_compare(&a, cfg).map_err(engine),
                _ => foliation_checks(&a, cfg).map_err(engine),
            }
        }
    }
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let opts = &cli.opts;
    if opts.trials == 0 {
        return Err(CliError::usage("--trials must be at least 1"));
    }
    let bounds = PolyBounds::new(opts.max_degree, opts.max_terms, opts.coeff_bound).map_err(CliError::input)?;
    let splitting = load_splitting(opts, &bounds)?;
    let chart = splitting.chart();
    let command = match &cli.command {
        Command::Bracket => "bracket".to_string(),
        Command::Verify { suite } => format!(
            "verify {}",
            serde_json::to_value(suite)
                .unwrap_or_default()
                .as_str()
                .unwrap_or_default()
        ),
    };
    let config = RunConfig {
        command,
        model: opts.model,
        p: chart.p(),
        q: chart.q(),
        splitting: opts.splitting.clone(),
        trials: opts.trials,
        seed: opts.seed,
        max_degree: opts.max_degree,
        max_terms: opts.max_terms,
        coeff_bound: opts.coeff_bound,
        format: opts.format,
    };
    match &cli.command {
        Command::Bracket => {
            let (Some(lhs), Some(rhs)) = (&opts.lhs, &opts.rhs) else {
                return Err(CliError::usage("bracket needs --lhs and --rhs"));
            };
            let m = build_model(opts.model, splitting)?;
            let a = m.parse_section(lhs).map_err(CliError::input)?;
            let b = m.parse_section(rhs).map_err(CliError::input)?;
            let br = m.bracket(&a, &b).map_err(CliError::engine)?;
            let report = BracketReport {
                config,
                lhs: m.format_section(&a),
                rhs: m.format_section(&b),
                result: m.format_section(&br),
                rendered: m.render_section(&br),
            };
            let stdout = match opts.format {
                Format::Text => format!("{}\n", report.rendered),
                Format::Json => json(&report)?,
            };
            Ok(Output { stdout, code: 0 })
        }
        Command::Verify { suite } => {
            let cfg = SuiteConfig {
                trials: opts.trials,
                seed: opts.seed,
                bounds,
            };
            let report = Report::new(config, run_suite(*suite, opts, splitting, &cfg)?);
            let code = if report.all_pass() { 0 } else { 1 };
            let stdout = match opts.format {
                Format::Text => report.to_text(),
                Format::Json => json(&report)?,
            };
            Ok(Output { stdout, code })
        }
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| CliError {
            code: 1,
            message: format!("cannot serialize report: {e}"),
        })
}
