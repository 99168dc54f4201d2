use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bloch_volterra::criteria::{self, CriterionParams, ProbeConfig, ProbeMethod, DEFAULT_PROBE_PATH};
use bloch_volterra::grid::{DEFAULT_ANGULAR_BASE, DEFAULT_RADII_PER_OCTAVE, DEFAULT_R_CAP};
use bloch_volterra::ode::{self, OdeProblem, DEFAULT_MAX_ITER, DEFAULT_TOL};
use bloch_volterra::verify::{self, DEFAULT_SEED};
use bloch_volterra::{bloch, AnalyticFn, BlochParams, DiskGrid, Error, FamilyKind, FunctionSpec, OperatorSpec};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

const EXIT_SUITE_FAILED: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_DIVERGED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "bloch-volterra", version)]
#[command(about = "Criteria, probes, norms and ODE solves for Volterra-type operators on Bloch-type spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate the boundedness/compactness criterion of I_g^{n,k}: B^alpha -> B^beta
    #[command(allow_negative_numbers = true)]
    Criterion {
        /// FunctionSpec JSON for the symbol g
        #[arg(long)]
        g: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run a property suite, or `all`
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[command(flatten)]
        common: Common,
    },
    /// Solve f^(n) + g_{n-1} f^(n-1) + ... + g_0 f = F with both solvers
    SolveOde {
        /// OdeProblem JSON
        #[arg(long)]
        problem: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
        /// Working degree cap, overriding the one in the problem file
        #[arg(long)]
        degree_cap: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Tabulate ||op f_w||_beta / ||f_w||_alpha along a path of w
    #[command(allow_negative_numbers = true)]
    Probe {
        /// OperatorSpec JSON
        #[arg(long)]
        op: PathBuf,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = Family::Fw)]
        family: Family,
        /// Index i of f_w^[i] or q_w^[i]
        #[arg(long, default_value_t = 0)]
        i: usize,
        #[arg(long, value_enum, default_value_t = Method::ClosedForm)]
        method: Method,
        /// Comma-separated real w values
        #[arg(long, value_delimiter = ',')]
        w: Vec<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate an alpha-Bloch norm
    #[command(allow_negative_numbers = true)]
    Norm {
        /// FunctionSpec JSON
        #[arg(long, conflicts_with = "series", required_unless_present = "series")]
        g: Option<PathBuf>,
        /// AnalyticFn JSON (truncated series)
        #[arg(long)]
        series: Option<PathBuf>,
        #[arg(long)]
        alpha: f64,
        /// Use the characterisation through the (n+1)-th derivative
        #[arg(long)]
        n: Option<usize>,
        /// Expand --g to a series of this degree before evaluating
        #[arg(long)]
        degree_cap: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// Outermost grid radius
    #[arg(long, default_value_t = DEFAULT_R_CAP)]
    grid_rcap: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Fw,
    Qw,
    Hw,
    Uw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    ClosedForm,
    Taylor,
}

#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Diverged { .. } => EXIT_DIVERGED,
            _ => EXIT_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

type CliResult<T> = Result<T, Failure>;

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn grid(common: &Common) -> CliResult<DiskGrid> {
    Ok(DiskGrid::geometric(common.grid_rcap, DEFAULT_RADII_PER_OCTAVE, DEFAULT_ANGULAR_BASE)?)
}

fn emit(common: &Common, text: String) -> CliResult<()> {
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Failure::input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn csv_table(header: &[&str], rows: Vec<Vec<String>>) -> CliResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Failure::input(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(&r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::input(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Failure::input(e.to_string()))
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Criterion { g, alpha, beta, n, k, common } => {
            let g: FunctionSpec = read_json(&g)?;
            let report = criteria::criterion(&g, CriterionParams::new(alpha, beta, n, k)?, &grid(&common)?)?;
            let text = match common.format {
                Format::Json => json(&report)?,
                Format::Csv => csv_table(
                    &["radius", "sup"],
                    report.boundary_profile.iter().map(|p| vec![p.radius.to_string(), p.sup.to_string()]).collect(),
                )?,
            };
            emit(&common, text)?;
            Ok(0)
        }
        Command::Verify { suite, seed, common } => {
            let reports = if suite == "all" {
                verify::run_all(seed)?.suites
            } else {
                vec![verify::run_suite(&suite, seed)?]
            };
            let passed = reports.iter().all(|r| r.passed);
            let text = match common.format {
                Format::Json if suite == "all" => {
                    json(&verify::VerifyReport { seed, passed, suites: reports.clone() })?
                }
                Format::Json => json(&reports[0])?,
                Format::Csv => csv_table(
                    &["suite", "assertion", "passed", "measured", "limit"],
                    reports
                        .iter()
                        .flat_map(|r| {
                            r.assertions.iter().map(|a| {
                                vec![
                                    r.suite.clone(),
                                    a.name.clone(),
                                    a.passed.to_string(),
                                    a.measured.to_string(),
                                    a.limit.to_string(),
                                ]
                            })
                        })
                        .collect(),
                )?,
            };
            emit(&common, text)?;
            Ok(if passed { 0 } else { EXIT_SUITE_FAILED })
        }
        Command::SolveOde { problem, tol, max_iter, degree_cap, common } => {
            let mut problem: OdeProblem = read_json(&problem)?;
            if let Some(cap) = degree_cap {
                problem = problem.with_working_cap(cap)?;
            }
            let report = ode::solve_report(&problem, max_iter, tol, &grid(&common)?)?;
            let text = match common.format {
                Format::Json => json(&report)?,
                Format::Csv => {
                    let rows = (0..=problem.working_cap)
                        .map(|d| {
                            let r = report.recurrence.coeff(d);
                            let mut row = vec![d.to_string(), r.re.to_string(), r.im.to_string()];
                            match &report.neumann {
                                Some(s) => {
                                    let v = s.solution.coeff(d);
                                    row.extend([v.re.to_string(), v.im.to_string()]);
                                }
                                None => row.extend([String::new(), String::new()]),
                            }
                            row
                        })
                        .collect();
                    csv_table(&["degree", "recurrence_re", "recurrence_im", "neumann_re", "neumann_im"], rows)?
                }
            };
            emit(&common, text)?;
            if let Some(log) = &report.divergence_log {
                eprintln!("Neumann iteration diverged after {} steps", log.len());
                return Ok(EXIT_DIVERGED);
            }
            Ok(0)
        }
        Command::Probe { op, alpha, beta, family, i, method, w, common } => {
            let op: OperatorSpec = read_json(&op)?;
            let family = match family {
                Family::Fw => FamilyKind::Fw { i },
                Family::Qw => FamilyKind::Qw { i },
                Family::Hw => FamilyKind::Hw,
                Family::Uw => FamilyKind::Uw,
            };
            let method = match method {
                Method::ClosedForm => ProbeMethod::ClosedForm,
                Method::Taylor => ProbeMethod::Taylor,
            };
            let path = if w.is_empty() { DEFAULT_PROBE_PATH.to_vec() } else { w };
            let table = criteria::opnorm_probe(
                &op,
                ProbeConfig { alpha, beta, family, method },
                &criteria::real_path(&path),
                &grid(&common)?,
            )?;
            let text = match common.format {
                Format::Json => json(&table)?,
                Format::Csv => table.to_csv(),
            };
            emit(&common, text)?;
            Ok(0)
        }
        Command::Norm { g, series, alpha, n, degree_cap, common } => {
            let grid = grid(&common)?;
            let p = BlochParams::new(alpha)?;
            let f: AnalyticFn;
            let spec: FunctionSpec;
            let target: &dyn bloch::DiskFunction = match (g, series) {
                (Some(path), _) => {
                    spec = read_json(&path)?;
                    match degree_cap {
                        Some(cap) => {
                            f = spec.to_taylor(cap)?;
                            &f
                        }
                        None => &spec,
                    }
                }
                (None, Some(path)) => {
                    f = read_json(&path)?;
                    &f
                }
                (None, None) => return Err(Failure::input("one of --g or --series is required")),
            };
            let est = match n {
                Some(n) => bloch::norm_via_derivatives(target, p, n, &grid)?,
                None => bloch::norm(target, p, &grid)?,
            };
            let text = match common.format {
                Format::Json => json(&est)?,
                Format::Csv => est.profile_csv(),
            };
            emit(&common, text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
