//! `lensreeb` command line.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a check
//! returns a negative verdict (CONTRADICTION, INFEASIBLE or a violated
//! identity).

pub mod render;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use lensreeb::certify::{
    check_final_inequality, matching_feasibility, single_orbit_contradiction, CertifyError,
    MatchingVerdict, OrbitBudget, Verdict,
};
use lensreeb::chen_ruan::{cr_table, existence_report};
use lensreeb::ellipsoid::{EllipsoidError, EllipsoidModel};
use lensreeb::lens::{HomotopyClass, LensError, LensSpace};
use lensreeb::toric::{model_for_space, ToricError, ToricModel};
use lensreeb::Rational;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lens(#[from] LensError),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Ellipsoid(#[from] EllipsoidError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid budget {path}: {message}")]
    Budget { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Lens(_) => "lens",
            CliError::Toric(ToricError::IdentityViolation { .. }) => "invariant_violation",
            CliError::Toric(_) => "toric",
            CliError::Ellipsoid(_) => "ellipsoid",
            CliError::Certify(_) => "certify",
            CliError::Config(_) => "config",
            CliError::Budget { .. } => "budget",
            CliError::Io { .. } => "io",
        }
    }

    /// Variant name of the wrapped domain error, e.g. `NonCoprimeWeight`.
    fn variant(&self) -> Option<String> {
        let debug = match self {
            CliError::Lens(e) => format!("{e:?}"),
            CliError::Toric(e) => format!("{e:?}"),
            CliError::Ellipsoid(e) => format!("{e:?}"),
            CliError::Certify(e) => format!("{e:?}"),
            _ => return None,
        };
        Some(debug.chars().take_while(|c| c.is_alphanumeric()).collect())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Toric(ToricError::IdentityViolation { .. }) => EXIT_NEGATIVE,
            _ => EXIT_INPUT,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut err = json!({"kind": self.kind(), "message": self.to_string()});
        if let Some(v) = self.variant() {
            err["type"] = json!(v);
        }
        json!({ "error": err })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Parser)]
#[command(name = "lensreeb", version, about = "Index and multiplicity computations for Reeb flows on lens spaces")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SpaceArgs {
    /// Order of the group.
    #[arg(long)]
    p: u64,
    /// Comma-separated weights l_0,...,l_n.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    weights: Vec<i64>,
}

impl SpaceArgs {
    fn space(&self) -> Result<LensSpace, CliError> {
        Ok(LensSpace::new(self.p, self.weights.clone())?)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chen-Ruan degree table and existence verdicts.
    Cr(SpaceArgs),
    /// Toric model with its structural identities.
    Toric(SpaceArgs),
    /// Conley-Zehnder indices of the iterates in one class.
    Cz {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        class: u64,
        #[arg(long = "max-iter")]
        max_iter: u64,
    },
    /// Equivariant cohomology degrees of one class up to a cap.
    Hc {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        class: u64,
        #[arg(long)]
        cap: Rational,
    },
    /// Quotient orbits of an irrational-type ellipsoid.
    Ellipsoid {
        #[command(flatten)]
        space: SpaceArgs,
        /// Comma-separated axes, e.g. 1,13/8,29/11.
        #[arg(long, value_delimiter = ',', required = true)]
        axes: Vec<Rational>,
        #[arg(long)]
        class: u64,
        /// Action cap.
        #[arg(long)]
        cap: Rational,
        /// Iterates checked for dynamical convexity.
        #[arg(long = "n-max", default_value_t = 1000)]
        n_max: u64,
    },
    /// Multiplicity certificates for an orbit budget.
    Certify {
        #[command(subcommand)]
        check: CertifyCommand,
    },
    /// Invariant suites over a parameter grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long = "fail-fast")]
        fail_fast: bool,
    },
}

#[derive(Debug, Subcommand)]
enum CertifyCommand {
    /// p/2 <= sum 1/Delta over the budget.
    Ineq {
        #[arg(long)]
        budget: PathBuf,
    },
    /// Single-orbit test Delta > 2/p, from a one-orbit budget or --p/--delta.
    Single {
        #[arg(long, conflicts_with_all = ["p", "delta"])]
        budget: Option<PathBuf>,
        #[arg(long, requires = "delta")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        delta: Option<Rational>,
    },
    /// Finite carrier matching up to a horizon.
    Matching {
        #[arg(long)]
        budget: PathBuf,
        /// Start of the carrier sequence; derived from --weights when omitted.
        #[arg(long)]
        k0: Option<Rational>,
        /// Weights of the lens space (with the budget's p), used for k0 and n.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        weights: Option<Vec<i64>>,
        #[arg(long, default_value_t = 200)]
        horizon: u64,
        #[arg(long)]
        n: Option<usize>,
    },
}

/// A report and whether it carries a negative verdict.
struct Report {
    value: Value,
    negative: bool,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, negative: false }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn class_of(space: &LensSpace, a: u64) -> Result<HomotopyClass, CliError> {
    Ok(space.class(a)?)
}

fn read_budget(path: &Path) -> Result<OrbitBudget, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Budget {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn cmd_cr(args: &SpaceArgs) -> Result<Report, CliError> {
    let space = args.space()?;
    let existence = existence_report(&space);
    Ok(Report::ok(json!({
        "space": space,
        "rows": cr_table(&space),
        "max_degree": existence.max_degree,
        "vanishing_from": existence.vanishing_from,
        "assumptions": existence.assumptions,
        "verdicts": existence.verdicts,
    })))
}

fn cmd_toric(args: &SpaceArgs) -> Result<Report, CliError> {
    let space = args.space()?;
    let (normalized, factor) = space.normalize();
    let model = ToricModel::build(&normalized)?;
    let det = model.verify_determinant()?;
    model.verify_basis_identity()?;
    let kernel = model.verify_kernel_generator()?;
    Ok(Report::ok(json!({
        "space": space,
        "normalized": normalized,
        "factor": factor,
        "model": model,
        "determinant": det.to_string(),
        "basis_identity": "ok",
        "invariants": "ok",
        "kernel": kernel,
        "mean_index": model.mean_index(),
    })))
}

fn cmd_cz(args: &SpaceArgs, class: u64, max_iter: u64) -> Result<Report, CliError> {
    let space = args.space()?;
    let a = class_of(&space, class)?;
    let (model, label) = model_for_space(&space, a)?;
    let spectrum = model.cz_spectrum(label, max_iter);
    Ok(Report::ok(json!({
        "space": space,
        "class": a,
        "normalized_class": label,
        "mean_index": model.mean_index(),
        "rows": spectrum.rows,
    })))
}

fn cmd_hc(args: &SpaceArgs, class: u64, cap: &Rational) -> Result<Report, CliError> {
    let space = args.space()?;
    let a = class_of(&space, class)?;
    let (model, label) = model_for_space(&space, a)?;
    let hc = model.hc_table(label, cap);
    // rows are reported in the caller's labels
    let rows = hc.table.relabeled(|_| a);
    Ok(Report::ok(json!({
        "space": space,
        "class": a,
        "normalized_class": label,
        "k_a": hc.k_a,
        "k0": model.k0_threshold(label),
        "rows": rows,
    })))
}

fn cmd_ellipsoid(
    args: &SpaceArgs,
    axes: &[Rational],
    class: u64,
    cap: &Rational,
    n_max: u64,
) -> Result<Report, CliError> {
    let space = args.space()?;
    let a = class_of(&space, class)?;
    let model = EllipsoidModel::new(space.clone(), axes.to_vec())?;
    let means = (0..axes.len())
        .map(|j| model.ellipsoid_mean_index(j))
        .collect::<Result<Vec<_>, _>>()?;
    let inverse_sum: Rational = means.iter().map(Rational::recip).sum();
    let rows = model.symmetric_spectrum(a, cap)?;
    let convexity = model.check_dynamical_convexity(n_max)?;
    let negative = !convexity.passed;
    Ok(Report {
        value: json!({
            "space": space,
            "axes": axes,
            "class": a,
            "mean_indices": means,
            "inverse_mean_sum": inverse_sum,
            "rows": rows,
            "convexity": convexity,
        }),
        negative,
    })
}

fn cmd_certify(check: &CertifyCommand) -> Result<Report, CliError> {
    match check {
        CertifyCommand::Ineq { budget } => {
            let b = read_budget(budget)?;
            let r = check_final_inequality(&b);
            Ok(Report {
                negative: r.verdict == Verdict::Contradiction,
                value: json!({"budget": b, "report": r}),
            })
        }
        CertifyCommand::Single { budget, p, delta } => {
            let (p, delta, source) = match (budget, p, delta) {
                (Some(path), _, _) => {
                    let b = read_budget(path)?;
                    let supplying: Vec<_> = b.supplying().map(|(o, _)| o.clone()).collect();
                    if supplying.len() != 1 {
                        return Err(CliError::Usage(format!(
                            "single-orbit test needs exactly one orbit reaching class {}, budget has {}",
                            b.target,
                            supplying.len()
                        )));
                    }
                    (b.p, supplying[0].mean_index.clone(), Some(supplying[0].label.clone()))
                }
                (None, Some(p), Some(delta)) => (*p, delta.clone(), None),
                _ => return Err(CliError::Usage("give --budget, or both --p and --delta".into())),
            };
            let r = single_orbit_contradiction(p, &delta)?;
            Ok(Report {
                negative: r.verdict == Verdict::Contradiction,
                value: json!({"orbit": source, "report": r}),
            })
        }
        CertifyCommand::Matching {
            budget,
            k0,
            weights,
            horizon,
            n,
        } => {
            let b = read_budget(budget)?;
            let space = weights
                .as_ref()
                .map(|w| LensSpace::new(b.p, w.clone()))
                .transpose()?;
            let k0 = match (k0, &space) {
                (Some(k0), _) => k0.clone(),
                (None, Some(space)) => {
                    let (model, label) = model_for_space(space, class_of(space, b.target)?)?;
                    model.k0_threshold(label)
                }
                (None, None) => return Err(CliError::Usage("give --k0 or --weights".into())),
            };
            let n = match (n, &space) {
                (Some(n), _) => *n,
                (None, Some(space)) => space.n(),
                (None, None) => return Err(CliError::Usage("give --n or --weights".into())),
            };
            let r = matching_feasibility(&b, &k0, *horizon, n)?;
            Ok(Report {
                negative: r.verdict == MatchingVerdict::Infeasible,
                value: json!({"budget": b, "report": r}),
            })
        }
    }
}

fn cmd_sweep(path: &Path, fail_fast: bool, output: &mut Option<PathBuf>) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut config = sweep::SweepConfig::parse(&text)?;
    config.fail_fast |= fail_fast;
    if output.is_none() {
        output.clone_from(&config.output);
    }
    let report = sweep::sweep(&config);
    Ok(Report {
        negative: report.failures > 0,
        value: to_value(&report),
    })
}

fn configure_threads() {
    if let Some(t) = std::env::var("LENSREEB_THREADS").ok().and_then(|t| t.parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
}

fn emit(text: &str, output: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }),
    }
}

fn fail(e: &CliError, err: &mut dyn Write) -> i32 {
    let _ = writeln!(err, "{}", e.to_json());
    e.exit_code()
}

/// Runs the command line `argv` (including the program name) and returns the exit code.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            return fail(&CliError::Usage(e.render().to_string().trim_end().to_string()), err);
        }
    };
    configure_threads();
    let mut output = cli.output.clone();
    let report = match &cli.command {
        Command::Cr(s) => cmd_cr(s),
        Command::Toric(s) => cmd_toric(s),
        Command::Cz { space, class, max_iter } => cmd_cz(space, *class, *max_iter),
        Command::Hc { space, class, cap } => cmd_hc(space, *class, cap),
        Command::Ellipsoid {
            space,
            axes,
            class,
            cap,
            n_max,
        } => cmd_ellipsoid(space, axes, *class, cap, *n_max),
        Command::Certify { check } => cmd_certify(check),
        Command::Sweep { config, fail_fast } => cmd_sweep(config, *fail_fast, &mut output),
    };
    let report = match report {
        Ok(r) => r,
        Err(e) => return fail(&e, err),
    };
    let text = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.value).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Table => render::table(&report.value),
    };
    if let Err(e) = emit(&text, output.as_deref(), out) {
        return fail(&e, err);
    }
    if report.negative {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}

pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}
