//! The `thetapr` command line. Reports go to stdout as JSON, diagnostics to stderr.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid, degenerate or infeasible input (and
//! usage errors), 3 resource limit.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiments::{
    run_genericity_study, run_minimality_study, run_moebius_invariance_study, run_threshold_study,
    write_summary_csv, ExperimentReport, Regime, SystemFamily,
};
use crate::expwitness::{build_lattice_witnesses, witness_report, write_bundle_csv, GridSpec, DEFAULT_POINTS};
use crate::moebius::{arc_to_arc, ExtPoint, MoebiusMap};
use crate::numkernel::{Cx, Tolerance};
use crate::phases::{cr_orderings, cross_ratio, Arc, PhaseSet};
use crate::prcore::{
    c2_oracle, c2_pr_oracle, decide_theta_pr, has_complement_property, heinosaari_lower_bound,
    is_full_spark, DecisionReport, EngineOptions, VectorSystem,
};

#[derive(Debug, Parser)]
#[command(name = "thetapr", version, about = "Phase retrieval with restricted phase sets")]
pub struct Cli {
    /// Relative rank tolerance.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Maximum number of phase assignments scanned.
    #[arg(long, global = true, default_value_t = 10_000_000)]
    pub budget: u64,
    /// Worker threads; 1 is sequential, 0 uses every core.
    #[arg(long, global = true, default_value_t = 1)]
    pub threads: usize,
    /// Seed for randomized studies.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide Θ-PR for a system.
    Check {
        /// System JSON file.
        #[arg(long)]
        system: PathBuf,
        /// Phase set as inline JSON or a JSON file.
        #[arg(long)]
        phases: String,
    },
    /// Closed forms for G(a, b, c) = {(1,0), (a,1), (b,1), (c,1)}.
    OracleC2 {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Phase set with 2, 3 or 4 elements.
        #[arg(long)]
        phases: Option<String>,
    },
    /// Complement property of a system.
    Complement {
        #[arg(long)]
        system: PathBuf,
    },
    /// Full spark test of a system.
    Spark {
        #[arg(long)]
        system: PathBuf,
    },
    /// Möbius maps of the circle.
    Moebius {
        #[command(subcommand)]
        action: MoebiusCommand,
    },
    /// Lattice witnesses for n-th roots of unity.
    Expwitness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        grid_points: usize,
        /// Defaults to 4 n alpha.
        #[arg(long)]
        grid_half_width: Option<f64>,
        /// Lattice points checked per class.
        #[arg(long, default_value_t = 8)]
        count: usize,
        /// Where to write the sampled functions as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Randomized studies.
    Experiment {
        #[command(subcommand)]
        study: ExperimentCommand,
    },
    /// Lower bound on the number of vectors for phase retrieval in C^d.
    Bound {
        #[arg(long)]
        d: u64,
    },
}

#[derive(Debug, Subcommand)]
pub enum MoebiusCommand {
    /// Apply a map to points.
    Apply {
        /// `{"matrix": [[re,im] x 4]}` inline or as a file.
        #[arg(long)]
        map: String,
        /// Points as `re,im`; repeatable.
        #[arg(long = "z", required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// The circle map carrying one arc onto another.
    ArcMap {
        #[arg(long, allow_hyphen_values = true)]
        from_start: f64,
        #[arg(long)]
        from_length: f64,
        #[arg(long, allow_hyphen_values = true)]
        to_start: f64,
        #[arg(long)]
        to_length: f64,
        /// Read the angles in degrees.
        #[arg(long)]
        degrees: bool,
    },
    /// Cross ratio of four points, or all 24 orderings of a four-element phase set.
    CrossRatio {
        /// Four points as `re,im`.
        #[arg(long = "z", num_args = 4, allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(long, conflicts_with = "points")]
        phases: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub phases: String,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
    /// Also write a CSV summary (one row per size for `minimality`).
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ExperimentCommand {
    Threshold {
        #[command(flatten)]
        common: StudyArgs,
        /// `2d-2` or `2d-1`.
        #[arg(long, allow_hyphen_values = true)]
        regime: String,
    },
    Genericity {
        #[command(flatten)]
        common: StudyArgs,
        #[arg(long)]
        m: usize,
    },
    Minimality {
        #[command(flatten)]
        common: StudyArgs,
    },
    Invariance {
        #[command(flatten)]
        common: StudyArgs,
        #[arg(long)]
        m: usize,
        /// `gaussian` or `structured`.
        #[arg(long, default_value = "structured")]
        family: String,
    },
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Core(Error::ResourceLimit { .. }) => 3,
            CliError::Core(_) => 2,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn read_path(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

/// Inline JSON when the argument starts with `{`, otherwise a file path.
fn inline_or_file(arg: &str) -> CliResult<String> {
    if arg.trim_start().starts_with('{') {
        Ok(arg.to_string())
    } else {
        read_path(Path::new(arg))
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| CliError::Core(Error::InvalidInput(format!("{what}: {e}"))))
}

fn load_system(path: &Path) -> CliResult<VectorSystem> {
    parse_json(&read_path(path)?, "system")
}

fn load_phases(arg: &str) -> CliResult<PhaseSet> {
    parse_json(&inline_or_file(arg)?, "phases")
}

/// `re,im`, `[re, im]` or a bare real number.
pub fn parse_complex(s: &str) -> Result<Cx, Error> {
    let t = s.trim().trim_start_matches('[').trim_end_matches(']');
    let parts: Vec<&str> = t.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::InvalidInput(format!("bad complex number {s:?}")));
    let z = match parts.as_slice() {
        [re] => Cx::new(num(re)?, 0.0),
        [re, im] => Cx::new(num(re)?, num(im)?),
        _ => return Err(Error::InvalidInput(format!("bad complex number {s:?}"))),
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::InvalidInput(format!("complex number {s:?} is not finite")));
    }
    Ok(z)
}

fn ext_json(p: ExtPoint) -> Value {
    match p {
        ExtPoint::Finite(z) => json!([z.re, z.im]),
        ExtPoint::Infinity => json!("infinity"),
    }
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    #[serde(flatten)]
    report: &'a DecisionReport,
    options: &'a EngineOptions,
}

fn study_output(r: &ExperimentReport, csv: &Option<PathBuf>) -> CliResult<Value> {
    if let Some(path) = csv {
        let mut f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        write_summary_csv(std::slice::from_ref(r), &mut f)?;
    }
    Ok(serde_json::to_value(r).expect("reports serialize"))
}

fn execute(cli: &Cli, diag: &mut dyn Write) -> CliResult<Value> {
    let opts = EngineOptions {
        tol: Tolerance::new(cli.tol),
        budget: cli.budget,
        threads: cli.threads,
        ..EngineOptions::default()
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(Error::InvalidInput("--tol must be positive".into()).into());
    }
    match &cli.command {
        Command::Check { system, phases } => {
            let g = load_system(system)?;
            let t = load_phases(phases)?;
            let report = decide_theta_pr(&g, &t, &opts)?;
            for w in &report.warnings {
                let _ = writeln!(diag, "warning: {w}");
            }
            Ok(serde_json::to_value(CheckOutput { report: &report, options: &opts }).expect("serializable"))
        }
        Command::OracleC2 { a, b, c, phases } => {
            let (a, b, c) = (parse_complex(a)?, parse_complex(b)?, parse_complex(c)?);
            let mut out = json!({
                "a": [a.re, a.im],
                "b": [b.re, b.im],
                "c": [c.re, c.im],
                "does_pr_all_phases": c2_pr_oracle(a, b, c),
            });
            if let Some(p) = phases {
                let t = load_phases(p)?;
                out["phase_count"] = json!(t.len());
                out["does_pr"] = json!(c2_oracle(a, b, c, &t)?);
            }
            Ok(out)
        }
        Command::Complement { system } => {
            let g = load_system(system)?;
            let cp = has_complement_property(&g, &opts.tol)?;
            Ok(json!({ "has_complement_property": cp, "fails_sign_retrieval": !cp }))
        }
        Command::Spark { system } => {
            let g = load_system(system)?;
            Ok(json!({ "full_spark": is_full_spark(&g, &opts.tol)? }))
        }
        Command::Moebius { action } => match action {
            MoebiusCommand::Apply { map, points } => {
                let m: MoebiusMap = parse_json(&inline_or_file(map)?, "map")?;
                let images = points
                    .iter()
                    .map(|p| parse_complex(p).map(|z| ext_json(m.apply(z))))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(json!({ "map": m, "circle_preserving": m.is_circle_preserving(), "images": images }))
            }
            MoebiusCommand::ArcMap { from_start, from_length, to_start, to_length, degrees } => {
                let conv = |x: f64| if *degrees { x.to_radians() } else { x };
                let a = Arc::new(conv(*from_start), conv(*from_length))?;
                let b = Arc::new(conv(*to_start), conv(*to_length))?;
                let m = arc_to_arc(&a, &b)?;
                Ok(json!({
                    "map": m,
                    "from": a,
                    "to": b,
                    "start_image": ext_json(m.apply(a.start_point())),
                    "end_image": ext_json(m.apply(a.end_point())),
                }))
            }
            MoebiusCommand::CrossRatio { points, phases } => {
                if let Some(p) = phases {
                    let t = load_phases(p)?;
                    let crs: Vec<[f64; 2]> = cr_orderings(&t)?.iter().map(|z| [z.re, z.im]).collect();
                    return Ok(json!({ "orderings": crs }));
                }
                if points.len() != 4 {
                    return Err(Error::InvalidInput("give four points with --z or a set with --phases".into()).into());
                }
                let z = points.iter().map(|p| parse_complex(p)).collect::<Result<Vec<_>, _>>()?;
                let cr = cross_ratio(z[0], z[1], z[2], z[3])?;
                Ok(json!({ "cross_ratio": [cr.re, cr.im] }))
            }
        },
        Command::Expwitness { n, alpha, grid_points, grid_half_width, count, csv } => {
            let half = grid_half_width.unwrap_or(4.0 * *n as f64 * alpha);
            let grid = GridSpec::new(*grid_points, half)?;
            let report = witness_report(*n, *alpha, &grid, *count)?;
            if report.outside_stated_hypothesis {
                let _ = writeln!(diag, "note: alpha <= n; the construction is feasible but outside the stated hypothesis");
            }
            if let Some(path) = csv {
                let bundle = build_lattice_witnesses(*n, *alpha, &grid)?;
                let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                let mut w = std::io::BufWriter::new(file);
                write_bundle_csv(&bundle, &mut w)?;
                w.flush()?;
            }
            Ok(serde_json::to_value(report).expect("serializable"))
        }
        Command::Experiment { study } => match study {
            ExperimentCommand::Threshold { common, regime } => {
                let t = load_phases(&common.phases)?;
                let regime: Regime = regime.parse()?;
                let r = run_threshold_study(common.d, regime, &t, common.trials, cli.seed, &opts)?;
                study_output(&r, &common.csv)
            }
            ExperimentCommand::Genericity { common, m } => {
                let t = load_phases(&common.phases)?;
                let r = run_genericity_study(common.d, *m, &t, common.trials, cli.seed, &opts)?;
                study_output(&r, &common.csv)
            }
            ExperimentCommand::Minimality { common } => {
                let t = load_phases(&common.phases)?;
                let r = run_minimality_study(common.d, &t, common.trials, cli.seed, &opts)?;
                if let Some(path) = &common.csv {
                    let mut f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
                    writeln!(f, "d,phases,m,trials,does_pr")?;
                    for row in &r.rows {
                        writeln!(f, "{},{},{},{},{}", r.d, r.phases.len(), row.m, row.trials, row.does_pr_count)?;
                    }
                }
                Ok(serde_json::to_value(r).expect("serializable"))
            }
            ExperimentCommand::Invariance { common, m, family } => {
                let t = load_phases(&common.phases)?;
                let family = match family.as_str() {
                    "gaussian" => SystemFamily::Gaussian,
                    "structured" => SystemFamily::Structured,
                    other => return Err(Error::InvalidInput(format!("unknown family {other:?}")).into()),
                };
                let r = run_moebius_invariance_study(common.d, *m, &t, common.trials, cli.seed, family, &opts)?;
                study_output(&r, &common.csv)
            }
        },
        Command::Bound { d } => Ok(json!(heinosaari_lower_bound(*d)?)),
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(diag, "{rendered}");
            }
            return code;
        }
    };
    match execute(&cli, diag) {
        Ok(v) => {
            let text = serde_json::to_string_pretty(&v).expect("json values print");
            match writeln!(out, "{text}") {
                Ok(()) => 0,
                Err(_) => 1,
            }
        }
        Err(e) => {
            let msg = match &e {
                CliError::Core(err) => err.to_string(),
                CliError::Io(msg) => format!("i/o error: {msg}"),
            };
            let _ = writeln!(diag, "error: {msg}");
            e.exit_code()
        }
    }
}
