//! Command-line front end.
//!
//! Exit codes: 0 success (algebra / feasible / verified), 1 negative verdict,
//! 2 parse or input error, 3 mode incompatible with `K`.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::analytic::UnitDiskPoint;
use crate::error::Error;
use crate::feasibility::{find_lambda, Problem, SearchConfig};
use crate::interp::{
    construct, exponent_plan, roundtrip_generate, verify_interpolant, Interpolant, Mode, VerifyConfig,
};
use crate::kset::KSpec;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_MODE: i32 = 3;

/// Problem file: `{"nodes": [[re, im], ...], "targets": [...], "K": ..., "search": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemFile {
    pub nodes: Vec<UnitDiskPoint>,
    pub targets: Vec<UnitDiskPoint>,
    #[serde(rename = "K")]
    pub k: KSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
}

impl ProblemFile {
    pub fn problem(&self) -> Result<Problem, Error> {
        Problem::new(self.nodes.clone(), self.targets.clone())
    }
}

#[derive(Debug, Parser)]
#[command(name = "cpick", about = "Constrained Nevanlinna-Pick interpolation on the unit disk")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct SearchArgs {
    /// PSD tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Comma-separated grid radii in [0, 1)
    #[arg(long, value_delimiter = ',')]
    radii: Option<Vec<f64>>,
    /// Number of grid angles
    #[arg(long)]
    angles: Option<usize>,
    /// Seed recorded in the report
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether K defines an algebra and print its complement structure
    CheckAlgebra { file: PathBuf },
    /// Search for a lambda making the constrained Pick matrix PSD
    Feasible {
        file: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Construct an interpolant and write it to --out
    Interpolate {
        file: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: Mode,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-verify a stored interpolant against a problem file
    Verify {
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        problem: PathBuf,
    },
    /// Write a feasible problem file sampled from a random interpolant
    Generate {
        /// K as JSON, e.g. '{"K":[1,3]}' or '{"d":2,"gaps":[1]}'
        #[arg(long = "k")]
        k: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn report(code: i32, value: Value) -> Self {
        Outcome {
            code,
            stdout: to_pretty(&value),
            stderr: String::new(),
        }
    }

    fn failure(code: i32, kind: &str, message: impl Into<String>) -> Self {
        let message = message.into();
        Outcome {
            code,
            stdout: to_pretty(&json!({ "error": kind, "message": message })),
            stderr: format!("error: {message}\n"),
        }
    }
}

fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn read_json(path: &Path) -> Result<Value, Outcome> {
    let text =
        fs::read_to_string(path).map_err(|e| Outcome::failure(EXIT_PARSE, "io", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Outcome::failure(EXIT_PARSE, "parse", format!("{}: {e}", path.display())))
}

fn parse_as<T: for<'de> Deserialize<'de>>(value: Value, path: &Path, what: &str) -> Result<T, Outcome> {
    serde_json::from_value(value)
        .map_err(|e| Outcome::failure(EXIT_PARSE, "parse", format!("{}: invalid {what}: {e}", path.display())))
}

fn load_problem(path: &Path) -> Result<(ProblemFile, Problem), Outcome> {
    let file: ProblemFile = parse_as(read_json(path)?, path, "problem file")?;
    let problem = file
        .problem()
        .map_err(|e| Outcome::failure(EXIT_PARSE, "parse", format!("{}: {e}", path.display())))?;
    Ok((file, problem))
}

fn search_config(file: &ProblemFile, args: &SearchArgs) -> Result<SearchConfig, Outcome> {
    let mut cfg = file.search.clone().unwrap_or_default();
    if let Some(tol) = args.tol {
        cfg.tol = tol;
    }
    if let Some(radii) = &args.radii {
        cfg.radii = radii.clone();
    }
    if let Some(angles) = args.angles {
        cfg.angles = angles;
    }
    cfg.validate()
        .map_err(|e| Outcome::failure(EXIT_PARSE, "config", e.to_string()))?;
    Ok(cfg)
}

fn error_outcome(e: Error) -> Outcome {
    match e {
        Error::NotPrefixK(_) | Error::Unsupported(_) => Outcome::failure(EXIT_MODE, "mode", e.to_string()),
        Error::NotFound(_) | Error::NumericalError(_) | Error::Infeasible(_) => {
            Outcome::failure(EXIT_NEGATIVE, "not_found", e.to_string())
        }
        _ => Outcome::failure(EXIT_PARSE, "input", e.to_string()),
    }
}

/// Whether a feasibility verdict settles existence of an interpolant.
pub fn verdict_certified(mode: Mode, feasible: bool, pinned: bool) -> bool {
    match (mode, feasible) {
        (Mode::Iff, true) | (Mode::Sufficient, true) => true,
        (Mode::Iff, false) | (Mode::Necessary, false) => pinned,
        (Mode::Sufficient, false) | (Mode::Necessary, true) => false,
    }
}

fn config_json(cfg: &SearchConfig, seed: Option<u64>) -> Value {
    json!({ "search": cfg, "seed": seed })
}

fn cmd_check_algebra(path: &Path) -> Result<Outcome, Outcome> {
    let value = read_json(path)?;
    let k: KSpec = match value.get("nodes") {
        Some(_) => parse_as::<ProblemFile>(value, path, "problem file")?.k,
        None => parse_as(value, path, "K")?,
    };
    let is_algebra = k.is_algebra();
    let mut report = json!({ "K": k, "is_algebra": is_algebra });
    if is_algebra {
        report["smallest_missing"] = json!(k.smallest_missing());
        report["complement_structure"] = json!(k.complement_structure().map_err(error_outcome)?);
    }
    Ok(Outcome::report(
        if is_algebra { EXIT_OK } else { EXIT_NEGATIVE },
        report,
    ))
}

fn cmd_feasible(path: &Path, mode: Mode, args: &SearchArgs) -> Result<Outcome, Outcome> {
    let (file, problem) = load_problem(path)?;
    let cfg = search_config(&file, args)?;
    let plan = exponent_plan(&file.k, mode).map_err(error_outcome)?;
    let result = find_lambda(&problem, plan.exponent(), plan.d, &cfg).map_err(error_outcome)?;
    let certified = verdict_certified(mode, result.feasible, result.pinned);
    let code = if result.feasible { EXIT_OK } else { EXIT_NEGATIVE };
    Ok(Outcome::report(
        code,
        json!({
            "mode": mode,
            "K": file.k,
            "plan": { "m": plan.m, "d": plan.d, "exponent": plan.exponent() },
            "feasible": result.feasible,
            "lambda": result.lambda,
            "best_min_eigenvalue": result.best_min_eigenvalue,
            "evaluations": result.evaluations,
            "pinned": result.pinned,
            "certified": certified,
            "config": config_json(&cfg, args.seed),
        }),
    ))
}

fn cmd_interpolate(path: &Path, mode: Mode, out: &Path, args: &SearchArgs) -> Result<Outcome, Outcome> {
    let (file, problem) = load_problem(path)?;
    let cfg = search_config(&file, args)?;
    if mode == Mode::Necessary {
        return Err(Outcome::failure(
            EXIT_MODE,
            "mode",
            "interpolate needs mode iff or sufficient",
        ));
    }
    let plan = exponent_plan(&file.k, mode).map_err(error_outcome)?;
    let f = match construct(&problem, &file.k, mode, &cfg) {
        Ok(f) => f,
        Err(Error::NotFound(msg)) => {
            let search = find_lambda(&problem, plan.exponent(), plan.d, &cfg).map_err(error_outcome)?;
            return Ok(Outcome::report(
                EXIT_NEGATIVE,
                json!({
                    "mode": mode,
                    "K": file.k,
                    "found": false,
                    "message": msg,
                    "pinned": search.pinned,
                    "certified": verdict_certified(mode, false, search.pinned),
                    "best_min_eigenvalue": search.best_min_eigenvalue,
                    "config": config_json(&cfg, args.seed),
                }),
            ));
        }
        Err(e) => return Err(error_outcome(e)),
    };
    let report = verify_interpolant(&f, &problem, &file.k, &VerifyConfig::default());
    let text = to_pretty(&serde_json::to_value(&f).expect("interpolant serializes"));
    fs::write(out, text).map_err(|e| Outcome::failure(EXIT_PARSE, "io", format!("{}: {e}", out.display())))?;
    Ok(Outcome::report(
        if report.passed { EXIT_OK } else { EXIT_NEGATIVE },
        json!({
            "mode": mode,
            "K": file.k,
            "found": true,
            "interpolant": f,
            "verification": report,
            "config": config_json(&cfg, args.seed),
        }),
    ))
}

fn cmd_verify(function: &Path, problem_path: &Path) -> Result<Outcome, Outcome> {
    let f: Interpolant = parse_as(read_json(function)?, function, "interpolant")?;
    f.validate()
        .map_err(|e| Outcome::failure(EXIT_PARSE, "parse", format!("{}: {e}", function.display())))?;
    let (file, problem) = load_problem(problem_path)?;
    let report = verify_interpolant(&f, &problem, &file.k, &VerifyConfig::default());
    Ok(Outcome::report(
        if report.passed { EXIT_OK } else { EXIT_NEGATIVE },
        json!({ "K": file.k, "verification": report }),
    ))
}

fn cmd_generate(k_json: &str, n: usize, seed: u64, out: &Path) -> Result<Outcome, Outcome> {
    let k: KSpec =
        serde_json::from_str(k_json).map_err(|e| Outcome::failure(EXIT_PARSE, "parse", format!("--k: {e}")))?;
    let (problem, f) = roundtrip_generate(&k, n, seed).map_err(error_outcome)?;
    let file = ProblemFile {
        nodes: problem
            .nodes()
            .into_iter()
            .map(|z| UnitDiskPoint::new(z).expect("validated"))
            .collect(),
        targets: problem
            .targets()
            .into_iter()
            .map(|z| UnitDiskPoint::new(z).expect("validated"))
            .collect(),
        k,
        search: None,
    };
    fs::write(
        out,
        to_pretty(&serde_json::to_value(&file).expect("problem serializes")),
    )
    .map_err(|e| Outcome::failure(EXIT_PARSE, "io", format!("{}: {e}", out.display())))?;
    Ok(Outcome::report(
        EXIT_OK,
        json!({ "problem": file, "generator": f, "seed": seed }),
    ))
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            return Outcome {
                code,
                stdout: if code == EXIT_OK { e.to_string() } else { String::new() },
                stderr: if code == EXIT_OK { String::new() } else { e.to_string() },
            };
        }
    };
    let result = match &cli.command {
        Command::CheckAlgebra { file } => cmd_check_algebra(file),
        Command::Feasible { file, mode, search } => cmd_feasible(file, *mode, search),
        Command::Interpolate {
            file,
            mode,
            out,
            search,
        } => cmd_interpolate(file, *mode, out, search),
        Command::Verify { function, problem } => cmd_verify(function, problem),
        Command::Generate { k, n, seed, out } => cmd_generate(k, *n, *seed, out),
    };
    result.unwrap_or_else(|e| e)
}
