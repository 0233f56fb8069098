//! Command-line definitions and their implementations.

use std::path::PathBuf;

use blochsep::catalog::CATALOG;
use blochsep::witness::WitnessMode;
use blochsep::{analyze, AnalysisOptions, Criterion, SystemShape};
use clap::{Args, Parser, Subcommand};

use crate::report::{reverify, Report};
use crate::scan::{bisect_transitions, resolve_record, rows_to_csv, run_scan, transitions_to_csv, ScanSpec};
use crate::state_file::{StateFile, DEFAULT_TOL};
use crate::witness_file::{witness_document, Offset};
use crate::{from_json, parse_assignments, parse_p, parse_shape, read_text, to_json, verdict_exit_code, write_text, CliResult};

#[derive(Debug, Parser)]
#[command(name = "blochsep", version, about = "Separability and entanglement tests for multipartite states in Bloch form")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every applicable criterion on a state file and write a report.
    /// Exit code 0 = certified separable, 1 = entangled, 2 = inconclusive.
    Analyze(AnalyzeArgs),
    /// Sweep one parameter of a catalog family and write a CSV table.
    Scan(ScanArgs),
    /// Build the Bloch-norm witness for a state and evaluate it.
    Witness(WitnessArgs),
    /// Write a catalog state as a matrix state file, or list the families.
    Catalog(CatalogArgs),
    /// Re-check the decompositions and verdict embedded in a report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// State file (JSON).
    pub input: PathBuf,
    /// Validation tolerance for the density matrix.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Reinterpret the matrix under another factorization, e.g. 2,2,2.
    #[arg(long, value_parser = parse_shape_arg)]
    pub shape_override: Option<SystemShape>,
}

#[derive(Debug, Args)]
pub struct CriteriaArgs {
    /// Norm order for the correlation-norm criterion; repeatable, "inf" allowed.
    #[arg(long = "p", value_parser = parse_p_arg)]
    pub ps: Vec<f64>,
    /// Comma-separated subset of theorem1..theorem7.
    #[arg(long, value_delimiter = ',', value_parser = parse_criterion_arg)]
    pub criteria: Option<Vec<Criterion>>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
    /// Output file; stdout when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Catalog family name.
    pub family: String,
    /// Parameter to sweep.
    #[arg(long, default_value = "alpha")]
    pub param: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub from: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    /// Fixed parameter, key=value; repeatable.
    #[arg(long = "set")]
    pub set: Vec<String>,
    #[command(flatten)]
    pub criteria: CriteriaArgs,
    /// Record whose verdict changes are bisected, e.g. theorem4 or theorem1(p=2).
    #[arg(long)]
    pub bisect: Option<String>,
    #[arg(long, value_parser = parse_shape_arg)]
    pub shape_override: Option<SystemShape>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Offset: M (sign-slice bound), T1 (correlation bound), T3 or 1 (unit ball), or a number.
    #[arg(long = "a", default_value = "T3", allow_negative_numbers = true)]
    pub a: String,
    /// full or correlation.
    #[arg(long, default_value = "full")]
    pub mode: String,
    /// Emit this many witnesses with random signs instead of the adapted one.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CatalogArgs {
    /// Family name; lists the families when omitted.
    pub name: Option<String>,
    /// Parameter, key=value; repeatable.
    #[arg(long = "set")]
    pub set: Vec<String>,
    #[arg(long, value_parser = parse_shape_arg)]
    pub shape_override: Option<SystemShape>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub report: PathBuf,
}

fn parse_shape_arg(s: &str) -> Result<SystemShape, String> {
    parse_shape(s).map_err(|e| e.to_string())
}

fn parse_p_arg(s: &str) -> Result<f64, String> {
    parse_p(s).map_err(|e| e.to_string())
}

fn parse_criterion_arg(s: &str) -> Result<Criterion, String> {
    s.parse().map_err(|e: blochsep::Error| e.to_string())
}

impl CriteriaArgs {
    fn options(&self) -> AnalysisOptions {
        let mut opts = AnalysisOptions {
            criteria: self.criteria.clone(),
            ..Default::default()
        };
        if !self.ps.is_empty() {
            opts.ps = self.ps.clone();
        }
        opts
    }
}

/// Runs a parsed command and returns the process exit code.
pub fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Witness(a) => cmd_witness(a),
        Command::Catalog(a) => cmd_catalog(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn cmd_analyze(args: AnalyzeArgs) -> CliResult<u8> {
    let file = StateFile::load(&args.input.input)?;
    let rho = file.to_density(args.input.tol, args.input.shape_override.as_ref())?;
    let options = args.criteria.options();
    let analysis = analyze(&rho, &options)?;
    let report = Report::new(&rho, Some(&file.shape), &options, &analysis);
    write_text(args.output.as_deref(), &to_json(&report)?)?;
    let decided: Vec<&str> = report
        .records
        .iter()
        .filter(|r| r.verdict == report.verdict)
        .map(|r| r.criterion.as_str())
        .collect();
    eprintln!("{} [{}]", report.verdict, decided.join(", "));
    if !report.oracle_consistent {
        return Err(blochsep::Error::NumericalInconsistency("verdict contradicts the PPT oracle".into()).into());
    }
    Ok(verdict_exit_code(report.verdict))
}

fn cmd_scan(args: ScanArgs) -> CliResult<u8> {
    let spec = ScanSpec {
        family: args.family,
        param: args.param,
        from: args.from,
        to: args.to,
        steps: args.steps,
        fixed: parse_assignments(&args.set)?,
        options: args.criteria.options(),
        shape_override: args.shape_override,
    };
    let rows = run_scan(&spec)?;
    let text = match &args.bisect {
        None => rows_to_csv(&spec.param, &rows)?,
        Some(name) => {
            let record = resolve_record(&rows, name)?;
            transitions_to_csv(&spec.param, &bisect_transitions(&spec, &rows, &record)?)?
        }
    };
    write_text(args.output.as_deref(), &text)?;
    Ok(0)
}

fn cmd_witness(args: WitnessArgs) -> CliResult<u8> {
    let file = StateFile::load(&args.input.input)?;
    let rho = file.to_density(args.input.tol, args.input.shape_override.as_ref())?;
    let offset: Offset = args.a.parse()?;
    let mode: WitnessMode = args.mode.parse()?;
    let doc = witness_document(&rho, offset, mode, args.random.map(|n| (n, args.seed)))?;
    write_text(args.output.as_deref(), &to_json(&doc)?)?;
    let max = doc.witnesses.iter().map(|w| w.evaluation).fold(f64::NEG_INFINITY, f64::max);
    eprintln!("{} witness(es), a = {}, max Tr(rho W) = {max}, bound {}", doc.witnesses.len(), doc.offset_a, doc.bound);
    Ok(0)
}

fn cmd_catalog(args: CatalogArgs) -> CliResult<u8> {
    let Some(name) = args.name else {
        let mut text = String::new();
        for e in CATALOG {
            let params: Vec<String> = e.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
            text.push_str(&format!("{:<16} {:<20} {}\n", e.name, params.join(" "), e.description));
        }
        write_text(args.output.as_deref(), &text)?;
        return Ok(0);
    };
    let rho = blochsep::catalog::build(&name, &parse_assignments(&args.set)?)?;
    let rho = match args.shape_override {
        Some(s) => rho.with_shape(s)?,
        None => rho,
    };
    write_text(args.output.as_deref(), &to_json(&StateFile::from_density(&rho))?)?;
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CliResult<u8> {
    let report: Report = from_json(&read_text(&args.report)?, &args.report)?;
    let checks = reverify(&report)?;
    for c in &checks {
        println!(
            "{}: ok (weight sum {}, min weight {}, reconstruction distance {:e})",
            c.criterion, c.report.weight_sum, c.report.min_weight, c.report.reconstruction_distance
        );
    }
    println!("verdict {} re-verified", report.verdict);
    Ok(0)
}
