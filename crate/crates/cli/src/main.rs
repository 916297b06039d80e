//! `hurwitz`: compute, cross-check and export Hurwitz numbers.
//!
//! Exit codes: 0 success, 1 failed check or other error, 2 parse failure,
//! 3 budget exceeded, 4 engine not applicable.

mod commands;
mod engines;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hurwitz_core::poly::SampleBox;
use hurwitz_core::{HurwitzError, HurwitzType, PrunedSide};
use serde::Serialize;

use commands::PolyOptions;
use engines::{Engine, Limits};

#[derive(Debug, Parser)]
#[command(name = "hurwitz", version, about = "Exact classical and pruned Hurwitz numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Side {
    Left,
    Right,
}

#[derive(Debug, Args)]
struct Common {
    /// Step budget for the engine (a positive integer).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Output format.
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
}

#[derive(Debug, Args)]
struct TypeArgs {
    /// Type descriptor such as `g=1;mu=5;nu=4,1`.
    #[arg(value_name = "TYPE")]
    type_pos: Option<String>,
    /// Type descriptor (alternative to the positional argument).
    #[arg(long = "type", value_name = "TYPE")]
    type_flag: Option<String>,
    /// Count pruned numbers.
    #[arg(long)]
    pruned: bool,
    /// Side carrying the pruning condition; implies --pruned. Defaults to
    /// left (μ), or right for the dyck engine.
    #[arg(long, value_enum)]
    pruned_side: Option<Side>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute one number with one engine.
    Compute {
        #[arg(long, value_enum)]
        engine: Engine,
        #[command(flatten)]
        ty: TypeArgs,
        /// Cache file for the pruned recursion memo.
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate every type within the bounds by every applicable engine.
    Crosscheck {
        #[arg(long, default_value_t = 4)]
        max_d: u32,
        #[arg(long, default_value_t = 3)]
        max_b: i64,
        /// Directory for crosscheck.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cache: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Write one file per enumerated object plus a manifest.
    ExportGraphs {
        #[arg(long, value_enum)]
        engine: Engine,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long, default_value = "export")]
        out: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Fit chamber polynomials for (g, m, n).
    Poly {
        #[arg(long, default_value_t = 0)]
        genus: u32,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        /// Fit pruned numbers instead of classical ones.
        #[arg(long)]
        pruned: bool,
        /// Use the refined arrangement.
        #[arg(long)]
        refined: bool,
        #[arg(long, default_value_t = 12)]
        max_part: i64,
        #[arg(long, default_value_t = 12)]
        max_degree: i64,
        /// Directory for poly.json.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn exit_code(e: &HurwitzError) -> u8 {
    match e {
        HurwitzError::Parse(_) => 2,
        HurwitzError::BudgetExceeded { .. } => 3,
        HurwitzError::Inapplicable(_) => 4,
        _ => 1,
    }
}

fn parse_type(ty: &TypeArgs, engine: Option<Engine>) -> Result<HurwitzType, HurwitzError> {
    let text = ty
        .type_flag
        .as_deref()
        .or(ty.type_pos.as_deref())
        .ok_or_else(|| HurwitzError::Parse("a type descriptor is required".into()))?;
    let mut t: HurwitzType = text.parse()?;
    let side = match ty.pruned_side {
        Some(Side::Left) => Some(PrunedSide::Left),
        Some(Side::Right) => Some(PrunedSide::Right),
        None if ty.pruned => Some(engine.map(Engine::default_pruned_side).unwrap_or(PrunedSide::Left)),
        None => None,
    };
    if let Some(side) = side {
        t = t.pruned(side);
    } else if let Some(e) = engine {
        if e.is_pruned_only() && t.pruned_side == PrunedSide::None {
            t = t.pruned(PrunedSide::Left);
        }
    }
    Ok(t)
}

fn emit<T: Serialize>(format: ReportFormat, value: &T, text: impl FnOnce() -> String) {
    match format {
        ReportFormat::Json => println!("{}", serde_json::to_string(value).expect("records serialize")),
        ReportFormat::Text => println!("{}", text()),
    }
}

fn run(cli: Cli) -> Result<bool, HurwitzError> {
    match cli.command {
        Command::Compute { engine, ty, cache, common } => {
            let t = parse_type(&ty, Some(engine))?;
            let limits = Limits { budget: common.budget };
            let record = commands::compute(engine, &t, &limits, cache.as_deref())?;
            emit(common.report, &record, || record.text());
            Ok(true)
        }
        Command::Crosscheck { max_d, max_b, out, cache, common } => {
            let limits = Limits { budget: common.budget };
            let report = commands::crosscheck(max_d, max_b, &limits, cache.as_deref(), out.as_deref())?;
            emit(common.report, &report, || {
                let mut lines: Vec<String> = report
                    .results
                    .iter()
                    .map(|e| {
                        let vals: Vec<String> =
                            e.classical.iter().chain(e.pruned.iter()).map(|(k, v)| format!("{k}={v}")).collect();
                        format!("{} {} {}", if e.agree { "ok  " } else { "DIFF" }, e.type_key, vals.join(" "))
                    })
                    .collect();
                lines.push(format!(
                    "{} types, {} disagreeing, {} skipped entries: {}",
                    report.types,
                    report.disagreeing.len(),
                    report.skipped_entries,
                    if report.pass { "PASS" } else { "FAIL" }
                ));
                lines.join("\n")
            });
            Ok(report.pass)
        }
        Command::ExportGraphs { engine, ty, out, common } => {
            let t = parse_type(&ty, Some(engine))?;
            let limits = Limits { budget: common.budget };
            let (record, dir) = commands::export_graphs(engine, &t, &limits, &out)?;
            emit(common.report, &record, || format!("{} -> {}", record.text(), dir.display()));
            Ok(true)
        }
        Command::Poly { genus, m, n, pruned, refined, max_part, max_degree, out, common } => {
            if m == 0 || n == 0 {
                return Err(HurwitzError::Parse("m and n must be positive".into()));
            }
            let limits = Limits { budget: common.budget };
            let opts = PolyOptions { genus, m, n, pruned, refined, sample: SampleBox { max_part, max_degree } };
            let report = commands::poly(&opts, &limits)?;
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)?;
                let text = serde_json::to_string_pretty(&report).expect("report serializes");
                std::fs::write(dir.join("poly.json"), text + "\n")?;
            }
            emit(common.report, &report, || {
                let mut lines: Vec<String> = report
                    .chambers
                    .iter()
                    .map(|c| {
                        let body = c.polynomial.clone().or_else(|| c.note.clone()).unwrap_or_default();
                        format!("{} {} [{} points] {}", if c.pass { "ok  " } else { "FAIL" }, c.signature, c.points, body)
                    })
                    .collect();
                lines.push(format!("degree {}: {}", report.degree, if report.pass { "PASS" } else { "FAIL" }));
                lines.join("\n")
            });
            Ok(report.pass)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
