//! The `nominate` command line.
//!
//! Exit codes: 0 solved or valid, 2 infeasible, 1 input or usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::baselines::{run_baseline, Baseline};
use crate::error::{Error, Result};
use crate::flow::{build_hard_network, solve_hard};
use crate::generate::{generate, GeneratorSpec};
use crate::greedy::greedy_assign_basic;
use crate::lp::{build_hard_lp, solve_hard_relaxed};
use crate::model::{Instance, SolveReport, Status, Variant};
use crate::oracle::{oracle_basic, oracle_hard, oracle_soft, DEFAULT_CAP};
use crate::soft::{build_soft_lp, build_soft_network, solve_soft, solve_soft_exact};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "nominate", version, about = "Reciprocal-reviewer nomination solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check an instance file and list every violation
    Validate { file: PathBuf },
    /// Generate a seeded random instance
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        amin: usize,
        #[arg(long)]
        amax: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        plo: f64,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a `paper_id,author_id` CSV plus an `author_id,p` CSV
    Import {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        p: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Solve an instance
    Solve {
        file: PathBuf,
        #[command(flatten)]
        params: Params,
        #[arg(long, value_enum)]
        algorithm: Algorithm,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write the flow network as a JSON edge list
        #[arg(long)]
        dump_network: Option<PathBuf>,
        /// Write the linear program as JSON
        #[arg(long)]
        dump_lp: Option<PathBuf>,
    },
    /// Solve by brute-force enumeration
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u128,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(clap::Args, Debug)]
struct Params {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Nomination limit; defaults to the instance's `b`
    #[arg(long)]
    b: Option<usize>,
    /// Penalty weight; defaults to the instance's `lambda`
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum VariantArg {
    Basic,
    Hard,
    Soft,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Algorithm {
    Greedy,
    Flow,
    Lp,
    LpRound,
    ExactFlow,
    BaselineRand,
    BaselineGreedy,
    Oracle,
}

impl Params {
    fn resolve(&self, instance: &Instance) -> Result<Variant> {
        Ok(match self.variant {
            VariantArg::Basic => Variant::Basic,
            VariantArg::Hard => Variant::Hard {
                b: instance.resolve_limit(self.b)?,
            },
            VariantArg::Soft => Variant::Soft {
                b: instance.resolve_limit(self.b)?,
                lambda: instance.resolve_lambda(self.lambda)?,
            },
        })
    }
}

/// Parses `argv` (program name first) and runs the command against the
/// process's stdout and stderr.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_valid(path: &Path) -> Result<Instance> {
    Instance::load(path)?.checked()
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { file } => {
            let inst = Instance::load(&file)?;
            let violations = inst.validate();
            if violations.is_empty() {
                writeln!(
                    out,
                    "ok: {} papers, {} authors, {} pairs",
                    inst.n(),
                    inst.m(),
                    inst.nnz()
                )?;
                Ok(EXIT_OK)
            } else {
                for v in violations {
                    writeln!(out, "{v}")?;
                }
                Ok(EXIT_INPUT)
            }
        }
        Command::Gen {
            n,
            m,
            amin,
            amax,
            plo,
            phi,
            seed,
            output,
        } => {
            let spec = GeneratorSpec {
                n,
                m,
                authors_min: amin,
                authors_max: amax.unwrap_or(m),
                p_lo: plo,
                p_hi: phi,
                seed,
            };
            emit(&generate(&spec)?.to_json_string(), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Import { pairs, p, output } => {
            let inst = Instance::from_csv(std::fs::File::open(pairs)?, std::fs::File::open(p)?)?;
            let violations = inst.validate();
            if !violations.is_empty() {
                return Err(Error::InvalidInstance(violations));
            }
            emit(&inst.to_json_string(), output.as_deref(), out)?;
            Ok(EXIT_OK)
        }
        Command::Solve {
            file,
            params,
            algorithm,
            seed,
            output,
            dump_network,
            dump_lp,
        } => {
            let inst = load_valid(&file)?;
            let variant = params.resolve(&inst)?;
            if let Some(path) = dump_network {
                let text = match (variant, algorithm) {
                    (Variant::Hard { b }, Algorithm::Flow) => build_hard_network(&inst, b)?.network.to_json_string(),
                    (Variant::Soft { b, lambda }, Algorithm::ExactFlow) => {
                        build_soft_network(&inst, b, lambda)?.base.network.to_json_string()
                    }
                    _ => return Err(Error::InvalidParameter("--dump-network needs a flow algorithm".into())),
                };
                std::fs::write(path, text)?;
            }
            if let Some(path) = dump_lp {
                let text = match (variant, algorithm) {
                    (Variant::Hard { b }, Algorithm::Lp) => build_hard_lp(&inst, b)?.to_json_string(),
                    (Variant::Soft { b, lambda }, Algorithm::LpRound) => {
                        build_soft_lp(&inst, b, lambda)?.lp.to_json_string()
                    }
                    _ => return Err(Error::InvalidParameter("--dump-lp needs an LP algorithm".into())),
                };
                std::fs::write(path, text)?;
            }
            let report = solve_report(&inst, variant, algorithm, seed)?;
            finish(&report, output.as_deref(), out, err)
        }
        Command::Oracle {
            file,
            params,
            cap,
            output,
        } => {
            let inst = load_valid(&file)?;
            let variant = params.resolve(&inst)?;
            let report = oracle_report(&inst, variant, cap)?;
            finish(&report, output.as_deref(), out, err)
        }
    }
}

fn finish(report: &SolveReport, path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    emit(&report.to_json_string(), path, out)?;
    if report.status == Status::Infeasible {
        writeln!(err, "infeasible")?;
        Ok(EXIT_INFEASIBLE)
    } else {
        Ok(EXIT_OK)
    }
}

fn solve_report(inst: &Instance, variant: Variant, algorithm: Algorithm, seed: Option<u64>) -> Result<SolveReport> {
    let report = match (variant, algorithm) {
        (Variant::Basic, Algorithm::Greedy) => greedy_assign_basic(inst, seed)?.report,
        (Variant::Hard { b }, Algorithm::Flow) => solve_hard(inst, b)?.report,
        (Variant::Hard { b }, Algorithm::Lp) => solve_hard_relaxed(inst, b)?.1,
        (Variant::Soft { b, lambda }, Algorithm::LpRound) => solve_soft(inst, b, lambda)?.report,
        (Variant::Soft { b, lambda }, Algorithm::ExactFlow) => solve_soft_exact(inst, b, lambda)?.report,
        (Variant::Hard { .. } | Variant::Soft { .. }, Algorithm::BaselineRand) => {
            run_baseline(inst, variant, Baseline::Random, seed)?.report
        }
        (Variant::Hard { .. } | Variant::Soft { .. }, Algorithm::BaselineGreedy) => {
            run_baseline(inst, variant, Baseline::Greedy, seed)?.report
        }
        (_, Algorithm::Oracle) => oracle_report(inst, variant, DEFAULT_CAP)?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "algorithm {} does not apply to the {} variant",
                algorithm
                    .to_possible_value()
                    .map(|v| v.get_name().to_owned())
                    .unwrap_or_default(),
                variant.name()
            )))
        }
    };
    Ok(report)
}

fn oracle_report(inst: &Instance, variant: Variant, cap: u128) -> Result<SolveReport> {
    let best = match variant {
        Variant::Basic => Some(oracle_basic(inst, cap)?),
        Variant::Hard { b } => oracle_hard(inst, b, cap)?,
        Variant::Soft { b, lambda } => Some(oracle_soft(inst, b, lambda, cap)?),
    };
    match best {
        Some(r) => SolveReport::for_assignment(inst, &r.assignment, variant, "oracle", None, Status::Optimal),
        None => Ok(SolveReport::infeasible(variant, "oracle")),
    }
}
