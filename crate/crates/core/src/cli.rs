//! The `iia` command-line front end.
//!
//! stdout carries machine-readable output only; diagnostics go to stderr
//! as a single line. Exit codes: 0 success, 1 failed check or mismatch,
//! 2 usage or input error, 3 budget or feasibility rejection.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::acceptance;
use crate::axioms::{check, Axiom, AxiomVerdict, Witness};
use crate::construct::{enumerate_descriptions, EnumerationFilter, EnumerationStats, DEFAULT_DESCRIPTION_BUDGET};
use crate::count::{CountFamily, CountQuery};
use crate::decompose::{decompose, reconstruct, CdDescription};
use crate::error::{Error, Result};
use crate::oracle::{brute_force_iia, compare_with_construct, SearchMode};
use crate::swf::{ExplicitSwf, PairwiseSwf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "iia", version, about = "Count, enumerate, check and decompose IIA social welfare functions")]
pub struct Cli {
    /// Size of the worker pool (default: one per core).
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Shape {
    #[arg(long)]
    pub states: usize,
    #[arg(long)]
    pub voters: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print an exact count: q (IIA), r (IIA + Pareto), p (IIA + sovereignty)
    /// or bell (weak orders on --states elements).
    Count {
        family: CountFamily,
        #[arg(long)]
        states: usize,
        #[arg(long, default_value_t = 0)]
        voters: usize,
    },
    /// Stream every canonical description, one JSON document per line.
    Enumerate {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value = "all")]
        filter: EnumerationFilter,
        /// Print per-cleric totals instead of the descriptions.
        #[arg(long)]
        stats: bool,
    },
    /// Check an axiom against an explicit (or pairwise) function file.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        axiom: Axiom,
    },
    /// Write the canonical description of an IIA function.
    Decompose {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate a description back into an explicit function.
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        shape: Shape,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exhaustively search for all IIA functions.
    Oracle {
        #[command(flatten)]
        shape: Shape,
        /// Compare against the reconstructed descriptions.
        #[arg(long, conflicts_with = "emit")]
        compare: bool,
        /// Print every function found, one JSON table per line.
        #[arg(long)]
        emit: bool,
    },
    /// Run the acceptance suite.
    Selftest,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } | Error::Infeasible(_) => EXIT_BUDGET,
        Error::NotIia(_)
        | Error::NotTransitive(_)
        | Error::NotWellDefined(_)
        | Error::NotDictator(_)
        | Error::DeferralInconsistent(_)
        | Error::InternalContradiction(_) => EXIT_FAILED,
        _ => EXIT_USAGE,
    }
}

/// Descriptions are serialized in parallel chunks and written in stream
/// order, so the bytes do not depend on the pool size.
pub fn write_enumeration(states: usize, voters: usize, filter: EnumerationFilter, out: &mut impl Write) -> Result<u64> {
    const CHUNK: usize = 4096;
    let alts = crate::weak_orders::AltSet::standard(states)?;
    let mut stream = enumerate_descriptions(states, voters, filter, DEFAULT_DESCRIPTION_BUDGET)?;
    let mut written = 0;
    loop {
        let chunk: Vec<CdDescription> = stream.by_ref().take(CHUNK).collect();
        if chunk.is_empty() {
            return Ok(written);
        }
        let lines: Vec<String> = chunk.par_iter().map(|d| d.to_json_string(&alts)).collect();
        for line in lines {
            writeln!(out, "{line}")?;
        }
        written += chunk.len() as u64;
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, format!("{text}\n")).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

enum Loaded {
    Explicit(ExplicitSwf),
    Pairwise(PairwiseSwf),
}

fn load_function(text: &str) -> Result<Loaded> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("pairs").is_some() {
        Ok(Loaded::Pairwise(PairwiseSwf::from_json(&serde_json::from_value(value)?)?))
    } else {
        Ok(Loaded::Explicit(ExplicitSwf::from_json(&serde_json::from_value(value)?)?))
    }
}

fn run_check(input: &Path, axiom: Axiom, out: &mut impl Write) -> Result<i32> {
    let (verdict, alts) = match load_function(&read(input)?)? {
        Loaded::Explicit(f) => (check(axiom, &f), f.alts().clone()),
        Loaded::Pairwise(pw) => match pw.to_explicit() {
            Ok(f) => (check(axiom, &f), f.alts().clone()),
            Err(Error::NotTransitive(v)) if axiom == Axiom::Transitive => {
                (AxiomVerdict::from_witness(Some(Witness::Intransitive(*v))), pw.alts().clone())
            }
            Err(e) => return Err(e),
        },
    };
    writeln!(out, "{}", verdict.to_json(axiom, &alts))?;
    Ok(if verdict.holds { EXIT_OK } else { EXIT_FAILED })
}

fn run_command(command: Command, out: &mut impl Write) -> Result<i32> {
    match command {
        Command::Count { family, states, voters } => {
            writeln!(out, "{}", CountQuery { family, states, voters }.eval()?)?;
        }
        Command::Enumerate { shape, filter, stats } => {
            if stats {
                let stream = enumerate_descriptions(shape.states, shape.voters, filter, DEFAULT_DESCRIPTION_BUDGET)?;
                writeln!(out, "{}", serde_json::to_string(&EnumerationStats::collect(stream))?)?;
            } else {
                write_enumeration(shape.states, shape.voters, filter, out)?;
            }
        }
        Command::Check { input, axiom } => return run_check(&input, axiom, out),
        Command::Decompose { input, out: path } => {
            let f = ExplicitSwf::from_json_str(&read(&input)?)?;
            let d = decompose(&f)?;
            write_file(&path, &d.to_json_string(f.alts()))?;
        }
        Command::Reconstruct { input, shape, out: path } => {
            let (d, alts) = CdDescription::from_json_str(&read(&input)?, shape.states)?;
            let f = reconstruct(&d, &alts, shape.voters)?;
            write_file(&path, &f.to_json_string())?;
        }
        Command::Oracle { shape, compare, emit } => {
            let alts = crate::weak_orders::AltSet::standard(shape.states)?;
            if compare {
                let c = compare_with_construct(&alts, shape.voters)?;
                let sign = if c.equal() { "==" } else { "!=" };
                writeln!(out, "{} {sign} {}", c.oracle_count, c.construct_count)?;
                if !c.equal() {
                    if let Some(f) = &c.only_in_oracle {
                        eprintln!("only in oracle: {}", f.to_json_string());
                    }
                    if let Some(f) = &c.only_in_construct {
                        eprintln!("only in construction: {}", f.to_json_string());
                    }
                    if c.construct_distinct != c.construct_count {
                        eprintln!("construction yields {} distinct functions", c.construct_distinct);
                    }
                    return Ok(EXIT_FAILED);
                }
            } else {
                let result = brute_force_iia(&alts, shape.voters, SearchMode::Pruned)?;
                if emit {
                    for f in result.swfs() {
                        writeln!(out, "{}", f.to_json_string())?;
                    }
                } else {
                    writeln!(out, "{}", result.count())?;
                }
            }
        }
        Command::Selftest => {
            let mut ok = true;
            for id in 1..=acceptance::CRITERIA.len() {
                let o = acceptance::run_criterion(id).expect("known criterion");
                writeln!(out, "{}", o.line())?;
                out.flush()?;
                ok &= o.passed;
            }
            return Ok(if ok { EXIT_OK } else { EXIT_FAILED });
        }
    }
    Ok(EXIT_OK)
}

/// Parses `argv` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return EXIT_OK;
            }
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("invalid arguments"));
            return EXIT_USAGE;
        }
    };
    if let Some(k) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(k as usize).build_global() {
            eprintln!("error: cannot configure {k} threads: {e}");
            return EXIT_USAGE;
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run_command(cli.command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            exit_code(&e)
        }
    };
    if let Err(e) = out.flush() {
        if e.kind() != io::ErrorKind::BrokenPipe {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    }
    code
}
