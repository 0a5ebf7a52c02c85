//! Command-line driver: embedding checks, theory printing, class and
//! successor enumeration, benchmarks, and the stdin whistle.

use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use hembed::{
    enumerate_class, flatten, gen_emb_rules, gen_rogd_rules, one_step_successors, parse_signature,
    parse_term, run_engine, whistle_add, Budget, ClassError, EngineError, EngineKind, Outcome,
    ParseError, Signature, WhistleError, WhistleState, WhistleVerdict,
};
use hembed_cli::{run_bench, to_csv, BenchError, GenSpec, SymbolMix, DEFAULT_REPS};

#[derive(Parser)]
#[command(
    name = "hembed",
    version,
    about = "Homeomorphic embedding modulo equational axioms"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

fn parse_engine(s: &str) -> Result<EngineKind, String> {
    s.parse()
}

#[derive(Clone, Copy, ValueEnum)]
enum TheoryArg {
    /// Projection rules over the universal signature
    Emb,
    /// Goal-driven calculus rules
    Rogd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether the first term embeds into the second modulo axioms
    Check {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value = "sml", value_parser = parse_engine)]
        engine: EngineKind,
        #[arg(long)]
        timeout_ms: Option<u64>,
        t1: String,
        t2: String,
    },
    /// Print a generated rewrite theory for the module
    Gen {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_enum)]
        kind: TheoryArg,
    },
    /// Enumerate the equivalence class of a term modulo the module's axioms
    Class {
        #[arg(long)]
        module: PathBuf,
        term: String,
    },
    /// Print the one-step projection successors of a term
    Succ {
        #[arg(long)]
        module: PathBuf,
        term: String,
    },
    /// Time engines on seeded non-embedding goals and emit CSV
    Bench {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_engine)]
        engines: Vec<EngineKind>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        t1_depth: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [5usize])]
        t2_depths: Vec<usize>,
        #[arg(long, default_value_t = 60_000)]
        timeout_ms: u64,
        #[arg(long, default_value_t = DEFAULT_REPS)]
        reps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Read one term per line from stdin; print pass, or blow and stop
    Whistle {
        #[arg(long)]
        module: PathBuf,
        #[arg(long, default_value = "sml", value_parser = parse_engine)]
        engine: EngineKind,
        #[arg(long)]
        timeout_ms: Option<u64>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Class(#[from] ClassError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Whistle(#[from] WhistleError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Whistle(WhistleError::Timeout { .. }) => 3,
            _ => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_module(path: &Path) -> Result<Signature, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(parse_signature(&text)?)
}

fn budget_from(timeout_ms: Option<u64>) -> Budget {
    match timeout_ms {
        Some(ms) => Budget::with_millis(ms),
        None => Budget::UNBOUNDED,
    }
}

fn run(cmd: Cmd) -> Result<u8, CliError> {
    match cmd {
        Cmd::Check {
            module,
            engine,
            timeout_ms,
            t1,
            t2,
        } => {
            let sig = load_module(&module)?;
            let lhs = parse_term(&t1, &sig)?;
            let rhs = parse_term(&t2, &sig)?;
            let goal = hembed::EmbedGoal::new(lhs, rhs, &sig);
            let verdict = run_engine(engine, &goal, &budget_from(timeout_ms))?;
            println!("{}", verdict.outcome);
            Ok(match verdict.outcome {
                Outcome::True => 0,
                Outcome::False => 1,
                Outcome::Timeout => 3,
            })
        }
        Cmd::Gen { module, kind } => {
            let sig = load_module(&module)?;
            let th = match kind {
                TheoryArg::Emb => gen_emb_rules(&sig),
                TheoryArg::Rogd => gen_rogd_rules(&sig),
            };
            print!("{th}");
            Ok(0)
        }
        Cmd::Class { module, term } => {
            let sig = load_module(&module)?;
            let t = parse_term(&term, &sig)?.sharp();
            let usig = sig.to_universal();
            let members = enumerate_class(&t, &usig)?;
            for m in &members {
                println!("{m}");
            }
            println!("total {}", members.len());
            Ok(0)
        }
        Cmd::Succ { module, term } => {
            let sig = load_module(&module)?;
            let t = parse_term(&term, &sig)?.sharp();
            let usig = sig.to_universal();
            let th = gen_emb_rules(&sig);
            for s in one_step_successors(&flatten(&t, &usig), &th) {
                println!("{s}");
            }
            Ok(0)
        }
        Cmd::Bench {
            module,
            engines,
            seed,
            t1_depth,
            t2_depths,
            timeout_ms,
            reps,
            csv,
        } => {
            let sig = load_module(&module)?;
            let spec = GenSpec {
                seed,
                t1_size: t1_depth,
                t2_sizes: t2_depths,
                symbol_mix: SymbolMix::full(&sig),
            };
            let rows = run_bench(
                &sig,
                &engines,
                &spec,
                &Budget::with_millis(timeout_ms),
                reps,
            )?;
            let report = to_csv(&rows);
            match csv {
                Some(path) => std::fs::write(&path, report).map_err(|source| CliError::Io {
                    path,
                    source,
                })?,
                None => print!("{report}"),
            }
            Ok(0)
        }
        Cmd::Whistle {
            module,
            engine,
            timeout_ms,
        } => {
            let sig = load_module(&module)?;
            let mut state = WhistleState::new(sig.clone(), engine, budget_from(timeout_ms));
            let stdin = std::io::stdin();
            for line in stdin.lock().lines() {
                let line = line.map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdin>"),
                    source,
                })?;
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let t = parse_term(line, &sig)?;
                match whistle_add(&mut state, t)? {
                    WhistleVerdict::Pass => println!("pass"),
                    WhistleVerdict::Blow(k) => {
                        println!("blow {k}");
                        std::io::stdout().flush().ok();
                        return Ok(0);
                    }
                }
                std::io::stdout().flush().ok();
            }
            Ok(0)
        }
    }
}
