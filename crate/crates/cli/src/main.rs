//! Batch front end: generate planted instances, run registered reductions,
//! verify solutions and list the registry.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use realizer::multivalued::{ReduceError, Verdict};
use realizer::registry::{self, InstanceFile, RegistryError};

const EXIT_REJECT: u8 = 2;
const EXIT_FUEL: u8 = 3;
const EXIT_USAGE: u8 = 4;

#[derive(Parser)]
#[command(name = "realizer", version, about = "Run reductions between multi-valued problems on planted instances")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a planted instance with its solution.
    Gen {
        /// Generator id (see `list`).
        generator: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Generator size parameter; each generator has its own default.
        #[arg(long)]
        size: Option<u64>,
        /// Output file; stdout when absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a reduction on an instance through an oracle and print the trace.
    Run {
        reduction: String,
        instance: PathBuf,
        /// Oracle id for the target problem; the reduction's first listed oracle by default.
        #[arg(long)]
        oracle: Option<String>,
        #[arg(long, default_value_t = 64)]
        depth: usize,
        #[arg(long, default_value_t = 4096)]
        fuel: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Verify a solution, or the instance's planted one, to a depth.
    Verify {
        instance: PathBuf,
        /// JSON file holding the solution.
        #[arg(long)]
        solution: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        depth: usize,
    },
    /// Print every registered problem, generator, oracle and reduction.
    List,
}

enum Failure {
    Usage(String),
    Reject(String),
    Fuel(String),
}

impl From<RegistryError> for Failure {
    fn from(e: RegistryError) -> Self {
        match e {
            RegistryError::Reduce(ReduceError::FuelExhausted(_)) => Failure::Fuel(e.to_string()),
            RegistryError::Reduce(ReduceError::Invalid(_)) => Failure::Reject(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read_instance(path: &Path) -> Result<InstanceFile, Failure> {
    let s = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    Ok(InstanceFile::from_json(&s)?)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, format!("{text}\n")).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            // A closed pipe is not an error for a batch tool.
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn verdict_status(v: &str, detail: Option<&str>) -> Result<(), Failure> {
    match v {
        "accept" => Ok(()),
        "reject" => Err(Failure::Reject(detail.unwrap_or("rejected").into())),
        _ => Err(Failure::Fuel("verdict undetermined at the requested depth".into())),
    }
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Gen { generator, seed, size, output } => {
            let f = registry::generate(&generator, seed, size)?;
            emit(&f.to_json(), output.as_deref())
        }
        Command::Run { reduction, instance, oracle, depth, fuel, output } => {
            let f = read_instance(&instance)?;
            let trace = registry::run(&reduction, &f, oracle.as_deref(), depth, fuel)?;
            let text = serde_json::to_string_pretty(&trace).expect("traces serialize");
            emit(&text, output.as_deref())?;
            let last = trace.verdicts.last();
            verdict_status(trace.final_verdict(), last.and_then(|v| v.detail.as_deref()))
        }
        Command::Verify { instance, solution, depth } => {
            let f = read_instance(&instance)?;
            let sol = match solution {
                Some(p) => {
                    let s = fs::read_to_string(&p).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    Some(serde_json::from_str(&s).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?)
                }
                None => None,
            };
            let v = registry::verify_file(&f, sol.as_ref(), depth)?;
            emit(&v.to_string(), None)?;
            match v {
                Verdict::Accept => Ok(()),
                Verdict::Reject(r) => Err(Failure::Reject(r)),
                Verdict::Undetermined => Err(Failure::Fuel("undetermined".into())),
            }
        }
        Command::List => emit(&serde_json::to_string_pretty(&registry::list()).expect("registry serializes"), None),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, msg) = match f {
                Failure::Usage(m) => (EXIT_USAGE, m),
                Failure::Reject(m) => (EXIT_REJECT, m),
                Failure::Fuel(m) => (EXIT_FUEL, m),
            };
            eprintln!("realizer: {msg}");
            ExitCode::from(code)
        }
    }
}
