use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sgen_cli::commands::{self, Outcome, Status};
use sgen_cli::doc::{parse, to_pretty, AlgebraDocument, ElementSource};
use sgen_core::algebra::DEFAULT_TRIALS;
use sgen_core::synth::DEFAULT_SEED;

#[derive(Parser, Debug)]
#[command(name = "sgen", version)]
/// Single-generator synthesis for semisimple algebras with an involutive
/// anti-automorphism.
///
/// Exit codes: 0 success, 1 certification negative, 2 structural
/// obstruction, 3 input or axiom failure, 4 numeric or retry failure.
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the involution axioms of an algebra document.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// Report the canonical form of each orbit.
    Normalize { path: PathBuf },
    /// Find a certified generator and write its certificate.
    Synthesize {
        path: PathBuf,
        /// Overrides the document seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        retries: Option<usize>,
        /// Certificate output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check an element (or a certificate) against an algebra document.
    Certify { algebra: PathBuf, element: PathBuf },
    /// Closure of a single element of M_n.
    DemoCounterexample {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Use the identity instead of a random element.
        #[arg(long)]
        identity: bool,
    },
    /// Single generator of End(V ⊗ V) under the flip-transpose involution.
    DemoTensor {
        #[arg(long = "dim", default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Certificate output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String, Outcome> {
    fs::read_to_string(path).map_err(|e| failure(format!("{}: {e}", path.display())))
}

fn failure(msg: String) -> Outcome {
    Outcome {
        status: Status::InputFailure,
        report: serde_json::json!({ "error": msg }),
        certificate: None,
    }
}

fn algebra(path: &Path) -> Result<AlgebraDocument, Outcome> {
    parse(&read(path)?, &path.display().to_string()).map_err(|e| failure(e.0))
}

fn run(cli: Cli) -> Result<(Outcome, Option<PathBuf>), Outcome> {
    Ok(match cli.command {
        Command::Verify { path, trials } => (commands::verify(&algebra(&path)?, trials), None),
        Command::Normalize { path } => (commands::normalize(&algebra(&path)?), None),
        Command::Synthesize {
            path,
            seed,
            retries,
            out,
        } => {
            let doc = algebra(&path)?;
            eprintln!("seed: {}", seed.or(doc.seed).unwrap_or(DEFAULT_SEED));
            (commands::synthesize(&doc, seed, retries), out)
        }
        Command::Certify { algebra: a, element } => {
            let doc = algebra(&a)?;
            let src: ElementSource =
                parse(&read(&element)?, &element.display().to_string()).map_err(|e| failure(e.0))?;
            (commands::certify(&doc, &src), None)
        }
        Command::DemoCounterexample {
            n,
            samples,
            seed,
            identity,
        } => (commands::demo_counterexample(n, samples, seed, identity), None),
        Command::DemoTensor { dim, seed, out } => {
            eprintln!("seed: {seed}");
            (commands::demo_tensor(dim, seed), out)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let synthesize = matches!(cli.command, Command::Synthesize { .. });
    let (outcome, out) = match run(cli) {
        Ok(v) => v,
        Err(o) => (o, None),
    };
    match (&outcome.certificate, out) {
        (Some(cert), Some(path)) => {
            if let Err(e) = fs::write(&path, to_pretty(cert)) {
                eprintln!("{}: {e}", path.display());
                return ExitCode::from(Status::InputFailure.code());
            }
            print!("{}", to_pretty(&outcome.report));
        }
        // Without --out the certificate itself is the output of synthesize.
        (Some(cert), None) if synthesize => print!("{}", to_pretty(cert)),
        _ => print!("{}", to_pretty(&outcome.report)),
    }
    if outcome.status != Status::Success {
        if let Some(msg) = outcome.report.get("error").and_then(|v| v.as_str()) {
            eprintln!("error: {msg}");
        }
    }
    ExitCode::from(outcome.status.code())
}
