//! `fourfold`: analyze closed oriented 4-manifolds from invariant files or
//! built-in family fixtures.
//!
//! Exit codes: 0 success, 1 parse or usage error, 2 invariant validation
//! failure.

use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fourfold::obstruction::DEFAULT_SEARCH_BOUND;
use fourfold::{
    analyze, enumerate, family_invariants, parse_manifold, render_manifold, validate, AnalysisOptions, Error,
    FamilyId, ManifoldInvariants,
};

#[derive(Parser)]
#[command(name = "fourfold", version, about = "Structure obstructions for closed oriented 4-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate, then decide almost complex, symplectic and complex structures.
    Analyze {
        #[command(flatten)]
        input: Input,
        /// Accept that pi1 differs from every surviving rational or ruled model.
        #[arg(long)]
        assume_pi1_distinct: bool,
        #[command(flatten)]
        bound: Bound,
        /// Append every Chern class within the bound.
        #[arg(long)]
        witnesses: bool,
        #[arg(long)]
        json: bool,
    },
    /// List the Chern classes within the bound, with a completeness marker.
    Enumerate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        bound: Bound,
        #[arg(long)]
        json: bool,
    },
    /// Print the manifold file of a family member.
    Family {
        /// e.g. "M3 g=2 n=3"
        #[arg(long)]
        family: String,
    },
    /// Check the consistency of a record without deciding anything.
    Validate {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Family identifier such as "M1 g=2" or "M4 n=3".
    #[arg(long)]
    family: Option<String>,
    /// Manifold description file; `-` reads standard input.
    #[arg(long)]
    file: Option<String>,
}

#[derive(Args)]
struct Bound {
    /// Maximum |coefficient| searched.
    #[arg(long, env = "FOURFOLD_BOUND", default_value_t = DEFAULT_SEARCH_BOUND)]
    bound: u64,
}

enum Failure {
    Parse(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invalid(_) => Failure::Invalid(e.to_string()),
            other => Failure::Parse(other.to_string()),
        }
    }
}

fn load(input: &Input) -> Result<ManifoldInvariants, Failure> {
    if let Some(spec) = &input.family {
        let id: FamilyId = spec.parse()?;
        return Ok(family_invariants(id)?);
    }
    let path = input.file.as_deref().expect("clap enforces one input");
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Parse(format!("reading standard input: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Parse(format!("reading {path}: {e}")))?
    };
    Ok(parse_manifold(&text)?)
}

fn run(command: Command) -> Result<(String, bool), Failure> {
    match command {
        Command::Analyze {
            input,
            assume_pi1_distinct,
            bound,
            witnesses,
            json,
        } => {
            let m = load(&input)?;
            let opts = AnalysisOptions {
                bound: bound.bound,
                assume_pi1_distinct,
                enumerate: witnesses,
            };
            let r = analyze(&m, &opts)?;
            Ok((if json { r.to_json() } else { r.to_text() }, true))
        }
        Command::Enumerate { input, bound, json } => {
            let m = load(&input)?;
            let r = enumerate(&m, bound.bound)?;
            Ok((if json { r.to_json() } else { r.to_text() }, true))
        }
        Command::Family { family } => {
            let id: FamilyId = family.parse()?;
            Ok((render_manifold(&family_invariants(id)?), true))
        }
        Command::Validate { input, json } => {
            let m = load(&input)?;
            let r = validate(&m);
            Ok((if json { r.to_json() } else { r.to_text() }, r.valid))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok((out, ok)) => {
            let mut stdout = io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            let _ = stdout.flush();
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
