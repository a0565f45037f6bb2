use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hh_core::cdg::validate_cdg;
use hh_core::hochschild::render_pairs;
use hh_core::descriptor::{parse_descriptor, AlgebraDescriptor};
use hh_core::report::{parse_degrees, parse_schedule, run_hh, HhRequest, Pipeline, RunError};
use hh_core::verify::{self, Mutation, Suite};

const OK: u8 = 0;
const FAILED: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "hh", version, about = "Hochschild cohomology of the second kind for curved dg-algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the cdg axioms of a descriptor.
    Validate { file: PathBuf },
    /// Compute HH in a range of degrees.
    Hh {
        file: PathBuf,
        #[arg(long)]
        pipeline: Option<Pipeline>,
        /// `a..b` or `a,b,c`
        #[arg(long, default_value = "0..3")]
        degrees: String,
        /// `N:D,N:D`
        #[arg(long)]
        schedule: Option<String>,
        #[arg(long)]
        representatives: bool,
        /// Write the report here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        /// `d1:<column>:<slot>` or `cofactor:<i>[:<term>]`
        #[arg(long)]
        mutate: Option<Mutation>,
    },
}

fn load(file: &PathBuf) -> Result<AlgebraDescriptor, String> {
    let text = std::fs::read_to_string(file).map_err(|e| format!("{}: {e}", file.display()))?;
    parse_descriptor(&text).map_err(|e| format!("{}: {e}", file.display()))
}

fn validate(file: &PathBuf) -> u8 {
    let d = match load(file) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let a = match d.build() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {}: {e}", file.display());
            return USAGE;
        }
    };
    let violations = validate_cdg(&a);
    if violations.is_empty() {
        println!("ok: dimension {}, curved: {}", a.dim(), a.is_curved());
        return OK;
    }
    for v in &violations {
        println!("violation {:?} on ({}): {}", v.axiom, v.basis.join(", "), render_pairs(&v.deviation));
    }
    println!("{} violations", violations.len());
    FAILED
}

fn hh(
    file: &PathBuf,
    pipeline: Option<Pipeline>,
    degrees: String,
    schedule: Option<String>,
    representatives: bool,
    output: Option<PathBuf>,
) -> u8 {
    let d = match load(file) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let degrees = match parse_degrees(&degrees) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let schedule = match schedule.map(|s| parse_schedule(&s)).transpose() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return USAGE;
        }
    };
    let req = HhRequest {
        pipeline,
        degrees,
        schedule,
        representatives,
    };
    let report = match run_hh(&d, &req) {
        Ok(r) => r,
        Err(RunError::Usage(e)) => {
            eprintln!("error: {e}");
            return USAGE;
        }
        Err(RunError::Compute(e)) => {
            eprintln!("error: {e}");
            return FAILED;
        }
    };
    let text = serde_json::to_string_pretty(&report).expect("reports serialize");
    match output {
        Some(p) => {
            if let Err(e) = std::fs::write(&p, text + "\n") {
                eprintln!("error: {}: {e}", p.display());
                return USAGE;
            }
        }
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
        }
    }
    if !report.stabilized {
        eprintln!("not stabilized over the schedule");
    }
    if report.agreement == Some(false) {
        eprintln!("bar and koszul pipelines disagree");
    }
    if report.success() {
        OK
    } else {
        FAILED
    }
}

fn run_verify(suite: Suite, mutate: Option<Mutation>) -> u8 {
    let results = verify::run(suite, mutate);
    let mut failed = 0;
    for r in &results {
        println!("{r}");
        if r.failures > 0 {
            failed += 1;
        }
    }
    println!("{} checks, {failed} failed", results.len());
    if failed == 0 {
        OK
    } else {
        FAILED
    }
}

fn main() -> ExitCode {
    hh_core::par::init_from_env();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE } else { OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Hh {
            file,
            pipeline,
            degrees,
            schedule,
            representatives,
            output,
        } => hh(&file, pipeline, degrees, schedule, representatives, output),
        Command::Verify { suite, mutate } => run_verify(suite, mutate),
    };
    ExitCode::from(code)
}
