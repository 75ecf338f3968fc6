mod error;
mod run;
mod scenario;

use clap::{Parser, Subcommand};
use error::{CliError, INPUT_ERROR};
use run::{extract_certificate, Flags, Report};
use scenario::{parse_scenario, Command, Kind, Scenario, Verb};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Quadratic descent of totally decomposable orthogonal involutions over F_q(t).
#[derive(Parser, Debug)]
#[command(name = "qdescent", version)]
struct Cli {
    /// Height bound for every bounded search.
    #[arg(long, global = true, default_value_t = 3)]
    height_bound: usize,
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for polynomial factorization tie-breaking.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run the command line of a scenario file.
    Run {
        file: PathBuf,
        /// Write the descent certificate, if any, to this file.
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Decide descent for the algebra of a scenario file.
    Descend {
        file: PathBuf,
        /// Require a separable extension header.
        #[arg(long, conflicts_with = "insep")]
        sep: bool,
        /// Require an inseparable extension header.
        #[arg(long)]
        insep: bool,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Re-check a certificate, bare or embedded in a report.
    VerifyCert { file: PathBuf },
    /// The split quaternion algebra [0, lambda + delta + eta) over F(eta).
    PaperExample {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value_t = 2)]
        q: u32,
    },
}

fn load(path: &Path) -> Result<Scenario, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

fn execute(cli: &Cli) -> Result<(Report, Option<&PathBuf>), CliError> {
    let flags = Flags { height_bound: cli.height_bound };
    match &cli.cmd {
        Cmd::Run { file, cert_out } => Ok((run::run(&load(file)?, flags)?, cert_out.as_ref())),
        Cmd::Descend { file, sep, insep, cert_out } => {
            let mut sc = load(file)?;
            match (&sc.kind, sep, insep) {
                (Kind::Sep { .. }, false, true) | (Kind::Insep, true, false) => {
                    return Err(CliError::Usage("the extension flag does not match the field header".into()))
                }
                _ => {}
            }
            sc.command = Some(Command { verb: Verb::Descend, flags: Vec::new() });
            Ok((run::run(&sc, flags)?, cert_out.as_ref()))
        }
        Cmd::VerifyCert { file } => {
            let text = std::fs::read_to_string(file).map_err(|e| CliError::Io(format!("{}: {e}", file.display())))?;
            Ok((run::verify(&extract_certificate(&text)?), None))
        }
        Cmd::PaperExample { lambda, delta, q } => {
            if !q.is_power_of_two() || !(2..=256).contains(q) {
                return Err(CliError::Usage(format!("q = {q} must be a power of 2 between 2 and 256")));
            }
            let sc = Scenario {
                q: *q,
                kind: Kind::Base,
                statements: Vec::new(),
                command: Some(Command {
                    verb: Verb::PaperExample,
                    flags: vec![("lambda".into(), lambda.clone()), ("delta".into(), delta.clone())],
                }),
            };
            Ok((run::run(&sc, flags)?, None))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT_ERROR as u8 } else { 0 });
        }
    };
    if let Some(seed) = cli.seed {
        descent_core::poly::set_factor_seed(seed);
    }
    match execute(&cli) {
        Ok((report, cert_out)) => {
            print!("{}", report.render(cli.json));
            if let (Some(path), Some(cert)) = (cert_out, &report.certificate) {
                let text = serde_json::to_string_pretty(cert).expect("certificates serialize") + "\n";
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: {}: {e}", path.display());
                    return ExitCode::from(INPUT_ERROR as u8);
                }
            }
            ExitCode::from(report.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(INPUT_ERROR as u8)
        }
    }
}
