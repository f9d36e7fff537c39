//! `thv`: command-line front end for the twisted Heisenberg-Virasoro engine.
//!
//! Exit codes: 0 success, 1 violations / refuted / inconsistent, 2 input error,
//! 3 window insufficient.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use thv_core::derivation::{decompose, sign_audit, DecomposeError, DerivationError};
use thv_core::formats::{read_assignment, read_samples, read_table};
use thv_core::report::{self, Report, Status};
use thv_core::two_local::{lemma_kernel_suite, reduce_by_theorem, TwoLocalError};
use thv_core::{bracket, jacobi_check, parse_element, CocycleSign, Coefficient};

#[derive(Parser, Debug)]
#[command(
    name = "thv",
    version,
    about = "Exact computations in the twisted Heisenberg-Virasoro algebra"
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SignArg {
    /// sigma = +1
    Paper,
    /// sigma = -1
    Consistent,
}

impl From<SignArg> for CocycleSign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Paper => CocycleSign::Paper,
            SignArg::Consistent => CocycleSign::Consistent,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket of two element expressions.
    Bracket {
        // Expressions may start with a minus sign.
        #[arg(allow_hyphen_values = true)]
        left: String,
        #[arg(allow_hyphen_values = true)]
        right: String,
        #[arg(long, value_enum, default_value_t = SignArg::Consistent)]
        sign: SignArg,
    },
    /// Jacobi identity over all basis triples with |index| <= N.
    Jacobi {
        #[arg(long)]
        max_degree: i64,
        #[arg(long, value_enum, default_value_t = SignArg::Consistent)]
        sign: SignArg,
    },
    /// Leibniz audit of D1, D2, D3 under both cocycle signs.
    Audit {
        #[arg(long)]
        max_degree: i64,
    },
    /// Decompose a tabulated derivation into ad(z) + alpha D1 + beta D2 + gamma D3.
    Decompose {
        #[arg(long)]
        table: PathBuf,
        /// Overrides the sign stored in the table file.
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
    },
    /// 2-local derivation commands.
    #[command(name = "two-local", subcommand)]
    TwoLocal(TwoLocalCommand),
}

#[derive(Subcommand, Debug)]
enum TwoLocalCommand {
    /// Run the reduction pipeline on an assignment file.
    Verify {
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        window: i64,
        #[arg(long)]
        samples: PathBuf,
        /// Overrides the sign stored in the assignment file.
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
    },
    /// Constraint-kernel shapes for single-element zero constraints.
    Lemmas {
        #[arg(long)]
        window: i64,
        #[arg(long, value_enum, default_value_t = SignArg::Consistent)]
        sign: SignArg,
    },
}

enum CliError {
    Input(String),
    Window(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Window(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Window(m) => m,
        }
    }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn two_local_err(e: TwoLocalError) -> CliError {
    match e {
        TwoLocalError::MissingKey(_) => CliError::Input(e.to_string()),
        TwoLocalError::NoWitnessAtWindow { .. }
        | TwoLocalError::WindowTooSmall(_)
        | TwoLocalError::Derivation(DerivationError::WindowTooSmall { .. }) => {
            CliError::Window(e.to_string())
        }
        TwoLocalError::Derivation(_) => CliError::Input(e.to_string()),
    }
}

fn run(command: Command, echo: Vec<String>) -> Result<Report, CliError> {
    match command {
        Command::Bracket { left, right, sign } => {
            let x = parse_element(&left).map_err(|e| input_err(format!("left operand: {e}")))?;
            let y = parse_element(&right).map_err(|e| input_err(format!("right operand: {e}")))?;
            let sign = sign.into();
            Ok(report::bracket_report(
                echo,
                sign,
                &x,
                &y,
                &bracket(&x, &y, sign),
            ))
        }
        Command::Jacobi { max_degree, sign } => {
            if max_degree < 1 {
                return Err(input_err("--max-degree must be at least 1"));
            }
            let r = jacobi_check::<Coefficient>(max_degree, sign.into());
            Ok(report::jacobi_report(echo, &r))
        }
        Command::Audit { max_degree } => {
            if max_degree < 2 {
                return Err(input_err("--max-degree must be at least 2"));
            }
            let r = sign_audit::<Coefficient>(max_degree)
                .map_err(|e| CliError::Window(e.to_string()))?;
            Ok(report::audit_report(echo, &r))
        }
        Command::Decompose { table, sign } => {
            let (file_sign, table) = read_table(&read_file(&table)?).map_err(input_err)?;
            let sign = sign
                .map(CocycleSign::from)
                .or(file_sign)
                .unwrap_or_default();
            let outcome = decompose(&table, sign);
            if let Err(DecomposeError::Derivation(e @ DerivationError::DomainTooSmall)) = &outcome {
                return Err(CliError::Window(e.to_string()));
            }
            Ok(report::decompose_report(echo, sign, &outcome))
        }
        Command::TwoLocal(TwoLocalCommand::Verify {
            assignment,
            window,
            samples,
            sign,
        }) => {
            if window < 1 {
                return Err(CliError::Window("--window must be at least 1".into()));
            }
            let (file_sign, assignment) =
                read_assignment(&read_file(&assignment)?).map_err(input_err)?;
            let samples = read_samples(&read_file(&samples)?).map_err(input_err)?;
            let sign = sign.map(CocycleSign::from).unwrap_or(file_sign);
            let cert =
                reduce_by_theorem(&assignment, window, &samples, sign).map_err(two_local_err)?;
            Ok(report::certificate_report(echo, &cert, assignment.len()))
        }
        Command::TwoLocal(TwoLocalCommand::Lemmas { window, sign }) => {
            let r =
                lemma_kernel_suite::<Coefficient>(window, sign.into()).map_err(two_local_err)?;
            Ok(report::lemma_report(echo, &r))
        }
    }
}

fn main() -> ExitCode {
    let echo: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli.command, echo) {
        Ok(report) => {
            match cli.output {
                OutputFormat::Json => print!("{}", report.to_json()),
                OutputFormat::Text => print!("{}", report.to_text()),
            }
            match report.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::Violations | Status::Refuted | Status::Inconsistent => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
