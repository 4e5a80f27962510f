use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use germ_core::spectrum::{Which, DEFAULT_DIVERGENCE_THRESHOLD};
use germ_core::{Error, GermDocument};

mod report;

use report::{Report, SolveMode};

#[derive(Parser)]
#[command(name = "germ", version, about = "Formal linearization and small-divisor diagnostics for holomorphic germs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format on stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    report: Format,
    /// Also write the main table as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Linearize,
    NormalForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichArg {
    Partial,
    Reduced,
}

#[derive(Subcommand)]
enum Command {
    /// Resonant pairs, the sets K1~ and K2~, and the level-s verdict.
    Resonances {
        file: PathBuf,
        /// Largest |k| enumerated (default: the document's truncation).
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Formal linearization or Poincaré–Dulac normal form.
    Linearize {
        file: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, value_enum, default_value_t = ModeArg::Linearize)]
        mode: ModeArg,
        /// Normalize, then report growth and majorant domination.
        #[arg(long)]
        diagnostics: bool,
    },
    /// ω tables and a finite-horizon Brjuno sum.
    Brjuno {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = WhichArg::Reduced)]
        which: WhichArg,
        /// `pow2` or a comma-separated list starting at 1.
        #[arg(long, default_value = "pow2")]
        sequence: String,
        #[arg(long, default_value_t = 10)]
        horizon: usize,
        /// Tabulate ω only up to this m.
        #[arg(long)]
        m_max: Option<u32>,
        #[arg(long, default_value_t = DEFAULT_DIVERGENCE_THRESHOLD)]
        threshold: f64,
    },
    /// α sequence, δ table, counting bound and growth bound.
    Majorant {
        file: PathBuf,
        #[arg(long)]
        degree: Option<u32>,
        /// Sequence for the growth bound.
        #[arg(long, default_value = "pow2")]
        sequence: String,
    },
    /// Read the osculating normal-form conditions off the tail.
    CheckForm { file: PathBuf },
}

enum Failure {
    Input(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Document(_)
            | Error::Invalid(_)
            | Error::Shape(_)
            | Error::ConstantTerm
            | Error::ModeMismatch { .. }
            | Error::NotDiagonal
            | Error::ZeroDivisor { .. }
            | Error::InK2(_)
            | Error::OutOfRange { .. }
            | Error::Domain(_)
            | Error::Unsupported(_) => Failure::Input(e.to_string()),
        }
    }
}

fn load(path: &Path) -> Result<GermDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(GermDocument::parse(&text)?)
}

fn run(cli: &Cli) -> Result<Report, Failure> {
    Ok(match &cli.command {
        Command::Resonances { file, degree } => report::resonances(&load(file)?, *degree)?,
        Command::Linearize { file, degree, mode, diagnostics } => {
            let mode = match mode {
                ModeArg::Linearize => SolveMode::Linearize,
                ModeArg::NormalForm => SolveMode::NormalForm,
            };
            report::linearize(&load(file)?, *degree, mode, *diagnostics)?
        }
        Command::Brjuno { file, which, sequence, horizon, m_max, threshold } => {
            let which = match which {
                WhichArg::Partial => Which::Partial,
                WhichArg::Reduced => Which::Reduced,
            };
            let seq = report::parse_sequence(sequence)?;
            report::brjuno(&load(file)?, which, &seq, *horizon, *m_max, *threshold)?
        }
        Command::Majorant { file, degree, sequence } => {
            report::majorant(&load(file)?, *degree, &report::parse_sequence(sequence)?)?
        }
        Command::CheckForm { file } => report::check_form(&load(file)?)?,
    })
}

fn write_csv(path: &Path, csv: &report::Csv) -> Result<(), Failure> {
    let internal = |e: csv::Error| Failure::Internal(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(internal)?;
    w.write_record(&csv.header).map_err(internal)?;
    for row in &csv.rows {
        w.write_record(row).map_err(internal)?;
    }
    w.flush().map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(&cli).and_then(|rep| {
        if let Some(path) = &cli.csv {
            match &rep.csv {
                Some(csv) => write_csv(path, csv)?,
                None => return Err(Failure::Input("this command has no table to write as CSV".into())),
            }
        }
        Ok(rep)
    });
    match outcome {
        Ok(rep) => {
            match cli.report {
                Format::Json => println!("{}", serde_json::to_string_pretty(&rep.json).expect("report serializes")),
                Format::Text => print!("{}", rep.text),
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("germ: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("germ: internal error: {msg}");
            ExitCode::from(1)
        }
    }
}
