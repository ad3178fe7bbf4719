use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cpc_cli::commands::{self, CliError, Output, Pair, ReportFormat, Strategy};

#[derive(Parser)]
#[command(name = "cpc", version, about = "CPC power analysis of single-phase LTI loads")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print every power quantity of the circuit.
    Report {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = FormatArg::Table)]
        format: FormatArg,
    },
    /// Split the load current into its components and write waveforms.
    Decompose {
        file: PathBuf,
        /// Output files are `<prefix>_<component>.csv`.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Size a compensator and compare the circuit before and after.
    Compensate {
        file: PathBuf,
        #[arg(long, value_enum)]
        strategy: StrategyArg,
        #[arg(long, value_enum, default_value_t = CompFormatArg::Table)]
        format: CompFormatArg,
    },
    /// Voltage-current loops of the source current and its components.
    Lissajous {
        file: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "source")]
        pairs: Vec<PairArg>,
        #[arg(long)]
        samples: Option<usize>,
        /// Write `<prefix>_<pair>.csv` for each pair.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum CompFormatArg {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Budeanu,
    Iliovici,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairArg {
    Source,
    Active,
    Scattered,
    Reactive,
    Iliovici,
    #[value(name = "scattered_reactive")]
    ScatteredReactive,
    G,
}

impl From<PairArg> for Pair {
    fn from(p: PairArg) -> Self {
        match p {
            PairArg::Source => Pair::Source,
            PairArg::Active => Pair::Active,
            PairArg::Scattered => Pair::Scattered,
            PairArg::Reactive => Pair::Reactive,
            PairArg::Iliovici => Pair::Iliovici,
            PairArg::ScatteredReactive => Pair::ScatteredReactive,
            PairArg::G => Pair::G,
        }
    }
}

fn samples(flag: Option<usize>) -> Result<usize, CliError> {
    let env = std::env::var(commands::SAMPLES_ENV).ok();
    commands::resolve_samples(flag, env.as_deref())
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Report { file, format } => {
            let format = match format {
                FormatArg::Table => ReportFormat::Table,
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            };
            commands::report(&commands::load_circuit(&file)?, format)
        }
        Command::Decompose { file, out, samples: m } => {
            let m = samples(m)?;
            commands::decompose(&commands::load_circuit(&file)?, &out, m)
        }
        Command::Compensate { file, strategy, format } => {
            let strategy = match strategy {
                StrategyArg::Budeanu => Strategy::Budeanu,
                StrategyArg::Iliovici => Strategy::Iliovici,
                StrategyArg::Full => Strategy::Full,
            };
            let json = matches!(format, CompFormatArg::Json);
            commands::compensate(&commands::load_circuit(&file)?, strategy, json)
        }
        Command::Lissajous { file, pairs, samples: m, out } => {
            let m = samples(m)?;
            let pairs: Vec<Pair> = pairs.into_iter().map(Pair::from).collect();
            commands::lissajous(&commands::load_circuit(&file)?, &pairs, m, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            for w in &out.warnings {
                eprintln!("{w}");
            }
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("cpc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
