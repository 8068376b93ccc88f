use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use superchi::app::{execute, Invocation, Mode, OutputFormat};

#[derive(Parser)]
#[command(name = "superchi", version, about = "Susceptibilities of superradiant two-level emitters")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary chi1/chi3 over a detuning grid
    Sweep(Common),
    /// Switch-on dynamics of chi3(t) at one detuning
    Transient(Common),
    /// Plug-back, oracle-equivalence and physicality checks
    Verify(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (stdout if omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,
    /// Override one config key, e.g. --set gamma_d=0.05
    #[arg(long = "set", value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

fn main() -> ExitCode {
    // usage errors are validation errors (1), not clap's default 2
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (mode, c) = match cli.command {
        Command::Sweep(c) => (Mode::Sweep, c),
        Command::Transient(c) => (Mode::Transient, c),
        Command::Verify(c) => (Mode::Verify, c),
    };
    let inv = Invocation {
        config: c.config,
        out: c.out,
        format: c.format.map(|f| match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }),
        jobs: c.jobs,
        sets: c.sets,
    };
    match execute(mode, &inv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("superchi: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
