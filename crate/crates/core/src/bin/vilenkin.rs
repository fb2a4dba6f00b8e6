use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vilenkin::cli::{configure_threads, CliError, Command, ExperimentConfig, RawConfig};

#[derive(Parser)]
#[command(
    name = "vilenkin",
    version,
    about = "Harmonic analysis experiments on bounded Vilenkin groups"
)]
struct Args {
    #[command(subcommand)]
    command: Sub,
    /// Flat key=value config file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// `walsh`, `const:b`, `cycle:a,b,..` or an explicit list `a,b,c`.
    #[arg(long, global = true)]
    generator: Option<String>,
    #[arg(long, global = true)]
    depth: Option<String>,
    /// `const:c`, `log`, `logpow:t`, `loglog` or `table:v1,v2,..`.
    #[arg(long, global = true)]
    phi: Option<String>,
    /// `4,5,6`, `4..11`, `auto`, `greedy:K` or `greedy:K:base`.
    #[arg(long, global = true)]
    alphas: Option<String>,
    #[arg(long, global = true)]
    nmax: Option<String>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    #[arg(long, global = true)]
    tol: Option<String>,
}

#[derive(Subcommand, Clone, Copy)]
enum Sub {
    /// Kernel identities and inequalities.
    Verify,
    /// Dirichlet and Fejér kernel values.
    Kernels,
    /// Lebesgue constants.
    Lebesgue,
    /// Mean digit variation per rank.
    Variation,
    /// Growth table of the Fejér-mean counterexample.
    Counterexample,
}

fn config(args: &Args) -> Result<ExperimentConfig, CliError> {
    let mut raw = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    let overrides = [
        ("generator", &args.generator),
        ("depth", &args.depth),
        ("phi", &args.phi),
        ("alphas", &args.alphas),
        ("nmax", &args.nmax),
        ("outdir", &args.out),
        ("seed", &args.seed),
        ("tol", &args.tol),
    ];
    for (key, value) in overrides {
        if let Some(value) = value {
            raw.set(key, value)?;
        }
    }
    ExperimentConfig::from_raw(&raw)
}

fn run(args: &Args) -> Result<i32, CliError> {
    configure_threads(std::env::var("VILENKIN_THREADS").ok().as_deref())?;
    let cfg = config(args)?;
    let command = match args.command {
        Sub::Verify => Command::Verify,
        Sub::Kernels => Command::Kernels,
        Sub::Lebesgue => Command::Lebesgue,
        Sub::Variation => Command::Variation,
        Sub::Counterexample => Command::Counterexample,
    };
    let output = command.run(&cfg)?;
    output.write_to(&cfg.outdir)?;
    print!("{}", output.summary);
    Ok(output.exit_code())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("vilenkin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
