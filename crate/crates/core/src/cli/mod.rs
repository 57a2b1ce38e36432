//! The `voucherkit` command-line surface.
//!
//! Subcommands: `validate`, `estimate`, `bootstrap`, `impact`, `simulate`.
//! Exit codes: 0 success, 1 validation failure, 2 configuration error,
//! 3 internal numeric failure. `VOUCHERKIT_SEED` and `VOUCHERKIT_OUT_DIR`
//! provide environment defaults; explicit flags win.

mod commands;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "voucherkit",
    version,
    about = "Behavioral estimation and regional impact analysis for consumption-voucher surveys"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Directory for machine-readable outputs.
    #[arg(long, global = true, env = "VOUCHERKIT_OUT_DIR", default_value = "out")]
    out_dir: PathBuf,

    /// Machine output format; `text` writes no files.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// α/2 and 1−α/2 percentiles.
    TwoSided,
    /// α and 1−α percentiles.
    OneSided,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a survey file against the schema and report every problem row.
    Validate {
        /// Survey CSV file.
        survey: PathBuf,
        /// Voucher configuration TOML (defaults to the built-in program
        /// configuration).
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Point estimates: substitution and induced rates per group, counts,
    /// and treatment intensity when a bonus wave is present.
    Estimate {
        survey: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Reporting dimensions, e.g. `gender` or `gender,residence`;
        /// repeat the flag for several tables. Default: gender, residence,
        /// and age marginals.
        #[arg(long = "group-by")]
        group_by: Vec<String>,
        /// Include bonus-wave records in the rate estimates (they are
        /// otherwise reserved for the intensity comparison).
        #[arg(long)]
        include_extra_wave: bool,
    },
    /// Stratified bootstrap confidence regions for the bound pair.
    Bootstrap {
        survey: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Significance level α.
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Bootstrap replications B_s.
        #[arg(long, default_value_t = 2000)]
        replications: u32,
        #[arg(long, env = "VOUCHERKIT_SEED", default_value_t = 0)]
        seed: u64,
        /// Reporting dimensions (repeatable); default: gender, residence,
        /// and age marginals.
        #[arg(long = "group-by")]
        group_by: Vec<String>,
        /// Stratification for resampling and the bias bound; reporting
        /// groups must coarsen it. Default: gender,residence,age.
        #[arg(long)]
        bias_group_by: Option<String>,
        #[arg(long, value_enum, default_value_t = ModeArg::TwoSided)]
        percentile_mode: ModeArg,
        /// Also render one interval chart per voucher × metric.
        #[arg(long)]
        svg: bool,
        /// Include bonus-wave records in the ES/IC resampling (they are
        /// otherwise reserved for the intensity comparison).
        #[arg(long)]
        include_extra_wave: bool,
    },
    /// Sector-level GDP impact and output multipliers per scenario.
    Impact {
        /// Sector table CSV (defaults to the built-in 19-sector table).
        table: Option<PathBuf>,
        /// Scenario TOML (defaults to the built-in
        /// baseline/pessimistic/optimistic set).
        scenarios: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Generate a synthetic survey plus its ground-truth sidecar.
    Simulate {
        /// Population spec TOML (defaults to the built-in demonstration
        /// population).
        popspec: Option<PathBuf>,
        /// Overrides the seed recorded in the population spec.
        #[arg(long, env = "VOUCHERKIT_SEED")]
        seed: Option<u64>,
    },
}

/// Errors mapped onto process exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Exit 1: the input data failed validation.
    Validation(String),
    /// Exit 2: configuration problem (flags, config files, schemes).
    Config(String),
    /// Exit 3: internal numeric failure.
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Config(m) | CliError::Numeric(m) => m,
        }
    }
}

/// Parse arguments from the process environment and run.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    run(cli)
}

fn run(cli: Cli) -> ExitCode {
    let result = match cli.command {
        Command::Validate { ref survey, ref config } => {
            commands::validate(survey, config.as_deref())
        }
        Command::Estimate { ref survey, ref config, ref group_by, include_extra_wave } => {
            commands::estimate(
                survey,
                config.as_deref(),
                group_by,
                include_extra_wave,
                &cli.out_dir,
                cli.format,
            )
        }
        Command::Bootstrap {
            ref survey,
            ref config,
            alpha,
            replications,
            seed,
            ref group_by,
            ref bias_group_by,
            percentile_mode,
            svg,
            include_extra_wave,
        } => commands::bootstrap(
            survey,
            config.as_deref(),
            alpha,
            replications,
            seed,
            group_by,
            bias_group_by.as_deref(),
            percentile_mode,
            svg,
            include_extra_wave,
            &cli.out_dir,
            cli.format,
        ),
        Command::Impact { ref table, ref scenarios, ref config } => commands::impact(
            table.as_deref(),
            scenarios.as_deref(),
            config.as_deref(),
            &cli.out_dir,
            cli.format,
        ),
        Command::Simulate { ref popspec, seed } => {
            commands::simulate(popspec.as_deref(), seed, &cli.out_dir)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
