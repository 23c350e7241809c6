mod commands;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Exit status: 0 ok, 1 usage, 2 parse error, 3 verification mismatch.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl std::fmt::Display) -> Self {
        Self {
            code: 1,
            message: message.to_string(),
        }
    }

    pub fn parse(message: impl std::fmt::Display) -> Self {
        Self {
            code: 2,
            message: message.to_string(),
        }
    }

    pub fn mismatch(message: impl std::fmt::Display) -> Self {
        Self {
            code: 3,
            message: message.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "landscape", version, about = "Clusters of viable genotypes in 2-SAT fitness landscapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum InputFormat {
    Auto,
    Native,
    Dimacs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum StdoutKind {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FaultArg {
    FlipComparability,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Strong components, splitting pairs and exact cluster count of a formula.
    Analyze {
        input: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: ReportFormat,
        #[arg(long = "input-format", value_enum, default_value = "auto")]
        input_format: InputFormat,
    },
    /// Monte Carlo campaign over the random ensemble p = c / 2n.
    Simulate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "max-cycle-len", default_value_t = landscape::ensemble::DEFAULT_MAX_CYCLE_LEN)]
        max_cycle_len: usize,
        /// What to print on stdout.
        #[arg(long, value_enum, default_value = "csv")]
        out: StdoutKind,
        /// Also write the per-trial CSV here.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also write the JSON summary here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write an SVG histogram of Y with the Poisson overlay.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check analytic results against brute-force enumeration on random formulas.
    Verify {
        #[arg(long = "n-max", default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
        #[arg(long = "c-list", value_delimiter = ',', default_value = "0.3,0.5,0.8,1.2")]
        c_list: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Viable genotype pairs checked per formula.
        #[arg(long, default_value_t = 10)]
        pairs: usize,
        #[arg(long = "inject-fault", value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
    /// Mutational path between two viable genotypes.
    Path {
        input: PathBuf,
        /// Start genotype as a binary string, leftmost character is locus 1.
        u: String,
        v: String,
        #[arg(long = "input-format", value_enum, default_value = "auto")]
        input_format: InputFormat,
    },
    /// Write a random formula from the ensemble.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "native")]
        format: InputFormat,
    },
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            input,
            format,
            input_format,
        } => commands::analyze(&input, input_format, format),
        Command::Simulate {
            n,
            c,
            trials,
            seed,
            max_cycle_len,
            out,
            csv,
            json,
            svg,
        } => {
            let cfg = landscape::ensemble::EnsembleConfig {
                n,
                c,
                trials,
                seed,
                max_cycle_len,
            };
            commands::simulate(&cfg, out, csv.as_deref(), json.as_deref(), svg.as_deref())
        }
        Command::Verify {
            n_max,
            cases,
            c_list,
            seed,
            pairs,
            inject_fault,
        } => {
            let mut cfg = landscape::verify::VerifyConfig::new(n_max, cases, c_list, seed);
            cfg.pairs_per_case = pairs;
            if let Some(FaultArg::FlipComparability) = inject_fault {
                cfg.fault = landscape::verify::Fault::FlipComparability;
            }
            commands::verify(&cfg)
        }
        Command::Path {
            input,
            u,
            v,
            input_format,
        } => commands::path(&input, input_format, &u, &v),
        Command::Generate { n, c, seed, format } => commands::generate(n, c, seed, format),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("error: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
