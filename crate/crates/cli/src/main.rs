use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use statcat_cli::{execute, CliError, Command};

/// Exact-arithmetic checks on finite statistical models with
/// machine-checkable certificates.
///
/// Exit codes: 0 = the property holds, 1 = it fails (the certificate
/// carries a witness), 2 = input or usage error.
#[derive(Debug, Parser)]
#[command(name = "statcat", version, about)]
struct Cli {
    /// Write the certificate to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Decide whether a statistic is sufficient for a model family.
    Sufficient {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Restrict to these family members (comma-separated names).
        #[arg(long, value_delimiter = ',')]
        members: Option<Vec<String>>,
    },
    /// Decide whether a statistic is complete for its target model.
    Complete {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Target model file; defaults to the pushforward of --model.
        #[arg(long)]
        target: Option<PathBuf>,
        /// σ-algebra file overriding the source σ-algebra.
        #[arg(long)]
        source_sigma: Option<PathBuf>,
    },
    /// Decide statistical equivalence along a statistic by three routes.
    Equivalent {
        #[arg(long)]
        model_a: PathBuf,
        #[arg(long)]
        model_b: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Also run the exhaustive map search (spaces of at most 4 points).
        #[arg(long)]
        oracle: bool,
        /// Worker threads for the three routes (output is identical).
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Classify the morphism a statistic induces (mono/epi/iso).
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Verify the Bayes identity for the induced conditionals.
    Bayes {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        map: PathBuf,
        /// Check a single family member (default: all plus dominating).
        #[arg(long)]
        member: Option<String>,
    },
    /// Run the generalized detailed-balance test over the family.
    Balance {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        map: PathBuf,
    },
    /// Kolmogorov quotient of the model's canonical topology.
    Quotient {
        #[arg(long)]
        model: PathBuf,
    },
    /// The canonical topology over the model family.
    CanonicalTopology {
        #[arg(long)]
        model: PathBuf,
    },
    /// Decide Kolmogorov equivalence of two canonical topologies.
    KqEquivalent {
        #[arg(long)]
        model_a: PathBuf,
        #[arg(long)]
        model_b: PathBuf,
    },
    /// Analyze the parametrisation block of a model document.
    Param {
        #[arg(long)]
        model: PathBuf,
    },
    /// A minimal identifiable parametrisation in the given category.
    Minimal {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "set")]
        category: String,
    },
    /// Decide structural equivalence in the Set or FinTop category.
    Structural {
        #[arg(long)]
        model_a: PathBuf,
        #[arg(long)]
        model_b: PathBuf,
        #[arg(long)]
        category: String,
    },
}

impl From<Sub> for Command {
    fn from(sub: Sub) -> Self {
        match sub {
            Sub::Sufficient {
                model,
                map,
                members,
            } => Command::Sufficient {
                model,
                map,
                members,
            },
            Sub::Complete {
                model,
                map,
                target,
                source_sigma,
            } => Command::Complete {
                model,
                map,
                target,
                source_sigma,
            },
            Sub::Equivalent {
                model_a,
                model_b,
                map,
                oracle,
                threads,
            } => Command::Equivalent {
                model_a,
                model_b,
                map,
                oracle,
                threads,
            },
            Sub::Classify { model, map } => Command::Classify { model, map },
            Sub::Bayes { model, map, member } => Command::Bayes { model, map, member },
            Sub::Balance { model, map } => Command::Balance { model, map },
            Sub::Quotient { model } => Command::Quotient { model },
            Sub::CanonicalTopology { model } => Command::CanonicalTopology { model },
            Sub::KqEquivalent { model_a, model_b } => Command::KqEquivalent { model_a, model_b },
            Sub::Param { model } => Command::Param { model },
            Sub::Minimal { model, category } => Command::Minimal { model, category },
            Sub::Structural {
                model_a,
                model_b,
                category,
            } => Command::Structural {
                model_a,
                model_b,
                category,
            },
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Command = cli.command.into();
    match execute(&command) {
        Ok(outcome) => {
            let write_result = match &cli.output {
                Some(path) => std::fs::write(path, outcome.certificate.as_bytes()),
                None => std::io::stdout().write_all(outcome.certificate.as_bytes()),
            };
            if let Err(err) = write_result {
                eprintln!("statcat: cannot write certificate: {err}");
                return ExitCode::from(2);
            }
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(err) => {
            eprintln!("statcat: {err}");
            if let CliError::Json { source, .. } = &err {
                eprintln!(
                    "statcat: at line {}, column {}",
                    source.line(),
                    source.column()
                );
            }
            ExitCode::from(2)
        }
    }
}
