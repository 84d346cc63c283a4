//! `realhodge` command-line front end. JSON goes to stdout, a one-line
//! summary to stderr. Exit codes: 0 success, 1 failed check, 2 bad input.

mod claims;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("check failed: {0}")]
    Check(String),
}

impl From<realhodge::Error> for CliError {
    fn from(e: realhodge::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

/// Successful output: the JSON document, a summary line, and whether every
/// check it carries passed.
pub struct Report {
    pub json: Value,
    pub summary: String,
    pub ok: bool,
}

impl Report {
    pub fn ok(json: Value, summary: impl Into<String>) -> Self {
        Self {
            json,
            summary: summary.into(),
            ok: true,
        }
    }
}

#[derive(Parser)]
#[command(name = "realhodge", version, about = "Lattice computations for real abelian varieties")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// A real torus given by a JSON file or by elliptic factors.
#[derive(Args, Clone, Debug)]
pub struct TorusInput {
    /// JSON file with {"h1": lattice} or {"factors": [...]}; `-` reads stdin.
    #[arg(long, conflicts_with = "factors")]
    pub input: Option<PathBuf>,
    /// Comma-separated elliptic factors, each `connected` or `split`.
    #[arg(long, value_delimiter = ',')]
    pub factors: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum Command {
    /// Torsion profile of equivariant cohomology in degree 2k.
    Cohomology {
        #[command(flatten)]
        torus: TorusInput,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Number of connected components of the real locus.
    Pi0 {
        #[command(flatten)]
        torus: TorusInput,
        /// Instead of a torus, list the count for every type of dimension G.
        #[arg(long, value_name = "G", conflicts_with_all = ["input", "factors"])]
        types: Option<usize>,
    },
    /// Degree-four torsion left after the real-locus contribution (threefolds only).
    Budget {
        #[command(flatten)]
        torus: TorusInput,
    },
    /// Type of a period matrix {"M": [[...]], "N": [[...]]}.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Enlarge a polarized lattice until the form is unimodular.
    Principalize {
        #[arg(long)]
        input: PathBuf,
    },
    /// θ^{g-1}/(g-1)! of a principal polarization.
    MinimalClass {
        #[arg(long)]
        input: PathBuf,
    },
    /// Cohomological Fourier transform of a class, or the theta identity of a polarization.
    Fourier {
        /// {"g": g, "class": {...}} or a principally polarized lattice.
        #[arg(long)]
        input: PathBuf,
        /// Apply the transform of the dual torus instead.
        #[arg(long)]
        dual: bool,
        /// Reverse the orientation of the torus.
        #[arg(long)]
        flip_orientation: bool,
    },
    /// Künneth decomposition of H¹(G, H^n(A × B)(k)).
    Kunneth {
        #[arg(long, value_delimiter = ',')]
        a: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        b: Vec<String>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        k: i64,
    },
    /// Hecke orbit simulation.
    Hecke {
        #[command(subcommand)]
        command: HeckeCommand,
    },
    /// Recompute every registered finite fact and compare with expectations.
    PaperCheck {
        /// Run with a deliberately wrong orientation to exercise the harness.
        #[arg(long)]
        corrupt_sign: bool,
        /// Print the JSON schema of the report and exit.
        #[arg(long)]
        schema: bool,
    },
}

#[derive(Subcommand)]
enum HeckeCommand {
    /// Search the orbit of a start matrix for a target.
    Approach {
        #[arg(long)]
        g: usize,
        /// Type label: 0, (0), (r,α) or r,α.
        #[arg(long = "type")]
        ty: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// JSON file with "target" and optionally "start" (default identity).
        #[arg(long)]
        target: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1024)]
        beam_width: usize,
        #[arg(long, default_value_t = 8)]
        max_depth: usize,
        #[arg(long, default_value_t = 4)]
        restarts: usize,
    },
    /// Closest p^n q^m to a target with |n|, |m| ≤ bound.
    Sunit {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 30)]
        bound: u32,
        /// Positive rational, e.g. 2 or 7/3.
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "1/100")]
        tolerance: String,
    },
}

fn dispatch(cli: Cli) -> Result<Report, CliError> {
    match cli.command {
        Command::Cohomology { torus, k } => commands::cohomology(&torus, k),
        Command::Pi0 { torus, types } => match types {
            Some(g) => commands::pi0_table(g),
            None => commands::pi0(&torus),
        },
        Command::Budget { torus } => commands::budget(&torus),
        Command::Classify { input } => commands::classify(&input),
        Command::Principalize { input } => commands::principalize(&input),
        Command::MinimalClass { input } => commands::minimal_class(&input),
        Command::Fourier {
            input,
            dual,
            flip_orientation,
        } => commands::fourier(&input, dual, flip_orientation),
        Command::Kunneth { a, b, n, k } => commands::kunneth(&a, &b, n, k),
        Command::Hecke { command } => match command {
            HeckeCommand::Approach {
                g,
                ty,
                p,
                q,
                target,
                budget,
                seed,
                beam_width,
                max_depth,
                restarts,
            } => commands::hecke_approach(&commands::ApproachArgs {
                g,
                ty,
                p,
                q,
                target,
                budget,
                seed,
                params: realhodge::hecke::SearchParams {
                    beam_width,
                    max_depth,
                    restarts,
                },
            }),
            HeckeCommand::Sunit {
                p,
                q,
                bound,
                target,
                tolerance,
            } => commands::hecke_sunit(p, q, bound, &target, &tolerance),
        },
        Command::PaperCheck { corrupt_sign, schema } => {
            if schema {
                let json = serde_json::from_str(claims::SCHEMA).expect("bundled schema is valid JSON");
                Ok(Report::ok(json, "paper-check report schema"))
            } else {
                Ok(claims::run(corrupt_sign))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(report) => {
            println!(
                "{}",
                serde_json::to_string_pretty(&report.json).expect("JSON values serialize")
            );
            eprintln!("{}", report.summary);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(match e {
                CliError::Check(_) => 1,
                CliError::Input(_) => 2,
            })
        }
    }
}
