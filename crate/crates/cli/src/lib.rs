//! `qfunctor` command line: JSON in, certificate out.

pub mod battery;
pub mod certificate;
pub mod commands;
pub mod error;

use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qfunctor_core::Tolerances;
use serde_json::json;

use crate::battery::BatteryConfig;
use crate::certificate::canonical_json;
use crate::commands::{load, Outcome};
use crate::error::{CliError, EXIT_CHECKS_FAILED, EXIT_INPUT, EXIT_PASS};

#[derive(Debug, Parser)]
#[command(name = "qfunctor", version, about = "Certificates for quantum relations and quantum functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_rank: f64,
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol_membership: f64,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol_eq: f64,
    /// Write the result document here; the certificate still goes to stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true)]
    pub pretty: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Commutant of an algebra, with a double-commutant check.
    Commutant { input: String },
    /// Reflexive, symmetric, antisymmetric and transitive tests.
    Relprops { input: String },
    /// The relation G(π) of a homomorphism.
    Gmap { input: String },
    /// The homomorphism of a quantum function, with its partial isometries.
    Ginv { input: String },
    /// G then G⁻¹, compared with the input.
    Roundtrip { input: String },
    /// The isometry w with π(b) = w*(b ⊗ 1)w.
    Dilate {
        input: String,
        /// Also check that V is generated by the components of w.
        #[arg(long)]
        generation: bool,
    },
    /// Seeded invariant battery plus exhaustive classical cases.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        max_dim: usize,
        #[arg(long, default_value_t = 200)]
        instances: usize,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Break the built-in fixture; the certificate must then fail.
        #[arg(long)]
        corrupt_fixture: bool,
    },
}

/// What a run produced: the exit code and the text for each stream.
#[derive(Debug)]
pub struct Response {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: &Cli) -> Response {
    match execute(cli) {
        Ok(r) => r,
        Err(e) => Response {
            code: EXIT_INPUT,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<Response, CliError> {
    let g = &cli.global;
    let tol = Tolerances {
        rank_tol: g.tol_rank,
        membership_tol: g.tol_membership,
        eq_tol: g.tol_eq,
    };
    tol.validate()?;
    let outcome = match &cli.command {
        Command::Commutant { input } => {
            let (doc, raw) = load(input)?;
            commands::commutant(&doc, &raw, &tol)?
        }
        Command::Relprops { input } => {
            let (doc, raw) = load(input)?;
            commands::relprops(&doc, &raw, &tol)?
        }
        Command::Gmap { input } => {
            let (doc, raw) = load(input)?;
            commands::gmap(&doc, &raw, &tol)?
        }
        Command::Ginv { input } => {
            let (doc, raw) = load(input)?;
            commands::ginv(&doc, &raw, &tol)?
        }
        Command::Roundtrip { input } => {
            let (doc, raw) = load(input)?;
            commands::roundtrip(&doc, &raw, &tol)?
        }
        Command::Dilate { input, generation } => {
            let (doc, raw) = load(input)?;
            commands::dilate(&doc, &raw, *generation, &tol)?
        }
        Command::Selftest {
            seed,
            max_dim,
            instances,
            pairs,
            corrupt_fixture,
        } => {
            if *max_dim == 0 {
                return Err(CliError::Input("--max-dim must be at least 1".to_string()));
            }
            let cfg = BatteryConfig {
                seed: *seed,
                max_dim: *max_dim,
                instances: *instances,
                pairs: *pairs,
                corrupt_fixture: *corrupt_fixture,
            };
            commands::selftest(&cfg, &tol)
        }
    };
    emit(outcome, g)
}

fn emit(outcome: Outcome, g: &GlobalArgs) -> Result<Response, CliError> {
    let Outcome {
        certificate,
        result,
        diagnostics,
    } = outcome;
    let code = if certificate.overall { EXIT_PASS } else { EXIT_CHECKS_FAILED };
    let stdout = match &g.output {
        Some(path) => {
            let body = match &result {
                Some(r) => canonical_json(r, g.pretty),
                None => canonical_json(&certificate, g.pretty),
            };
            fs::write(path, body + "\n").map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            canonical_json(&certificate, g.pretty)
        }
        None => canonical_json(&json!({ "certificate": certificate, "result": result }), g.pretty),
    };
    let mut stderr = String::new();
    for d in diagnostics {
        stderr.push_str(&d);
        stderr.push('\n');
    }
    Ok(Response {
        code,
        stdout: stdout + "\n",
        stderr,
    })
}
