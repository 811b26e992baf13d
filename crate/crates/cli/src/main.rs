//! `bargmann`: compute Bargmann invariants of state tuples, simulate the
//! circuits that measure them, synthesize cycle-permutation circuits,
//! reconstruct Gram matrices, decide PU equivalence, and evaluate witnesses.
//!
//! Exit codes: 0 success, 2 parse error (documents, circuit text, CLI
//! arguments), 3 validation error, 4 resource budget exceeded. All randomness
//! flows from `--seed`; when absent a seed is generated and echoed in the
//! output. No environment variable or config file affects numeric results.

mod document;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use thiserror::Error;

use bargmann_core::num_complex::Complex64;
use bargmann_core::{circuit, cycletest, equiv, gram, states, witness, Error as CoreError};
use document::TupleDocument;

#[derive(Debug, Error)]
pub(crate) enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(#[from] CoreError),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) => 2,
            CliError::Validation(CoreError::ResourceBudget { .. }) => 4,
            CliError::Validation(CoreError::CircuitParse { .. }) => 2,
            CliError::Validation(_) => 3,
        }
    }
}

use CliError as Error;

#[derive(Parser)]
#[command(name = "bargmann", version, about = "Relational invariants of quantum state tuples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute Bargmann invariants of a state tuple.
    Invariants(InvariantsArgs),
    /// Simulate a cycle test (exact or shot-sampled, optionally gate-level).
    Simulate(SimulateArgs),
    /// Synthesize a cycle-permutation circuit.
    Synth(SynthArgs),
    /// Reconstruct the gauge-fixed Gram matrix of a pure tuple.
    Gram(GramArgs),
    /// Decide projective-unitary equivalence of two tuples.
    Equiv(EquivArgs),
    /// Evaluate a witness.
    Witness(WitnessArgs),
}

#[derive(Args)]
struct InvariantsArgs {
    /// Tuple document (JSON).
    #[arg(long)]
    input: PathBuf,
    /// Index sequence like "1,2,3"; repeatable.
    #[arg(long = "sequence")]
    sequences: Vec<String>,
    /// Compute every invariant up to this degree (one per cyclic class).
    #[arg(long, conflicts_with = "sequences")]
    degree_cap: Option<usize>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BranchArg {
    Real,
    Imag,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Nn,
    Log,
    ControlledNn,
    Parallel,
}

impl FamilyArg {
    fn synthesize(self, m: usize) -> Result<circuit::Circuit, CoreError> {
        match self {
            FamilyArg::Nn => circuit::nn_cycle(m),
            FamilyArg::Log => circuit::log_depth_cycle(m),
            FamilyArg::ControlledNn => circuit::controlled_nn_cycle(m),
            FamilyArg::Parallel => circuit::parallel_controlled_cycle(m),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Index sequence like "1,2,3".
    #[arg(long)]
    indices: String,
    #[arg(long, value_enum)]
    branch: BranchArg,
    /// 0 = exact probability only.
    #[arg(long, default_value_t = 0)]
    shots: u64,
    /// RNG seed; generated and echoed when absent.
    #[arg(long)]
    seed: Option<u64>,
    /// Simulate at gate level with a synthesized circuit family instead of
    /// the trace-product formula.
    #[arg(long, value_enum)]
    gate_level: Option<FamilyArg>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Lines,
    Qasm,
}

#[derive(Args)]
struct SynthArgs {
    /// Number of state registers.
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum)]
    family: FamilyArg,
    #[arg(long, value_enum, default_value = "lines")]
    format: FormatArg,
}

#[derive(Args)]
struct GramArgs {
    #[arg(long)]
    input: PathBuf,
    /// Overlaps at or below this value are treated as exact zeros.
    #[arg(long, default_value_t = gram::DEFAULT_ZERO_THRESHOLD)]
    threshold: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EquivMode {
    Pure,
    Mixed,
}

#[derive(Args)]
struct EquivArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    other: PathBuf,
    #[arg(long, value_enum, default_value = "pure")]
    mode: EquivMode,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Mixed mode: fingerprint degree cap (default d²).
    #[arg(long)]
    degree_cap: Option<usize>,
    /// Pure mode: include the Procrustes alignment and stability bound.
    #[arg(long)]
    procrustes: bool,
}

#[derive(Args)]
struct WitnessArgs {
    #[command(subcommand)]
    which: WitnessCommand,
}

#[derive(Subcommand)]
enum WitnessCommand {
    /// Linear independence: det(G) > tol.
    Li {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Imaginarity: |Im Δ| > threshold for a degree ≥ 3 invariant.
    Imaginarity {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        indices: String,
        #[arg(long, default_value_t = witness::EXACT_WITNESS_THRESHOLD)]
        threshold: f64,
    },
    /// Coherence polytope membership for explicit invariant values.
    Coherence {
        #[arg(long)]
        d12: f64,
        #[arg(long)]
        d13: f64,
        #[arg(long)]
        d23: f64,
        /// Re Δ₁₂₃.
        #[arg(long, allow_negative_numbers = true)]
        d123: f64,
        /// Im Δ₁₂₃.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        d123_im: f64,
        #[arg(long, default_value_t = witness::EXACT_WITNESS_THRESHOLD)]
        threshold: f64,
    },
}

fn parse_indices(text: &str) -> Result<Vec<usize>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad index {:?} in sequence {text:?}", t.trim())))
        })
        .collect()
}

fn emit(value: serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("serializable"));
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Invariants(args) => {
            let doc = TupleDocument::from_file(&args.input)?;
            let tuple = doc.to_tuple()?;
            if let Some(cap) = args.degree_cap {
                let fp = equiv::mixed_fingerprint(&tuple, cap)?;
                emit(json!({
                    "degree_cap": cap,
                    "count": fp.entries.len(),
                    "fingerprint": fp,
                }));
            } else {
                let mut table = Vec::new();
                for seq in &args.sequences {
                    let indices = parse_indices(seq)?;
                    let inv = states::bargmann(&tuple, &indices)?;
                    table.push(serde_json::to_value(&inv).expect("serializable"));
                }
                emit(json!({ "invariants": table, "count": table.len() }));
            }
        }
        Command::Simulate(args) => {
            let doc = TupleDocument::from_file(&args.input)?;
            let tuple = doc.to_tuple()?;
            let indices = parse_indices(&args.indices)?;
            let branch = match args.branch {
                BranchArg::Real => cycletest::Branch::Real,
                BranchArg::Imag => cycletest::Branch::Imag,
            };
            let seed = args.seed.unwrap_or_else(|| rand::random());
            let spec = cycletest::CycleTestSpec::new(tuple, indices.clone(), branch)?
                .with_shots(args.shots, seed);
            let result = match args.gate_level {
                None if args.shots == 0 => cycletest::exact_probability(&spec)?,
                None => cycletest::sample(&spec)?,
                Some(family) => {
                    let c = family.synthesize(indices.len())?;
                    cycletest::gate_level_simulate(&spec, &c)?
                }
            };
            emit(json!({
                "branch": args.branch.to_possible_value().unwrap().get_name().to_uppercase(),
                "indices": indices,
                "seed": seed,
                "result": result,
            }));
        }
        Command::Synth(args) => {
            let c = args.family.synthesize(args.m)?;
            let text = match args.format {
                FormatArg::Lines => circuit::emit_lines(&c),
                FormatArg::Qasm => circuit::emit_qasm(&c),
            };
            print!("{text}");
        }
        Command::Gram(args) => {
            let doc = TupleDocument::from_file(&args.input)?;
            let tuple = doc.to_tuple()?;
            let rec = gram::reconstruct_components(&tuple, args.threshold)?;
            emit(json!({
                "n": rec.n,
                "components": rec.components,
                "total_invariants_used": rec.total_invariants_used(),
            }));
        }
        Command::Equiv(args) => {
            let a = TupleDocument::from_file(&args.input)?.to_tuple()?;
            let b = TupleDocument::from_file(&args.other)?.to_tuple()?;
            let report = match args.mode {
                EquivMode::Pure if args.procrustes => equiv::procrustes_align(&a, &b)?,
                EquivMode::Pure => equiv::pure_equivalent(&a, &b, args.tol)?,
                EquivMode::Mixed => equiv::mixed_equivalent(&a, &b, args.tol, args.degree_cap)?,
            };
            emit(serde_json::to_value(&report).expect("serializable"));
        }
        Command::Witness(args) => {
            let verdict = match args.which {
                WitnessCommand::Li { input, tol } => {
                    let tuple = TupleDocument::from_file(&input)?.to_tuple()?;
                    let rec = gram::reconstruct_components(&tuple, gram::DEFAULT_ZERO_THRESHOLD)?;
                    witness::linear_independence_of(&rec.full_matrix(), tol)
                }
                WitnessCommand::Imaginarity { input, indices, threshold } => {
                    let tuple = TupleDocument::from_file(&input)?.to_tuple()?;
                    let indices = parse_indices(&indices)?;
                    let inv = states::bargmann(&tuple, &indices)?;
                    witness::imaginarity_witness(&inv, threshold)?
                }
                WitnessCommand::Coherence { d12, d13, d23, d123, d123_im, threshold } => {
                    witness::coherence_polytope_check(
                        d12,
                        d13,
                        d23,
                        Complex64::new(d123, d123_im),
                        threshold,
                    )
                }
            };
            emit(serde_json::to_value(&verdict).expect("serializable"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
