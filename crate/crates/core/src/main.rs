use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use borncraft::circuit::{parse_circuit, Circuit};
use borncraft::dist::{to_json, tv, Dist, SampleOracle};
use borncraft::harness::{self, ExperimentSpec};
use borncraft::learn::closure_learn;
use borncraft::stab::simulate_clifford;
use borncraft::statevector::sv_distribution;
use borncraft::Error;

#[derive(Parser)]
#[command(
    name = "borncraft",
    version,
    about = "Simulate and learn output distributions of shallow circuits"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the output distribution of a circuit, or samples from it.
    Simulate {
        circuit: PathBuf,
        /// Defaults to `stab` for Clifford circuits and `sv` otherwise.
        #[arg(long, value_enum)]
        backend: Option<Backend>,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a learner on samples of a circuit's output distribution.
    Learn {
        #[command(subcommand)]
        learner: Learner,
    },
    /// Run a registered experiment over a parameter grid.
    Experiment {
        /// recovery-curve | t-noise | parity-tv | sq-vs-sample | opnorm-tv
        name: String,
        /// Grid as inline JSON or a path to a JSON file; omitted parameters take defaults.
        #[arg(long, default_value = "{}")]
        grid: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Leave the timestamp out of the JSON result.
        #[arg(long)]
        no_timestamp: bool,
    },
}

#[derive(Subcommand)]
enum Learner {
    Closure {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Stab,
    Sv,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

enum Failure {
    BadArgs(String),
    Infeasible(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Infeasible(_) | Error::TooLarge { .. } => Failure::Infeasible(e.to_string()),
            _ => Failure::BadArgs(e.to_string()),
        }
    }
}

fn read_circuit(path: &Path) -> Result<Circuit, Failure> {
    let src = std::fs::read_to_string(path)
        .map_err(|e| Failure::BadArgs(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_circuit(&src)?)
}

/// Exact output distribution: affine from the tableau for Clifford
/// circuits, dense from the statevector otherwise.
fn circuit_dist(c: &Circuit, backend: Option<Backend>) -> Result<Dist, Failure> {
    let backend = backend.unwrap_or(if c.is_clifford() {
        Backend::Stab
    } else {
        Backend::Sv
    });
    Ok(match backend {
        Backend::Stab => Dist::AffineUniform(simulate_clifford(c)?.support()),
        Backend::Sv => Dist::Dense(sv_distribution(c)?),
    })
}

fn simulate(
    path: &Path,
    backend: Option<Backend>,
    samples: usize,
    seed: u64,
) -> Result<(), Failure> {
    let c = read_circuit(path)?;
    let d = circuit_dist(&c, backend)?;
    if samples > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            println!("{}", d.sample(&mut rng));
        }
        return Ok(());
    }
    match &d {
        Dist::AffineUniform(a) => {
            println!("dim {}", a.dim());
            println!("offset {}", a.offset());
            for col in a.basis_columns() {
                println!("basis {col}");
            }
        }
        Dist::Dense(dense) => {
            for x in d.support()? {
                println!("{x} {}", dense.prob(&x));
            }
        }
        _ => unreachable!("circuit distributions are affine or dense"),
    }
    Ok(())
}

fn learn_closure(path: &Path, delta: f64, seed: u64) -> Result<(), Failure> {
    let c = read_circuit(path)?;
    let truth = circuit_dist(&c, None)?;
    let mut oracle = SampleOracle::new(truth.clone(), ChaCha8Rng::seed_from_u64(seed));
    let learned = closure_learn(&mut oracle, c.num_qubits(), delta)?;
    let learned_dist = learned.to_dist();
    let dist: serde_json::Value =
        serde_json::from_str(&to_json(&learned_dist)).expect("dist JSON is valid");
    let report = serde_json::json!({
        "samples": learned.samples_used,
        "dim": learned.dim(),
        "tv_to_truth": tv(&learned_dist, &truth)?,
        "dist": dist,
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(())
}

fn experiment(
    name: String,
    grid: &str,
    trials: u64,
    seed: u64,
    out: &Path,
    format: Format,
    no_timestamp: bool,
) -> Result<(), Failure> {
    let grid_src = if Path::new(grid).is_file() {
        std::fs::read_to_string(grid)
            .map_err(|e| Failure::BadArgs(format!("cannot read {grid}: {e}")))?
    } else {
        grid.to_string()
    };
    let spec = ExperimentSpec {
        name,
        grid: harness::parse_grid(&grid_src)?,
        trials,
        master_seed: seed,
    };
    let mut result = harness::run(&spec)?;
    if !no_timestamp {
        result.timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .ok()
            .map(|d| d.as_secs());
    }
    let text = match format {
        Format::Json => result.to_json(),
        Format::Csv => result.to_csv(),
    };
    std::fs::write(out, text)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", out.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate {
            circuit,
            backend,
            samples,
            seed,
        } => simulate(&circuit, backend, samples, seed),
        Command::Learn {
            learner:
                Learner::Closure {
                    circuit,
                    delta,
                    seed,
                },
        } => learn_closure(&circuit, delta, seed),
        Command::Experiment {
            name,
            grid,
            trials,
            seed,
            out,
            format,
            no_timestamp,
        } => experiment(name, &grid, trials, seed, &out, format, no_timestamp),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::BadArgs(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
