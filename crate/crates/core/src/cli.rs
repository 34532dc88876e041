//! The `heem` command-line tool.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a plan fails
//! verification.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bases::{compatibility_table, TABLE_WORDS};
use crate::connectivity::ConnectivityGraph;
use crate::error::Error;
use crate::evaluator::{expected_value, expected_value_from_distributions, histograms_from_json};
use crate::grouping::Method;
use crate::pauli::Hamiltonian;
use crate::plan::{plan, EmbeddingKind, Plan, PlanDocument};
use crate::sim::{dense_expectation, outcome_distribution, sample_histogram_with, StateVector, RNG_NAME};
use crate::study::{counts_csv, monte_carlo, timings_csv, Strategy};

#[derive(Debug, Parser)]
#[command(name = "heem", version, about = "Entangled-measurement grouping of Pauli strings for connectivity-limited devices")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Group a Hamiltonian into measurement circuits and write a plan.
    Group(GroupArgs),
    /// Reconstruct the energy of a plan from histograms or a simulation.
    Evaluate(EvaluateArgs),
    /// Repeat grouping over random qubit labellings and term orders.
    Montecarlo(MonteCarloArgs),
    /// Print the two-qubit compatibility table.
    CompatTable,
    /// Check a stored plan.
    Verify {
        #[arg(long)]
        plan: PathBuf,
    },
}

#[derive(Debug, Args)]
struct GroupArgs {
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Edge list of the device; a complete graph on the Hamiltonian's qubits if omitted.
    #[arg(long)]
    connectivity: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Heem)]
    method: Method,
    #[arg(long, value_enum, default_value_t = EmbeddingKind::Connected)]
    embedding: EmbeddingKind,
    /// Recorded in the plan metadata.
    #[arg(long, env = "HEEM_SEED")]
    seed: Option<u64>,
    /// Output file; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    plan: PathBuf,
    /// JSON map from group id to `{bitstring: count}`.
    #[arg(long, conflicts_with = "simulate", required_unless_present = "simulate")]
    histograms: Option<PathBuf>,
    /// Sample outcomes from the statevector simulator.
    #[arg(long)]
    simulate: bool,
    /// `zeros`, or a JSON file holding `[re, im]` amplitude pairs.
    #[arg(long, default_value = "zeros", requires = "simulate")]
    state: String,
    /// Total shots, split evenly across groups (remainder to the first ones).
    #[arg(long, default_value_t = 1 << 14, requires = "simulate")]
    shots: u64,
    #[arg(long, env = "HEEM_SEED", default_value_t = 0)]
    seed: u64,
    /// Use exact outcome probabilities instead of samples.
    #[arg(long, requires = "simulate")]
    exact: bool,
}

#[derive(Debug, Args)]
struct MonteCarloArgs {
    #[arg(long)]
    hamiltonian: PathBuf,
    #[arg(long)]
    connectivity: PathBuf,
    #[arg(long, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, env = "HEEM_SEED", default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of tpb, em, naive, disconnected, connected.
    #[arg(long, value_delimiter = ',', default_value = "naive,disconnected,connected")]
    methods: Vec<Strategy>,
    /// Group-count CSV; standard output if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional CSV of wall times per trial and strategy.
    #[arg(long)]
    timings: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::InvalidGroup { .. }) { 2 } else { 1 };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

fn load_plan(path: &Path) -> Result<(Hamiltonian, Plan), Failure> {
    let doc = PlanDocument::from_json(&read(path)?)?;
    doc.load().map_err(|e| Failure {
        code: 2,
        message: format!("plan does not verify: {e}"),
    })
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render().ansi());
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let outcome = match cli.command {
        Command::Group(a) => cmd_group(a, stdout, stderr),
        Command::Evaluate(a) => cmd_evaluate(a, stdout),
        Command::Montecarlo(a) => cmd_montecarlo(a, stdout),
        Command::CompatTable => emit(None, &compat_table(), stdout),
        Command::Verify { plan } => load_plan(&plan).and_then(|(_, p)| {
            emit(None, &format!("ok: {} groups, {} CNOTs\n", p.result.n_groups(), p.cost.cnots), stdout)
        }),
    };
    match outcome {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn cmd_group(a: GroupArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), Failure> {
    let h = Hamiltonian::parse(&read(&a.hamiltonian)?)?;
    let device = match &a.connectivity {
        Some(path) => ConnectivityGraph::parse(&read(path)?)?,
        None => ConnectivityGraph::complete(h.n_qubits()),
    };
    let p = plan(&h, &device, a.method, a.embedding)?;
    let doc = PlanDocument::new(&h, &p, a.seed);
    emit(a.out.as_deref(), &doc.to_json(), stdout)?;
    let _ = writeln!(
        stderr,
        "{}: {} terms, {} groups, {} CNOTs",
        a.method,
        h.len(),
        p.result.n_groups(),
        p.cost.cnots
    );
    Ok(())
}

#[derive(Serialize)]
struct EnergyReport {
    value: f64,
    mode: &'static str,
    groups: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rng: Option<&'static str>,
    /// Exact `<psi|H|psi>` of the simulated state.
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
}

/// Shots per group: an even split with the remainder on the earliest groups.
pub fn split_shots(total: u64, groups: usize) -> Vec<u64> {
    let g = groups as u64;
    (0..g).map(|i| total / g + u64::from(i < total % g)).collect()
}

fn read_state(spec: &str, n_qubits: usize) -> Result<StateVector, Failure> {
    if spec == "zeros" {
        return Ok(StateVector::zeros(n_qubits)?);
    }
    let pairs: Vec<(f64, f64)> =
        serde_json::from_str(&read(Path::new(spec))?).map_err(|e| usage(format!("{spec}: expected [[re, im], ...]: {e}")))?;
    let state = StateVector::from_amplitudes(pairs.into_iter().map(|(re, im)| Complex64::new(re, im)).collect())?;
    if state.n_qubits() != n_qubits {
        return Err(Error::InvalidState(format!("state has {} qubits, the plan {n_qubits}", state.n_qubits())).into());
    }
    Ok(state)
}

fn cmd_evaluate(a: EvaluateArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let (h, p) = load_plan(&a.plan)?;
    let groups = &p.result.groups;
    let report = if let Some(path) = &a.histograms {
        let hists = histograms_from_json(&read(path)?, h.n_qubits())?;
        let value = expected_value(groups, &h, &hists)?;
        EnergyReport {
            value,
            mode: "histograms",
            groups: groups.len(),
            shots: Some(hists.iter().map(|x| x.shots).sum()),
            seed: None,
            rng: None,
            reference: None,
        }
    } else {
        let state = read_state(&a.state, h.n_qubits())?;
        let dists = groups.iter().map(|g| outcome_distribution(&state, g)).collect::<Result<Vec<_>, _>>()?;
        let reference = Some(dense_expectation(&state, &h)?);
        if a.exact {
            EnergyReport {
                value: expected_value_from_distributions(groups, &h, &dists)?,
                mode: "exact",
                groups: groups.len(),
                shots: None,
                seed: None,
                rng: None,
                reference,
            }
        } else {
            if a.shots == 0 {
                return Err(Error::ZeroShots(0).into());
            }
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
            let hists = split_shots(a.shots, groups.len())
                .into_iter()
                .zip(&dists)
                .enumerate()
                .map(|(id, (shots, dist))| sample_histogram_with(id, dist, shots, &mut rng))
                .collect::<Result<Vec<_>, _>>()?;
            EnergyReport {
                value: expected_value(groups, &h, &hists)?,
                mode: "sampled",
                groups: groups.len(),
                shots: Some(a.shots),
                seed: Some(a.seed),
                rng: Some(RNG_NAME),
                reference,
            }
        }
    };
    emit(None, &(serde_json::to_string_pretty(&report).unwrap() + "\n"), stdout)
}

fn cmd_montecarlo(a: MonteCarloArgs, stdout: &mut dyn Write) -> Result<(), Failure> {
    let h = Hamiltonian::parse(&read(&a.hamiltonian)?)?;
    let device = ConnectivityGraph::parse(&read(&a.connectivity)?)?;
    let records = monte_carlo(&h, &device, &a.methods, a.trials as usize, a.seed)?;
    if let Some(path) = &a.timings {
        emit(Some(path), &timings_csv(&records), stdout)?;
    }
    emit(a.out.as_deref(), &counts_csv(&records, &a.methods), stdout)
}

/// Upper-triangular table of the entangled bases that jointly measure each
/// pair of two-qubit words; `x` marks pairs with no common basis.
pub fn compat_table() -> String {
    let n = TABLE_WORDS.len();
    let mut cell = vec![vec![String::new(); n]; n];
    for (i, row) in cell.iter_mut().enumerate() {
        row[i] = "---".into();
    }
    for (a, b, options) in compatibility_table() {
        let i = TABLE_WORDS.iter().position(|w| *w == a.to_string()).unwrap();
        let j = TABLE_WORDS.iter().position(|w| *w == b.to_string()).unwrap();
        cell[i][j] = if options.is_empty() {
            "x".into()
        } else {
            options.iter().map(|b| b.name()).collect::<Vec<_>>().join("/")
        };
    }
    let width = 9;
    let mut out = format!("{:<4}", "");
    for w in TABLE_WORDS {
        write!(out, "{w:<width$}").unwrap();
    }
    out = out.trim_end().to_string() + "\n";
    for (i, w) in TABLE_WORDS.iter().enumerate() {
        let mut line = format!("{w:<4}");
        for c in &cell[i] {
            write!(line, "{c:<width$}").unwrap();
        }
        out += line.trim_end();
        out += "\n";
    }
    out
}
