//! Monte Carlo study over qubit labellings and term orders.
//!
//! Each trial relabels the theoretical qubits and shuffles the terms with a
//! uniformly random permutation, then reruns every requested strategy on the
//! permuted Hamiltonian. Trial `t` draws from `ChaCha8Rng` seeded with the
//! study seed on stream `t`, so results do not depend on scheduling.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::connectivity::ConnectivityGraph;
use crate::error::{Error, Result};
use crate::grouping::Method;
use crate::pauli::Hamiltonian;
use crate::plan::{plan, EmbeddingKind};

/// One grouping configuration compared by the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Tpb,
    Em,
    Heem(EmbeddingKind),
}

impl Strategy {
    pub const HEEM_ALL: [Strategy; 3] = [
        Strategy::Heem(EmbeddingKind::Naive),
        Strategy::Heem(EmbeddingKind::Disconnected),
        Strategy::Heem(EmbeddingKind::Connected),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Tpb => "tpb",
            Strategy::Em => "em",
            Strategy::Heem(EmbeddingKind::Naive) => "naive",
            Strategy::Heem(EmbeddingKind::Disconnected) => "disconnected",
            Strategy::Heem(EmbeddingKind::Connected) => "connected",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Strategy::Tpb, Strategy::Em]
            .into_iter()
            .chain(Strategy::HEEM_ALL)
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidOrder(format!("unknown strategy {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub strategy: Strategy,
    pub groups: usize,
    pub seconds: f64,
}

/// The permutations used by one trial: `(qubit relabelling, term order)`.
pub fn trial_permutations(n_qubits: usize, n_terms: usize, seed: u64, trial: usize) -> (Vec<usize>, Vec<usize>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let mut qubits: Vec<usize> = (0..n_qubits).collect();
    qubits.shuffle(&mut rng);
    let mut terms: Vec<usize> = (0..n_terms).collect();
    terms.shuffle(&mut rng);
    (qubits, terms)
}

pub fn permuted(h: &Hamiltonian, seed: u64, trial: usize) -> Result<Hamiltonian> {
    let (qubits, terms) = trial_permutations(h.n_qubits(), h.len(), seed, trial);
    h.relabel_qubits(&qubits)?.reorder_terms(&terms)
}

pub fn run_trial(h: &Hamiltonian, device: &ConnectivityGraph, strategies: &[Strategy], seed: u64, trial: usize) -> Result<Vec<TrialRecord>> {
    let hp = permuted(h, seed, trial)?;
    strategies
        .iter()
        .map(|&strategy| {
            let (method, kind) = match strategy {
                Strategy::Tpb => (Method::Tpb, EmbeddingKind::Naive),
                Strategy::Em => (Method::Em, EmbeddingKind::Naive),
                Strategy::Heem(kind) => (Method::Heem, kind),
            };
            let start = Instant::now();
            let p = plan(&hp, device, method, kind)?;
            Ok(TrialRecord {
                trial,
                strategy,
                groups: p.result.n_groups(),
                seconds: start.elapsed().as_secs_f64(),
            })
        })
        .collect()
}

/// Runs all trials in parallel; records come back ordered by trial, then by
/// position in `strategies`.
pub fn monte_carlo(h: &Hamiltonian, device: &ConnectivityGraph, strategies: &[Strategy], trials: usize, seed: u64) -> Result<Vec<TrialRecord>> {
    let per_trial: Vec<Vec<TrialRecord>> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(h, device, strategies, seed, t))
        .collect::<Result<_>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Sample standard deviation (zero for a single trial).
    pub std: f64,
    pub min: usize,
}

pub fn summarize(records: &[TrialRecord], strategy: Strategy) -> Option<Summary> {
    let xs: Vec<f64> = records.iter().filter(|r| r.strategy == strategy).map(|r| r.groups as f64).collect();
    let min = records.iter().filter(|r| r.strategy == strategy).map(|r| r.groups).min()?;
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Some(Summary { mean, std: var.sqrt(), min })
}

/// Group counts per trial followed by `mean`, `std` and `min` rows per
/// strategy. Contains no timings, so equal seeds give identical bytes.
pub fn counts_csv(records: &[TrialRecord], strategies: &[Strategy]) -> String {
    let mut out = String::from("trial,strategy,groups\n");
    for r in records {
        writeln!(out, "{},{},{}", r.trial, r.strategy, r.groups).unwrap();
    }
    for &s in strategies {
        if let Some(sum) = summarize(records, s) {
            writeln!(out, "mean,{s},{:.6}", sum.mean).unwrap();
            writeln!(out, "std,{s},{:.6}", sum.std).unwrap();
            writeln!(out, "min,{s},{}", sum.min).unwrap();
        }
    }
    out
}

pub fn timings_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from("trial,strategy,seconds\n");
    for r in records {
        writeln!(out, "{},{},{:.9}", r.trial, r.strategy, r.seconds).unwrap();
    }
    out
}
