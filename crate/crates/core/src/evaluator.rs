//! Expectation values from per-group outcome statistics, and CNOT accounting.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bases::weight_sign;
use crate::connectivity::ConnectivityGraph;
use crate::embedding::EmbeddingMap;
use crate::error::{Error, Result};
use crate::grouping::{Group, GroupingResult, Method};
use crate::pauli::{Hamiltonian, PauliString};

/// Measured outcomes of one group; keys are big-endian outcome indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutcomeHistogram {
    pub group: usize,
    pub counts: BTreeMap<usize, u64>,
    pub shots: u64,
}

impl OutcomeHistogram {
    pub fn new(group: usize, counts: BTreeMap<usize, u64>) -> Self {
        let shots = counts.values().sum();
        OutcomeHistogram { group, counts, shots }
    }
}

fn bitstring(outcome: usize, n: usize) -> String {
    (0..n).map(|q| if outcome >> (n - 1 - q) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Reads `{"<group>": {"<bitstring>": count, ...}, ...}`.
pub fn histograms_from_json(text: &str, n_qubits: usize) -> Result<Vec<OutcomeHistogram>> {
    let raw: BTreeMap<String, BTreeMap<String, u64>> =
        serde_json::from_str(text).map_err(|e| Error::Plan(format!("histogram file: {e}")))?;
    let mut out = Vec::new();
    for (group, counts) in raw {
        let group: usize = group.parse().map_err(|_| Error::Plan(format!("group id {group:?} is not an integer")))?;
        let mut parsed = BTreeMap::new();
        for (bits, count) in counts {
            if bits.len() != n_qubits || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::Plan(format!("group {group}: bad bitstring {bits:?} for {n_qubits} qubits")));
            }
            let outcome = if n_qubits == 0 { 0 } else { usize::from_str_radix(&bits, 2).unwrap() };
            *parsed.entry(outcome).or_insert(0) += count;
        }
        out.push(OutcomeHistogram::new(group, parsed));
    }
    out.sort_by_key(|h| h.group);
    Ok(out)
}

pub fn histograms_to_json(histograms: &[OutcomeHistogram], n_qubits: usize) -> String {
    let raw: BTreeMap<String, BTreeMap<String, u64>> = histograms
        .iter()
        .map(|h| {
            let counts = h.counts.iter().map(|(&o, &c)| (bitstring(o, n_qubits), c)).collect();
            (h.group.to_string(), counts)
        })
        .collect();
    serde_json::to_string_pretty(&raw).expect("string keys serialize")
}

/// Checks that the group's blocks measure every term it claims.
fn check_group(id: usize, group: &Group, h: &Hamiltonian) -> Result<()> {
    let n = h.n_qubits();
    for &t in &group.terms {
        let s = h.terms().get(t).ok_or_else(|| Error::InvalidGroup {
            group: id,
            reason: format!("term {t} out of range"),
        })?;
        let s = &s.string;
        for block in group.assignment.blocks() {
            if block.qubits.iter().any(|&q| q >= n) {
                return Err(Error::InvalidGroup {
                    group: id,
                    reason: format!("block {:?} out of range", block.qubits),
                });
            }
            if !block.accepts(s) {
                return Err(Error::NotInCompatibleSet {
                    basis: block.basis.to_string(),
                    word: s.restrict(&block.qubits).to_string(),
                });
            }
        }
        if let Some(q) = (0..n).find(|&q| !s.get(q).is_identity() && !group.assignment.covers(q)) {
            return Err(Error::InvalidGroup {
                group: id,
                reason: format!("qubit {q} of term {s} is not measured"),
            });
        }
    }
    Ok(())
}

/// Eigenvalue of `s` at a measured outcome: the product of block weights.
fn term_weight(group: &Group, s: &PauliString, n: usize, outcome: usize) -> f64 {
    let bit = |q: usize| outcome >> (n - 1 - q) & 1;
    let mut sign = 1i8;
    for block in group.assignment.blocks() {
        let letters: Vec<_> = block.qubits.iter().map(|&q| s.get(q)).collect();
        let local = block.qubits.iter().fold(0, |acc, &q| acc << 1 | bit(q));
        sign *= weight_sign(block.basis, &letters, local).expect("term accepted by block");
    }
    f64::from(sign)
}

fn group_weight(group: &Group, h: &Hamiltonian, outcome: usize) -> f64 {
    group
        .terms
        .iter()
        .map(|&t| {
            let term = &h.terms()[t];
            term.coefficient * term_weight(group, &term.string, h.n_qubits(), outcome)
        })
        .sum()
}

/// `sum_alpha h_alpha W_alpha` over the group's terms, indexed by outcome.
/// Errors report the group as index 0.
pub fn group_weight_vector(group: &Group, h: &Hamiltonian) -> Result<Vec<f64>> {
    check_group(0, group, h)?;
    if h.n_qubits() > crate::sim::MAX_QUBITS {
        return Err(Error::TooManyQubits(h.n_qubits()));
    }
    Ok((0..1usize << h.n_qubits()).map(|o| group_weight(group, h, o)).collect())
}

/// Reconstructed `<H>` from one histogram per group (matched by group id).
pub fn expected_value(groups: &[Group], h: &Hamiltonian, histograms: &[OutcomeHistogram]) -> Result<f64> {
    let parts: Vec<f64> = groups
        .par_iter()
        .enumerate()
        .map(|(id, group)| {
            check_group(id, group, h)?;
            let hist = histograms.iter().find(|x| x.group == id).ok_or(Error::MissingHistogram(id))?;
            if hist.shots == 0 {
                return Err(Error::ZeroShots(id));
            }
            let shots = hist.shots as f64;
            Ok(hist.counts.iter().map(|(&o, &c)| group_weight(group, h, o) * c as f64 / shots).sum())
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

/// Reconstructed `<H>` from exact outcome probabilities, one vector per group.
pub fn expected_value_from_distributions(groups: &[Group], h: &Hamiltonian, distributions: &[Vec<f64>]) -> Result<f64> {
    let parts: Vec<f64> = groups
        .par_iter()
        .enumerate()
        .map(|(id, group)| {
            check_group(id, group, h)?;
            let dist = distributions.get(id).ok_or(Error::MissingHistogram(id))?;
            Ok(dist.iter().enumerate().filter(|(_, &p)| p != 0.0).map(|(o, &p)| group_weight(group, h, o) * p).sum())
        })
        .collect::<Result<_>>()?;
    Ok(parts.iter().sum())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub method: Method,
    pub groups: usize,
    pub cnots: usize,
    /// One measurement circuit per group.
    pub circuits: usize,
}

/// CNOT cost of a grouping. Entangled blocks cost one CNOT on a device edge;
/// under EM a block whose images are `D` hops apart costs `4(D - 1) + 1`.
pub fn count_cnots(r: &GroupingResult, conn: &ConnectivityGraph, tau: &EmbeddingMap) -> Result<CostReport> {
    let mut cnots = 0;
    for group in &r.groups {
        for block in group.assignment.blocks() {
            let [a, b] = block.qubits[..] else { continue };
            cnots += match r.method {
                Method::Tpb => 0,
                Method::Heem => 1,
                Method::Em => {
                    let d = conn.distance(tau.image(a), tau.image(b)).ok_or(Error::Unreachable(a, b))?;
                    4 * (d.max(1) - 1) + 1
                }
            };
        }
    }
    Ok(CostReport {
        method: r.method,
        groups: r.groups.len(),
        cnots,
        circuits: r.groups.len(),
    })
}
