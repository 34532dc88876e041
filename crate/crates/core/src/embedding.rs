//! Processor embedding: choosing where theoretical qubits live on the device
//! so that pairs with many entangled-measurement compatibilities sit on
//! physical edges, and deriving loop orders from the chosen map.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bases::BasisLabel;
use crate::connectivity::ConnectivityGraph;
use crate::error::{Error, Result};
use crate::pauli::{Hamiltonian, Pauli, PauliString};

/// Injective map from theoretical qubit `i` to physical qubit `tau[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EmbeddingMap(Vec<usize>);

impl EmbeddingMap {
    pub fn new(map: Vec<usize>, n_physical: usize) -> Result<Self> {
        let tau = EmbeddingMap(map);
        tau.validate(tau.len(), n_physical)?;
        Ok(tau)
    }

    pub fn identity(n: usize) -> Self {
        EmbeddingMap((0..n).collect())
    }

    /// Wraps a map without validating it.
    pub fn from_vec_unchecked(map: Vec<usize>) -> Self {
        EmbeddingMap(map)
    }

    pub fn image(&self, theoretical: usize) -> usize {
        self.0[theoretical]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, n_theoretical: usize, n_physical: usize) -> Result<()> {
        if self.0.len() != n_theoretical {
            return Err(Error::EmbeddingSize {
                expected: n_theoretical,
                found: self.0.len(),
            });
        }
        let mut used = vec![false; n_physical];
        for (theoretical, &physical) in self.0.iter().enumerate() {
            if physical >= n_physical {
                return Err(Error::ImageOutOfRange {
                    theoretical,
                    physical,
                    n_physical,
                });
            }
            if std::mem::replace(&mut used[physical], true) {
                return Err(Error::NotInjective(physical));
            }
        }
        Ok(())
    }
}

fn binom2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Per entangled basis (in [`BasisLabel::ENTANGLED`] order), the number of
/// unordered term pairs whose restrictions to `(i, j)` the basis measures jointly.
fn pair_counts(strings: &[&PauliString], i: usize, j: usize) -> [u64; 6] {
    let mut members = [0u64; 6];
    for s in strings {
        let word = [s.get(i), s.get(j)];
        for (k, b) in BasisLabel::ENTANGLED.iter().enumerate() {
            if b.contains(&word) {
                members[k] += 1;
            }
        }
    }
    members.map(binom2)
}

/// Local compatibilities at qubit `i` for `X1`, `Y1`, `Z1`: `binom(F_I + F_P, 2)`.
fn local_counts(strings: &[&PauliString], i: usize) -> [u64; 3] {
    let count = |p: Pauli| strings.iter().filter(|s| s.get(i) == p).count() as u64;
    let fi = count(Pauli::I);
    [Pauli::X, Pauli::Y, Pauli::Z].map(|p| binom2(fi + count(p)))
}

/// Symmetric `N x N` matrix of entangled-measurement compatibilities per
/// qubit pair; the diagonal is zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityMatrix {
    entries: Vec<Vec<u64>>,
}

impl CompatibilityMatrix {
    pub fn from_strings(n_qubits: usize, strings: &[&PauliString]) -> Self {
        let mut entries = vec![vec![0; n_qubits]; n_qubits];
        for i in 0..n_qubits {
            for j in i + 1..n_qubits {
                let c = pair_counts(strings, i, j).iter().sum();
                entries[i][j] = c;
                entries[j][i] = c;
            }
        }
        CompatibilityMatrix { entries }
    }

    /// Builds a matrix from explicit entries; the input must be square and
    /// symmetric. The diagonal is cleared.
    pub fn from_entries(mut entries: Vec<Vec<u64>>) -> Result<Self> {
        let n = entries.len();
        for i in 0..n {
            if entries[i].len() != n {
                return Err(Error::LengthMismatch {
                    left: n,
                    right: entries[i].len(),
                });
            }
            entries[i][i] = 0;
        }
        for i in 0..n {
            for j in 0..i {
                if entries[i][j] != entries[j][i] {
                    return Err(Error::InvalidOrder(format!("matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(CompatibilityMatrix { entries })
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.entries
    }

    /// Sum over unordered pairs.
    pub fn total(&self) -> u64 {
        (0..self.n()).flat_map(|i| (i + 1..self.n()).map(move |j| (i, j))).map(|(i, j)| self.entries[i][j]).sum()
    }
}

pub fn compatibility_matrix(h: &Hamiltonian) -> CompatibilityMatrix {
    let strings: Vec<&PauliString> = h.strings().collect();
    CompatibilityMatrix::from_strings(h.n_qubits(), &strings)
}

/// Compatibilities carried by device edges: the sum of `C[i][j]` over unordered
/// pairs mapped onto an edge.
pub fn omega(tau: &EmbeddingMap, c: &CompatibilityMatrix, conn: &ConnectivityGraph) -> u64 {
    let n = c.n();
    let mut total = 0;
    for i in 0..n {
        for j in i + 1..n {
            if conn.has_edge(tau.image(i), tau.image(j)) {
                total += c.get(i, j);
            }
        }
    }
    total
}

pub fn embed_naive(n_theoretical: usize, n_physical: usize) -> Result<EmbeddingMap> {
    if n_theoretical > n_physical {
        return Err(Error::InsufficientQubits {
            needed: n_theoretical,
            available: n_physical,
        });
    }
    Ok(EmbeddingMap::identity(n_theoretical))
}

/// Mutable state shared by both greedy embedding heuristics.
struct Placement<'a> {
    c: &'a CompatibilityMatrix,
    conn: &'a ConnectivityGraph,
    retired: Vec<Vec<bool>>,
    // edges between two placed qubits are removed as placement proceeds
    residual: ConnectivityGraph,
    tau: Vec<Option<usize>>,
    owner: Vec<Option<usize>>,
    steps: Vec<(usize, usize)>,
}

impl<'a> Placement<'a> {
    fn new(c: &'a CompatibilityMatrix, conn: &'a ConnectivityGraph) -> Result<Self> {
        let n = c.n();
        if n > conn.n_physical() {
            return Err(Error::InsufficientQubits {
                needed: n,
                available: conn.n_physical(),
            });
        }
        let retired = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        Ok(Placement {
            c,
            conn,
            retired,
            residual: conn.clone(),
            tau: vec![None; n],
            owner: vec![None; conn.n_physical()],
            steps: Vec::new(),
        })
    }

    fn n_placed(&self) -> usize {
        self.steps.len()
    }

    fn retire_pair(&mut self, i: usize, j: usize) {
        self.retired[i][j] = true;
        self.retired[j][i] = true;
    }

    fn retire_row(&mut self, i: usize) {
        for j in 0..self.c.n() {
            self.retire_pair(i, j);
        }
    }

    /// Largest unretired entry among pairs accepted by `keep`; ties go to the
    /// lexicographically smallest `(i, j)` with `i < j`.
    fn best_pair(&self, keep: impl Fn(usize, usize) -> bool) -> Option<(usize, usize)> {
        let n = self.c.n();
        let mut best: Option<(u64, usize, usize)> = None;
        for i in 0..n {
            for j in i + 1..n {
                if self.retired[i][j] || !keep(i, j) {
                    continue;
                }
                let v = self.c.get(i, j);
                if best.is_none_or(|(bv, _, _)| v > bv) {
                    best = Some((v, i, j));
                }
            }
        }
        best.map(|(_, i, j)| (i, j))
    }

    fn place(&mut self, theoretical: usize, physical: usize) {
        self.tau[theoretical] = Some(physical);
        self.owner[physical] = Some(theoretical);
        self.steps.push((theoretical, physical));
        let placed_neighbors: Vec<usize> = self.residual.neighbors(physical).filter(|&s| self.owner[s].is_some()).collect();
        for s in placed_neighbors {
            self.residual.remove_edge(s, physical);
            if self.residual.degree(s) == 0 {
                let t = self.owner[s].unwrap();
                self.retire_row(t);
            }
        }
        if self.residual.degree(physical) == 0 {
            self.retire_row(theoretical);
        }
    }

    fn free_neighbor(&self, physical: usize) -> Option<usize> {
        self.residual.neighbors(physical).find(|&s| self.owner[s].is_none())
    }

    fn free_edge(&self, min_component: usize) -> Option<(usize, usize)> {
        self.residual.edges().into_iter().find(|&(a, b)| {
            self.owner[a].is_none() && self.owner[b].is_none() && component_size(self.conn, a) >= min_component
        })
    }

    /// Places one end of a pair next to the already-placed other end.
    fn attach(&mut self, i: usize, j: usize) {
        let (anchor, new) = if self.tau[i].is_some() { (i, j) } else { (j, i) };
        if let Some(physical) = self.free_neighbor(self.tau[anchor].unwrap()) {
            self.place(new, physical);
        } else {
            self.retire_row(anchor);
        }
        self.retire_pair(i, j);
    }

    /// Remaining qubits go next to the current image when possible, otherwise
    /// to the lowest free physical qubit.
    fn fill_remaining(&mut self) -> Result<()> {
        for t in 0..self.c.n() {
            if self.tau[t].is_some() {
                continue;
            }
            let adjacent = (0..self.conn.n_physical())
                .find(|&p| self.owner[p].is_none() && self.conn.neighbors(p).any(|s| self.owner[s].is_some()));
            let physical = adjacent
                .or_else(|| (0..self.conn.n_physical()).find(|&p| self.owner[p].is_none()))
                .ok_or(Error::InsufficientQubits {
                    needed: self.c.n(),
                    available: self.conn.n_physical(),
                })?;
            self.place(t, physical);
        }
        Ok(())
    }

    fn finish(self) -> Vec<(usize, usize)> {
        self.steps
    }
}

fn component_size(conn: &ConnectivityGraph, q: usize) -> usize {
    conn.distances_from(q).iter().filter(|d| d.is_some()).count()
}

/// Order-disconnected embedding: repeatedly take the largest remaining entry
/// of `C` and put its two qubits on adjacent physical qubits.
pub fn embed_disconnected(c: &CompatibilityMatrix, conn: &ConnectivityGraph) -> Result<EmbeddingMap> {
    let mut p = Placement::new(c, conn)?;
    while p.n_placed() < c.n() {
        let Some((i, j)) = p.best_pair(|_, _| true) else {
            p.fill_remaining()?;
            break;
        };
        match (p.tau[i], p.tau[j]) {
            (Some(_), Some(_)) => p.retire_pair(i, j),
            (Some(_), None) | (None, Some(_)) => p.attach(i, j),
            (None, None) => {
                if let Some((a, b)) = p.free_edge(2) {
                    p.place(i, a);
                    p.place(j, b);
                }
                p.retire_pair(i, j);
            }
        }
    }
    Ok(into_map(c.n(), p.finish()))
}

/// Order-connected embedding; see [`embed_connected_steps`].
pub fn embed_connected(c: &CompatibilityMatrix, conn: &ConnectivityGraph) -> Result<EmbeddingMap> {
    Ok(into_map(c.n(), embed_connected_steps(c, conn)?))
}

/// Order-connected embedding, returned as the sequence of `(theoretical,
/// physical)` placements. After the seed pair, every new qubit is placed next
/// to an already-placed one, so the image stays a connected subgraph.
pub fn embed_connected_steps(c: &CompatibilityMatrix, conn: &ConnectivityGraph) -> Result<Vec<(usize, usize)>> {
    let n = c.n();
    let mut p = Placement::new(c, conn)?;
    match n {
        0 => return Ok(Vec::new()),
        1 => {
            p.place(0, 0);
            return Ok(p.finish());
        }
        _ => {}
    }
    let (i0, j0) = p.best_pair(|_, _| true).expect("at least one pair");
    let (a, b) = p.free_edge(n).ok_or(Error::DisconnectedConnectivity { needed: n })?;
    p.place(i0, a);
    p.place(j0, b);
    p.retire_pair(i0, j0);
    while p.n_placed() < n {
        let tau = p.tau.clone();
        let (i, j) = p
            .best_pair(|i, j| tau[i].is_some() || tau[j].is_some())
            .ok_or(Error::DisconnectedConnectivity { needed: n })?;
        if p.tau[i].is_some() && p.tau[j].is_some() {
            p.retire_pair(i, j);
        } else {
            p.attach(i, j);
        }
    }
    Ok(p.finish())
}

fn into_map(n: usize, steps: Vec<(usize, usize)>) -> EmbeddingMap {
    let mut map = vec![usize::MAX; n];
    for (t, p) in steps {
        map[t] = p;
    }
    EmbeddingMap(map)
}

/// Compatibilities restricted to device edges under a fixed embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauCompatibility {
    /// `C` with entries of non-adjacent pairs zeroed.
    pub c_tau: Vec<Vec<u64>>,
    /// Compatibilities touching each qubit (local ones included).
    pub cq_tau: Vec<u64>,
    /// Compatibilities per basis; local totals do not depend on the embedding.
    pub cm_tau: BTreeMap<BasisLabel, u64>,
}

pub fn tau_compatibility(h: &Hamiltonian, tau: &EmbeddingMap, conn: &ConnectivityGraph) -> Result<TauCompatibility> {
    let n = h.n_qubits();
    tau.validate(n, conn.n_physical())?;
    let strings: Vec<&PauliString> = h.strings().collect();
    let mut c_tau = vec![vec![0; n]; n];
    let mut cq_tau = vec![0; n];
    let mut cm_tau: BTreeMap<BasisLabel, u64> = BasisLabel::ALL.iter().map(|&b| (b, 0)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if !conn.has_edge(tau.image(i), tau.image(j)) {
                continue;
            }
            let counts = pair_counts(&strings, i, j);
            let total: u64 = counts.iter().sum();
            c_tau[i][j] = total;
            c_tau[j][i] = total;
            for (b, k) in BasisLabel::ENTANGLED.iter().zip(counts) {
                *cm_tau.get_mut(b).unwrap() += k;
            }
            cq_tau[i] += total;
            cq_tau[j] += total;
        }
        for (b, k) in BasisLabel::LOCAL.iter().zip(local_counts(&strings, i)) {
            *cm_tau.get_mut(b).unwrap() += k;
            cq_tau[i] += k;
        }
    }
    Ok(TauCompatibility { c_tau, cq_tau, cm_tau })
}

/// Qubit order by descending `CQ` (ties by index) and basis order by
/// descending `CM` (ties by [`BasisLabel::DEFAULT_ORDER`]).
pub fn derive_orders(tc: &TauCompatibility) -> (Vec<usize>, Vec<BasisLabel>) {
    let mut qubits: Vec<usize> = (0..tc.cq_tau.len()).collect();
    qubits.sort_by_key(|&q| std::cmp::Reverse(tc.cq_tau[q]));
    let mut measurements = BasisLabel::DEFAULT_ORDER.to_vec();
    measurements.sort_by_key(|b| std::cmp::Reverse(tc.cm_tau[b]));
    (qubits, measurements)
}
