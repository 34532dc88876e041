//! Grouping engines: tensor-product-basis (TPB) colouring, unconstrained
//! entangled measurements (EM) and hardware-efficient entangled
//! measurements (HEEM) restricted to a device topology.

use serde::{Deserialize, Serialize};

use crate::bases::{basis_circuit, BasisLabel};
use crate::circuit::Gate;
use crate::connectivity::ConnectivityGraph;
use crate::embedding::EmbeddingMap;
use crate::error::{Error, Result};
use crate::pauli::{check_permutation, Hamiltonian, Pauli, PauliGraph, PauliString};

/// A basis measured on one qubit or on an ordered pair of qubits.
///
/// For a pair `[a, b]` the word read by the basis is `P_a P_b` and `a` is the
/// high-order outcome bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub qubits: Vec<usize>,
    pub basis: BasisLabel,
}

impl Block {
    pub fn local(qubit: usize, basis: BasisLabel) -> Self {
        debug_assert_eq!(basis.arity(), 1);
        Block {
            qubits: vec![qubit],
            basis,
        }
    }

    pub fn pair(a: usize, b: usize, basis: BasisLabel) -> Self {
        debug_assert_eq!(basis.arity(), 2);
        Block {
            qubits: vec![a, b],
            basis,
        }
    }

    pub fn is_entangled(&self) -> bool {
        self.qubits.len() == 2
    }

    /// Whether `s` restricted to this block lies in the basis' compatible set.
    pub fn accepts(&self, s: &PauliString) -> bool {
        let letters: Vec<Pauli> = self.qubits.iter().map(|&q| s.get(q)).collect();
        self.basis.contains(&letters)
    }

    /// Basis-change gates on the block's (theoretical) qubits.
    pub fn gates(&self) -> Vec<Gate> {
        basis_circuit(self.basis).on_qubits(&self.qubits)
    }
}

/// Disjoint blocks covering (part of) the qubits of a group.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MeasurementAssignment {
    blocks: Vec<Block>,
}

impl MeasurementAssignment {
    pub fn new(blocks: Vec<Block>) -> Self {
        MeasurementAssignment { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn push(&mut self, block: Block) {
        self.blocks.push(block);
    }

    pub fn block_of(&self, qubit: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.qubits.contains(&qubit))
    }

    pub fn covers(&self, qubit: usize) -> bool {
        self.block_of(qubit).is_some()
    }

    pub fn accepts(&self, s: &PauliString) -> bool {
        self.blocks.iter().all(|b| b.accepts(s))
    }

    pub fn n_entangled(&self) -> usize {
        self.blocks.iter().filter(|b| b.is_entangled()).count()
    }

    /// Covers every remaining qubit with the local basis of `reference`'s letter
    /// there (`Z1` on identity letters).
    pub fn finalize(&mut self, reference: &PauliString) {
        for q in 0..reference.len() {
            if !self.covers(q) {
                self.blocks.push(Block::local(q, BasisLabel::local_for(reference.get(q))));
            }
        }
    }

    /// The composite measurement circuit, block by block.
    pub fn gates(&self) -> Vec<Gate> {
        self.blocks.iter().flat_map(Block::gates).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub terms: Vec<usize>,
    pub assignment: MeasurementAssignment,
}

impl Group {
    pub fn circuit(&self) -> Vec<Gate> {
        self.assignment.gates()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tpb,
    Em,
    Heem,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Tpb => "tpb",
            Method::Em => "em",
            Method::Heem => "heem",
        })
    }
}

/// Loop orders of the greedy engines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    /// Term visiting order (a permutation of term indices).
    pub terms: Vec<usize>,
    /// Qubit order used when enumerating candidate blocks.
    pub qubits: Vec<usize>,
    /// Basis scan order.
    pub measurements: Vec<BasisLabel>,
}

impl Orders {
    /// Largest-degree-first term order, identity qubit order and the default
    /// basis scan order.
    pub fn default_for(h: &Hamiltonian) -> Result<Self> {
        Ok(Orders {
            terms: PauliGraph::build(h)?.largest_degree_first_order(),
            qubits: (0..h.n_qubits()).collect(),
            measurements: BasisLabel::DEFAULT_ORDER.to_vec(),
        })
    }

    fn validate(&self, h: &Hamiltonian) -> Result<()> {
        check_permutation(&self.terms, h.len(), "term order")?;
        check_permutation(&self.qubits, h.n_qubits(), "qubit order")?;
        for (i, b) in self.measurements.iter().enumerate() {
            if self.measurements[..i].contains(b) {
                return Err(Error::InvalidOrder(format!("basis {b} listed twice")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupingResult {
    pub method: Method,
    pub groups: Vec<Group>,
    pub orders: Orders,
    pub embedding: EmbeddingMap,
    /// Topology the entangled blocks were constrained to.
    pub connectivity: ConnectivityGraph,
}

impl GroupingResult {
    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn n_entangled_blocks(&self) -> usize {
        self.groups.iter().map(|g| g.assignment.n_entangled()).sum()
    }
}

/// Greedy joint-measurement check between the open group's seed `vi` and a
/// candidate `vj`, restricted to blocks whose images are device edges.
#[derive(Debug, Clone, Copy)]
pub struct Assigner<'a> {
    pub connectivity: &'a ConnectivityGraph,
    pub embedding: &'a EmbeddingMap,
    pub qubit_order: &'a [usize],
    pub measurement_order: &'a [BasisLabel],
}

impl Assigner<'_> {
    /// Extends `m` so that it also measures `vj`, or returns `None`.
    ///
    /// `m` must accept `vi`, and every member of the group must agree with `vi`
    /// on the qubits `m` leaves uncovered.
    pub fn assign(&self, vi: &PauliString, vj: &PauliString, m: &MeasurementAssignment) -> Option<MeasurementAssignment> {
        if !m.accepts(vj) {
            return None;
        }
        let mut unassigned: Vec<usize> = self
            .qubit_order
            .iter()
            .copied()
            .filter(|&q| !m.covers(q) && vi.get(q) != vj.get(q))
            .collect();
        let mut m = m.clone();
        'scan: while !unassigned.is_empty() {
            for &basis in self.measurement_order {
                if basis.arity() == 1 {
                    for (k, &q) in unassigned.iter().enumerate() {
                        if basis.contains(&[vi.get(q)]) && basis.contains(&[vj.get(q)]) {
                            m.push(Block::local(q, basis));
                            unassigned.remove(k);
                            continue 'scan;
                        }
                    }
                } else {
                    for (ka, &a) in unassigned.iter().enumerate() {
                        for (kb, &b) in unassigned.iter().enumerate() {
                            if ka == kb || !self.connectivity.has_edge(self.embedding.image(a), self.embedding.image(b)) {
                                continue;
                            }
                            if basis.contains(&[vi.get(a), vi.get(b)]) && basis.contains(&[vj.get(a), vj.get(b)]) {
                                m.push(Block::pair(a, b, basis));
                                unassigned.retain(|&q| q != a && q != b);
                                continue 'scan;
                            }
                        }
                    }
                }
            }
            return None;
        }
        Some(m)
    }
}

/// HEEM grouping: greedy open-group construction where two terms share a
/// group only if an assignment with device-adjacent entangled blocks exists.
pub fn heem_grouping(
    h: &Hamiltonian,
    connectivity: &ConnectivityGraph,
    embedding: &EmbeddingMap,
    orders: &Orders,
) -> Result<GroupingResult> {
    if h.is_empty() {
        return Err(Error::EmptyHamiltonian);
    }
    embedding.validate(h.n_qubits(), connectivity.n_physical())?;
    orders.validate(h)?;
    let groups = greedy_groups(h, connectivity, embedding, orders);
    Ok(GroupingResult {
        method: Method::Heem,
        groups,
        orders: orders.clone(),
        embedding: embedding.clone(),
        connectivity: connectivity.clone(),
    })
}

fn greedy_groups(h: &Hamiltonian, connectivity: &ConnectivityGraph, embedding: &EmbeddingMap, orders: &Orders) -> Vec<Group> {
    let assigner = Assigner {
        connectivity,
        embedding,
        qubit_order: &orders.qubits,
        measurement_order: &orders.measurements,
    };
    let strings: Vec<&PauliString> = h.strings().collect();
    let mut grouped = vec![false; h.len()];
    let mut groups = Vec::new();
    for (pos, &i) in orders.terms.iter().enumerate() {
        if grouped[i] {
            continue;
        }
        grouped[i] = true;
        let mut assignment = MeasurementAssignment::default();
        let mut terms = vec![i];
        for &j in &orders.terms[pos + 1..] {
            if grouped[j] {
                continue;
            }
            if let Some(extended) = assigner.assign(strings[i], strings[j], &assignment) {
                assignment = extended;
                grouped[j] = true;
                terms.push(j);
            }
        }
        assignment.finalize(strings[i]);
        groups.push(Group { terms, assignment });
    }
    groups
}

/// EM grouping: HEEM on a complete topology with the identity embedding.
pub fn em_grouping(h: &Hamiltonian, orders: &Orders) -> Result<GroupingResult> {
    let n = h.n_qubits();
    let mut result = heem_grouping(h, &ConnectivityGraph::complete(n), &EmbeddingMap::identity(n), orders)?;
    result.method = Method::Em;
    Ok(result)
}

/// TPB grouping: greedy colouring of the Pauli graph in largest-degree-first
/// order; each colour class is measured in a product of local bases.
pub fn tpb_grouping(h: &Hamiltonian) -> Result<GroupingResult> {
    let graph = PauliGraph::build(h)?;
    let order = graph.largest_degree_first_order();
    let mut color: Vec<Option<usize>> = vec![None; h.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        let used: Vec<usize> = graph.neighbors(v).iter().filter_map(|&u| color[u]).collect();
        let c = (0..).find(|c| !used.contains(c)).unwrap();
        color[v] = Some(c);
        if c == classes.len() {
            classes.push(Vec::new());
        }
        classes[c].push(v);
    }
    let n = h.n_qubits();
    let groups = classes
        .into_iter()
        .map(|terms| {
            let blocks = (0..n)
                .map(|q| {
                    let letter = terms
                        .iter()
                        .map(|&t| h.terms()[t].string.get(q))
                        .find(|p| !p.is_identity())
                        .unwrap_or(Pauli::I);
                    Block::local(q, BasisLabel::local_for(letter))
                })
                .collect();
            Group {
                terms,
                assignment: MeasurementAssignment::new(blocks),
            }
        })
        .collect();
    Ok(GroupingResult {
        method: Method::Tpb,
        groups,
        orders: Orders {
            terms: order,
            qubits: (0..n).collect(),
            measurements: BasisLabel::LOCAL.to_vec(),
        },
        embedding: EmbeddingMap::identity(n),
        connectivity: ConnectivityGraph::edgeless(n),
    })
}

/// Checks partition, block structure, connectivity and compatibility of a
/// grouping, returning the first violation found.
pub fn check_grouping(h: &Hamiltonian, r: &GroupingResult) -> Result<()> {
    let n = h.n_qubits();
    r.embedding.validate(n, r.connectivity.n_physical())?;
    let mut seen = vec![false; h.len()];
    for (gi, group) in r.groups.iter().enumerate() {
        let bad = |reason: String| Error::InvalidGroup { group: gi, reason };
        if group.terms.is_empty() {
            return Err(bad("group has no terms".into()));
        }
        for &t in &group.terms {
            if t >= h.len() {
                return Err(bad(format!("term {t} out of range")));
            }
            if std::mem::replace(&mut seen[t], true) {
                return Err(bad(format!("term {t} appears in more than one group")));
            }
        }
        let mut covered = vec![false; n];
        for block in group.assignment.blocks() {
            if block.qubits.len() != block.basis.arity() {
                return Err(bad(format!("block {:?} has the wrong arity for {}", block.qubits, block.basis)));
            }
            for &q in &block.qubits {
                if q >= n {
                    return Err(bad(format!("qubit {q} out of range")));
                }
                if std::mem::replace(&mut covered[q], true) {
                    return Err(bad(format!("qubit {q} is measured twice")));
                }
            }
            if let [a, b] = block.qubits[..] {
                if !r.connectivity.has_edge(r.embedding.image(a), r.embedding.image(b)) {
                    return Err(bad(format!("block ({a}, {b}) is not mapped to a device edge")));
                }
            }
        }
        for &t in &group.terms {
            let s = &h.terms()[t].string;
            if let Some(block) = group.assignment.blocks().iter().find(|b| !b.accepts(s)) {
                return Err(bad(format!("term {s} is not diagonal in {} on {:?}", block.basis, block.qubits)));
            }
            if let Some(q) = (0..n).find(|&q| !covered[q] && !s.get(q).is_identity()) {
                return Err(bad(format!("qubit {q} of term {s} is not measured")));
            }
        }
    }
    if let Some(t) = seen.iter().position(|&s| !s) {
        return Err(Error::InvalidGroup {
            group: r.groups.len(),
            reason: format!("term {t} is in no group"),
        });
    }
    Ok(())
}

pub fn verify_grouping(h: &Hamiltonian, r: &GroupingResult) -> bool {
    check_grouping(h, r).is_ok()
}
