//! End-to-end planning (embedding, orders, grouping, cost) and the JSON plan
//! document written by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::circuit::Gate;
use crate::connectivity::ConnectivityGraph;
use crate::embedding::{
    compatibility_matrix, derive_orders, embed_connected, embed_disconnected, embed_naive, tau_compatibility, EmbeddingMap,
};
use crate::error::{Error, Result};
use crate::evaluator::{count_cnots, CostReport};
use crate::grouping::{check_grouping, em_grouping, heem_grouping, tpb_grouping, Block, Group, GroupingResult, MeasurementAssignment, Method, Orders};
use crate::pauli::{Hamiltonian, Term};
use crate::sim::RNG_NAME;

pub const SCHEMA_VERSION: u32 = 1;

/// Heuristic used to place theoretical qubits on the device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingKind {
    Naive,
    Disconnected,
    Connected,
}

impl std::fmt::Display for EmbeddingKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            EmbeddingKind::Naive => "naive",
            EmbeddingKind::Disconnected => "disconnected",
            EmbeddingKind::Connected => "connected",
        })
    }
}

pub fn embed(kind: EmbeddingKind, h: &Hamiltonian, conn: &ConnectivityGraph) -> Result<EmbeddingMap> {
    match kind {
        EmbeddingKind::Naive => embed_naive(h.n_qubits(), conn.n_physical()),
        EmbeddingKind::Disconnected => embed_disconnected(&compatibility_matrix(h), conn),
        EmbeddingKind::Connected => embed_connected(&compatibility_matrix(h), conn),
    }
}

/// Loop orders for HEEM: largest-degree-first terms, and for the compatibility
/// driven embeddings the qubit and basis orders derived from `tau`.
pub fn heem_orders(h: &Hamiltonian, kind: EmbeddingKind, tau: &EmbeddingMap, conn: &ConnectivityGraph) -> Result<Orders> {
    let mut orders = Orders::default_for(h)?;
    if kind != EmbeddingKind::Naive {
        let (qubits, measurements) = derive_orders(&tau_compatibility(h, tau, conn)?);
        orders.qubits = qubits;
        orders.measurements = measurements;
    }
    Ok(orders)
}

/// A grouping plus the device placement and cost it was produced for.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub result: GroupingResult,
    pub embedding_kind: EmbeddingKind,
    /// Device placement; for EM only the cost depends on it.
    pub tau: EmbeddingMap,
    pub device: ConnectivityGraph,
    pub cost: CostReport,
}

pub fn plan(h: &Hamiltonian, device: &ConnectivityGraph, method: Method, kind: EmbeddingKind) -> Result<Plan> {
    let (result, tau) = match method {
        Method::Tpb => (tpb_grouping(h)?, EmbeddingMap::identity(h.n_qubits())),
        Method::Em => (em_grouping(h, &Orders::default_for(h)?)?, embed(kind, h, device)?),
        Method::Heem => {
            let tau = embed(kind, h, device)?;
            let orders = heem_orders(h, kind, &tau, device)?;
            (heem_grouping(h, device, &tau, &orders)?, tau)
        }
    };
    check_grouping(h, &result)?;
    let cost = count_cnots(&result, device, &tau)?;
    Ok(Plan {
        result,
        embedding_kind: kind,
        tau,
        device: device.clone(),
        cost,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConnectivityRecord {
    pub n_physical: usize,
    pub edges: Vec<(usize, usize)>,
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanMetadata {
    pub method: Method,
    pub embedding: EmbeddingKind,
    pub seed: Option<u64>,
    pub rng: String,
    pub n_qubits: usize,
    pub orders: Orders,
    pub tau: EmbeddingMap,
    pub connectivity: ConnectivityRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanGroup {
    pub id: usize,
    pub terms: Vec<usize>,
    pub blocks: Vec<Block>,
    pub gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema_version: u32,
    pub metadata: PlanMetadata,
    pub terms: Vec<Term>,
    pub groups: Vec<PlanGroup>,
    pub cost: CostReport,
}

impl PlanDocument {
    pub fn new(h: &Hamiltonian, plan: &Plan, seed: Option<u64>) -> Self {
        let r = &plan.result;
        PlanDocument {
            schema_version: SCHEMA_VERSION,
            metadata: PlanMetadata {
                method: r.method,
                embedding: plan.embedding_kind,
                seed,
                rng: RNG_NAME.to_string(),
                n_qubits: h.n_qubits(),
                orders: r.orders.clone(),
                tau: plan.tau.clone(),
                connectivity: ConnectivityRecord {
                    n_physical: plan.device.n_physical(),
                    edges: plan.device.edges(),
                    digest: plan.device.digest(),
                },
            },
            terms: h.terms().to_vec(),
            groups: r
                .groups
                .iter()
                .enumerate()
                .map(|(id, g)| PlanGroup {
                    id,
                    terms: g.terms.clone(),
                    blocks: g.assignment.blocks().to_vec(),
                    gates: g.circuit(),
                })
                .collect(),
            cost: plan.cost.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plan serializes") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Plan(e.to_string()))
    }

    /// Rebuilds the Hamiltonian and plan, checking every stored field that can
    /// be recomputed: schema, digest, grouping validity, gates and cost.
    pub fn load(&self) -> Result<(Hamiltonian, Plan)> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Plan(format!("unsupported schema version {}", self.schema_version)));
        }
        let m = &self.metadata;
        let h = Hamiltonian::new(m.n_qubits, self.terms.iter().map(|t| (t.coefficient, t.string.clone())))?;
        if h.terms() != self.terms.as_slice() {
            return Err(Error::Plan("terms are not in canonical form (duplicates or zero coefficients)".into()));
        }
        let device = ConnectivityGraph::new(m.connectivity.n_physical, m.connectivity.edges.iter().copied())?;
        if device.digest() != m.connectivity.digest {
            return Err(Error::Plan("connectivity digest does not match its edge list".into()));
        }
        let n = m.n_qubits;
        let (embedding, topology) = match m.method {
            Method::Tpb => (EmbeddingMap::identity(n), ConnectivityGraph::edgeless(n)),
            Method::Em => (EmbeddingMap::identity(n), ConnectivityGraph::complete(n)),
            Method::Heem => (m.tau.clone(), device.clone()),
        };
        m.tau.validate(n, device.n_physical())?;
        let mut groups = Vec::with_capacity(self.groups.len());
        for (pos, g) in self.groups.iter().enumerate() {
            if g.id != pos {
                return Err(Error::Plan(format!("group at position {pos} has id {}", g.id)));
            }
            let group = Group {
                terms: g.terms.clone(),
                assignment: MeasurementAssignment::new(g.blocks.clone()),
            };
            if group.circuit() != g.gates {
                return Err(Error::InvalidGroup {
                    group: pos,
                    reason: "stored gates do not match the blocks".into(),
                });
            }
            groups.push(group);
        }
        let result = GroupingResult {
            method: m.method,
            groups,
            orders: m.orders.clone(),
            embedding,
            connectivity: topology,
        };
        check_grouping(&h, &result)?;
        let cost = count_cnots(&result, &device, &m.tau)?;
        if cost != self.cost {
            return Err(Error::Plan(format!("stored cost {:?} differs from recomputed {:?}", self.cost, cost)));
        }
        Ok((
            h,
            Plan {
                result,
                embedding_kind: m.embedding,
                tau: m.tau.clone(),
                device,
                cost,
            },
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ham(words: &[&str]) -> Hamiltonian {
        Hamiltonian::new(words[0].len(), words.iter().map(|w| (1.0, w.parse().unwrap()))).unwrap()
    }

    #[test]
    fn single_measurement_on_a_path() {
        let h = ham(&["XXZ", "ZXX"]);
        let path = ConnectivityGraph::path(3);
        assert_eq!(plan(&h, &path, Method::Heem, EmbeddingKind::Connected).unwrap().result.n_groups(), 1);
        assert_eq!(plan(&h, &path, Method::Heem, EmbeddingKind::Naive).unwrap().result.n_groups(), 2);
        assert_eq!(plan(&ham(&["XIZ", "XYZ"]), &path, Method::Tpb, EmbeddingKind::Naive).unwrap().result.n_groups(), 1);
    }

    #[test]
    fn document_round_trip_and_tamper_detection() {
        let h = ham(&["XXZ", "ZXX", "YYI", "IZZ"]);
        let device = ConnectivityGraph::path(4);
        for method in [Method::Tpb, Method::Em, Method::Heem] {
            let p = plan(&h, &device, method, EmbeddingKind::Connected).unwrap();
            let doc = PlanDocument::new(&h, &p, Some(7));
            let back = PlanDocument::from_json(&doc.to_json()).unwrap();
            assert_eq!(back, doc);
            let (h2, p2) = back.load().unwrap();
            assert_eq!(h2, h);
            assert_eq!(p2.result.groups, p.result.groups);
        }
        let p = plan(&h, &device, Method::Heem, EmbeddingKind::Connected).unwrap();
        let mut doc = PlanDocument::new(&h, &p, None);
        doc.metadata.connectivity.digest = "00".into();
        assert!(doc.load().is_err());
        let mut doc = PlanDocument::new(&h, &p, None);
        doc.groups[0].gates.clear();
        assert!(matches!(doc.load(), Err(Error::InvalidGroup { .. })));
        let mut doc = PlanDocument::new(&h, &p, None);
        doc.cost.cnots += 1;
        assert!(doc.load().is_err());
    }
}
