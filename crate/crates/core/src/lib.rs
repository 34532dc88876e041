//! Grouping of Pauli strings into jointly measurable sets using two-qubit
//! entangled bases placed only on connected pairs of a device, together with
//! processor embedding, expectation-value reconstruction and a reference
//! statevector simulator.

pub mod bases;
pub mod circuit;
pub mod cli;
pub mod connectivity;
pub mod embedding;
pub mod error;
pub mod evaluator;
pub mod grouping;
pub mod pauli;
pub mod plan;
pub mod sim;
pub mod study;

pub use bases::{basis_circuit, compatible_set, weight_vector, BasisLabel};
pub use connectivity::ConnectivityGraph;
pub use embedding::{compatibility_matrix, embed_connected, embed_disconnected, embed_naive, EmbeddingMap};
pub use error::{Error, Result};
pub use evaluator::{count_cnots, expected_value, group_weight_vector, OutcomeHistogram};
pub use grouping::{em_grouping, heem_grouping, tpb_grouping, verify_grouping, GroupingResult, Method, Orders};
pub use plan::{plan, EmbeddingKind, Plan, PlanDocument};
pub use pauli::{Hamiltonian, Pauli, PauliString};
pub use sim::{dense_expectation, StateVector};

#[cfg(doctest)]
mod book {
    macro_rules! chapters {
        ($($name:ident),*) => {$(
            #[doc = include_str!(concat!("../../../book/src/", stringify!($name), ".md"))]
            mod $name {}
        )*};
    }
    chapters!(introduction, pauli, bases, grouping, embedding, evaluation, cli);
}
