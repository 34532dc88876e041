#![allow(dead_code)]

use heem::pauli::random_hamiltonian;
use heem::Hamiltonian;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn ham(words: &[&str]) -> Hamiltonian {
    Hamiltonian::new(words[0].len(), words.iter().map(|w| (1.0, w.parse().unwrap()))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Hamiltonian with a term count that always fits the qubit count.
pub fn random_ham(n_qubits: usize, max_terms: usize, seed: u64) -> Hamiltonian {
    let cap = 4usize.pow(n_qubits as u32) - 1;
    random_hamiltonian(n_qubits, max_terms.min(cap), &mut rng(seed))
}
