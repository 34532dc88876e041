//! Small statevector simulator used as ground truth for reconstruction.
//!
//! Amplitudes are big-endian: qubit `q` of an `N`-qubit state is bit
//! `N - 1 - q` of the basis index, so outcome bitstrings read left to right in
//! qubit order.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, StandardNormal};

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::evaluator::OutcomeHistogram;
use crate::grouping::Group;
use crate::pauli::{Hamiltonian, Pauli, PauliString};

pub const MAX_QUBITS: usize = 12;

/// Name of the generator behind every seeded draw, recorded in outputs.
pub const RNG_NAME: &str = "ChaCha8";

const NORM_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(n_qubits: usize) -> Result<Self> {
        check_size(n_qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidState(format!("length {len} is not a power of two")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_size(n_qubits)?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized(norm));
        }
        Ok(StateVector { n_qubits, amplitudes })
    }

    /// Haar-random state: normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        check_size(n_qubits)?;
        let mut amplitudes: Vec<Complex64> = (0..1usize << n_qubits)
            .map(|_| Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(StateVector { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn mask(&self, qubit: usize) -> Result<usize> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        Ok(1 << (self.n_qubits - 1 - qubit))
    }

    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if let Gate::Cx { control, target } = *gate {
            let (c, t) = (self.mask(control)?, self.mask(target)?);
            for i in 0..self.amplitudes.len() {
                if i & c != 0 && i & t == 0 {
                    self.amplitudes.swap(i, i | t);
                }
            }
            return Ok(());
        }
        let m = self.mask(gate.qubits()[0])?;
        let u = gate.single_qubit_matrix().expect("single-qubit gate");
        for i in 0..self.amplitudes.len() {
            if i & m == 0 {
                let (a, b) = (self.amplitudes[i], self.amplitudes[i | m]);
                self.amplitudes[i] = u[0][0] * a + u[0][1] * b;
                self.amplitudes[i | m] = u[1][0] * a + u[1][1] * b;
            }
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, gates: &[Gate]) -> Result<()> {
        gates.iter().try_for_each(|g| self.apply_gate(g))
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits(n_qubits));
    }
    Ok(())
}

pub fn apply_circuit(state: &StateVector, gates: &[Gate]) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_circuit(gates)?;
    Ok(out)
}

/// Exact outcome probabilities after the group's measurement circuit.
pub fn outcome_distribution(state: &StateVector, group: &Group) -> Result<Vec<f64>> {
    Ok(apply_circuit(state, &group.circuit())?.probabilities())
}

/// Multinomial draw of `shots` outcomes from `dist`, seeded.
pub fn sample_histogram(group: usize, dist: &[f64], shots: u64, seed: u64) -> Result<OutcomeHistogram> {
    sample_histogram_with(group, dist, shots, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Multinomial draw as a chain of conditional binomials in outcome order.
pub fn sample_histogram_with<R: Rng + ?Sized>(group: usize, dist: &[f64], shots: u64, rng: &mut R) -> Result<OutcomeHistogram> {
    if shots == 0 {
        return Err(Error::ZeroShots(group));
    }
    let mut counts = BTreeMap::new();
    let mut remaining = shots;
    let mut rest = 1.0f64;
    let last = dist.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    for (outcome, &p) in dist.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let k = if outcome == last {
            remaining
        } else if p <= 0.0 {
            0
        } else {
            let q = (p / rest).clamp(0.0, 1.0);
            Binomial::new(remaining, q).expect("probability in [0, 1]").sample(rng)
        };
        if k > 0 {
            counts.insert(outcome, k);
        }
        remaining -= k;
        rest -= p;
    }
    Ok(OutcomeHistogram::new(group, counts))
}

/// `<psi|P|psi>` for one Pauli string, applied bitwise.
pub fn pauli_expectation(state: &StateVector, word: &PauliString) -> Result<Complex64> {
    let n = state.n_qubits;
    if word.len() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: word.len(),
        });
    }
    let (mut flip, mut sign, mut n_y) = (0usize, 0usize, 0u32);
    for (q, &p) in word.letters().iter().enumerate() {
        let bit = 1 << (n - 1 - q);
        match p {
            Pauli::I => {}
            Pauli::X => flip |= bit,
            Pauli::Y => {
                flip |= bit;
                sign |= bit;
                n_y += 1;
            }
            Pauli::Z => sign |= bit,
        }
    }
    // Y|0> = i|1>, Y|1> = -i|0>
    let i_pow = Complex64::i().powu(n_y);
    let amps = &state.amplitudes;
    let mut total = Complex64::new(0.0, 0.0);
    for (i, &a) in amps.iter().enumerate() {
        let parity = if (i & sign).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
        total += amps[i ^ flip].conj() * a * parity;
    }
    Ok(total * i_pow)
}

pub fn dense_expectation_complex(state: &StateVector, h: &Hamiltonian) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for term in h.terms() {
        total += pauli_expectation(state, &term.string)? * term.coefficient;
    }
    Ok(total)
}

pub fn dense_expectation(state: &StateVector, h: &Hamiltonian) -> Result<f64> {
    Ok(dense_expectation_complex(state, h)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::{basis_circuit, compatible_set, weight_vector, BasisLabel};
    use crate::circuit::{self, Matrix};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_bad_states() {
        assert_eq!(StateVector::zeros(13), Err(Error::TooManyQubits(13)));
        assert!(matches!(StateVector::from_amplitudes(vec![c(1.0); 3]), Err(Error::InvalidState(_))));
        assert!(matches!(StateVector::from_amplitudes(vec![c(1.0); 2]), Err(Error::NotNormalized(_))));
        let mut s = StateVector::zeros(2).unwrap();
        assert!(matches!(s.apply_gate(&Gate::H { qubit: 2 }), Err(Error::QubitOutOfRange { .. })));
    }

    #[test]
    fn hadamard_twice_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = StateVector::random(3, &mut rng).unwrap();
        let t = apply_circuit(&s, &[Gate::H { qubit: 1 }, Gate::H { qubit: 1 }]).unwrap();
        assert!(s.amplitudes.iter().zip(&t.amplitudes).all(|(a, b)| (a - b).norm() < 1e-12));
        assert_eq!(apply_circuit(&s, &[]).unwrap(), s);
    }

    fn matrix_of(gates: &[Gate], n: usize) -> Matrix {
        let dim = 1 << n;
        let mut cols = Vec::new();
        for k in 0..dim {
            let mut amps = vec![c(0.0); dim];
            amps[k] = c(1.0);
            let s = apply_circuit(&StateVector::from_amplitudes(amps).unwrap(), gates).unwrap();
            cols.push(s.amplitudes);
        }
        (0..dim).map(|r| (0..dim).map(|k| cols[k][r]).collect()).collect()
    }

    #[test]
    fn stride_updates_match_dense_unitaries() {
        for b in BasisLabel::ALL {
            let circ = basis_circuit(b);
            let n = circ.arity();
            let sim = matrix_of(&circ.gates, n);
            let dense = circuit::unitary(&circ.gates, n);
            for (r1, r2) in sim.iter().zip(&dense) {
                assert!(r1.iter().zip(r2).all(|(a, b)| (a - b).norm() < 1e-12), "{b}");
            }
            assert!(circuit::unitarity_defect(&sim) < 1e-12);
        }
        let gates = [Gate::Cx { control: 2, target: 0 }, Gate::S { qubit: 1 }, Gate::H { qubit: 2 }];
        let sim = matrix_of(&gates, 3);
        let dense = circuit::unitary(&gates, 3);
        assert!(sim.iter().flatten().zip(dense.iter().flatten()).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn bell_state_gives_point_mass() {
        let h = 0.5f64.sqrt();
        let s = StateVector::from_amplitudes(vec![c(h), c(0.0), c(0.0), c(h)]).unwrap();
        let out = apply_circuit(&s, &basis_circuit(BasisLabel::Bell).on_qubits(&[0, 1])).unwrap();
        let nonzero = out.probabilities().iter().filter(|&&p| p > 1e-12).count();
        assert_eq!(nonzero, 1);
    }

    /// Each eigenvector of a compatible word lands on outcomes whose weight
    /// sign equals its eigenvalue.
    #[test]
    fn eigenstates_read_back_their_eigenvalues() {
        for b in BasisLabel::ENTANGLED {
            let u = basis_circuit(b).unitary();
            let udag = circuit::dagger(&u);
            for w in compatible_set(b).members {
                let signs = weight_vector(b, &w).unwrap();
                let m = crate::bases::pauli_word_matrix(&w);
                for k in 0..4 {
                    // U^dagger |k> is an eigenvector of w
                    let amps: Vec<Complex64> = (0..4).map(|r| udag[r][k]).collect();
                    let psi = StateVector::from_amplitudes(amps.clone()).unwrap();
                    let mpsi: Vec<Complex64> = (0..4).map(|r| (0..4).map(|j| m[r][j] * amps[j]).sum()).collect();
                    let lambda = signs.get(k);
                    assert!(mpsi.iter().zip(&amps).all(|(x, y)| (x - y * lambda).norm() < 1e-12), "{b} {w}");
                    let probs = apply_circuit(&psi, &basis_circuit(b).on_qubits(&[0, 1])).unwrap().probabilities();
                    assert!((probs[k] - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn dense_expectation_matches_matrix_build() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=4 {
            let h = crate::pauli::random_hamiltonian(n, 3 * n, &mut rng);
            let s = StateVector::random(n, &mut rng).unwrap();
            let mut expected = Complex64::new(0.0, 0.0);
            for t in h.terms() {
                let m = crate::bases::pauli_word_matrix(&t.string);
                for r in 0..1 << n {
                    for j in 0..1 << n {
                        expected += s.amplitudes[r].conj() * m[r][j] * s.amplitudes[j] * t.coefficient;
                    }
                }
            }
            let got = dense_expectation_complex(&s, &h).unwrap();
            assert!((got - expected).norm() < 1e-12);
            assert!(got.im.abs() < 1e-12);
        }
    }

    #[test]
    fn all_z_on_zero_state() {
        let h = Hamiltonian::new(3, [(2.5, "ZZZ".parse().unwrap())]).unwrap();
        assert!((dense_expectation(&StateVector::zeros(3).unwrap(), &h).unwrap() - 2.5).abs() < 1e-15);
    }

    #[test]
    fn sampling_is_deterministic_and_complete() {
        let dist = [0.1, 0.0, 0.6, 0.3];
        let a = sample_histogram(0, &dist, 1000, 5).unwrap();
        assert_eq!(a, sample_histogram(0, &dist, 1000, 5).unwrap());
        assert_eq!(a.counts.values().sum::<u64>(), 1000);
        assert!(!a.counts.contains_key(&1));
        let point = sample_histogram(1, &[0.0, 1.0], 77, 0).unwrap();
        assert_eq!(point.counts, BTreeMap::from([(1, 77)]));
        assert_eq!(sample_histogram(0, &dist, 0, 0), Err(Error::ZeroShots(0)));
    }

    #[test]
    fn frequencies_converge() {
        let dist = [0.25, 0.05, 0.4, 0.3];
        let hist = sample_histogram(0, &dist, 400_000, 9).unwrap();
        for (k, &p) in dist.iter().enumerate() {
            let f = hist.counts.get(&k).copied().unwrap_or(0) as f64 / 400_000.0;
            assert!((f - p).abs() < 5e-3);
        }
    }
}
