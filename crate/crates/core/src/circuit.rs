//! Gate set used by the measurement circuits, plus a dense reference
//! construction of small circuit unitaries.
//!
//! Qubit `q` of an `n`-qubit register is bit `n - 1 - q` of a basis-state
//! index: qubit 0 is the most significant bit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub type Matrix = Vec<Vec<Complex64>>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate", rename_all = "lowercase")]
pub enum Gate {
    H { qubit: usize },
    S { qubit: usize },
    Sdg { qubit: usize },
    /// `U2(phi, lambda) = [[1, -e^{i lambda}], [e^{i phi}, e^{i (phi + lambda)}]] / sqrt(2)`
    U2 { qubit: usize, phi: f64, lambda: f64 },
    Cx { control: usize, target: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { qubit } | Gate::S { qubit } | Gate::Sdg { qubit } | Gate::U2 { qubit, .. } => vec![qubit],
            Gate::Cx { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. })
    }

    /// The 2x2 matrix of a single-qubit gate, `None` for CNOT.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        match *self {
            Gate::H { .. } => Some([
                [c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)],
                [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)],
            ]),
            Gate::S { .. } => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]),
            Gate::Sdg { .. } => Some([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, -1.0)]]),
            Gate::U2 { phi, lambda, .. } => {
                let e = |t: f64| Complex64::from_polar(FRAC_1_SQRT_2, t);
                Some([[c(FRAC_1_SQRT_2, 0.0), -e(lambda)], [e(phi), e(phi + lambda)]])
            }
            Gate::Cx { .. } => None,
        }
    }

    /// Renames qubits through `map`.
    pub fn remap(&self, map: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H { qubit } => Gate::H { qubit: map(qubit) },
            Gate::S { qubit } => Gate::S { qubit: map(qubit) },
            Gate::Sdg { qubit } => Gate::Sdg { qubit: map(qubit) },
            Gate::U2 { qubit, phi, lambda } => Gate::U2 {
                qubit: map(qubit),
                phi,
                lambda,
            },
            Gate::Cx { control, target } => Gate::Cx {
                control: map(control),
                target: map(target),
            },
        }
    }
}

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![Complex64::new(0.0, 0.0); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            let aik = a[i][k];
            if aik == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..m {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

pub fn dagger(a: &Matrix) -> Matrix {
    let n = a.len();
    let m = a[0].len();
    (0..m).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (ar, ac, br, bc) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![Complex64::new(0.0, 0.0); ac * bc]; ar * br];
    for i in 0..ar {
        for j in 0..ac {
            for k in 0..br {
                for l in 0..bc {
                    out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

/// Full `2^n x 2^n` matrix of one gate, built from Kronecker products
/// (single-qubit gates) or a basis permutation (CNOT).
pub fn gate_matrix(gate: &Gate, n: usize) -> Matrix {
    match gate.single_qubit_matrix() {
        Some(m) => {
            let target = gate.qubits()[0];
            let g: Matrix = m.iter().map(|r| r.to_vec()).collect();
            (0..n).fold(identity(1), |acc, q| {
                if q == target {
                    kron(&acc, &g)
                } else {
                    kron(&acc, &identity(2))
                }
            })
        }
        None => {
            let Gate::Cx { control, target } = *gate else { unreachable!() };
            let dim = 1 << n;
            let cbit = 1 << (n - 1 - control);
            let tbit = 1 << (n - 1 - target);
            let mut out = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
            for col in 0..dim {
                let row = if col & cbit != 0 { col ^ tbit } else { col };
                out[row][col] = Complex64::new(1.0, 0.0);
            }
            out
        }
    }
}

/// Dense unitary of a gate list on `n` qubits (first gate applied first).
pub fn unitary(gates: &[Gate], n: usize) -> Matrix {
    gates
        .iter()
        .fold(identity(1 << n), |acc, g| matmul(&gate_matrix(g, n), &acc))
}

/// Largest entry of `|U U^dagger - 1|`.
pub fn unitarity_defect(u: &Matrix) -> f64 {
    let p = matmul(u, &dagger(u));
    let id = identity(u.len());
    p.iter()
        .zip(&id)
        .flat_map(|(r, s)| r.iter().zip(s).map(|(a, b)| (a - b).norm()))
        .fold(0.0, f64::max)
}
