//! The nine measurement bases: three local (`X1`, `Y1`, `Z1`) and six
//! two-qubit entangled ones (Bell, Omega^X, Omega^Y, Omega^Z, Chi, Chi-tilde).
//!
//! For every basis this module knows which one- or two-letter Pauli words it
//! diagonalizes, the circuit that rotates it onto the computational basis,
//! and the eigenvalue signs of each compatible word indexed by outcome.
//!
//! # Wire convention for two-qubit circuits
//!
//! A two-qubit block acts on qubits `(a, b)`, the word restricted to it reads
//! `P_a P_b`, and `a` is the more significant outcome bit. Circuit wire 0 is
//! the *low-order* qubit `b` and wire 1 is `a`, so `CNOT(0, 1)` is controlled
//! by `b` and targets `a`. Under this mapping every circuit diagonalizes its
//! compatible set; with the opposite mapping the Chi and Chi-tilde circuits
//! swap roles.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{self, Gate, Matrix};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisLabel {
    X1,
    Y1,
    Z1,
    Bell,
    OmegaX,
    OmegaY,
    OmegaZ,
    Chi,
    ChiTilde,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 9] = [
        BasisLabel::X1,
        BasisLabel::Y1,
        BasisLabel::Z1,
        BasisLabel::Bell,
        BasisLabel::OmegaX,
        BasisLabel::OmegaY,
        BasisLabel::OmegaZ,
        BasisLabel::Chi,
        BasisLabel::ChiTilde,
    ];

    pub const ENTANGLED: [BasisLabel; 6] = [
        BasisLabel::Bell,
        BasisLabel::OmegaX,
        BasisLabel::OmegaY,
        BasisLabel::OmegaZ,
        BasisLabel::Chi,
        BasisLabel::ChiTilde,
    ];

    pub const LOCAL: [BasisLabel; 3] = [BasisLabel::X1, BasisLabel::Y1, BasisLabel::Z1];

    /// Scan order used by the grouping engines when no derived order is given:
    /// entangled bases first.
    pub const DEFAULT_ORDER: [BasisLabel; 9] = [
        BasisLabel::Bell,
        BasisLabel::OmegaX,
        BasisLabel::OmegaY,
        BasisLabel::OmegaZ,
        BasisLabel::Chi,
        BasisLabel::ChiTilde,
        BasisLabel::X1,
        BasisLabel::Y1,
        BasisLabel::Z1,
    ];

    pub fn arity(self) -> usize {
        if self.is_entangled() {
            2
        } else {
            1
        }
    }

    pub fn is_entangled(self) -> bool {
        !matches!(self, BasisLabel::X1 | BasisLabel::Y1 | BasisLabel::Z1)
    }

    /// The local basis measuring a given Pauli letter (`Z1` for `I`).
    pub fn local_for(p: Pauli) -> BasisLabel {
        match p {
            Pauli::X => BasisLabel::X1,
            Pauli::Y => BasisLabel::Y1,
            Pauli::I | Pauli::Z => BasisLabel::Z1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisLabel::X1 => "X1",
            BasisLabel::Y1 => "Y1",
            BasisLabel::Z1 => "Z1",
            BasisLabel::Bell => "Bell",
            BasisLabel::OmegaX => "OmegaX",
            BasisLabel::OmegaY => "OmegaY",
            BasisLabel::OmegaZ => "OmegaZ",
            BasisLabel::Chi => "Chi",
            BasisLabel::ChiTilde => "ChiTilde",
        }
    }

    /// Whether `word` (of length `arity`) is diagonal in this basis.
    pub fn contains(self, word: &[Pauli]) -> bool {
        use Pauli::*;
        match (self, word) {
            (BasisLabel::X1, [p]) => matches!(p, I | X),
            (BasisLabel::Y1, [p]) => matches!(p, I | Y),
            (BasisLabel::Z1, [p]) => matches!(p, I | Z),
            (_, [a, b]) if self.is_entangled() => {
                let pairs: [(Pauli, Pauli); 3] = match self {
                    BasisLabel::Bell => [(X, X), (Y, Y), (Z, Z)],
                    BasisLabel::OmegaX => [(X, X), (Y, Z), (Z, Y)],
                    BasisLabel::OmegaY => [(Y, Y), (X, Z), (Z, X)],
                    BasisLabel::OmegaZ => [(Z, Z), (X, Y), (Y, X)],
                    BasisLabel::Chi => [(X, Y), (Y, Z), (Z, X)],
                    BasisLabel::ChiTilde => [(Y, X), (Z, Y), (X, Z)],
                    _ => unreachable!(),
                };
                (*a == I && *b == I) || pairs.contains(&(*a, *b))
            }
            _ => false,
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BasisLabel::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidOrder(format!("unknown basis {s:?}")))
    }
}

/// The words diagonalized by one basis, identity word first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibleSet {
    pub basis: BasisLabel,
    pub members: Vec<PauliString>,
}

impl CompatibleSet {
    pub fn contains(&self, word: &PauliString) -> bool {
        self.members.contains(word)
    }
}

fn words(arity: usize) -> Vec<PauliString> {
    if arity == 1 {
        Pauli::ALL.iter().map(|&p| PauliString::new(vec![p])).collect()
    } else {
        Pauli::ALL
            .iter()
            .flat_map(|&a| Pauli::ALL.iter().map(move |&b| PauliString::new(vec![a, b])))
            .collect()
    }
}

pub fn compatible_set(b: BasisLabel) -> CompatibleSet {
    CompatibleSet {
        basis: b,
        members: words(b.arity()).into_iter().filter(|w| b.contains(w.letters())).collect(),
    }
}

/// Entangled bases that diagonalize both two-letter words. Empty when the
/// words are not jointly measurable by any of them.
pub fn entangled_options(a: &PauliString, b: &PauliString) -> Vec<BasisLabel> {
    BasisLabel::ENTANGLED
        .into_iter()
        .filter(|basis| basis.contains(a.letters()) && basis.contains(b.letters()))
        .collect()
}

/// A basis-change circuit on local wires (see the module docs for the wire
/// convention of two-qubit circuits).
#[derive(Debug, Clone, PartialEq)]
pub struct BasisCircuit {
    pub basis: BasisLabel,
    pub gates: Vec<Gate>,
}

impl BasisCircuit {
    pub fn arity(&self) -> usize {
        self.basis.arity()
    }

    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// The gates placed on a concrete block of qubits, `block[0]` being the
    /// high-order qubit.
    pub fn on_qubits(&self, block: &[usize]) -> Vec<Gate> {
        assert_eq!(block.len(), self.arity());
        let n = block.len();
        self.gates.iter().map(|g| g.remap(|w| block[n - 1 - w])).collect()
    }

    /// Basis-change unitary over the block, high-order qubit first.
    pub fn unitary(&self) -> Matrix {
        let block: Vec<usize> = (0..self.arity()).collect();
        circuit::unitary(&self.on_qubits(&block), self.arity())
    }
}

pub fn basis_circuit(b: BasisLabel) -> BasisCircuit {
    use std::f64::consts::{FRAC_PI_2, PI};
    let h = |q| Gate::H { qubit: q };
    let s = |q| Gate::S { qubit: q };
    let cx = Gate::Cx { control: 0, target: 1 };
    let gates = match b {
        BasisLabel::Z1 => vec![],
        BasisLabel::X1 => vec![h(0)],
        BasisLabel::Y1 => vec![Gate::Sdg { qubit: 0 }, h(0)],
        BasisLabel::Bell => vec![cx, h(0)],
        BasisLabel::OmegaX => vec![s(0), s(1), h(0), cx, h(0)],
        BasisLabel::OmegaY => vec![h(0), cx, h(0)],
        BasisLabel::OmegaZ => vec![s(0), cx, h(0)],
        BasisLabel::Chi => vec![
            Gate::U2 {
                qubit: 0,
                phi: FRAC_PI_2,
                lambda: PI,
            },
            cx,
            h(0),
        ],
        BasisLabel::ChiTilde => vec![
            Gate::U2 {
                qubit: 0,
                phi: 0.0,
                lambda: FRAC_PI_2,
            },
            cx,
            h(0),
        ],
    };
    BasisCircuit { basis: b, gates }
}

fn pauli_matrix(p: Pauli) -> Matrix {
    let z = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    match p {
        Pauli::I => vec![vec![one, z], vec![z, one]],
        Pauli::X => vec![vec![z, one], vec![one, z]],
        Pauli::Y => vec![vec![z, -i], vec![i, z]],
        Pauli::Z => vec![vec![one, z], vec![z, -one]],
    }
}

/// Dense matrix of a Pauli word, first letter acting on the high-order qubit.
pub fn pauli_word_matrix(word: &PauliString) -> Matrix {
    word.letters()
        .iter()
        .fold(circuit::identity(1), |acc, &p| circuit::kron(&acc, &pauli_matrix(p)))
}

/// Eigenvalue signs of a compatible word, indexed by measurement outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector(pub Vec<i8>);

impl WeightVector {
    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn get(&self, outcome: usize) -> f64 {
        f64::from(self.0[outcome])
    }
}

/// Diagonal of `U M U^dagger` for a word `M` in basis `b`, plus the largest
/// off-diagonal magnitude and the largest distance of a diagonal entry from
/// the nearest sign.
pub fn rotated_diagonal(b: BasisLabel, word: &PauliString) -> (Vec<Complex64>, f64) {
    let u = basis_circuit(b).unitary();
    let d = circuit::matmul(&circuit::matmul(&u, &pauli_word_matrix(word)), &circuit::dagger(&u));
    let mut off = 0.0f64;
    for (i, row) in d.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                off = off.max(v.norm());
            }
        }
    }
    ((0..d.len()).map(|i| d[i][i]).collect(), off)
}

fn weight_table() -> &'static Vec<(BasisLabel, PauliString, WeightVector)> {
    static TABLE: OnceLock<Vec<(BasisLabel, PauliString, WeightVector)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::new();
        for b in BasisLabel::ALL {
            for w in compatible_set(b).members {
                let (diag, off) = rotated_diagonal(b, &w);
                assert!(off < 1e-9, "{b} does not diagonalize {w}");
                let signs = diag
                    .iter()
                    .map(|v| {
                        assert!((v.re.abs() - 1.0).abs() < 1e-9 && v.im.abs() < 1e-9);
                        if v.re > 0.0 {
                            1
                        } else {
                            -1
                        }
                    })
                    .collect();
                table.push((b, w, WeightVector(signs)));
            }
        }
        table
    })
}

/// Outcome-indexed eigenvalue signs of `word` measured in basis `b`.
pub fn weight_vector(b: BasisLabel, word: &PauliString) -> Result<WeightVector> {
    weight_table()
        .iter()
        .find(|(basis, w, _)| *basis == b && w == word)
        .map(|(_, _, v)| v.clone())
        .ok_or_else(|| Error::NotInCompatibleSet {
            basis: b.to_string(),
            word: word.to_string(),
        })
}

/// Sign of `letters` (already restricted to a block) at a local outcome.
pub(crate) fn weight_sign(b: BasisLabel, letters: &[Pauli], outcome: usize) -> Option<i8> {
    weight_table()
        .iter()
        .find(|(basis, w, _)| *basis == b && w.letters() == letters)
        .map(|(_, _, v)| v.0[outcome])
}

/// Row/column order of the two-qubit compatibility table.
pub const TABLE_WORDS: [&str; 9] = ["XX", "YZ", "ZY", "YY", "XZ", "ZX", "ZZ", "XY", "YX"];

/// Every unordered pair of distinct table words with its entangled options.
pub fn compatibility_table() -> Vec<(PauliString, PauliString, Vec<BasisLabel>)> {
    let ws: Vec<PauliString> = TABLE_WORDS.iter().map(|w| w.parse().unwrap()).collect();
    let mut cells = Vec::new();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            cells.push((ws[i].clone(), ws[j].clone(), entangled_options(&ws[i], &ws[j])));
        }
    }
    cells
}
