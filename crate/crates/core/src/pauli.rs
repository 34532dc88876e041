//! Pauli strings, qubit Hamiltonians and the Pauli (incompatibility) graph.
//!
//! Qubit 0 is the leftmost letter of the textual form of a string, so `XYZ`
//! carries `X` on qubit 0 and `Z` on qubit 2.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single-qubit Pauli operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn is_identity(self) -> bool {
        self == Pauli::I
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A tensor product of single-qubit Paulis, one letter per theoretical qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Self {
        PauliString(letters)
    }

    pub fn identity(n: usize) -> Self {
        PauliString(vec![Pauli::I; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.0[qubit]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|p| p.is_identity())
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|p| !p.is_identity()).count()
    }

    /// The letters at `qubits`, in the given order.
    pub fn restrict(&self, qubits: &[usize]) -> PauliString {
        PauliString(qubits.iter().map(|&q| self.0[q]).collect())
    }

    /// Qubit-wise compatibility: at every position the letters agree or one is `I`.
    pub fn qubitwise_compatible(&self, other: &PauliString) -> Result<bool> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                left: self.len(),
                right: other.len(),
            });
        }
        Ok(self.qwc_unchecked(other))
    }

    pub(crate) fn qwc_unchecked(&self, other: &PauliString) -> bool {
        self.0
            .iter()
            .zip(&other.0)
            .all(|(&a, &b)| a == b || a.is_identity() || b.is_identity())
    }

    /// Relabels qubits: letter at qubit `q` moves to qubit `perm[q]`.
    pub fn relabel(&self, perm: &[usize]) -> PauliString {
        let mut out = vec![Pauli::I; self.len()];
        for (q, &p) in self.0.iter().enumerate() {
            out[perm[q]] = p;
        }
        PauliString(out)
    }
}

/// Checks qubit-wise compatibility of two strings of equal length.
pub fn qubitwise_compatible(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.qubitwise_compatible(b)
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(Pauli::from_char)
            .collect::<Option<Vec<_>>>()
            .map(PauliString)
            .ok_or_else(|| Error::InvalidWord(s.to_string()))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.0 {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub coefficient: f64,
    #[serde(rename = "pauli")]
    pub string: PauliString,
}

/// A real linear combination of Pauli strings on `n_qubits` qubits.
///
/// Duplicate strings are merged by summing their coefficients; strings whose
/// merged coefficient is exactly zero are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut merged: Vec<Term> = Vec::new();
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        for (coefficient, string) in terms {
            if string.len() != n_qubits {
                return Err(Error::LengthMismatch {
                    left: n_qubits,
                    right: string.len(),
                });
            }
            if !coefficient.is_finite() {
                return Err(Error::InvalidWord(format!("non-finite coefficient {coefficient}")));
            }
            match index.get(&string) {
                Some(&i) => merged[i].coefficient += coefficient,
                None => {
                    index.insert(string.clone(), merged.len());
                    merged.push(Term { coefficient, string });
                }
            }
        }
        merged.retain(|t| t.coefficient != 0.0);
        Ok(Hamiltonian {
            n_qubits,
            terms: merged,
        })
    }

    /// Parses the plain-text format: one `<coefficient> <word>` per line,
    /// `#` starts a comment, blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut raw = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let (Some(coef), Some(word), None) = (fields.next(), fields.next(), fields.next()) else {
                return Err(Error::MalformedLine {
                    line: line_no,
                    reason: "expected `<coefficient> <pauli word>`".into(),
                });
            };
            let coefficient: f64 = coef
                .parse()
                .ok()
                .filter(|c: &f64| c.is_finite())
                .ok_or_else(|| Error::MalformedCoefficient {
                    line: line_no,
                    text: coef.to_string(),
                })?;
            let letters = word
                .chars()
                .map(|c| {
                    Pauli::from_char(c).ok_or(Error::IllegalLetter {
                        line: line_no,
                        letter: c,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let expected = *n_qubits.get_or_insert(letters.len());
            if letters.len() != expected {
                return Err(Error::InconsistentLength {
                    line: line_no,
                    expected,
                    found: letters.len(),
                });
            }
            raw.push((coefficient, PauliString(letters)));
        }
        let n_qubits = n_qubits.ok_or(Error::EmptyInput)?;
        Hamiltonian::new(n_qubits, raw)
    }

    /// Canonical text form, readable by [`Hamiltonian::parse`].
    pub fn to_text(&self) -> String {
        self.terms
            .iter()
            .map(|t| format!("{:?} {}\n", t.coefficient, t.string))
            .collect()
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn strings(&self) -> impl Iterator<Item = &PauliString> {
        self.terms.iter().map(|t| &t.string)
    }

    /// Moves the letter at qubit `q` of every term to qubit `perm[q]`.
    pub fn relabel_qubits(&self, perm: &[usize]) -> Result<Hamiltonian> {
        check_permutation(perm, self.n_qubits, "qubit relabelling")?;
        Ok(Hamiltonian {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coefficient: t.coefficient,
                    string: t.string.relabel(perm),
                })
                .collect(),
        })
    }

    /// Reorders the terms so that term `k` of the result is term `order[k]` of `self`.
    pub fn reorder_terms(&self, order: &[usize]) -> Result<Hamiltonian> {
        check_permutation(order, self.terms.len(), "term order")?;
        Ok(Hamiltonian {
            n_qubits: self.n_qubits,
            terms: order.iter().map(|&i| self.terms[i].clone()).collect(),
        })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize, what: &str) -> Result<()> {
    if perm.len() != n {
        return Err(Error::InvalidOrder(format!(
            "{what} has {} entries, expected {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::InvalidOrder(format!("{what} is not a permutation of 0..{n}")));
        }
    }
    Ok(())
}

/// Draws a Hamiltonian of `n_terms` distinct non-identity strings with
/// letters uniform over `{I, X, Y, Z}` and coefficients uniform in `[-1, 1)`.
///
/// Panics if more distinct strings are requested than exist.
pub fn random_hamiltonian<R: Rng + ?Sized>(n_qubits: usize, n_terms: usize, rng: &mut R) -> Hamiltonian {
    assert!(
        (n_terms as u128) < 4u128.saturating_pow(n_qubits as u32),
        "not enough distinct strings"
    );
    let mut seen = std::collections::HashSet::new();
    let mut terms = Vec::with_capacity(n_terms);
    while terms.len() < n_terms {
        let s = PauliString((0..n_qubits).map(|_| Pauli::ALL[rng.random_range(0..4)]).collect());
        if s.is_identity() || !seen.insert(s.clone()) {
            continue;
        }
        let c: f64 = rng.random_range(-1.0..1.0);
        terms.push((if c == 0.0 { 0.5 } else { c }, s));
    }
    Hamiltonian::new(n_qubits, terms).expect("generated terms are well formed")
}

/// Graph on Hamiltonian terms with an edge between every pair that is not
/// qubit-wise compatible.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliGraph {
    adjacency: Vec<Vec<usize>>,
}

impl PauliGraph {
    pub fn build(h: &Hamiltonian) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::EmptyHamiltonian);
        }
        let n = h.len();
        let mut adjacency = vec![Vec::new(); n];
        for i in 0..n {
            for j in i + 1..n {
                if !h.terms[i].string.qwc_unchecked(&h.terms[j].string) {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        for row in &mut adjacency {
            row.sort_unstable();
        }
        Ok(PauliGraph { adjacency })
    }

    pub fn n_vertices(&self) -> usize {
        self.adjacency.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Vertices by descending degree, ties by ascending index.
    pub fn largest_degree_first_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n_vertices()).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(self.degree(v)));
        order
    }
}

pub fn build_pauli_graph(h: &Hamiltonian) -> Result<PauliGraph> {
    PauliGraph::build(h)
}

pub fn largest_degree_first_order(g: &PauliGraph) -> Vec<usize> {
    g.largest_degree_first_order()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn ham(words: &[&str]) -> Hamiltonian {
        Hamiltonian::new(words[0].len(), words.iter().map(|w| (1.0, ps(w)))).unwrap()
    }

    #[test]
    fn parses_toy_hamiltonian() {
        let h = Hamiltonian::parse("2.0 IZY\n4.0 ZXZ").unwrap();
        assert_eq!(h.n_qubits(), 3);
        assert_eq!(h.terms()[0], Term { coefficient: 2.0, string: ps("IZY") });
        assert_eq!(h.terms()[1], Term { coefficient: 4.0, string: ps("ZXZ") });
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(Hamiltonian::parse(""), Err(Error::EmptyInput));
        assert_eq!(Hamiltonian::parse("# only a comment\n\n"), Err(Error::EmptyInput));
    }

    #[test]
    fn cancelling_terms_vanish() {
        let h = Hamiltonian::parse("1.0 XX\n-1.0 XX").unwrap();
        assert_eq!(h.n_qubits(), 2);
        assert!(h.is_empty());
    }

    #[test]
    fn duplicates_merge_in_first_occurrence_order() {
        let h = Hamiltonian::parse("1 XI\n2 ZZ # comment\n0.5 XI\n").unwrap();
        let got: Vec<_> = h.terms().iter().map(|t| (t.coefficient, t.string.to_string())).collect();
        assert_eq!(got, vec![(1.5, "XI".to_string()), (2.0, "ZZ".to_string())]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert_eq!(
            Hamiltonian::parse("1.0 XX\nabc YY"),
            Err(Error::MalformedCoefficient { line: 2, text: "abc".into() })
        );
        assert_eq!(
            Hamiltonian::parse("# header\n1.0 XA"),
            Err(Error::IllegalLetter { line: 2, letter: 'A' })
        );
        assert_eq!(
            Hamiltonian::parse("1.0 XX\n\n2.0 XXX"),
            Err(Error::InconsistentLength { line: 3, expected: 2, found: 3 })
        );
        assert!(matches!(Hamiltonian::parse("1.0"), Err(Error::MalformedLine { line: 1, .. })));
        assert!(matches!(Hamiltonian::parse("nan XX"), Err(Error::MalformedCoefficient { .. })));
    }

    #[test]
    fn qubitwise_compatibility() {
        assert!(qubitwise_compatible(&ps("XIZ"), &ps("XYZ")).unwrap());
        assert!(!qubitwise_compatible(&ps("XX"), &ps("YY")).unwrap());
        assert_eq!(
            qubitwise_compatible(&ps("XX"), &ps("XXX")),
            Err(Error::LengthMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn pauli_graph_examples() {
        assert_eq!(build_pauli_graph(&ham(&["XIZ", "XYZ"])).unwrap().n_edges(), 0);
        let g = build_pauli_graph(&ham(&["XXZ", "YYZ", "YZZ"])).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(largest_degree_first_order(&g), vec![0, 1, 2]);
        assert_eq!(build_pauli_graph(&ham(&["IIII"])).unwrap().n_edges(), 0);
        let empty = Hamiltonian::parse("1 XX\n-1 XX").unwrap();
        assert_eq!(build_pauli_graph(&empty), Err(Error::EmptyHamiltonian));
    }

    #[test]
    fn ldfc_order_puts_hub_first() {
        // term 3 clashes with every other term, which are mutually compatible
        let g = build_pauli_graph(&ham(&["XI", "XZ", "IZ", "YY"])).unwrap();
        assert_eq!(g.degrees(), vec![1, 1, 1, 3]);
        assert_eq!(g.largest_degree_first_order(), vec![3, 0, 1, 2]);
        let edgeless = build_pauli_graph(&ham(&["XI", "XZ", "IZ"])).unwrap();
        assert_eq!(edgeless.largest_degree_first_order(), vec![0, 1, 2]);
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        prop::collection::vec(prop::sample::select(Pauli::ALL.to_vec()), n).prop_map(PauliString::new)
    }

    proptest! {
        #[test]
        fn qwc_is_symmetric_and_reflexive(a in arb_string(6), b in arb_string(6)) {
            prop_assert!(a.qubitwise_compatible(&a).unwrap());
            prop_assert_eq!(a.qubitwise_compatible(&b).unwrap(), b.qubitwise_compatible(&a).unwrap());
        }

        #[test]
        fn graph_edges_match_brute_force(strings in prop::collection::vec(arb_string(4), 1..60)) {
            let h = Hamiltonian::new(4, strings.into_iter().map(|s| (1.0, s))).unwrap();
            prop_assume!(!h.is_empty());
            let g = build_pauli_graph(&h).unwrap();
            let mut count = 0;
            for i in 0..h.len() {
                for j in 0..h.len() {
                    let clash = i != j && !h.terms()[i].string.qubitwise_compatible(&h.terms()[j].string).unwrap();
                    prop_assert_eq!(g.has_edge(i, j), clash);
                    if i < j && clash { count += 1; }
                }
            }
            prop_assert_eq!(g.n_edges(), count);
            let degree_sum: usize = g.degrees().iter().sum();
            prop_assert_eq!(degree_sum, 2 * count);
        }

        #[test]
        fn text_round_trip(strings in prop::collection::vec((-1e3f64..1e3, arb_string(3)), 1..20)) {
            let h = Hamiltonian::new(3, strings).unwrap();
            prop_assume!(!h.is_empty());
            let again = Hamiltonian::parse(&h.to_text()).unwrap();
            prop_assert_eq!(&again, &h);
            prop_assert_eq!(again.to_text(), h.to_text());
        }
    }
}
