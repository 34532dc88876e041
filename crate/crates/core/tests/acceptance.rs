//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use common::{ham, random_ham, rng};
use heem::bases::{basis_circuit, compatibility_table, compatible_set, pauli_word_matrix, weight_vector, BasisLabel};
use heem::circuit::{dagger, matmul, unitarity_defect};
use heem::cli::compat_table;
use heem::connectivity::ibmq_montreal;
use heem::embedding::{compatibility_matrix, embed_connected, embed_disconnected, EmbeddingMap};
use heem::evaluator::{expected_value_from_distributions, group_weight_vector};
use heem::grouping::{em_grouping, heem_grouping, Block, Group, MeasurementAssignment, Orders};
use heem::plan::{plan, EmbeddingKind};
use heem::sim::{dense_expectation, outcome_distribution, StateVector};
use heem::study::{monte_carlo, summarize, Strategy};
use heem::{ConnectivityGraph, Hamiltonian, Method};
use rand::Rng;

const FAST: Duration = Duration::from_secs(1);
const RECONSTRUCTION_TOL: f64 = 1e-10;
const CIRCUIT_TOL: f64 = 1e-12;
const ORACLE_INSTANCES: u64 = 200;
const MC_HAMILTONIANS: u64 = 4;
const MC_TRIALS: usize = 500;
const MC_SEED: u64 = 2022;

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// The two-qubit compatibility table as published, row word, column word, entry.
const PUBLISHED_TABLE: [(&str, &str, &str); 36] = [
    ("XX", "YZ", "OmegaX"),
    ("XX", "ZY", "OmegaX"),
    ("XX", "YY", "Bell"),
    ("XX", "XZ", "x"),
    ("XX", "ZX", "x"),
    ("XX", "ZZ", "Bell"),
    ("XX", "XY", "x"),
    ("XX", "YX", "x"),
    ("YZ", "ZY", "OmegaX"),
    ("YZ", "YY", "x"),
    ("YZ", "XZ", "x"),
    ("YZ", "ZX", "Chi"),
    ("YZ", "ZZ", "x"),
    ("YZ", "XY", "Chi"),
    ("YZ", "YX", "x"),
    ("ZY", "YY", "x"),
    ("ZY", "XZ", "ChiTilde"),
    ("ZY", "ZX", "x"),
    ("ZY", "ZZ", "x"),
    ("ZY", "XY", "x"),
    ("ZY", "YX", "ChiTilde"),
    ("YY", "XZ", "OmegaY"),
    ("YY", "ZX", "OmegaY"),
    ("YY", "ZZ", "Bell"),
    ("YY", "XY", "x"),
    ("YY", "YX", "x"),
    ("XZ", "ZX", "OmegaY"),
    ("XZ", "ZZ", "x"),
    ("XZ", "XY", "x"),
    ("XZ", "YX", "ChiTilde"),
    ("ZX", "ZZ", "x"),
    ("ZX", "XY", "Chi"),
    ("ZX", "YX", "x"),
    ("ZZ", "XY", "OmegaZ"),
    ("ZZ", "YX", "OmegaZ"),
    ("XY", "YX", "OmegaZ"),
];

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let printed = compat_table();
    let rows: Vec<Vec<&str>> = printed.lines().map(|l| l.split_whitespace().collect()).collect();
    let header = &rows[0];
    let mut mismatches = 0;
    for (a, b, want) in PUBLISHED_TABLE {
        let row = rows[1..].iter().find(|r| r[0] == a).unwrap();
        let col = header.iter().position(|w| *w == b).unwrap();
        let row_offset = header.iter().position(|w| *w == a).unwrap();
        // data rows hold the label, then cells from the diagonal onwards
        let cell = row[1 + col - row_offset];
        if cell != want {
            mismatches += 1;
        }
    }
    let library_cells = compatibility_table()
        .iter()
        .filter(|(a, b, opts)| {
            let want = PUBLISHED_TABLE
                .iter()
                .find(|(x, y, _)| *x == a.to_string() && *y == b.to_string())
                .map(|t| t.2)
                .unwrap();
            let got = if opts.is_empty() { "x".to_string() } else { opts.iter().map(|o| o.name()).collect::<Vec<_>>().join("/") };
            got == want
        })
        .count();
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && library_cells == 36 && elapsed < FAST,
        format!("{} of 36 printed cells match, {library_cells} of 36 library cells match, {elapsed:?}", 36 - mismatches),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let c = compatibility_matrix(&ham(&["XXZ", "YYZ", "YZZ"]));
    let elapsed = start.elapsed();
    outcome(
        c.get(0, 1) == 2 && c.get(1, 0) == 2 && elapsed < FAST,
        format!("C[0][1] = {}, C[1][0] = {}", c.get(0, 1), c.get(1, 0)),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let h = ham(&["XXZ", "ZXX"]);
    let path = ConnectivityGraph::path(3);
    let orders = Orders::default_for(&h).unwrap();
    let groups = |tau: &EmbeddingMap| heem_grouping(&h, &path, tau, &orders).unwrap().n_groups();
    let identity = groups(&EmbeddingMap::identity(3));
    let swapped = groups(&EmbeddingMap::new(vec![1, 0, 2], 3).unwrap());
    let c = compatibility_matrix(&h);
    let connected = groups(&embed_connected(&c, &path).unwrap());
    let disconnected = groups(&embed_disconnected(&c, &path).unwrap());
    let elapsed = start.elapsed();
    outcome(
        identity == 2 && swapped == 1 && connected == 1 && disconnected == 1 && elapsed < FAST,
        format!("identity {identity}, swapped {swapped}, connected {connected}, disconnected {disconnected} groups"),
    )
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let h = Hamiltonian::new(3, [(2.0, "IZY".parse().unwrap()), (4.0, "ZXZ".parse().unwrap())]).unwrap();
    let group = Group {
        terms: vec![0, 1],
        assignment: MeasurementAssignment::new(vec![Block::local(0, BasisLabel::Z1), Block::pair(1, 2, BasisLabel::ChiTilde)]),
    };
    let w = group_weight_vector(&group, &h).unwrap();
    let want = [6.0, -2.0, 2.0, -6.0, -2.0, 6.0, -6.0, 2.0];
    outcome(w == want && start.elapsed() < FAST, format!("{w:?}"))
}

/// Instance `k` of the fuzz corpus: up to six qubits and forty terms.
fn corpus(k: u64) -> Hamiltonian {
    let mut r = rng(10_000 + k);
    let n = r.random_range(1..=6);
    let terms = r.random_range(1..=40);
    random_ham(n, terms, 20_000 + k)
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let montreal = ibmq_montreal();
    let mut worst = 0.0f64;
    let mut runs = 0;
    for k in 0..ORACLE_INSTANCES {
        let h = corpus(k);
        let n = h.n_qubits();
        let psi = StateVector::random(n, &mut rng(30_000 + k)).unwrap();
        let exact = dense_expectation(&psi, &h).unwrap();
        let device = if k % 2 == 0 { ConnectivityGraph::path(n) } else { montreal.clone() };
        for method in [Method::Tpb, Method::Em, Method::Heem] {
            let p = plan(&h, &device, method, EmbeddingKind::Connected).unwrap();
            let groups = &p.result.groups;
            let dists: Vec<Vec<f64>> = groups.iter().map(|g| outcome_distribution(&psi, g).unwrap()).collect();
            let v = expected_value_from_distributions(groups, &h, &dists).unwrap();
            worst = worst.max((v - exact).abs());
            runs += 1;
        }
    }
    outcome(
        worst <= RECONSTRUCTION_TOL,
        format!("{runs} reconstructions over {ORACLE_INSTANCES} Hamiltonians, max |error| {worst:.2e}, {:?}", start.elapsed()),
    )
}

fn criterion_6() -> Outcome {
    let mut em_mismatch = 0;
    let mut edgeless_pairs = 0;
    for k in 0..ORACLE_INSTANCES {
        let h = corpus(k);
        let n = h.n_qubits();
        let orders = Orders::default_for(&h).unwrap();
        let tau = EmbeddingMap::identity(n);
        let em = em_grouping(&h, &orders).unwrap();
        let complete = heem_grouping(&h, &ConnectivityGraph::complete(n), &tau, &orders).unwrap();
        if em.groups != complete.groups {
            em_mismatch += 1;
        }
        edgeless_pairs += heem_grouping(&h, &ConnectivityGraph::edgeless(n), &tau, &orders).unwrap().n_entangled_blocks();
    }
    outcome(
        em_mismatch == 0 && edgeless_pairs == 0,
        format!("{em_mismatch} complete-graph mismatches with EM, {edgeless_pairs} entangled blocks on edgeless graphs"),
    )
}

fn criterion_7() -> Outcome {
    let device = ibmq_montreal();
    let mut records = Vec::new();
    for k in 0..MC_HAMILTONIANS {
        let h = random_ham(8, 100, MC_SEED + k);
        records.extend(monte_carlo(&h, &device, &Strategy::HEEM_ALL, MC_TRIALS, MC_SEED).unwrap());
    }
    let [naive, disconnected, connected] = Strategy::HEEM_ALL.map(|s| summarize(&records, s).unwrap());
    let holds = [
        connected.mean <= disconnected.mean,
        disconnected.mean <= naive.mean,
        connected.mean <= naive.mean,
    ];
    let n_hold = holds.iter().filter(|&&b| b).count();
    outcome(
        n_hold >= 2,
        format!(
            "{n_hold} of 3 mean orderings hold; mean/std naive {:.3}/{:.3}, disconnected {:.3}/{:.3}, connected {:.3}/{:.3} \
             ({MC_HAMILTONIANS} Hamiltonians x {MC_TRIALS} trials)",
            naive.mean, naive.std, disconnected.mean, disconnected.std, connected.mean, connected.std
        ),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut worst_unitary = 0.0f64;
    let mut worst_diag = 0.0f64;
    for b in BasisLabel::ENTANGLED {
        let u = basis_circuit(b).unitary();
        worst_unitary = worst_unitary.max(unitarity_defect(&u));
        for w in compatible_set(b).members {
            let d = matmul(&matmul(&u, &pauli_word_matrix(&w)), &dagger(&u));
            let signs = weight_vector(b, &w).unwrap();
            for (i, row) in d.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    let target = if i == j { signs.get(i) } else { 0.0 };
                    worst_diag = worst_diag.max((v.re - target).abs()).max(v.im.abs());
                }
            }
        }
    }
    outcome(
        worst_unitary <= CIRCUIT_TOL && worst_diag <= CIRCUIT_TOL && start.elapsed() < FAST,
        format!("24 words, max unitarity defect {worst_unitary:.1e}, max deviation from signed diagonal {worst_diag:.1e}"),
    )
}

fn criterion_9() -> Outcome {
    let montreal = ibmq_montreal();
    let mut bad = 0;
    let mut blocks = 0;
    for k in 0..ORACLE_INSTANCES {
        let h = corpus(k);
        let heem_plan = plan(&h, &montreal, Method::Heem, EmbeddingKind::Connected).unwrap();
        blocks += heem_plan.result.n_entangled_blocks();
        if heem_plan.cost.cnots != heem_plan.result.n_entangled_blocks() {
            bad += 1;
        }
        if plan(&h, &montreal, Method::Tpb, EmbeddingKind::Naive).unwrap().cost.cnots != 0 {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("{bad} mismatching plans, {blocks} entangled blocks checked"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("compatibility table", criterion_1),
        ("compatibility matrix example", criterion_2),
        ("embedding example", criterion_3),
        ("worked weight vector", criterion_4),
        ("oracle equivalence", criterion_5),
        ("degeneration equivalences", criterion_6),
        ("monte carlo trend", criterion_7),
        ("diagonalization suite", criterion_8),
        ("cnot accounting", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {} ({name}): {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
