//! Numerical checks that a set of embeddings is rich enough for the
//! circuit-to-text reduction, Haar sampling of embeddings, and the
//! reduction itself at toy scale.

mod approx;
mod dense;
mod haar;
mod reduction;

pub use approx::{approximate_su2, Approximation, Approximator};
pub use dense::{
    check_dense_pair, DenseVerdict, DENSE_THRESHOLD, DISTINCT_TOL, SEMIDIRECT_SAMPLES,
};
pub use haar::{haar_su2, haar_unitary, sample_haar_embeddings};
pub use reduction::{
    build_reduction, reduction_approximator, Promise, ReductionCircuit, ReductionGate,
    ReductionOutput, ReductionParams,
};

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::compiler::{AnsatzInstance, WordEmbeddingSet};
use crate::linalg::{hermitian_eigenvalues, swap, Matrix, C64};
use crate::parser::Pos;
use crate::qsim::QuantumCircuit;

/// Second Choi eigenvalue above which an operator counts as entangling.
pub const RANK_THRESHOLD: f64 = 1e-8;
pub const UNITARY_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum HardnessError {
    #[error("input is not unitary (defect {0:e})")]
    NotUnitary(f64),
    #[error("expected a {expected}x{expected} matrix")]
    Shape { expected: usize },
    #[error("no word sequence within {epsilon} found (best {best})")]
    DepthExhausted { epsilon: f64, best: f64 },
    #[error("approximation budget infeasible: epsilon + epsilon' = {0} is not below 1/6")]
    Budget(f64),
    #[error("reduction needs {needed} proper nouns, vocabulary has {available}")]
    TooFewNouns { needed: usize, available: usize },
    #[error("embeddings fail the hardness conditions")]
    Conditions(EmbeddingCheckReport),
    #[error("reduction text failed to build: {0}")]
    Text(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntanglingVerdict {
    pub entangling: bool,
    /// Reduced Choi-state spectra of `U` and of `U·SWAP`, descending.
    pub eigenvalues: [Vec<f64>; 2],
}

/// Spectrum of the reduced Choi state of a two-qubit operator: the
/// squared operator-Schmidt coefficients, normalised to sum to one.
fn choi_spectrum(u: &Matrix) -> Vec<f64> {
    // realign U_{(a b),(a' b')} into M_{(a a'),(b b')}
    let mut m = Matrix::zeros(4, 4);
    for a in 0..2 {
        for b in 0..2 {
            for a2 in 0..2 {
                for b2 in 0..2 {
                    m[(a * 2 + a2, b * 2 + b2)] = u[(a * 2 + b, a2 * 2 + b2)];
                }
            }
        }
    }
    let rho = m.mul(&m.adjoint());
    let tr = rho.trace().re;
    hermitian_eigenvalues(&rho.scale(C64::new(1.0 / tr, 0.0)))
}

/// A two-qubit unitary is entangling when neither it nor its product with
/// SWAP is a tensor product of one-qubit operators.
pub fn check_entangling(u: &Matrix) -> Result<EntanglingVerdict, HardnessError> {
    if u.rows() != 4 || u.cols() != 4 {
        return Err(HardnessError::Shape { expected: 4 });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(HardnessError::NotUnitary(defect));
    }
    let e0 = choi_spectrum(u);
    let e1 = choi_spectrum(&u.mul(&swap()));
    let entangling = e0[1] > RANK_THRESHOLD && e1[1] > RANK_THRESHOLD;
    Ok(EntanglingVerdict {
        entangling,
        eigenvalues: [e0, e1],
    })
}

/// Matrix of an ansatz on `qubits` qubits.
pub fn ansatz_matrix(a: &AnsatzInstance, qubits: usize) -> Matrix {
    if let Some(m) = a.dense_matrix() {
        return m;
    }
    let mut qc = QuantumCircuit::new(qubits);
    let wires: Vec<usize> = (0..qubits).collect();
    qc.extend(a.gates(&wires));
    qc.unitary()
}

#[derive(Clone, Debug, PartialEq)]
pub struct PairReport {
    pub first: String,
    pub second: String,
    pub verdict: DenseVerdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingCheckReport {
    pub wire_dim: usize,
    pub verbs: Vec<(String, Result<EntanglingVerdict, HardnessError>)>,
    pub pairs: Vec<PairReport>,
    pub adjective_count: usize,
    pub budget: usize,
    pub pass: bool,
    /// Conditions that failed, in words.
    pub failures: Vec<String>,
}

impl EmbeddingCheckReport {
    pub fn dense_pair(&self) -> Option<(&str, &str)> {
        self.pairs
            .iter()
            .find(|p| matches!(p.verdict, DenseVerdict::Dense { .. }))
            .map(|p| (p.first.as_str(), p.second.as_str()))
    }

    pub fn entangling_verb(&self) -> Option<&str> {
        self.verbs
            .iter()
            .find(|(_, v)| {
                matches!(
                    v,
                    Ok(EntanglingVerdict {
                        entangling: true,
                        ..
                    })
                )
            })
            .map(|(w, _)| w.as_str())
    }

    /// Line-oriented text: one record per checked word or pair.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "wire_dim\t{}", self.wire_dim);
        let _ = writeln!(s, "rank_threshold\t{RANK_THRESHOLD:e}");
        let _ = writeln!(s, "distinct_tol\t{DISTINCT_TOL:e}");
        let _ = writeln!(s, "semidirect_samples\t{SEMIDIRECT_SAMPLES}");
        let _ = writeln!(s, "budget\t{}", self.budget);
        for (w, v) in &self.verbs {
            match v {
                Ok(v) => {
                    let fmt = |e: &[f64]| {
                        e.iter()
                            .map(|x| format!("{x:.3e}"))
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    let _ = writeln!(
                        s,
                        "verb\t{w}\t{}\tchoi=[{}]\tchoi_swap=[{}]",
                        if v.entangling {
                            "entangling"
                        } else {
                            "not-entangling"
                        },
                        fmt(&v.eigenvalues[0]),
                        fmt(&v.eigenvalues[1])
                    );
                }
                Err(e) => {
                    let _ = writeln!(s, "verb\t{w}\terror\t{e}");
                }
            }
        }
        for p in &self.pairs {
            let _ = writeln!(
                s,
                "pair\t{}\t{}\t{}",
                p.first,
                p.second,
                p.verdict.describe()
            );
        }
        for f in &self.failures {
            let _ = writeln!(s, "failure\t{f}");
        }
        let _ = writeln!(s, "overall\t{}", if self.pass { "pass" } else { "fail" });
        s
    }
}

pub const DEFAULT_BUDGET: usize = 20_000;

/// Run both checks over every transitive verb and every adjective pair.
pub fn check_embeddings(v: &WordEmbeddingSet, budget: usize) -> EmbeddingCheckReport {
    let mut verbs = Vec::new();
    let mut adjectives: Vec<(String, Matrix)> = Vec::new();
    for ((word, arity), e) in &v.entries {
        match (e.pos, arity) {
            (Pos::TransitiveVerb, 2) if v.wire_dim == 2 => {
                verbs.push((word.clone(), check_entangling(&ansatz_matrix(&e.ansatz, 2))));
            }
            (Pos::Adjective, 1) if v.wire_dim == 2 => {
                adjectives.push((word.clone(), ansatz_matrix(&e.ansatz, 1)))
            }
            _ => {}
        }
    }
    let mut pairs = Vec::new();
    for i in 0..adjectives.len() {
        for j in i + 1..adjectives.len() {
            let verdict = check_dense_pair(&adjectives[i].1, &adjectives[j].1, budget)
                .unwrap_or(DenseVerdict::Inconclusive { budget: 0 });
            pairs.push(PairReport {
                first: adjectives[i].0.clone(),
                second: adjectives[j].0.clone(),
                verdict,
            });
        }
    }
    let mut failures = Vec::new();
    if v.wire_dim != 2 {
        failures.push(format!(
            "wire dimension is {}, the conditions need 2",
            v.wire_dim
        ));
    }
    if adjectives.len() < 2 {
        failures.push(format!(
            "{} adjective(s), at least two are needed",
            adjectives.len()
        ));
    }
    let mut report = EmbeddingCheckReport {
        wire_dim: v.wire_dim,
        adjective_count: adjectives.len(),
        verbs,
        pairs,
        budget,
        pass: false,
        failures,
    };
    if report.adjective_count >= 2 && report.dense_pair().is_none() {
        report
            .failures
            .push("no adjective pair generates a dense subgroup".into());
    }
    if report.entangling_verb().is_none() {
        report
            .failures
            .push("no transitive verb is entangling".into());
    }
    report.pass = report.failures.is_empty();
    report
}
