//! Circuit-to-text reduction at toy scale.
//!
//! Each qubit becomes a proper noun. Its line starts from the noun's own
//! state, is reset to `|0⟩` by adjective sentences approximating the
//! inverse of that state's preparation, and then follows the circuit:
//! one-qubit gates become runs of "N is a." sentences and the entangling
//! verb becomes "Na v Nb.". The two questions ask whether the first
//! noun's line ends in `|0⟩` or in `|1⟩`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{ansatz_matrix, check_embeddings, Approximator, HardnessError, DEFAULT_BUDGET};
use crate::compiler::WordEmbeddingSet;
use crate::ir::TextCircuit;
use crate::linalg::{pauli_x, Matrix};
use crate::parser::{parse_text, Pos, Vocabulary};
use crate::qsim::{Gate, QuantumCircuit};
use crate::tasks::QaInstance;

#[derive(Clone, Debug, PartialEq)]
pub enum ReductionGate {
    Single {
        qubit: usize,
        matrix: Matrix,
    },
    /// The vocabulary's entangling verb on `(first, second)`, first most
    /// significant.
    Verb {
        first: usize,
        second: usize,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionCircuit {
    pub qubits: usize,
    pub gates: Vec<ReductionGate>,
}

impl ReductionCircuit {
    pub fn circuit(&self, verb: &Matrix) -> QuantumCircuit {
        let mut qc = QuantumCircuit::new(self.qubits);
        for g in &self.gates {
            qc.push(match g {
                ReductionGate::Single { qubit, matrix } => Gate::Unitary {
                    controls: vec![],
                    targets: vec![*qubit],
                    matrix: matrix.clone(),
                },
                ReductionGate::Verb { first, second } => Gate::Unitary {
                    controls: vec![],
                    targets: vec![*first, *second],
                    matrix: verb.clone(),
                },
            });
        }
        qc
    }

    pub fn unitary(&self, verb: &Matrix) -> Matrix {
        self.circuit(verb).unitary()
    }

    /// Probability of reading 0 on qubit 0 of `C|0…0⟩`.
    pub fn p_zero(&self, verb: &Matrix) -> f64 {
        let u = self.unitary(verb);
        let half = 1usize << (self.qubits - 1);
        (0..half).map(|r| u[(r, 0)].norm_sqr()).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Promise {
    /// `P(0) ≥ 2/3`; the first question should win.
    Zero,
    /// `P(0) ≤ 1/3`; the second question should win.
    One,
    Outside,
}

impl Promise {
    pub fn of(p_zero: f64) -> Promise {
        if p_zero >= 2.0 / 3.0 {
            Promise::Zero
        } else if p_zero <= 1.0 / 3.0 {
            Promise::One
        } else {
            Promise::Outside
        }
    }

    pub fn expected_answer(self) -> Option<usize> {
        match self {
            Promise::Zero => Some(0),
            Promise::One => Some(1),
            Promise::Outside => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReductionParams {
    /// Precision the question-answering run will use.
    pub epsilon: f64,
    /// Bound on how far any question score may move away from the
    /// corresponding probability of the source circuit.
    pub epsilon_prime: f64,
}

impl Default for ReductionParams {
    fn default() -> Self {
        ReductionParams {
            epsilon: 1.0 / 8.0,
            epsilon_prime: 1.0 / 30.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput {
    pub vocabulary: Vocabulary,
    pub embeddings: WordEmbeddingSet,
    pub nouns: Vec<String>,
    pub adjectives: [String; 2],
    pub verb: String,
    pub context: Vec<String>,
    pub questions: [Vec<String>; 2],
    pub instance: QaInstance,
    /// Score error bound `2·(Σ context errors + max Σ question errors)`.
    pub epsilon_prime: f64,
    /// Operator distance between the context's gate unitary and the source
    /// circuit, up to global phase.
    pub operator_distance: f64,
    pub p_zero: f64,
    pub promise: Promise,
}

struct Words<'a> {
    ap: &'a Approximator,
    adjectives: [&'a str; 2],
    error: f64,
}

impl Words<'_> {
    /// Sentences applying an approximation of `m` to `noun`, in time order.
    /// The run is never empty, so every noun is mentioned.
    fn sentences(&mut self, noun: &str, m: &Matrix) -> Result<Vec<String>, HardnessError> {
        let mut r = self.ap.approximate(m)?;
        if r.word.is_empty() {
            // g0 · (g0⁻¹ m) keeps the product while forcing one sentence
            let g0 = self.ap.product(&[0]).inverse().to_matrix();
            let mut rest = self.ap.approximate(&g0.mul(m))?;
            rest.word.insert(0, 0);
            r = rest;
        }
        self.error += r.distance;
        Ok(r.word
            .iter()
            .rev()
            .map(|g| format!("{noun} is {}.", self.adjectives[*g as usize]))
            .collect())
    }
}

/// Text, questions and embeddings whose answer encodes whether qubit 0 of
/// `c` reads 0 with high or low probability. `base` must pass the
/// embedding checks and name enough proper nouns; `ap` must be built over
/// `base`'s dense adjective pair (see [`reduction_approximator`]).
pub fn build_reduction(
    c: &ReductionCircuit,
    base: &WordEmbeddingSet,
    params: ReductionParams,
    ap: &Approximator,
) -> Result<ReductionOutput, HardnessError> {
    if params.epsilon + params.epsilon_prime >= 1.0 / 6.0 {
        return Err(HardnessError::Budget(params.epsilon + params.epsilon_prime));
    }
    let report = check_embeddings(base, DEFAULT_BUDGET);
    let (adj, verb) = match (report.dense_pair(), report.entangling_verb()) {
        (Some((a, b)), Some(v)) if report.pass => ([a.to_string(), b.to_string()], v.to_string()),
        _ => return Err(HardnessError::Conditions(report)),
    };
    let nouns: Vec<String> = base
        .entries
        .iter()
        .filter(|((_, a), e)| *a == 1 && e.pos == Pos::ProperNoun)
        .map(|((w, _), _)| w.clone())
        .take(c.qubits)
        .collect();
    if nouns.len() < c.qubits {
        return Err(HardnessError::TooFewNouns {
            needed: c.qubits,
            available: nouns.len(),
        });
    }
    let verb_m = ansatz_matrix(&base.get(&verb, 2).expect("checked verb").ansatz, 2);
    let mut words = Words {
        ap,
        adjectives: [adj[0].as_str(), adj[1].as_str()],
        error: 0.0,
    };

    let mut context = Vec::new();
    let mut resets = Vec::new();
    for n in &nouns {
        let prep = ansatz_matrix(&base.get(n, 1).expect("listed noun").ansatz, 1);
        let before = words.error;
        let s = words.sentences(n, &prep.adjoint())?;
        context.extend(s.iter().cloned());
        resets.push((s, words.error - before));
    }
    for g in &c.gates {
        match g {
            ReductionGate::Single { qubit, matrix } => {
                context.extend(words.sentences(&nouns[*qubit], matrix)?)
            }
            ReductionGate::Verb { first, second } => {
                context.push(format!("{} {verb} {}.", nouns[*first], nouns[*second]))
            }
        }
    }
    let context_error = words.error;

    // the first question reuses the first noun's reset run
    let (q1, q1_error) = resets.swap_remove(0);
    words.error = 0.0;
    let mut q2 = q1.clone();
    q2.extend(words.sentences(&nouns[0], &pauli_x())?);
    let q_error = q1_error + words.error;

    let mut vocabulary = Vocabulary::new();
    for n in &nouns {
        vocabulary.insert(n, Pos::ProperNoun);
    }
    vocabulary.insert(&adj[0], Pos::Adjective);
    vocabulary.insert(&adj[1], Pos::Adjective);
    vocabulary.insert(&verb, Pos::TransitiveVerb);
    let parse = |lines: &[String]| -> Result<TextCircuit, HardnessError> {
        parse_text(lines, &vocabulary).map_err(|e| HardnessError::Text(e.to_string()))
    };
    let ctx = parse(&context)?;
    let instance = QaInstance {
        context: ctx.clone(),
        questions: vec![parse(&q1)?, parse(&q2)?],
        queried: vec![nouns[0].clone()],
    };
    let epsilon_prime = 2.0 * (context_error + q_error);
    if epsilon_prime >= params.epsilon_prime {
        return Err(HardnessError::Budget(params.epsilon + epsilon_prime));
    }

    let compiled =
        crate::compiler::compile(&ctx, base).map_err(|e| HardnessError::Text(e.to_string()))?;
    let mut order: Vec<usize> = Vec::new();
    for n in &nouns {
        let r = compiled
            .registers
            .iter()
            .position(|r| &r.noun == n)
            .expect("every noun is mentioned");
        order.push(r);
    }
    let src = c.unitary(&verb_m);
    let operator_distance = permute_qubits(&compiled.gate_unitary(), &order).phase_distance(&src);
    let p_zero = c.p_zero(&verb_m);
    Ok(ReductionOutput {
        vocabulary,
        embeddings: base.clone(),
        nouns,
        adjectives: adj,
        verb,
        context,
        questions: [q1, q2],
        instance,
        epsilon_prime,
        operator_distance,
        p_zero,
        promise: Promise::of(p_zero),
    })
}

/// Relabel a unitary so that the qubit at position `order[i]` becomes
/// qubit `i`.
fn permute_qubits(u: &Matrix, order: &[usize]) -> Matrix {
    let n = order.len();
    let dim = 1usize << n;
    let map = |x: usize| {
        let mut y = 0;
        for (i, o) in order.iter().enumerate() {
            if x >> (n - 1 - o) & 1 == 1 {
                y |= 1 << (n - 1 - i);
            }
        }
        y
    };
    let mut m = Matrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            m[(map(r), map(c))] = u[(r, c)];
        }
    }
    m
}

/// Word table over `base`'s first dense adjective pair.
pub fn reduction_approximator(
    base: &WordEmbeddingSet,
    epsilon: f64,
    max_words: usize,
) -> Result<Approximator, HardnessError> {
    let report = check_embeddings(base, DEFAULT_BUDGET);
    let (a, b) = report
        .dense_pair()
        .ok_or_else(|| HardnessError::Conditions(report.clone()))?;
    let ma = ansatz_matrix(&base.get(a, 1).expect("listed").ansatz, 1);
    let mb = ansatz_matrix(&base.get(b, 1).expect("listed").ansatz, 1);
    Ok(Approximator::new(&ma, &mb, epsilon, 64, max_words))
}
