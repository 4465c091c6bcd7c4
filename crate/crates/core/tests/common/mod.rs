//! Random texts and embeddings shared by the integration suites.

#![allow(dead_code)]

use std::f64::consts::PI;

use qdiscocirc::compiler::{compile, AnsatzInstance, AnsatzKind, CompiledText, WordEmbeddingSet};
use qdiscocirc::ir::{Builder, Hole, TextCircuit};
use qdiscocirc::linalg::Matrix;
use qdiscocirc::parser::Pos;
use rand::Rng;

pub const STATES: [&str; 4] = ["s0", "s1", "s2", "s3"];
pub const ONE_WIRE: [&str; 2] = ["u0", "u1"];
pub const TWO_WIRE: [&str; 2] = ["t0", "t1"];
pub const FRAME: &str = "f0";

fn angle<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(-PI..PI)
}

/// Random rotational ansatz on `qubits` qubits.
pub fn random_ansatz<R: Rng>(rng: &mut R, qubits: usize) -> AnsatzInstance {
    let (kind, layers) = if qubits >= 2 && rng.random_bool(0.5) {
        (AnsatzKind::Sim9, rng.random_range(1..=2))
    } else {
        (AnsatzKind::Euler, 1)
    };
    let params = (0..kind.param_count(qubits, layers))
        .map(|_| angle(rng))
        .collect();
    AnsatzInstance::new(kind, layers, params)
}

/// Embeddings for every word the generators below use.
pub fn random_embeddings<R: Rng>(rng: &mut R, wire_dim: usize) -> WordEmbeddingSet {
    let q = wire_dim.trailing_zeros() as usize;
    let mut v = WordEmbeddingSet::new(wire_dim, 52);
    for w in STATES {
        let a = random_ansatz(rng, q);
        v.insert(w, 1, Pos::ProperNoun, a);
    }
    for w in ONE_WIRE {
        let a = random_ansatz(rng, q);
        v.insert(w, 1, Pos::IntransitiveVerb, a);
    }
    for w in TWO_WIRE {
        let a = random_ansatz(rng, 2 * q);
        v.insert(w, 2, Pos::TransitiveVerb, a);
    }
    for width in 1..=2 {
        for layer in 0..2 {
            let a = random_ansatz(rng, width * q);
            v.insert_frame(FRAME, layer, width, Pos::Adverb, a);
        }
    }
    v
}

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("n{i}")).collect()
}

fn pick<'a, R: Rng>(rng: &mut R, nouns: &'a [String], k: usize) -> Vec<&'a str> {
    let mut idx: Vec<usize> = (0..nouns.len()).collect();
    for i in 0..k {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    idx[..k].iter().map(|i| nouns[*i].as_str()).collect()
}

/// Append `ops` random boxes, swaps and (optionally) one-hole frames.
pub fn random_ops<R: Rng>(
    rng: &mut R,
    b: &mut Builder,
    nouns: &[String],
    ops: usize,
    frames: bool,
) {
    for _ in 0..ops {
        let choice = rng.random_range(0..if frames { 4 } else { 3 });
        let arity = if nouns.len() >= 2 && rng.random_bool(0.5) {
            2
        } else {
            1
        };
        let args = pick(rng, nouns, arity);
        let word = if arity == 1 {
            ONE_WIRE[rng.random_range(0..2)]
        } else {
            TWO_WIRE[rng.random_range(0..2)]
        };
        match choice {
            0 | 1 => {
                let dagger = rng.random_bool(0.3);
                b.boxed_dagger(word, &args, dagger).unwrap();
            }
            2 if nouns.len() >= 2 => {
                let s = pick(rng, nouns, 2);
                b.swap(s[0], s[1]).unwrap();
            }
            2 => {
                b.identity(args[0]).unwrap();
            }
            _ => {
                let mut inner = Builder::new();
                for a in &args {
                    inner.input(a).unwrap();
                }
                inner
                    .boxed_dagger(word, &args, rng.random_bool(0.3))
                    .unwrap();
                let hole = Hole {
                    content: inner.finish(),
                    assignment: (0..args.len()).collect(),
                };
                b.frame(FRAME, &args, vec![hole], rng.random_bool(0.3))
                    .unwrap();
            }
        }
    }
}

/// Open text on `n` nouns: all inputs open, outputs in input order.
pub fn random_open_text<R: Rng>(rng: &mut R, n: usize, ops: usize, frames: bool) -> TextCircuit {
    let nouns = names(n);
    let mut b = Builder::new();
    for x in &nouns {
        b.input(x).unwrap();
    }
    random_ops(rng, &mut b, &nouns, ops, frames);
    let mut c = b.finish();
    c.reorder_outputs(&nouns.iter().map(String::as_str).collect::<Vec<_>>());
    c
}

/// Closed text: a state per noun, then random boxes; optionally the last
/// noun is discarded at the end.
pub fn random_closed_text<R: Rng>(rng: &mut R, n: usize, ops: usize, discard: bool) -> TextCircuit {
    let nouns = names(n);
    let mut b = Builder::new();
    for x in &nouns {
        b.state(STATES[rng.random_range(0..STATES.len())], x)
            .unwrap();
    }
    random_ops(rng, &mut b, &nouns, ops, true);
    if discard && n >= 2 {
        b.discard(&nouns[n - 1]).unwrap();
    }
    let mut c = b.finish();
    c.reorder_outputs(&nouns.iter().map(String::as_str).collect::<Vec<_>>());
    c
}

/// One-qubit vocabulary for the oracle corpora; `grid` keeps every angle
/// on the `π/2^8` lattice.
pub fn w_vocab<R: Rng>(rng: &mut R, grid: bool) -> WordEmbeddingSet {
    let mut angle = || {
        if grid {
            rng.random_range(0..512) as f64 * PI / 256.0
        } else {
            rng.random_range(-PI..PI)
        }
    };
    let mut v = WordEmbeddingSet::new(2, 52);
    let mut e = |v: &mut WordEmbeddingSet, w: &str, pos| {
        let a = AnsatzInstance::new(AnsatzKind::Euler, 1, vec![angle(), angle(), angle()]);
        v.insert(w, 1, pos, a);
    };
    e(&mut v, "Alice", Pos::ProperNoun);
    e(&mut v, "Bob", Pos::ProperNoun);
    e(&mut v, "red", Pos::Adjective);
    e(&mut v, "sleeps", Pos::IntransitiveVerb);
    for w in ["likes", "sees"] {
        let a = AnsatzInstance::new(AnsatzKind::Sim9, 1, vec![angle(), angle()]);
        v.insert(w, 2, Pos::TransitiveVerb, a);
    }
    v
}

/// `texts` compiled texts over Alice and Bob with at most three boxes each.
pub fn w_corpus<R: Rng>(
    rng: &mut R,
    v: &WordEmbeddingSet,
    texts: usize,
) -> Result<Vec<CompiledText>, String> {
    let nouns = [("Alice", "alice"), ("Bob", "bob")];
    (0..texts)
        .map(|k| {
            // text 0 always uses both nouns and all three boxes
            let both = k == 0 || rng.random_bool(0.6);
            let mut b = Builder::new();
            let present: Vec<&str> = if both {
                let first = rng.random_range(0..2);
                vec![nouns[first].1, nouns[1 - first].1]
            } else {
                vec![nouns[rng.random_range(0..2)].1]
            };
            for n in &present {
                let word = nouns.iter().find(|x| x.1 == *n).unwrap().0;
                b.state(word, n).unwrap();
            }
            let extra = if k == 0 {
                3 - present.len()
            } else {
                rng.random_range(0..=3 - present.len())
            };
            for _ in 0..extra {
                if present.len() == 2 && rng.random_bool(0.5) {
                    let args = if rng.random_bool(0.5) {
                        [present[0], present[1]]
                    } else {
                        [present[1], present[0]]
                    };
                    b.boxed(["likes", "sees"][rng.random_range(0..2)], &args)
                        .unwrap();
                } else {
                    let n = present[rng.random_range(0..present.len())];
                    b.boxed(["red", "sleeps"][rng.random_range(0..2)], &[n])
                        .unwrap();
                }
            }
            compile(&b.finish(), v).map_err(|e| format!("{e}"))
        })
        .collect()
}

pub fn max_dev(a: &Matrix, b: &Matrix) -> f64 {
    a.sub(b).max_abs()
}

/// Check the compiler invariants on one random case: unitarity,
/// functoriality, adjoint soundness, snake = 1/N and register-only qubit
/// counts. Returns the first violation.
pub fn compiler_soundness_case(seed: u64) -> Result<(), String> {
    use qdiscocirc::compiler::compile;
    use qdiscocirc::ir::{compose_seq, inverse};
    use qdiscocirc::linalg::C64;
    use qdiscocirc::qsim::Simulator;
    use rand::SeedableRng;

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let wire_dim: usize = if rng.random_bool(0.8) { 2 } else { 4 };
    let q = wire_dim.trailing_zeros() as usize;
    let n = rng.random_range(1..=if q == 1 { 3 } else { 2 });
    let v = random_embeddings(&mut rng, wire_dim);
    let sim = Simulator::default();
    let ops_a = rng.random_range(1..=5);
    let ops_b = rng.random_range(1..=4);
    let a = random_open_text(&mut rng, n, ops_a, true);
    let b = random_open_text(&mut rng, n, ops_b, true);
    let err = |what: &str, e: &dyn core::fmt::Debug| format!("seed {seed}: {what}: {e:?}");
    let ca = compile(&a, &v).map_err(|e| err("compile a", &e))?;
    let cb = compile(&b, &v).map_err(|e| err("compile b", &e))?;
    if ca.circuit.qubit_count != n * q {
        return Err(format!(
            "seed {seed}: {} qubits for {n} wires",
            ca.circuit.qubit_count
        ));
    }
    let ua = ca.process_matrix(&sim).map_err(|e| err("process a", &e))?;
    let ub = cb.process_matrix(&sim).map_err(|e| err("process b", &e))?;
    if ua.unitarity_defect() >= 1e-10 {
        return Err(format!(
            "seed {seed}: unitarity defect {}",
            ua.unitarity_defect()
        ));
    }
    let ab = compose_seq(&a, &b).map_err(|e| err("compose", &e))?;
    let uab = compile(&ab, &v)
        .and_then(|c| c.process_matrix(&sim))
        .map_err(|e| err("compile ab", &e))?;
    let d = max_dev(&uab, &ub.mul(&ua));
    if d >= 1e-10 {
        return Err(format!("seed {seed}: functoriality deviates by {d}"));
    }
    let inv = inverse(&a).map_err(|e| err("inverse", &e))?;
    let ui = compile(&inv, &v)
        .and_then(|c| c.process_matrix(&sim))
        .map_err(|e| err("compile inverse", &e))?;
    let d = max_dev(&ui, &ua.adjoint());
    if d >= 1e-10 {
        return Err(format!("seed {seed}: adjoint deviates by {d}"));
    }
    // bend n0 through a cap and a cup
    let nouns = names(n);
    let mut s = Builder::new();
    for x in &nouns {
        s.input(x).unwrap();
    }
    s.cap("~p", "~o").unwrap().cup("n0", "~p").unwrap();
    let mut snake = s.finish();
    let mut order: Vec<&str> = nouns.iter().map(String::as_str).collect();
    order[0] = "~o";
    snake.reorder_outputs(&order);
    let bent = compose_seq(&a, &snake).map_err(|e| err("compose snake", &e))?;
    let us = compile(&bent, &v)
        .and_then(|c| c.process_matrix(&sim))
        .map_err(|e| err("compile snake", &e))?;
    let d = max_dev(&us, &ua.scale(C64::new(1.0 / wire_dim as f64, 0.0)));
    if d >= 1e-10 {
        return Err(format!("seed {seed}: snake deviates from U/N by {d}"));
    }
    Ok(())
}
