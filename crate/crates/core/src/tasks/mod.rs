//! Model-native tasks: similarity, question answering, character arcs and
//! the classical closest-text baseline.

pub mod babi;

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::compiler::{
    check_purity_for_task, compile, CompileError, CompiledText, PurityViolation, WordEmbeddingSet,
};
use crate::ir::{compose_par, compose_seq, Builder, Generator, IrError, TextCircuit};
use crate::qsim::{
    build_swap_test, exact_overlap, hoeffding_shots, sample_from, SimError, Simulator,
};

/// Scores within this distance of the maximum count as ties.
pub const TIE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    Exact,
    Sampled { epsilon: f64, delta: f64, seed: u64 },
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Sampled { .. } => "sampled",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum TaskError {
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Purity(#[from] PurityViolation),
    #[error(transparent)]
    Ir(#[from] IrError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error("noun {0} does not appear in the text")]
    UnknownNoun(String),
    #[error("question {0} has discards")]
    MixedQuestion(usize),
    #[error("question {index} is about [{found}], expected the queried nouns [{expected}]")]
    QuestionNouns {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("no candidates")]
    Empty,
    #[error("character arcs take one or two nouns, got {0}")]
    ArcNouns(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Score {
    pub value: f64,
    /// Raw swap-test estimate (may leave [0,1]); equals `value` when exact.
    pub raw: f64,
    pub shots: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaskResult {
    /// Clamped to [0,1].
    pub scores: Vec<f64>,
    pub raw: Vec<f64>,
    pub chosen: usize,
    pub shots: Vec<u64>,
    pub mode: Mode,
    /// Set when the gap between the two best candidates is under ε.
    pub below_resolution: Option<f64>,
}

/// Lowest index attaining the maximum.
pub fn argmax(xs: &[f64]) -> usize {
    let best = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    xs.iter()
        .position(|x| *x >= best - TIE_TOLERANCE)
        .unwrap_or(0)
}

fn gap(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let mut s = xs.to_vec();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap_or(core::cmp::Ordering::Equal));
    Some(s[0] - s[1])
}

fn seed_for(seed: u64, index: u64) -> u64 {
    // splitmix64 step, so neighbouring indices get unrelated streams
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Circuit that takes every open output of `c` as input and applies `f`.
fn then<F>(c: &TextCircuit, f: F) -> Result<TextCircuit, TaskError>
where
    F: FnOnce(&mut Builder) -> Result<(), IrError>,
{
    let mut b = Builder::new();
    for n in c.output_nouns() {
        b.input(n)?;
    }
    f(&mut b)?;
    Ok(compose_seq(c, &b.finish())?)
}

/// Discard every open output whose noun is not in `keep`, then order the
/// remaining outputs as `keep`.
pub fn restrict(c: &TextCircuit, keep: &[&str]) -> Result<TextCircuit, TaskError> {
    let outs: Vec<String> = c
        .output_nouns()
        .into_iter()
        .map(ToString::to_string)
        .collect();
    for k in keep {
        if !outs.iter().any(|o| o == k) {
            return Err(TaskError::UnknownNoun(k.to_string()));
        }
    }
    let mut r = then(c, |b| {
        for o in outs.iter().filter(|o| !keep.contains(&o.as_str())) {
            b.discard(o)?;
        }
        Ok(())
    })?;
    r.reorder_outputs(keep);
    Ok(r)
}

/// Pad `c` with `State(noun)` for each noun of `all` it lacks, and order
/// outputs as `all`.
pub fn pad_to(c: &TextCircuit, all: &[&str]) -> Result<TextCircuit, TaskError> {
    let mut out = c.clone();
    let have = c
        .output_nouns()
        .into_iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>();
    for n in all {
        if !have.iter().any(|h| h == n) {
            let mut b = Builder::new();
            b.state(n, n)?;
            out = compose_par(&out, &b.finish())?;
        }
    }
    out.reorder_outputs(all);
    Ok(out)
}

fn overlap(a: &CompiledText, b: &CompiledText, sim: &Simulator) -> Result<f64, TaskError> {
    check_purity_for_task(a, b)?;
    let sa = a.state(sim)?;
    let sb = b.state(sim)?;
    Ok(exact_overlap(&sa, &sb)?)
}

/// Swap-test zero probability between two compiled texts.
fn swap_zero(a: &CompiledText, b: &CompiledText, sim: &Simulator) -> Result<f64, TaskError> {
    check_purity_for_task(a, b)?;
    Ok(build_swap_test(&a.circuit, &b.circuit)?.zero_probability(sim)?)
}

/// `tr(ρ₁ρ₂)` after padding both texts to the union of their nouns. A
/// noun one text has already closed off (discarded or capped) is traced
/// out of the other as well.
pub fn text_similarity(
    t1: &TextCircuit,
    t2: &TextCircuit,
    v: &WordEmbeddingSet,
    mode: Mode,
    sim: &Simulator,
) -> Result<Score, TaskError> {
    let closed = |t: &TextCircuit| {
        let outs = t.output_nouns();
        t.nouns()
            .into_iter()
            .filter(|n| !outs.contains(&n.as_str()))
            .collect::<Vec<_>>()
    };
    let gone = [closed(t1), closed(t2)].concat();
    let live = |t: &TextCircuit| -> Result<TextCircuit, TaskError> {
        let keep: Vec<&str> = t
            .output_nouns()
            .into_iter()
            .filter(|n| !gone.iter().any(|g| g == n))
            .collect();
        restrict(t, &keep)
    };
    let (t1, t2) = (live(t1)?, live(t2)?);
    let mut all: Vec<String> = t1
        .output_nouns()
        .into_iter()
        .map(ToString::to_string)
        .collect();
    for n in t2.output_nouns() {
        if !all.iter().any(|a| a == n) {
            all.push(n.to_string());
        }
    }
    all.sort();
    let names: Vec<&str> = all.iter().map(String::as_str).collect();
    let a = compile(&pad_to(&t1, &names)?, v)?;
    let b = compile(&pad_to(&t2, &names)?, v)?;
    match mode {
        Mode::Exact => {
            let x = overlap(&a, &b, sim)?;
            Ok(Score {
                value: x.clamp(0.0, 1.0),
                raw: x,
                shots: 0,
            })
        }
        Mode::Sampled {
            epsilon,
            delta,
            seed,
        } => {
            let shots = hoeffding_shots(epsilon, delta, 1)?;
            let est = sample_from(swap_zero(&a, &b, sim)?, shots, seed);
            Ok(Score {
                value: est.estimate.clamp(0.0, 1.0),
                raw: est.estimate,
                shots,
            })
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QaInstance {
    pub context: TextCircuit,
    pub questions: Vec<TextCircuit>,
    /// Nouns the questions talk about; the rest of the context is discarded.
    pub queried: Vec<String>,
}

impl QaInstance {
    fn check(&self) -> Result<(), TaskError> {
        if self.questions.is_empty() {
            return Err(TaskError::Empty);
        }
        let ctx = self.context.output_nouns();
        for q in &self.queried {
            if !ctx.contains(&q.as_str()) {
                return Err(TaskError::UnknownNoun(q.clone()));
            }
        }
        let mut want: Vec<&str> = self.queried.iter().map(String::as_str).collect();
        want.sort();
        for (i, q) in self.questions.iter().enumerate() {
            if q.has_discard() {
                return Err(TaskError::MixedQuestion(i));
            }
            let mut got = q.output_nouns();
            got.sort();
            if got != want {
                return Err(TaskError::QuestionNouns {
                    index: i,
                    expected: want.join(", "),
                    found: got.join(", "),
                });
            }
        }
        Ok(())
    }
}

/// `tr(ρ_T(ρ_Qᵢ ⊗ I))` per question and its argmax. Sampled mode spends
/// `⌈(2/(ε/2)²)·ln(2k/δ)⌉` shots on each question.
pub fn question_answer(
    inst: &QaInstance,
    v: &WordEmbeddingSet,
    mode: Mode,
    sim: &Simulator,
) -> Result<TaskResult, TaskError> {
    inst.check()?;
    let queried: Vec<&str> = inst.queried.iter().map(String::as_str).collect();
    let ctx = compile(&restrict(&inst.context, &queried)?, v)?;
    let mut exact = Vec::with_capacity(inst.questions.len());
    let mut raw = Vec::with_capacity(inst.questions.len());
    let mut shots = Vec::with_capacity(inst.questions.len());
    let k = inst.questions.len();
    for (i, q) in inst.questions.iter().enumerate() {
        let mut q = q.clone();
        q.reorder_outputs(&queried);
        let cq = compile(&q, v)?;
        match mode {
            Mode::Exact => {
                let x = overlap(&ctx, &cq, sim)?;
                exact.push(x);
                raw.push(x);
                shots.push(0);
            }
            Mode::Sampled {
                epsilon,
                delta,
                seed,
            } => {
                let p = swap_zero(&ctx, &cq, sim)?;
                let n = hoeffding_shots(epsilon, delta, k)?;
                let est = sample_from(p, n, seed_for(seed, i as u64));
                exact.push(2.0 * p - 1.0);
                raw.push(est.estimate);
                shots.push(n);
            }
        }
    }
    let below_resolution = match mode {
        Mode::Sampled { epsilon, .. } => gap(&exact).filter(|g| *g < epsilon),
        Mode::Exact => None,
    };
    Ok(TaskResult {
        scores: raw.iter().map(|x| x.clamp(0.0, 1.0)).collect(),
        chosen: argmax(&raw),
        raw,
        shots,
        mode,
        below_resolution,
    })
}

/// Index of the candidate with the largest exact overlap with `t0`.
pub fn closest_text(
    t0: &TextCircuit,
    candidates: &[TextCircuit],
    v: &WordEmbeddingSet,
    sim: &Simulator,
) -> Result<(usize, Vec<f64>), TaskError> {
    if candidates.is_empty() {
        return Err(TaskError::Empty);
    }
    let c0 = compile(t0, v)?;
    let mut scores = Vec::with_capacity(candidates.len());
    for c in candidates {
        let mut c = c.clone();
        c.reorder_outputs(&t0.output_nouns());
        let ci = compile(&c, v)?;
        scores.push(overlap(&c0, &ci, sim)?.clamp(0.0, 1.0));
    }
    Ok((argmax(&scores), scores))
}

/// Remove the State that starts `noun`'s line, leaving it as an open input.
/// Returns the word of that state, if there was one.
fn open_noun(t: &TextCircuit, noun: &str) -> Result<(TextCircuit, Option<String>), TaskError> {
    if t.input_nouns().contains(&noun) {
        return Ok((t.clone(), None));
    }
    let pos = t
        .nodes()
        .iter()
        .position(|n| {
            matches!(n.generator, Generator::State { .. }) && t.noun(n.outputs[0]) == noun
        })
        .ok_or_else(|| TaskError::UnknownNoun(noun.to_string()))?;
    let node = &t.nodes()[pos];
    let word = node.generator.word().map(ToString::to_string);
    let wire = node.outputs[0];
    let mut out = TextCircuit::empty();
    for w in t.wires() {
        out.add_wire(&w.noun);
    }
    for (i, n) in t.nodes().iter().enumerate() {
        if i != pos {
            out.add_node(n.generator.clone(), n.inputs.clone(), n.outputs.clone());
        }
    }
    let mut inputs = t.inputs().to_vec();
    inputs.push(wire);
    out.set_inputs(inputs);
    out.set_outputs(t.outputs().to_vec());
    Ok((out, word))
}

const PARTNER: &str = "~arc";

/// Put a fresh noun line (unless `noun` is already an open input here)
/// in front of `t`'s open inputs: `Cap(noun, partner)` when traced, or
/// the state `word` when not.
fn feed(t: &TextCircuit, noun: &str, partner: &str) -> Result<TextCircuit, TaskError> {
    let mut front = Builder::new();
    for n in t.input_nouns() {
        if n != noun {
            front.input(n)?;
        }
    }
    front.cap(noun, partner)?;
    let body = compose_par(t, &TextCircuit::identity(&[partner]))?;
    Ok(compose_seq(&front.finish(), &body)?)
}

/// Character-arc score for one noun (before vs after) or two nouns (the
/// first before vs the second after).
///
/// Untraced: overlap of the first noun's initial state with the last
/// noun's wire after the text, everything else discarded. Traced: the
/// first noun's line starts from one leg of a Bell pair and the last
/// noun's wire is closed against the other leg; the score is the
/// resulting post-selection probability and does not depend on the traced
/// noun's own embedding.
pub fn character_arc(
    t: &TextCircuit,
    nouns: &[&str],
    traced: bool,
    v: &WordEmbeddingSet,
    sim: &Simulator,
) -> Result<f64, TaskError> {
    let (first, last) = match nouns {
        [a] => (*a, *a),
        [a, b] => (*a, *b),
        _ => return Err(TaskError::ArcNouns(nouns.len())),
    };
    for n in nouns {
        if !t.output_nouns().contains(n) {
            return Err(TaskError::UnknownNoun(n.to_string()));
        }
    }
    if !traced {
        let (_, word) = open_noun(t, first)?;
        let after = compile(&restrict(t, &[last])?, v)?;
        let mut b = Builder::new();
        match &word {
            Some(w) => b.state(w, last)?,
            None => b.input(last)?,
        };
        let before = compile(&b.finish(), v)?;
        return overlap(&after, &before, sim).map(|x| x.clamp(0.0, 1.0));
    }
    let (mut open, _) = open_noun(t, first)?;
    if first != last {
        // the second noun's own start is made noun-independent as well
        let (o, _) = open_noun(&open, last)?;
        open = feed(&o, last, "~mix")?;
        open = then(&open, |b| b.discard("~mix").map(|_| ()))?;
    }
    let fed = feed(&open, first, PARTNER)?;
    let closed = then(&fed, |b| {
        b.cup(last, PARTNER)?;
        for n in fed.output_nouns() {
            if n != last && n != PARTNER {
                b.discard(n)?;
            }
        }
        Ok(())
    })?;
    let ct = compile(&closed, v)?;
    let st = ct.state(sim)?;
    Ok(st.weight().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{AnsatzInstance, AnsatzKind};
    use crate::linalg::rx;
    use crate::parser::Pos;
    use alloc::vec;

    fn alice_v() -> WordEmbeddingSet {
        let mut v = WordEmbeddingSet::new(2, 16);
        let pi = core::f64::consts::PI;
        v.insert("Alice", 1, Pos::ProperNoun, AnsatzInstance::identity(1));
        v.insert(
            "Bob",
            1,
            Pos::ProperNoun,
            AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.3, 1.1, 0.2]),
        );
        v.insert("happy", 1, Pos::Adjective, AnsatzInstance::identity(1));
        // Rz(0) H Rz(π) H Rz(0) is Rx(π) up to phase
        v.insert(
            "sad",
            1,
            Pos::Adjective,
            AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.0, pi, 0.0]),
        );
        v.insert(
            "U",
            1,
            Pos::IntransitiveVerb,
            AnsatzInstance::from_unitary(&rx(0.9)),
        );
        v
    }

    fn text(lines: &[(&str, &str)]) -> TextCircuit {
        let mut b = Builder::new();
        let mut seen: Vec<&str> = Vec::new();
        for (n, w) in lines {
            if !seen.contains(n) {
                b.state(n, n).unwrap();
                seen.push(n);
            }
            b.boxed(w, &[n]).unwrap();
        }
        b.finish()
    }

    #[test]
    fn alice_happy_sad() {
        let inst = QaInstance {
            context: text(&[("Alice", "happy")]),
            questions: vec![text(&[("Alice", "happy")]), text(&[("Alice", "sad")])],
            queried: vec!["Alice".into()],
        };
        let r = question_answer(&inst, &alice_v(), Mode::Exact, &Simulator::default()).unwrap();
        assert!((r.scores[0] - 1.0).abs() < 1e-10 && r.scores[1].abs() < 1e-10);
        assert_eq!(r.chosen, 0);
    }

    #[test]
    fn similarity_pads_missing_nouns() {
        let t1 = text(&[("Alice", "happy"), ("Bob", "U")]);
        let t2 = text(&[("Alice", "sad")]);
        let s = text_similarity(&t1, &t2, &alice_v(), Mode::Exact, &Simulator::default()).unwrap();
        assert!(s.value.abs() < 1e-10);
        let s = text_similarity(&t1, &t1, &alice_v(), Mode::Exact, &Simulator::default()).unwrap();
        assert!((s.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn arcs() {
        let sim = Simulator::default();
        let v = alice_v();
        let mut b = Builder::new();
        b.state("Bob", "Bob").unwrap();
        let id = b.finish();
        assert!((character_arc(&id, &["Bob"], false, &v, &sim).unwrap() - 1.0).abs() < 1e-10);
        assert!((character_arc(&id, &["Bob"], true, &v, &sim).unwrap() - 1.0).abs() < 1e-10);
        let t = text(&[("Bob", "U")]);
        let tr = rx(0.9).trace();
        let want = tr.norm_sqr() / 4.0;
        assert!((character_arc(&t, &["Bob"], true, &v, &sim).unwrap() - want).abs() < 1e-10);
    }

    fn single_noun(word: Option<&str>) -> TextCircuit {
        let mut b = Builder::new();
        b.state("Bob", "Bob").unwrap();
        if let Some(w) = word {
            b.boxed(w, &["Bob"]).unwrap();
        }
        b.finish()
    }

    #[test]
    fn identity_arcs_score_one() {
        let (v, sim) = (alice_v(), Simulator::default());
        let t = single_noun(None);
        assert!((character_arc(&t, &["Bob"], false, &v, &sim).unwrap() - 1.0).abs() < 1e-12);
        // |tr I|² / N² with N = 2
        assert!((character_arc(&t, &["Bob"], true, &v, &sim).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn traced_arc_of_one_box_is_its_normalized_trace() {
        let (v, sim) = (alice_v(), Simulator::default());
        let u = rx(0.9);
        let expected = u.trace().norm_sqr() / 4.0;
        let got = character_arc(&single_noun(Some("U")), &["Bob"], true, &v, &sim).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn ties_break_low() {
        assert_eq!(argmax(&[0.5, 0.7, 0.7]), 1);
        assert_eq!(argmax(&[0.2]), 0);
    }
}
