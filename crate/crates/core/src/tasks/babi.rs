//! The "Where is John?" warmup at one qubit per wire.
//!
//! Every movement verb is a SWAP between the person and the place, so a
//! person's wire ends up carrying the state of the last place they went
//! to. Places get distinguishable states (`|0⟩`, `|1⟩`, `|+⟩`) and a
//! question "X is in P" is X's wire prepared in P's state.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::compiler::{AnsatzInstance, AnsatzKind, WordEmbeddingSet};
use crate::ir::{Builder, TextCircuit};
use crate::linalg::swap;
use crate::parser::{parse_text, ParseError, Pos, Vocabulary};

pub const PEOPLE: [&str; 2] = ["John", "Mary"];
pub const PLACES: [&str; 3] = ["bedroom", "hallway", "bathroom"];
pub const VERBS: [&str; 3] = ["goes to", "walks to", "goes back to"];

pub const CONTEXT: [&str; 3] = [
    "John goes to the bedroom.",
    "Mary walks to the hallway.",
    "John goes back to the bathroom.",
];

pub fn vocabulary() -> Vocabulary {
    let mut v = Vocabulary::new();
    for w in PEOPLE.iter().chain(&PLACES) {
        v.insert(w, Pos::ProperNoun);
    }
    for w in VERBS {
        v.insert(w, Pos::TransitiveVerb);
    }
    v
}

pub fn embeddings() -> WordEmbeddingSet {
    let pi = core::f64::consts::PI;
    let mut v = WordEmbeddingSet::new(2, 16);
    for p in PEOPLE {
        v.insert(p, 1, Pos::ProperNoun, AnsatzInstance::identity(1));
    }
    // bedroom |0⟩, hallway |+⟩ (H = Rz(π/2)·H·Rz(π/2)·H·Rz(π/2) up to phase), bathroom |1⟩
    v.insert("bedroom", 1, Pos::ProperNoun, AnsatzInstance::identity(1));
    v.insert(
        "hallway",
        1,
        Pos::ProperNoun,
        AnsatzInstance::new(AnsatzKind::Euler, 1, vec![pi / 2.0, pi / 2.0, pi / 2.0]),
    );
    v.insert(
        "bathroom",
        1,
        Pos::ProperNoun,
        AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.0, pi, 0.0]),
    );
    for w in VERBS {
        v.insert(
            w,
            2,
            Pos::TransitiveVerb,
            AnsatzInstance::from_unitary(&swap()),
        );
    }
    v
}

pub fn context() -> Result<TextCircuit, ParseError> {
    parse_text(&CONTEXT, &vocabulary())
}

/// "`person` is in `place`": the person's wire in the place's state.
pub fn question(person: &str, place: &str) -> TextCircuit {
    let mut b = Builder::new();
    b.state(place, person).expect("fresh builder");
    b.finish()
}

pub fn questions(person: &str) -> Vec<(String, TextCircuit)> {
    PLACES
        .iter()
        .map(|p| (p.to_string(), question(person, p)))
        .collect()
}

/// Place each person visited last in `CONTEXT`.
pub fn expected(person: &str) -> Option<&'static str> {
    let mut last = None;
    for line in CONTEXT {
        if line.starts_with(person) {
            last = PLACES.iter().copied().find(|p| line.contains(p));
        }
    }
    last
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsim::Simulator;
    use crate::tasks::{closest_text, restrict};

    #[test]
    fn john_is_in_the_bathroom() {
        let ctx = restrict(&context().unwrap(), &["John"]).unwrap();
        let qs: Vec<TextCircuit> = questions("John").into_iter().map(|q| q.1).collect();
        let (i, scores) = closest_text(&ctx, &qs, &embeddings(), &Simulator::default()).unwrap();
        assert_eq!(PLACES[i], expected("John").unwrap());
        assert!((scores[i] - 1.0).abs() < 1e-10);
        let ctx = restrict(&context().unwrap(), &["Mary"]).unwrap();
        let qs: Vec<TextCircuit> = questions("Mary").into_iter().map(|q| q.1).collect();
        let (i, _) = closest_text(&ctx, &qs, &embeddings(), &Simulator::default()).unwrap();
        assert_eq!(PLACES[i], "hallway");
    }
}
