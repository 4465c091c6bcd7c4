//! DisCoCirc text circuits: noun wires, generators and their composition.

mod normalize;
mod sample;
mod validate;

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

pub use normalize::{canonical_code, connectivity_equal, normalize, Normalized};
pub use sample::{hapax_fraction, sample_dk, ArityDist, SampleError, SamplerParams};
pub use validate::{validate, ValidationReport, Violation};

pub type WireId = usize;

/// Default locality bound on box arity.
pub const DEFAULT_D_MAX: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wire {
    pub noun: String,
}

/// Content of one frame hole. `assignment[i]` is the frame port that the
/// hole's `i`-th open wire is attached to; several interior wires may share
/// a port.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hole {
    pub content: TextCircuit,
    pub assignment: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    State {
        word: String,
    },
    Effect {
        word: String,
    },
    /// Arity is the number of input wires; outputs carry the same nouns.
    Box {
        word: String,
        dagger: bool,
    },
    /// Ports are the node's inputs; holes are filled in order.
    Frame {
        word: String,
        holes: Vec<Hole>,
        dagger: bool,
    },
    Identity,
    Swap,
    Discard,
    Cap,
    Cup,
}

impl Generator {
    pub fn kind(&self) -> &'static str {
        match self {
            Generator::State { .. } => "STATE",
            Generator::Effect { .. } => "EFFECT",
            Generator::Box { .. } => "BOX",
            Generator::Frame { .. } => "FRAME",
            Generator::Identity => "ID",
            Generator::Swap => "SWAP",
            Generator::Discard => "DISCARD",
            Generator::Cap => "CAP",
            Generator::Cup => "CUP",
        }
    }

    pub fn word(&self) -> Option<&str> {
        match self {
            Generator::State { word }
            | Generator::Effect { word }
            | Generator::Box { word, .. }
            | Generator::Frame { word, .. } => Some(word),
            _ => None,
        }
    }

    pub fn is_dagger(&self) -> bool {
        matches!(
            self,
            Generator::Box { dagger: true, .. } | Generator::Frame { dagger: true, .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub generator: Generator,
    pub inputs: Vec<WireId>,
    pub outputs: Vec<WireId>,
}

/// Labeled DAG of generators over noun wires. Nodes are kept in a
/// topological order when built through the provided constructors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TextCircuit {
    wires: Vec<Wire>,
    nodes: Vec<Node>,
    inputs: Vec<WireId>,
    outputs: Vec<WireId>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum IrError {
    #[error("open wires do not match; unmatched nouns: {}", .0.join(", "))]
    WireMismatch(Vec<String>),
    #[error("noun {0} appears on both sides of a parallel composition")]
    DuplicateNoun(String),
    #[error("{0} has no inverse")]
    NotInvertible(&'static str),
    #[error("unknown noun {0}")]
    UnknownNoun(String),
}

impl TextCircuit {
    pub fn empty() -> Self {
        TextCircuit::default()
    }

    /// Identity circuit on the given nouns (bare wires, no nodes).
    pub fn identity(nouns: &[&str]) -> Self {
        let mut c = TextCircuit::empty();
        for n in nouns {
            let w = c.add_wire(n);
            c.inputs.push(w);
            c.outputs.push(w);
        }
        c
    }

    pub fn add_wire(&mut self, noun: &str) -> WireId {
        self.wires.push(Wire {
            noun: noun.to_string(),
        });
        self.wires.len() - 1
    }

    /// Append a node without any checks; see [`validate`].
    pub fn add_node(
        &mut self,
        generator: Generator,
        inputs: Vec<WireId>,
        outputs: Vec<WireId>,
    ) -> usize {
        self.nodes.push(Node {
            generator,
            inputs,
            outputs,
        });
        self.nodes.len() - 1
    }

    pub fn set_inputs(&mut self, inputs: Vec<WireId>) {
        self.inputs = inputs;
    }

    pub fn set_outputs(&mut self, outputs: Vec<WireId>) {
        self.outputs = outputs;
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn nodes_mut(&mut self) -> &mut [Node] {
        &mut self.nodes
    }

    pub fn inputs(&self) -> &[WireId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[WireId] {
        &self.outputs
    }

    pub fn noun(&self, w: WireId) -> &str {
        &self.wires[w].noun
    }

    pub fn input_nouns(&self) -> Vec<&str> {
        self.inputs.iter().map(|w| self.noun(*w)).collect()
    }

    pub fn output_nouns(&self) -> Vec<&str> {
        self.outputs.iter().map(|w| self.noun(*w)).collect()
    }

    pub fn is_scalar(&self) -> bool {
        self.inputs.is_empty() && self.outputs.is_empty()
    }

    /// Distinct nouns in order of first appearance on any wire.
    pub fn nouns(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        for w in &self.wires {
            if !out.contains(&w.noun) {
                out.push(w.noun.clone());
            }
        }
        out
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.nodes
            .iter()
            .filter(|n| n.generator.kind() == kind)
            .count()
    }

    pub fn has_discard(&self) -> bool {
        self.nodes.iter().any(|n| match &n.generator {
            Generator::Discard => true,
            Generator::Frame { holes, .. } => holes.iter().any(|h| h.content.has_discard()),
            _ => false,
        })
    }

    /// Reorder the open outputs so their nouns follow `order`; nouns not
    /// listed keep their relative order at the end.
    pub fn reorder_outputs(&mut self, order: &[&str]) {
        let rank = |w: &WireId| {
            let noun = self.wires[*w].noun.as_str();
            order.iter().position(|n| *n == noun).unwrap_or(order.len())
        };
        let mut outs = self.outputs.clone();
        outs.sort_by_key(rank);
        self.outputs = outs;
    }

    /// Copy `other` into `self`, returning the wire renumbering.
    fn absorb(&mut self, other: &TextCircuit) -> Vec<WireId> {
        let offset = self.wires.len();
        self.wires.extend(other.wires.iter().cloned());
        for n in &other.nodes {
            self.nodes.push(Node {
                generator: n.generator.clone(),
                inputs: n.inputs.iter().map(|w| w + offset).collect(),
                outputs: n.outputs.iter().map(|w| w + offset).collect(),
            });
        }
        (0..other.wires.len()).map(|w| w + offset).collect()
    }

    /// Rewrite every reference to wire `from` as `to`.
    fn substitute(&mut self, from: WireId, to: WireId) {
        for n in &mut self.nodes {
            for w in n.inputs.iter_mut().chain(n.outputs.iter_mut()) {
                if *w == from {
                    *w = to;
                }
            }
        }
        for w in self.inputs.iter_mut().chain(self.outputs.iter_mut()) {
            if *w == from {
                *w = to;
            }
        }
    }
}

/// `b` after `a`, pairing each open input of `b` with the open output of
/// `a` carrying the same noun.
pub fn compose_seq(a: &TextCircuit, b: &TextCircuit) -> Result<TextCircuit, IrError> {
    let mut pairing = Vec::with_capacity(b.inputs.len());
    let mut used = vec![false; a.outputs.len()];
    let mut unmatched = Vec::new();
    for w in &b.inputs {
        let noun = b.noun(*w);
        match (0..a.outputs.len()).find(|i| !used[*i] && a.noun(a.outputs[*i]) == noun) {
            Some(i) => {
                used[i] = true;
                pairing.push(i);
            }
            None => unmatched.push(noun.to_string()),
        }
    }
    for (i, u) in used.iter().enumerate() {
        if !u {
            unmatched.push(a.noun(a.outputs[i]).to_string());
        }
    }
    if !unmatched.is_empty() {
        unmatched.sort();
        unmatched.dedup();
        return Err(IrError::WireMismatch(unmatched));
    }
    compose_seq_with(a, b, &pairing)
}

/// `b` after `a` with an explicit pairing: `b`'s `i`-th open input is
/// joined to `a`'s `pairing[i]`-th open output.
pub fn compose_seq_with(
    a: &TextCircuit,
    b: &TextCircuit,
    pairing: &[usize],
) -> Result<TextCircuit, IrError> {
    let mut seen = vec![false; a.outputs.len()];
    let valid = pairing.len() == b.inputs.len()
        && pairing.len() == a.outputs.len()
        && pairing
            .iter()
            .all(|p| *p < seen.len() && !core::mem::replace(&mut seen[*p], true));
    let mismatch = valid
        && pairing
            .iter()
            .enumerate()
            .any(|(i, p)| a.noun(a.outputs[*p]) != b.noun(b.inputs[i]));
    if !valid || mismatch {
        let mut names: Vec<String> = a
            .output_nouns()
            .into_iter()
            .chain(b.input_nouns())
            .map(ToString::to_string)
            .collect();
        names.sort();
        names.dedup();
        return Err(IrError::WireMismatch(names));
    }
    let mut out = a.clone();
    let map = out.absorb(b);
    for (i, p) in pairing.iter().enumerate() {
        let joined = a.outputs[*p];
        out.substitute(map[b.inputs[i]], joined);
    }
    out.outputs = b
        .outputs
        .iter()
        .map(|w| match b.inputs.iter().position(|x| x == w) {
            // bare wire of b: keep a's side of the join
            Some(i) => a.outputs[pairing[i]],
            None => map[*w],
        })
        .collect();
    Ok(out)
}

/// Side-by-side composition; the noun sets must be disjoint.
pub fn compose_par(a: &TextCircuit, b: &TextCircuit) -> Result<TextCircuit, IrError> {
    let an = a.nouns();
    if let Some(n) = b.nouns().into_iter().find(|n| an.contains(n)) {
        return Err(IrError::DuplicateNoun(n));
    }
    let mut out = a.clone();
    let map = out.absorb(b);
    out.inputs.extend(b.inputs.iter().map(|w| map[*w]));
    out.outputs.extend(b.outputs.iter().map(|w| map[*w]));
    Ok(out)
}

/// Vertical mirror image with every generator replaced by its inverse.
pub fn inverse(c: &TextCircuit) -> Result<TextCircuit, IrError> {
    let mut nodes = Vec::with_capacity(c.nodes.len());
    for n in c.nodes.iter().rev() {
        let generator = match &n.generator {
            Generator::State { word } => Generator::Effect { word: word.clone() },
            Generator::Effect { word } => Generator::State { word: word.clone() },
            Generator::Box { word, dagger } => Generator::Box {
                word: word.clone(),
                dagger: !dagger,
            },
            Generator::Frame {
                word,
                holes,
                dagger,
            } => {
                let mut inv = Vec::with_capacity(holes.len());
                for h in holes.iter().rev() {
                    inv.push(Hole {
                        content: inverse(&h.content)?,
                        assignment: h.assignment.clone(),
                    });
                }
                Generator::Frame {
                    word: word.clone(),
                    holes: inv,
                    dagger: !dagger,
                }
            }
            Generator::Identity => Generator::Identity,
            Generator::Swap => Generator::Swap,
            Generator::Cap => Generator::Cup,
            Generator::Cup => Generator::Cap,
            Generator::Discard => return Err(IrError::NotInvertible("discard")),
        };
        nodes.push(Node {
            generator,
            inputs: n.outputs.clone(),
            outputs: n.inputs.clone(),
        });
    }
    Ok(TextCircuit {
        wires: c.wires.clone(),
        nodes,
        inputs: c.outputs.clone(),
        outputs: c.inputs.clone(),
    })
}

/// Incremental construction keeping one live wire per noun.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    circuit: TextCircuit,
    live: BTreeMap<String, WireId>,
    order: Vec<String>,
}

impl Builder {
    pub fn new() -> Self {
        Builder::default()
    }

    pub fn is_live(&self, noun: &str) -> bool {
        self.live.contains_key(noun)
    }

    fn fresh(&mut self, noun: &str) -> Result<WireId, IrError> {
        if self.live.contains_key(noun) {
            return Err(IrError::DuplicateNoun(noun.to_string()));
        }
        let w = self.circuit.add_wire(noun);
        self.live.insert(noun.to_string(), w);
        self.order.push(noun.to_string());
        Ok(w)
    }

    fn take(&mut self, noun: &str) -> Result<WireId, IrError> {
        let w = self
            .live
            .remove(noun)
            .ok_or_else(|| IrError::UnknownNoun(noun.to_string()))?;
        self.order.retain(|n| n != noun);
        Ok(w)
    }

    fn advance(&mut self, noun: &str) -> Result<(WireId, WireId), IrError> {
        let old = *self
            .live
            .get(noun)
            .ok_or_else(|| IrError::UnknownNoun(noun.to_string()))?;
        let new = self.circuit.add_wire(noun);
        self.live.insert(noun.to_string(), new);
        Ok((old, new))
    }

    pub fn input(&mut self, noun: &str) -> Result<&mut Self, IrError> {
        let w = self.fresh(noun)?;
        self.circuit.inputs.push(w);
        Ok(self)
    }

    pub fn state(&mut self, word: &str, noun: &str) -> Result<&mut Self, IrError> {
        let w = self.fresh(noun)?;
        self.circuit.add_node(
            Generator::State {
                word: word.to_string(),
            },
            vec![],
            vec![w],
        );
        Ok(self)
    }

    pub fn effect(&mut self, word: &str, noun: &str) -> Result<&mut Self, IrError> {
        let w = self.take(noun)?;
        self.circuit.add_node(
            Generator::Effect {
                word: word.to_string(),
            },
            vec![w],
            vec![],
        );
        Ok(self)
    }

    pub fn discard(&mut self, noun: &str) -> Result<&mut Self, IrError> {
        let w = self.take(noun)?;
        self.circuit.add_node(Generator::Discard, vec![w], vec![]);
        Ok(self)
    }

    fn lanes(&mut self, nouns: &[&str]) -> Result<(Vec<WireId>, Vec<WireId>), IrError> {
        for (i, n) in nouns.iter().enumerate() {
            if nouns[..i].contains(n) {
                return Err(IrError::DuplicateNoun(n.to_string()));
            }
        }
        let mut ins = Vec::new();
        let mut outs = Vec::new();
        for n in nouns {
            let (a, b) = self.advance(n)?;
            ins.push(a);
            outs.push(b);
        }
        Ok((ins, outs))
    }

    pub fn boxed(&mut self, word: &str, nouns: &[&str]) -> Result<&mut Self, IrError> {
        self.boxed_dagger(word, nouns, false)
    }

    pub fn boxed_dagger(
        &mut self,
        word: &str,
        nouns: &[&str],
        dagger: bool,
    ) -> Result<&mut Self, IrError> {
        let (ins, outs) = self.lanes(nouns)?;
        self.circuit.add_node(
            Generator::Box {
                word: word.to_string(),
                dagger,
            },
            ins,
            outs,
        );
        Ok(self)
    }

    pub fn frame(
        &mut self,
        word: &str,
        ports: &[&str],
        holes: Vec<Hole>,
        dagger: bool,
    ) -> Result<&mut Self, IrError> {
        let (ins, outs) = self.lanes(ports)?;
        self.circuit.add_node(
            Generator::Frame {
                word: word.to_string(),
                holes,
                dagger,
            },
            ins,
            outs,
        );
        Ok(self)
    }

    pub fn identity(&mut self, noun: &str) -> Result<&mut Self, IrError> {
        let (a, b) = self.advance(noun)?;
        self.circuit.add_node(Generator::Identity, vec![a], vec![b]);
        Ok(self)
    }

    /// Exchange the positions of two nouns in the open-output order.
    pub fn swap(&mut self, first: &str, second: &str) -> Result<&mut Self, IrError> {
        let (a, a2) = self.advance(first)?;
        let (b, b2) = self.advance(second)?;
        self.circuit
            .add_node(Generator::Swap, vec![a, b], vec![b2, a2]);
        let i = self.order.iter().position(|n| n == first).unwrap();
        let j = self.order.iter().position(|n| n == second).unwrap();
        self.order.swap(i, j);
        Ok(self)
    }

    pub fn cap(&mut self, first: &str, second: &str) -> Result<&mut Self, IrError> {
        if first == second {
            return Err(IrError::DuplicateNoun(first.to_string()));
        }
        let a = self.fresh(first)?;
        let b = self.fresh(second)?;
        self.circuit.add_node(Generator::Cap, vec![], vec![a, b]);
        Ok(self)
    }

    pub fn cup(&mut self, first: &str, second: &str) -> Result<&mut Self, IrError> {
        let a = self.take(first)?;
        let b = self.take(second)?;
        self.circuit.add_node(Generator::Cup, vec![a, b], vec![]);
        Ok(self)
    }

    /// Open outputs follow the order in which live nouns were introduced.
    pub fn finish(mut self) -> TextCircuit {
        self.circuit.outputs = self.order.iter().map(|n| self.live[n]).collect();
        self.circuit
    }
}

/// One-hole frame around a single box over `nouns`, with the frame ports
/// being those same nouns.
pub fn frame_around_box(
    frame_word: &str,
    box_word: &str,
    nouns: &[&str],
    dagger: bool,
) -> Result<TextCircuit, IrError> {
    let mut inner = Builder::new();
    for n in nouns {
        inner.input(n)?;
    }
    inner.boxed_dagger(box_word, nouns, dagger)?;
    let hole = Hole {
        content: inner.finish(),
        assignment: (0..nouns.len()).collect(),
    };
    let mut outer = Builder::new();
    for n in nouns {
        outer.input(n)?;
    }
    outer.frame(frame_word, nouns, vec![hole], false)?;
    Ok(outer.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn state(noun: &str) -> TextCircuit {
        let mut b = Builder::new();
        b.state(noun, noun).unwrap();
        b.finish()
    }

    fn effect(noun: &str) -> TextCircuit {
        let mut b = Builder::new();
        b.input(noun).unwrap().effect(noun, noun).unwrap();
        b.finish()
    }

    #[test]
    fn state_then_effect_is_scalar() {
        let c = compose_seq(&state("Alice"), &effect("Alice")).unwrap();
        assert!(c.is_scalar());
        assert_eq!(c.nodes().len(), 2);
    }

    #[test]
    fn mismatch_names_the_nouns() {
        match compose_seq(&state("Alice"), &effect("Bob")) {
            Err(IrError::WireMismatch(n)) => {
                assert_eq!(n, vec!["Alice".to_string(), "Bob".to_string()])
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parallel_composition() {
        let c = compose_par(&state("A"), &state("B")).unwrap();
        assert_eq!(c.output_nouns(), vec!["A", "B"]);
        assert_eq!(compose_par(&TextCircuit::empty(), &c).unwrap(), c);
        assert!(matches!(
            compose_par(&c, &state("A")),
            Err(IrError::DuplicateNoun(_))
        ));
    }

    #[test]
    fn two_noun_story() {
        let mut runs = Builder::new();
        runs.input("Claudio")
            .unwrap()
            .boxed("runs", &["Claudio"])
            .unwrap();
        let mut sees = Builder::new();
        sees.input("Sofia").unwrap().input("Claudio").unwrap();
        sees.boxed("sees", &["Sofia", "Claudio"]).unwrap();
        let start = compose_par(&state("Sofia"), &state("Claudio")).unwrap();
        let first = compose_par(&TextCircuit::identity(&["Sofia"]), &runs.finish()).unwrap();
        let c = compose_seq(&compose_seq(&start, &first).unwrap(), &sees.finish()).unwrap();
        assert_eq!(c.count_kind("BOX"), 2);
        assert_eq!(c.nouns(), vec!["Sofia".to_string(), "Claudio".to_string()]);
        assert!(validate(&c, DEFAULT_D_MAX).is_empty());
    }

    #[test]
    fn inverse_mirrors() {
        assert_eq!(inverse(&state("w")).unwrap(), effect("w"));
        let mut b = Builder::new();
        b.input("A")
            .unwrap()
            .boxed("b1", &["A"])
            .unwrap()
            .boxed("b2", &["A"])
            .unwrap();
        let c = b.finish();
        let inv = inverse(&c).unwrap();
        let words: Vec<_> = inv
            .nodes()
            .iter()
            .map(|n| (n.generator.word().unwrap(), n.generator.is_dagger()))
            .collect();
        assert_eq!(words, vec![("b2", true), ("b1", true)]);
        assert_eq!(inverse(&inv).unwrap(), c);

        let mut d = Builder::new();
        d.input("A").unwrap().discard("A").unwrap();
        assert_eq!(inverse(&d.finish()), Err(IrError::NotInvertible("discard")));
    }

    #[test]
    fn cap_inverts_to_cup() {
        let mut b = Builder::new();
        b.cap("x", "y").unwrap();
        let cap = b.finish();
        let cup = inverse(&cap).unwrap();
        assert_eq!(cup.nodes()[0].generator, Generator::Cup);
        let loop_ = compose_seq(&cap, &cup).unwrap();
        assert!(loop_.is_scalar());
    }
}
