use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::{Generator, TextCircuit, WireId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Cycle,
    /// Produced but never consumed, or consumed but never produced.
    DanglingWire {
        wire: WireId,
        noun: String,
    },
    WireReused {
        wire: WireId,
        noun: String,
    },
    Arity {
        node: usize,
        word: String,
        arity: usize,
        d_max: usize,
    },
    PortCount {
        node: usize,
        kind: &'static str,
        inputs: usize,
        outputs: usize,
    },
    /// A wire passes through the frame without entering one of its holes.
    FrameCrossing {
        node: usize,
        hole: usize,
        noun: String,
    },
    HoleShape {
        node: usize,
        hole: usize,
    },
    InHole {
        node: usize,
        hole: usize,
        inner: Box<Violation>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

fn expected_ports(g: &Generator, inputs: usize) -> Option<(usize, usize)> {
    Some(match g {
        Generator::State { .. } => (0, 1),
        Generator::Effect { .. } => (1, 0),
        Generator::Box { .. } | Generator::Frame { .. } => {
            if inputs == 0 {
                return None;
            }
            (inputs, inputs)
        }
        Generator::Identity => (1, 1),
        Generator::Swap => (2, 2),
        Generator::Discard => (1, 0),
        Generator::Cap => (0, 2),
        Generator::Cup => (2, 0),
    })
}

impl TextCircuit {
    /// Node indices in dependency order, or `None` if the nodes form a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let mut producer: Vec<Option<usize>> = vec![None; self.wires.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for w in &n.outputs {
                producer[*w] = Some(i);
            }
        }
        let mut indeg = vec![0usize; self.nodes.len()];
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); self.nodes.len()];
        for (i, n) in self.nodes.iter().enumerate() {
            for w in &n.inputs {
                if let Some(p) = producer[*w] {
                    succ[p].push(i);
                    indeg[i] += 1;
                }
            }
        }
        // a min-queue keeps the original order wherever it is already valid
        let mut ready: BTreeSet<usize> = (0..self.nodes.len()).filter(|i| indeg[*i] == 0).collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for s in &succ[i] {
                indeg[*s] -= 1;
                if indeg[*s] == 0 {
                    ready.insert(*s);
                }
            }
        }
        (order.len() == self.nodes.len()).then_some(order)
    }
}

/// Structural checks: cycles, dangling or reused wires, locality, port
/// counts and frame holes.
pub fn validate(c: &TextCircuit, d_max: usize) -> ValidationReport {
    let mut v = Vec::new();
    let nw = c.wires.len();
    let mut produced = vec![0usize; nw];
    let mut consumed = vec![0usize; nw];
    for w in &c.inputs {
        produced[*w] += 1;
    }
    for w in &c.outputs {
        consumed[*w] += 1;
    }
    for n in &c.nodes {
        for w in &n.outputs {
            produced[*w] += 1;
        }
        for w in &n.inputs {
            consumed[*w] += 1;
        }
    }
    for w in 0..nw {
        let (p, q) = (produced[w], consumed[w]);
        if p == 0 && q == 0 {
            continue;
        }
        let noun = c.wires[w].noun.clone();
        if p > 1 || q > 1 {
            v.push(Violation::WireReused { wire: w, noun });
        } else if p == 0 || q == 0 {
            v.push(Violation::DanglingWire { wire: w, noun });
        }
    }

    if c.topological_order().is_none() {
        v.push(Violation::Cycle);
    }

    let outer_nouns: BTreeSet<&str> = c.wires.iter().map(|w| w.noun.as_str()).collect();
    for (i, n) in c.nodes.iter().enumerate() {
        let kind = n.generator.kind();
        match expected_ports(&n.generator, n.inputs.len()) {
            Some((a, b)) if a == n.inputs.len() && b == n.outputs.len() => {}
            _ => v.push(Violation::PortCount {
                node: i,
                kind,
                inputs: n.inputs.len(),
                outputs: n.outputs.len(),
            }),
        }
        match &n.generator {
            Generator::Box { word, .. } if n.inputs.len() > d_max => v.push(Violation::Arity {
                node: i,
                word: word.clone(),
                arity: n.inputs.len(),
                d_max,
            }),
            Generator::Frame { word, holes, .. } => {
                if n.inputs.len() > d_max {
                    v.push(Violation::Arity {
                        node: i,
                        word: word.clone(),
                        arity: n.inputs.len(),
                        d_max,
                    });
                }
                let ports: BTreeSet<&str> = n.inputs.iter().map(|w| c.noun(*w)).collect();
                for (h, hole) in holes.iter().enumerate() {
                    let inner = &hole.content;
                    let shape_ok = hole.assignment.len() == inner.inputs.len()
                        && inner.input_nouns() == inner.output_nouns();
                    if !shape_ok {
                        v.push(Violation::HoleShape { node: i, hole: h });
                    }
                    for (k, p) in hole.assignment.iter().enumerate() {
                        let noun = inner.inputs.get(k).map(|w| inner.noun(*w)).unwrap_or("");
                        let foreign = outer_nouns.contains(noun) && !ports.contains(noun);
                        if *p >= n.inputs.len() || foreign {
                            v.push(Violation::FrameCrossing {
                                node: i,
                                hole: h,
                                noun: noun.to_string(),
                            });
                        }
                    }
                    for inner_v in validate(inner, d_max).violations {
                        v.push(Violation::InHole {
                            node: i,
                            hole: h,
                            inner: Box::new(inner_v),
                        });
                    }
                }
            }
            _ => {}
        }
    }
    ValidationReport { violations: v }
}

#[cfg(test)]
mod tests {
    use super::super::{frame_around_box, Builder, Hole};
    use super::*;

    #[test]
    fn built_circuits_are_clean() {
        let mut b = Builder::new();
        b.state("Alice", "Alice")
            .unwrap()
            .state("Bob", "Bob")
            .unwrap();
        b.boxed("greets", &["Alice", "Bob"]).unwrap();
        assert!(validate(&b.finish(), 3).is_empty());
        assert!(validate(
            &frame_around_box("quickly", "greets", &["A", "B"], false).unwrap(),
            3
        )
        .is_empty());
    }

    #[test]
    fn locality_bound() {
        let mut b = Builder::new();
        for n in ["a", "b", "c", "d"] {
            b.input(n).unwrap();
        }
        b.boxed("gives", &["a", "b", "c", "d"]).unwrap();
        let r = validate(&b.finish(), 3);
        assert!(matches!(
            r.violations[..],
            [Violation::Arity {
                arity: 4,
                d_max: 3,
                ..
            }]
        ));
    }

    #[test]
    fn wire_routed_past_a_frame() {
        // Carol's wire runs beside the frame, yet the hole acts on Carol
        let mut inner = Builder::new();
        inner.input("Alice").unwrap().input("Carol").unwrap();
        inner.boxed("greets", &["Alice", "Carol"]).unwrap();
        let hole = Hole {
            content: inner.finish(),
            assignment: vec![0, 0],
        };
        let mut b = Builder::new();
        b.input("Alice").unwrap().input("Carol").unwrap();
        b.frame("quickly", &["Alice"], vec![hole], false).unwrap();
        let r = validate(&b.finish(), 3);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::FrameCrossing { noun, .. } if noun == "Carol")));
    }

    #[test]
    fn cycles_and_dangling_wires() {
        let mut c = TextCircuit::empty();
        let a = c.add_wire("A");
        let b = c.add_wire("A");
        c.add_node(
            Generator::Box {
                word: "f".into(),
                dagger: false,
            },
            vec![a],
            vec![b],
        );
        c.add_node(
            Generator::Box {
                word: "g".into(),
                dagger: false,
            },
            vec![b],
            vec![a],
        );
        assert!(validate(&c, 3).violations.contains(&Violation::Cycle));

        let mut d = TextCircuit::empty();
        let w = d.add_wire("A");
        d.add_node(Generator::State { word: "A".into() }, vec![], vec![w]);
        assert!(matches!(
            validate(&d, 3).violations[..],
            [Violation::DanglingWire { .. }]
        ));
    }
}
