use alloc::vec;
use alloc::vec::Vec;

use crate::ir::{Generator, Hole, Node, TextCircuit};

/// How one hole's interior wires land on the frame's ports.
#[derive(Clone, Debug, PartialEq)]
pub struct HoleLayout {
    /// Port for each interior wire, or `None` when the wire was deleted.
    pub mapping: Vec<Option<usize>>,
    /// Ports the hole leaves alone; only the frame layers act on them.
    pub side_channels: Vec<usize>,
    /// Hole content with deleted wires removed and boxes shrunk to match.
    pub content: TextCircuit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameLayout {
    pub ports: usize,
    pub holes: Vec<HoleLayout>,
}

impl FrameLayout {
    /// Frame layers are interleaved with holes: layer 0, hole 0, layer 1, ….
    pub fn layer_count(&self) -> usize {
        self.holes.len() + 1
    }
}

/// Assign interior wires to ports: first every wire takes its annotated
/// port if still free, then leftovers take the lowest free port, and
/// whatever remains is deleted.
pub fn assign_ports(assignment: &[usize], ports: usize) -> Vec<Option<usize>> {
    let mut used = vec![false; ports];
    let mut mapping = vec![None; assignment.len()];
    for (i, p) in assignment.iter().enumerate() {
        if *p < ports && !used[*p] {
            used[*p] = true;
            mapping[i] = Some(*p);
        }
    }
    for m in mapping.iter_mut().filter(|m| m.is_none()) {
        if let Some(p) = (0..ports).find(|p| !used[*p]) {
            used[p] = true;
            *m = Some(p);
        }
    }
    mapping
}

/// Drop deleted interior wires from a hole's content. Nodes lose the
/// corresponding ports; boxes left with no wires disappear.
fn prune(content: &TextCircuit, mapping: &[Option<usize>]) -> TextCircuit {
    let mut dead = vec![false; content.wires().len()];
    for (i, w) in content.inputs().iter().enumerate() {
        if mapping[i].is_none() {
            dead[*w] = true;
        }
    }
    // deadness follows a line through boxes, frames, identities and swaps
    let mut nodes: Vec<Node> = Vec::new();
    for n in content.nodes() {
        let k = n.inputs.len().min(n.outputs.len());
        let carried: Vec<(usize, usize)> = match n.generator {
            Generator::Swap if k == 2 => vec![(0, 1), (1, 0)],
            _ => (0..k).map(|j| (j, j)).collect(),
        };
        for (i, o) in &carried {
            if dead[n.inputs[*i]] {
                dead[n.outputs[*o]] = true;
            }
        }
        let keep_in: Vec<usize> = n.inputs.iter().copied().filter(|w| !dead[*w]).collect();
        let keep_out: Vec<usize> = n.outputs.iter().copied().filter(|w| !dead[*w]).collect();
        if keep_in.len() == n.inputs.len() && keep_out.len() == n.outputs.len() {
            nodes.push(n.clone());
            continue;
        }
        match &n.generator {
            Generator::Box { .. } if !keep_in.is_empty() => {
                nodes.push(Node {
                    generator: n.generator.clone(),
                    inputs: keep_in,
                    outputs: keep_out,
                });
            }
            Generator::Frame {
                word,
                holes,
                dagger,
            } if !keep_in.is_empty() => {
                // ports of a nested frame are renumbered; its holes follow
                let alive: Vec<usize> = (0..n.inputs.len())
                    .filter(|j| !dead[n.inputs[*j]])
                    .collect();
                let holes = holes
                    .iter()
                    .map(|h| Hole {
                        content: h.content.clone(),
                        assignment: h
                            .assignment
                            .iter()
                            .map(|p| alive.iter().position(|a| a == p).unwrap_or(usize::MAX))
                            .collect(),
                    })
                    .collect();
                nodes.push(Node {
                    generator: Generator::Frame {
                        word: word.clone(),
                        holes,
                        dagger: *dagger,
                    },
                    inputs: keep_in,
                    outputs: keep_out,
                });
            }
            _ => {}
        }
    }
    let mut out = TextCircuit::empty();
    for w in content.wires() {
        out.add_wire(&w.noun);
    }
    for n in nodes {
        out.add_node(n.generator, n.inputs, n.outputs);
    }
    out.set_inputs(
        content
            .inputs()
            .iter()
            .copied()
            .filter(|w| !dead[*w])
            .collect(),
    );
    out.set_outputs(
        content
            .outputs()
            .iter()
            .copied()
            .filter(|w| !dead[*w])
            .collect(),
    );
    out
}

/// Lay a frame out as alternating frame layers and holes over its ports.
pub fn decompose_frame(ports: usize, holes: &[Hole]) -> FrameLayout {
    let holes = holes
        .iter()
        .map(|h| {
            let mapping = assign_ports(&h.assignment, ports);
            let used: Vec<usize> = mapping.iter().flatten().copied().collect();
            let side_channels = (0..ports).filter(|p| !used.contains(p)).collect();
            HoleLayout {
                content: prune(&h.content, &mapping),
                mapping,
                side_channels,
            }
        })
        .collect();
    FrameLayout { ports, holes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::Builder;

    #[test]
    fn annotated_ports_win_then_lowest_free() {
        assert_eq!(assign_ports(&[1, 0], 2), vec![Some(1), Some(0)]);
        assert_eq!(assign_ports(&[0, 0], 3), vec![Some(0), Some(1)]);
        assert_eq!(assign_ports(&[0, 1, 1], 2), vec![Some(0), Some(1), None]);
    }

    #[test]
    fn overfull_hole_deletes_highest_wire() {
        let mut inner = Builder::new();
        for n in ["a", "b", "c"] {
            inner.input(n).unwrap();
        }
        inner.boxed("gives", &["a", "b", "c"]).unwrap();
        let hole = Hole {
            content: inner.finish(),
            assignment: vec![0, 1, 1],
        };
        let layout = decompose_frame(2, &[hole]);
        let h = &layout.holes[0];
        assert_eq!(h.mapping, vec![Some(0), Some(1), None]);
        assert!(h.side_channels.is_empty());
        assert_eq!(h.content.nodes()[0].inputs.len(), 2);
        assert_eq!(h.content.inputs().len(), 2);
    }

    #[test]
    fn unused_ports_become_side_channels() {
        let mut inner = Builder::new();
        inner.input("a").unwrap().boxed("runs", &["a"]).unwrap();
        let hole = Hole {
            content: inner.finish(),
            assignment: vec![1],
        };
        let layout = decompose_frame(3, &[hole]);
        assert_eq!(layout.holes[0].side_channels, vec![0, 2]);
        assert_eq!(layout.layer_count(), 2);
    }
}
