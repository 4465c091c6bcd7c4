use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use super::{Generator, Node, TextCircuit, WireId};

/// Circuit with wire-only structure removed, plus the number of closed
/// Cap/Cup loops that were taken out.
#[derive(Clone, Debug)]
pub struct Normalized {
    pub circuit: TextCircuit,
    pub loops: usize,
}

fn resolve(alias: &[Option<WireId>], mut w: WireId) -> WireId {
    while let Some(next) = alias[w] {
        w = next;
    }
    w
}

fn rewrite(c: &mut TextCircuit, alias: &[Option<WireId>]) {
    for n in &mut c.nodes {
        for w in n.inputs.iter_mut().chain(n.outputs.iter_mut()) {
            *w = resolve(alias, *w);
        }
    }
    for w in c.inputs.iter_mut().chain(c.outputs.iter_mut()) {
        *w = resolve(alias, *w);
    }
}

/// Elide identities and swaps (pure rewiring), then yank Cap/Cup snakes
/// until none are left.
pub fn normalize(c: &TextCircuit) -> Normalized {
    let mut out = c.clone();
    let mut alias: Vec<Option<WireId>> = vec![None; out.wires.len()];
    let mut kept = Vec::with_capacity(out.nodes.len());
    for n in out.nodes.drain(..) {
        match n.generator {
            Generator::Identity if n.inputs.len() == 1 && n.outputs.len() == 1 => {
                alias[n.outputs[0]] = Some(n.inputs[0]);
            }
            Generator::Swap if n.inputs.len() == 2 && n.outputs.len() == 2 => {
                alias[n.outputs[0]] = Some(n.inputs[1]);
                alias[n.outputs[1]] = Some(n.inputs[0]);
            }
            _ => kept.push(n),
        }
    }
    out.nodes = kept;
    rewrite(&mut out, &alias);

    let mut loops = 0;
    while let Some(step) = find_snake(&out) {
        match step {
            Snake::Loop { cap, cup } => {
                loops += 1;
                remove_nodes(&mut out, &[cap, cup]);
            }
            Snake::Yank { cap, cup, from, to } => {
                let mut alias: Vec<Option<WireId>> = vec![None; out.wires.len()];
                alias[from] = Some(to);
                remove_nodes(&mut out, &[cap, cup]);
                rewrite(&mut out, &alias);
            }
        }
    }
    Normalized {
        circuit: out,
        loops,
    }
}

fn remove_nodes(c: &mut TextCircuit, idx: &[usize]) {
    let mut i = 0;
    c.nodes.retain(|_| {
        let keep = !idx.contains(&i);
        i += 1;
        keep
    });
}

enum Snake {
    Loop {
        cap: usize,
        cup: usize,
    },
    /// Wire `from` (the cap's far leg) is replaced by `to` (the cup's far leg).
    Yank {
        cap: usize,
        cup: usize,
        from: WireId,
        to: WireId,
    },
}

fn consumers(c: &TextCircuit) -> Vec<Option<usize>> {
    let mut out = vec![None; c.wires.len()];
    for (i, n) in c.nodes.iter().enumerate() {
        for w in &n.inputs {
            out[*w] = Some(i);
        }
    }
    out
}

fn find_snake(c: &TextCircuit) -> Option<Snake> {
    let cons = consumers(c);
    for (cap, n) in c.nodes.iter().enumerate() {
        if n.generator != Generator::Cap || n.outputs.len() != 2 {
            continue;
        }
        for leg in 0..2 {
            let (x, y) = (n.outputs[leg], n.outputs[1 - leg]);
            let Some(cup) = cons[x] else { continue };
            let m = &c.nodes[cup];
            if m.generator != Generator::Cup || m.inputs.len() != 2 {
                continue;
            }
            let u = if m.inputs[0] == x {
                m.inputs[1]
            } else {
                m.inputs[0]
            };
            if u == y {
                return Some(Snake::Loop { cap, cup });
            }
            // u fed from downstream of y would make a trace, not a snake
            if !downstream_produces(c, &cons, y, u) {
                return Some(Snake::Yank {
                    cap,
                    cup,
                    from: y,
                    to: u,
                });
            }
        }
    }
    None
}

fn downstream_produces(
    c: &TextCircuit,
    cons: &[Option<usize>],
    start: WireId,
    target: WireId,
) -> bool {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some(w) = queue.pop_front() {
        if w == target {
            return true;
        }
        if let Some(n) = cons[w] {
            if seen.insert(n) {
                queue.extend(c.nodes[n].outputs.iter().copied());
            }
        }
    }
    false
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Vertex {
    In(usize),
    Out(usize),
    Node(usize),
}

struct PortGraph<'a> {
    c: &'a TextCircuit,
    vertices: Vec<Vertex>,
    labels: Vec<String>,
    /// For each vertex, its ports (inputs first): the wire and the
    /// neighbour (vertex, port) across it.
    ports: Vec<Vec<(WireId, Option<(usize, usize)>)>>,
}

fn node_label(n: &Node) -> String {
    let mut s = String::from(n.generator.kind());
    if let Some(w) = n.generator.word() {
        let _ = write!(s, ":{}", w);
    }
    if n.generator.is_dagger() {
        s.push('~');
    }
    if let Generator::Frame { holes, .. } = &n.generator {
        for h in holes {
            let _ = write!(s, "{{{}}}{:?}", canonical_code(&h.content), h.assignment);
        }
    }
    s
}

impl<'a> PortGraph<'a> {
    fn new(c: &'a TextCircuit) -> Self {
        let mut vertices = Vec::new();
        let mut labels = Vec::new();
        for i in 0..c.inputs.len() {
            vertices.push(Vertex::In(i));
            labels.push(format!("I{}", i));
        }
        for j in 0..c.outputs.len() {
            vertices.push(Vertex::Out(j));
            labels.push(format!("O{}", j));
        }
        for (i, n) in c.nodes.iter().enumerate() {
            vertices.push(Vertex::Node(i));
            labels.push(node_label(n));
        }
        // wire -> (vertex, port) at each end
        let mut src: Vec<Option<(usize, usize)>> = vec![None; c.wires.len()];
        let mut dst: Vec<Option<(usize, usize)>> = vec![None; c.wires.len()];
        let mut layout: Vec<(Vec<WireId>, Vec<WireId>)> = Vec::with_capacity(vertices.len());
        for v in &vertices {
            layout.push(match v {
                Vertex::In(i) => (vec![], vec![c.inputs[*i]]),
                Vertex::Out(j) => (vec![c.outputs[*j]], vec![]),
                Vertex::Node(i) => (c.nodes[*i].inputs.clone(), c.nodes[*i].outputs.clone()),
            });
        }
        for (vi, (ins, outs)) in layout.iter().enumerate() {
            for (p, w) in ins.iter().enumerate() {
                dst[*w] = Some((vi, p));
            }
            for (p, w) in outs.iter().enumerate() {
                src[*w] = Some((vi, ins.len() + p));
            }
        }
        let ports = layout
            .iter()
            .map(|(ins, outs)| {
                ins.iter()
                    .map(|w| (*w, src[*w]))
                    .chain(outs.iter().map(|w| (*w, dst[*w])))
                    .collect()
            })
            .collect();
        PortGraph {
            c,
            vertices,
            labels,
            ports,
        }
    }

    /// Breadth-first numbering from `starts`, visiting ports in order.
    fn number(&self, starts: &[usize], number: &mut [Option<usize>]) -> Vec<usize> {
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for s in starts {
            if number[*s].is_none() {
                number[*s] = Some(order.len());
                order.push(*s);
                queue.push_back(*s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for (_, nb) in &self.ports[v] {
                if let Some((u, _)) = nb {
                    if number[*u].is_none() {
                        number[*u] = Some(order.len());
                        order.push(*u);
                        queue.push_back(*u);
                    }
                }
            }
        }
        order
    }

    fn encode(&self, order: &[usize], number: &[Option<usize>], base: usize) -> String {
        let mut s = String::new();
        for v in order {
            s.push_str(&self.labels[*v]);
            s.push('[');
            for (w, nb) in &self.ports[*v] {
                match nb {
                    Some((u, p)) => {
                        let _ = write!(
                            s,
                            "{}.{}:{},",
                            number[*u].unwrap() - base,
                            p,
                            self.c.noun(*w)
                        );
                    }
                    None => {
                        let _ = write!(s, "-:{},", self.c.noun(*w));
                    }
                }
            }
            s.push_str("]\n");
        }
        s
    }
}

/// String that two circuits share exactly when they are equal up to
/// wire-only structure and relabeling of internal wires.
pub fn canonical_code(c: &TextCircuit) -> String {
    let Normalized { circuit, loops } = normalize(c);
    let g = PortGraph::new(&circuit);
    let nb = circuit.inputs.len() + circuit.outputs.len();
    let mut number = vec![None; g.vertices.len()];
    let boundary: Vec<usize> = (0..nb).collect();
    let order = g.number(&boundary, &mut number);
    let mut code = format!(
        "{}>{}|loops={}\n",
        circuit.inputs.len(),
        circuit.outputs.len(),
        loops
    );
    code.push_str(&g.encode(&order, &number, 0));

    let mut components = Vec::new();
    for v in 0..g.vertices.len() {
        if number[v].is_some() {
            continue;
        }
        // isolate the component, then try each start with the least label
        let mut probe = number.clone();
        let members = g.number(&[v], &mut probe);
        let least = members.iter().map(|m| &g.labels[*m]).min().unwrap().clone();
        let mut best: Option<String> = None;
        for s in members.iter().filter(|m| g.labels[**m] == least) {
            let mut trial = number.clone();
            let order = g.number(&[*s], &mut trial);
            let base = trial[*s].unwrap();
            let enc = g.encode(&order, &trial, base);
            if best.as_ref().map_or(true, |b| enc < *b) {
                best = Some(enc);
            }
        }
        for m in &members {
            number[*m] = Some(usize::MAX);
        }
        components.push(best.unwrap());
    }
    components.sort();
    for comp in components {
        code.push_str("--\n");
        code.push_str(&comp);
    }
    code
}

/// Equality up to identities, swaps, snakes and internal wire naming,
/// respecting the order of open wires.
pub fn connectivity_equal(a: &TextCircuit, b: &TextCircuit) -> bool {
    canonical_code(a) == canonical_code(b)
}

#[cfg(test)]
mod tests {
    use super::super::{Builder, TextCircuit};
    use super::*;

    #[test]
    fn double_swap_is_identity() {
        let mut b = Builder::new();
        b.input("A").unwrap().input("B").unwrap();
        b.swap("A", "B").unwrap().swap("A", "B").unwrap();
        let c = b.finish();
        assert!(connectivity_equal(&c, &TextCircuit::identity(&["A", "B"])));
        let mut one = Builder::new();
        one.input("A")
            .unwrap()
            .input("B")
            .unwrap()
            .swap("A", "B")
            .unwrap();
        assert!(!connectivity_equal(
            &one.finish(),
            &TextCircuit::identity(&["A", "B"])
        ));
    }

    #[test]
    fn snake_yanks_to_identity() {
        // A enters a cup with the left leg of a cap; the right leg leaves as A
        let mut b = Builder::new();
        b.input("A").unwrap();
        b.cap("p", "A'").unwrap();
        b.cup("A", "p").unwrap();
        let c = b.finish();
        assert!(connectivity_equal(&c, &TextCircuit::identity(&["A"])));
        let n = normalize(&c);
        assert_eq!(n.circuit.nodes().len(), 0);
    }

    #[test]
    fn closed_loop_is_counted() {
        let mut b = Builder::new();
        b.cap("x", "y").unwrap().cup("x", "y").unwrap();
        let n = normalize(&b.finish());
        assert_eq!(n.loops, 1);
        assert!(n.circuit.nodes().is_empty());
    }

    #[test]
    fn labels_matter() {
        let mk = |w: &str| {
            let mut b = Builder::new();
            b.input("A")
                .unwrap()
                .input("B")
                .unwrap()
                .boxed(w, &["A", "B"])
                .unwrap();
            b.finish()
        };
        assert!(!connectivity_equal(&mk("runs"), &mk("sees")));
        assert!(connectivity_equal(&mk("sees"), &mk("sees")));
    }

    #[test]
    fn closed_components_compare_up_to_order() {
        let mut x = Builder::new();
        x.state("u", "A").unwrap().effect("u", "A").unwrap();
        x.state("v", "B").unwrap().effect("v", "B").unwrap();
        let mut y = Builder::new();
        y.state("v", "B").unwrap().effect("v", "B").unwrap();
        y.state("u", "A").unwrap().effect("u", "A").unwrap();
        assert!(connectivity_equal(&x.finish(), &y.finish()));
    }
}
