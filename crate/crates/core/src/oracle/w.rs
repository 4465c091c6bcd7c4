use alloc::vec::Vec;
use core::ops::Range;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use super::primitives::{angle_register_value, binary_mux_gates, pcrz_gates, unary_iteration};
use super::tables::{index_levels, QramTableSet};
use super::OracleError;
use crate::compiler::{template_gates, AnsatzKind, CompiledText, TemplateGate};
use crate::linalg::C64;
use crate::qsim::{Gate, Input, QuantumCircuit, SimError, Simulator};

/// Qubit ranges of the W oracle, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleLayout {
    pub text_idx: Range<usize>,
    pub nouns: Range<usize>,
    pub idx: Range<usize>,
    pub angle: Range<usize>,
    pub width: Range<usize>,
    pub ui: Range<usize>,
    pub qubits_per_wire: usize,
}

impl OracleLayout {
    pub fn new(t: &QramTableSet) -> Self {
        let d = &t.dims;
        let mut at = 0;
        let mut take = |len: usize| {
            let r = at..at + len;
            at += len;
            r
        };
        let text_idx = take(d.text_bits());
        let nouns = take(d.nouns * d.qubits_per_wire());
        let idx = take(d.index_bits());
        let angle = take(d.angle_bits());
        let width = take(d.width_bits());
        let ui = take(d.width_bits() - 1);
        OracleLayout {
            text_idx,
            nouns,
            idx,
            angle,
            width,
            ui,
            qubits_per_wire: d.qubits_per_wire(),
        }
    }

    pub fn qubits(&self) -> usize {
        self.ui.end
    }

    /// Qubits that must come back clean.
    pub fn ancillas(&self) -> Range<usize> {
        self.idx.start..self.ui.end
    }

    pub fn noun(&self, s: usize) -> Vec<usize> {
        let q = self.qubits_per_wire;
        (self.nouns.start + s * q..self.nouns.start + (s + 1) * q).collect()
    }

    fn lookup(&self, target: Range<usize>, table: Vec<u64>) -> Gate {
        Gate::Lookup {
            address: self.text_idx.clone().collect(),
            target: target.collect(),
            table,
        }
    }
}

fn bits_msb_first(x: usize, bits: usize) -> u64 {
    (0..bits).fold(0, |acc, j| acc | (((x >> (bits - 1 - j)) & 1) as u64) << j)
}

/// Controlled template whose angles are read from `angles[param]` (one
/// table entry per text) into the angle register around each rotation.
pub fn pcansatz_gates(
    kind: AnsatzKind,
    layers: usize,
    width: usize,
    ctrl: usize,
    lay: &OracleLayout,
    angles: &[Vec<u64>],
    precision: u32,
) -> Vec<Gate> {
    let qs: Vec<usize> = lay.nouns.clone().take(width).collect();
    let angle: Vec<usize> = lay.angle.clone().collect();
    let mut g = Vec::new();
    for t in template_gates(kind, width, layers) {
        match t {
            TemplateGate::H(a) => g.push(Gate::Ch {
                control: ctrl,
                target: qs[a],
            }),
            TemplateGate::Cx(a, b) => g.push(Gate::Ccx {
                controls: [ctrl, qs[a]],
                target: qs[b],
            }),
            TemplateGate::Rz { qubit, param } => {
                let table: Vec<u64> = angles[param]
                    .iter()
                    .map(|c| angle_register_value(*c, precision))
                    .collect();
                g.push(lay.lookup(lay.angle.clone(), table.clone()));
                g.extend(pcrz_gates(ctrl, &angle, qs[qubit]));
                g.push(lay.lookup(lay.angle.clone(), table));
            }
        }
    }
    g
}

/// Parameterized ansatz for box `i`: width lookup, select over widths,
/// width unlookup.
pub fn pansatz_gates(t: &QramTableSet, lay: &OracleLayout, i: usize) -> Vec<Gate> {
    let wb = t.dims.width_bits();
    let table: Vec<u64> = t.widths[i]
        .iter()
        .map(|w| bits_msb_first(w - 1, wb))
        .collect();
    let ctrls: Vec<usize> = lay.width.clone().collect();
    let ancillas: Vec<usize> = lay.ui.clone().collect();
    let max_width = t.dims.max_width();
    let mut g = vec_of(lay.lookup(lay.width.clone(), table.clone()));
    g.extend(unary_iteration(&ctrls, &ancillas, &mut |x, ctrl| {
        // register value x selects width x + 1
        let w = x + 1;
        match t.family.get(w) {
            Some((kind, layers)) if w <= max_width => {
                pcansatz_gates(kind, layers, w, ctrl, lay, &t.params[i], t.dims.precision)
            }
            _ => Vec::new(),
        }
    }));
    g.push(lay.lookup(lay.width.clone(), table));
    g
}

fn vec_of(g: Gate) -> Vec<Gate> {
    alloc::vec![g]
}

/// Bring the arguments of box `i` to noun slots `0..d`.
pub fn nounmux_gates(t: &QramTableSet, lay: &OracleLayout, i: usize) -> Vec<Gate> {
    let d = &t.dims;
    let nouns: Vec<Vec<usize>> = (0..d.nouns).map(|s| lay.noun(s)).collect();
    let idx: Vec<usize> = lay.idx.clone().collect();
    let mut g = Vec::new();
    for j in 0..d.arity {
        let levels = index_levels(d, j);
        if levels == 0 {
            continue;
        }
        let table = t.indices[i][j].clone();
        g.push(lay.lookup(lay.idx.clone(), table.clone()));
        g.extend(binary_mux_gates(&idx[..levels], &nouns[j..]));
        g.push(lay.lookup(lay.idx.clone(), table));
    }
    g
}

/// The parameterized ansatz of one box slot alone, on the W layout.
pub fn synth_pansatz(t: &QramTableSet, i: usize) -> (QuantumCircuit, OracleLayout) {
    let lay = OracleLayout::new(t);
    let mut qc = QuantumCircuit::new(lay.qubits());
    qc.extend(pansatz_gates(t, &lay, i));
    (qc, lay)
}

/// `W|k⟩|0⟩ = |k⟩ ⊗ U_{T_k}|0⟩`: per box, route its arguments to the top,
/// apply the table-driven ansatz and route back.
pub fn synth_oracle_w(t: &QramTableSet) -> Result<(QuantumCircuit, OracleLayout), OracleError> {
    let d = &t.dims;
    let m = d.texts;
    let shape_ok = t.widths.len() == d.boxes
        && t.params.len() == d.boxes
        && t.indices.len() == d.boxes
        && t.widths
            .iter()
            .all(|r| r.len() == m && r.iter().all(|w| *w >= 1 && *w <= d.max_width()))
        && t.params.iter().all(|p| p.iter().all(|r| r.len() == m))
        && t.indices
            .iter()
            .all(|p| p.len() == d.arity && p.iter().all(|r| r.len() == m));
    if !shape_ok {
        return Err(OracleError::TableShape);
    }
    let lay = OracleLayout::new(t);
    let mut qc = QuantumCircuit::new(lay.qubits());
    for i in 0..d.boxes {
        let mux = nounmux_gates(t, &lay, i);
        qc.extend(mux.iter().cloned());
        qc.extend(pansatz_gates(t, &lay, i));
        // every multiplexer gate is self-inverse
        qc.extend(mux.into_iter().rev());
    }
    Ok((qc, lay))
}

/// Per-text comparison of W against direct compilation.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleCheck {
    pub text: usize,
    /// `|⟨W|k,0⟩, |k⟩ ⊗ U_{T_k}|0⟩⟩|²`.
    pub fidelity: f64,
    /// Probability that the index and every ancilla read back as loaded.
    pub clean: f64,
    /// Lower bound on the fidelity from the angle rounding alone.
    pub rounding_bound: f64,
}

/// Run W on each `|k⟩|0⟩` and compare with the compiled text.
pub fn verify_oracle_w(
    t: &QramTableSet,
    qc: &QuantumCircuit,
    lay: &OracleLayout,
    corpus: &[CompiledText],
    sim: &Simulator,
) -> Result<Vec<OracleCheck>, SimError> {
    let n = lay.qubits();
    let tb = lay.text_idx.len();
    let noun_bits = lay.nouns.len();
    let tail = n - tb - noun_bits;
    let mut out = Vec::new();
    for (k, text) in corpus.iter().enumerate() {
        let st = sim.run(qc, &Input::Basis(k << (n - tb)))?;
        let amps = st.amplitudes().expect("oracle circuits are unitary");
        let u = text.gate_unitary();
        let used = text.circuit.qubit_count;
        let pad = noun_bits - used;
        let mut overlap = C64::new(0.0, 0.0);
        let mut clean = 0.0;
        for x in 0..1usize << noun_bits {
            let i = (k << (n - tb)) | (x << tail);
            let a = amps[i];
            clean += a.norm_sqr();
            if x & ((1 << pad) - 1) == 0 {
                overlap += u[(x >> pad, 0)].conj() * a;
            }
        }
        let e = t.rotation_error[k];
        let bound = (1.0 - e * e / 2.0).max(0.0).powi(2);
        out.push(OracleCheck {
            text: k,
            fidelity: overlap.norm_sqr(),
            clean,
            rounding_bound: bound,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::tables::{build_qram_tables, AnsatzFamily, OracleDims};
    use super::*;
    use crate::compiler::{compile, AnsatzInstance, WordEmbeddingSet};
    use crate::ir::Builder;
    use crate::linalg::Matrix;
    use crate::parser::Pos;
    use alloc::vec;
    use core::f64::consts::PI;

    fn grid(x: u64) -> f64 {
        // multiples of 2π/2^8
        x as f64 * 2.0 * PI / 256.0
    }

    fn vocab() -> WordEmbeddingSet {
        let mut v = WordEmbeddingSet::new(2, 52);
        let e =
            |a, b, c| AnsatzInstance::new(AnsatzKind::Euler, 1, vec![grid(a), grid(b), grid(c)]);
        v.insert("Alice", 1, Pos::ProperNoun, e(13, 40, 201));
        v.insert("Bob", 1, Pos::ProperNoun, e(100, 7, 64));
        v.insert("flip", 1, Pos::Adjective, e(0, 128, 0));
        let s = |a, b| AnsatzInstance::new(AnsatzKind::Sim9, 1, vec![grid(a), grid(b)]);
        v.insert("likes", 2, Pos::TransitiveVerb, s(50, 190));
        v.insert("sees", 2, Pos::TransitiveVerb, s(3, 99));
        v
    }

    fn text(f: impl FnOnce(&mut Builder)) -> CompiledText {
        let mut b = Builder::new();
        f(&mut b);
        compile(&b.finish(), &vocab()).unwrap()
    }

    #[test]
    fn two_texts_match_compilation() {
        let t0 = text(|b| {
            b.state("Alice", "alice")
                .unwrap()
                .state("Bob", "bob")
                .unwrap();
            b.boxed("likes", &["bob", "alice"]).unwrap();
        });
        let t1 = text(|b| {
            b.state("Bob", "bob").unwrap();
            b.boxed("flip", &["bob"]).unwrap();
        });
        let corpus = [t0, t1];
        let tab = build_qram_tables(&corpus, 8).unwrap();
        assert_eq!(tab.dims.boxes, 3);
        let (qc, lay) = synth_oracle_w(&tab).unwrap();
        let checks = verify_oracle_w(&tab, &qc, &lay, &corpus, &Simulator::default()).unwrap();
        for c in checks {
            assert!(c.fidelity > 1.0 - 1e-10, "{c:?}");
            assert!((c.clean - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn single_text_is_direct_compilation() {
        let t0 = text(|b| {
            b.state("Alice", "alice").unwrap();
        });
        let tab = build_qram_tables(core::slice::from_ref(&t0), 8).unwrap();
        let (qc, lay) = synth_oracle_w(&tab).unwrap();
        assert_eq!(lay.text_idx.len(), 1);
        let c = verify_oracle_w(&tab, &qc, &lay, &[t0], &Simulator::default()).unwrap();
        assert!(c[0].fidelity > 1.0 - 1e-10);
    }

    fn pansatz_target_block(qc: &QuantumCircuit, lay: &OracleLayout, width: usize) -> Matrix {
        // text 0, ancillas zero: the block acting on the first `width` noun qubits
        let n = lay.qubits();
        let shift = n - lay.nouns.start - width;
        let dim = 1usize << width;
        let sim = Simulator::default();
        let mut m = Matrix::zeros(dim, dim);
        for c in 0..dim {
            let st = sim.run(qc, &Input::Basis(c << shift)).unwrap();
            let a = st.amplitudes().unwrap();
            for r in 0..dim {
                m[(r, c)] = a[r << shift];
            }
        }
        m
    }

    #[test]
    fn pansatz_branches() {
        let t0 = text(|b| {
            b.state("Alice", "alice")
                .unwrap()
                .state("Bob", "bob")
                .unwrap();
            b.boxed("flip", &["alice"]).unwrap();
            b.boxed("sees", &["alice", "bob"]).unwrap();
        });
        let tab = build_qram_tables(core::slice::from_ref(&t0), 8).unwrap();
        // box 2 is the flip: Euler [0, π, 0] is X up to phase
        let (qc, lay) = synth_pansatz(&tab, 2);
        let b = pansatz_target_block(&qc, &lay, 1);
        assert!(b.phase_distance(&crate::linalg::pauli_x()) < 1e-10);
        // box 3 is the two-wire verb, compared with its standalone template
        let (qc, lay) = synth_pansatz(&tab, 3);
        let b = pansatz_target_block(&qc, &lay, 2);
        let mut plain = QuantumCircuit::new(2);
        plain.extend(
            AnsatzInstance::new(AnsatzKind::Sim9, 1, vec![grid(3), grid(99)]).gates(&[0, 1]),
        );
        assert!(b.sub(&plain.unitary()).op_norm() < 1e-10);
    }

    #[test]
    fn zero_tables_are_identity() {
        let dims = OracleDims {
            texts: 2,
            boxes: 2,
            nouns: 2,
            arity: 2,
            wire_dim: 2,
            precision: 3,
        };
        let tab = QramTableSet::zeros(dims, AnsatzFamily::standard(2));
        let (qc, lay) = synth_oracle_w(&tab).unwrap();
        // identity on the clean-ancilla subspace, every text index
        let u = qc.unitary();
        let tail = lay.ancillas().len();
        let dim = 1usize << (lay.qubits() - tail);
        for r in 0..dim {
            for c in 0..dim {
                let want = if r == c { 1.0 } else { 0.0 };
                assert!((u[(r << tail, c << tail)] - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }
}
