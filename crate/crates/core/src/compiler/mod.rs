//! Text circuits to gate-level circuits.
//!
//! Each noun line gets its own register of `log2 N` qubits for its whole
//! lifetime; registers are never reused, so frames and swaps cost no
//! ancillas.

mod embedding;
mod frame;

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

pub use embedding::{
    euler_zxz, template_gates, AnsatzInstance, AnsatzKind, EmbeddingError, Entry, TemplateGate,
    WordEmbeddingSet,
};
pub use frame::{assign_ports, decompose_frame, FrameLayout, HoleLayout};

use crate::ir::{validate, Generator, TextCircuit, ValidationReport, DEFAULT_D_MAX};
use crate::linalg::{Matrix, C64, ZERO};
use crate::qsim::{Gate, Input, QuantumCircuit, QuantumState, SimError, Simulator};

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("circuit fails validation: {0:?}")]
    Invalid(ValidationReport),
    #[error("no embedding for ({word}, {arity})")]
    MissingEmbedding { word: String, arity: usize },
    #[error("no frame layer for ({word}, layer {layer}, width {width})")]
    MissingFrameLayer {
        word: String,
        layer: usize,
        width: usize,
    },
    #[error("frame expansion failed: {0}")]
    FrameExpansion(&'static str),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("process matrix requested for a circuit with discards")]
    Mixed,
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Register {
    pub noun: String,
    pub qubits: Range<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    State,
    Effect,
    Box,
    FrameLayer { layer: usize, width: usize },
}

/// One embedded unitary placed on registers, in circuit order.
#[derive(Clone, Debug, PartialEq)]
pub struct Application {
    pub word: String,
    pub role: Role,
    pub registers: Vec<usize>,
    pub ansatz: AnsatzInstance,
    pub adjoint: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledText {
    pub circuit: QuantumCircuit,
    pub qubits_per_wire: usize,
    /// Registers in allocation order; their qubit ranges tile the circuit.
    pub registers: Vec<Register>,
    pub input_registers: Vec<usize>,
    pub output_registers: Vec<usize>,
    pub discarded: BTreeSet<usize>,
    pub discarded_nouns: Vec<String>,
    pub is_pure: bool,
    pub applications: Vec<Application>,
}

impl CompiledText {
    pub fn output_nouns(&self) -> Vec<&str> {
        self.output_registers
            .iter()
            .map(|r| self.registers[*r].noun.as_str())
            .collect()
    }

    pub fn wire_map(&self) -> Vec<(&str, Range<usize>)> {
        self.registers
            .iter()
            .map(|r| (r.noun.as_str(), r.qubits.clone()))
            .collect()
    }

    pub fn register_qubits(&self, r: usize) -> Vec<usize> {
        self.registers[r].qubits.clone().collect()
    }

    /// State on the open outputs with all open inputs fed `|0…0⟩`.
    pub fn state(&self, sim: &Simulator) -> Result<QuantumState, SimError> {
        sim.run(&self.circuit, &Input::Basis(0))
    }

    /// Linear map from open-input registers to open-output qubits,
    /// including post-selection amplitudes (not renormalized).
    pub fn process_matrix(&self, sim: &Simulator) -> Result<Matrix, CompileError> {
        if !self.is_pure {
            return Err(CompileError::Mixed);
        }
        let n = self.circuit.qubit_count;
        let in_qubits: Vec<usize> = self
            .input_registers
            .iter()
            .flat_map(|r| self.register_qubits(*r))
            .collect();
        let rows = 1usize << self.circuit.outputs.len();
        let cols = 1usize << in_qubits.len();
        let mut m = Matrix::zeros(rows, cols);
        for b in 0..cols {
            let mut basis = 0usize;
            for (j, q) in in_qubits.iter().enumerate() {
                if b >> (in_qubits.len() - 1 - j) & 1 == 1 {
                    basis |= 1 << (n - 1 - q);
                }
            }
            let st = sim.run(&self.circuit, &Input::Basis(basis))?;
            if let Some(a) = st.amplitudes() {
                let s = st.weight().sqrt();
                for (r, x) in a.iter().enumerate() {
                    m[(r, b)] = x * s;
                }
            }
        }
        Ok(m)
    }

    /// Unitary of the gate list alone, ignoring post-selection and discards.
    pub fn gate_unitary(&self) -> Matrix {
        self.circuit.unitary()
    }
}

struct Emitter<'a> {
    v: &'a WordEmbeddingSet,
    q: usize,
    gates: Vec<Gate>,
    registers: Vec<Register>,
    postselect: Vec<usize>,
    discards: Vec<usize>,
    discarded_nouns: Vec<String>,
    applications: Vec<Application>,
}

impl<'a> Emitter<'a> {
    fn fresh(&mut self, noun: &str) -> usize {
        let start = self.registers.len() * self.q;
        self.registers.push(Register {
            noun: noun.to_string(),
            qubits: start..start + self.q,
        });
        self.registers.len() - 1
    }

    fn qubits(&self, regs: &[usize]) -> Vec<usize> {
        regs.iter()
            .flat_map(|r| self.registers[*r].qubits.clone())
            .collect()
    }

    fn place(
        &mut self,
        word: &str,
        role: Role,
        ansatz: &AnsatzInstance,
        regs: &[usize],
        adjoint: bool,
    ) {
        let qs = self.qubits(regs);
        if adjoint {
            self.gates.extend(ansatz.adjoint_gates(&qs));
        } else {
            self.gates.extend(ansatz.gates(&qs));
        }
        self.applications.push(Application {
            word: word.to_string(),
            role,
            registers: regs.to_vec(),
            ansatz: ansatz.clone(),
            adjoint,
        });
    }

    fn word(&self, word: &str, arity: usize) -> Result<&'a AnsatzInstance, CompileError> {
        self.v
            .get(word, arity)
            .map(|e| &e.ansatz)
            .ok_or_else(|| CompileError::MissingEmbedding {
                word: word.to_string(),
                arity,
            })
    }

    fn layer(
        &mut self,
        word: &str,
        layer: usize,
        width: usize,
        regs: &[usize],
        adjoint: bool,
    ) -> Result<(), CompileError> {
        let e = self.v.get_frame(word, layer, width).ok_or_else(|| {
            CompileError::MissingFrameLayer {
                word: word.to_string(),
                layer,
                width,
            }
        })?;
        self.place(
            word,
            Role::FrameLayer { layer, width },
            &e.ansatz,
            regs,
            adjoint,
        );
        Ok(())
    }

    /// Emit `c` with its open inputs on `inputs`; returns output registers.
    fn run(
        &mut self,
        c: &TextCircuit,
        inputs: &[usize],
        in_hole: bool,
    ) -> Result<Vec<usize>, CompileError> {
        let order = c
            .topological_order()
            .ok_or(CompileError::FrameExpansion("cyclic hole content"))?;
        let mut reg: Vec<Option<usize>> = vec![None; c.wires().len()];
        for (w, r) in c.inputs().iter().zip(inputs) {
            reg[*w] = Some(*r);
        }
        let get = |reg: &[Option<usize>], w: usize| {
            reg[w].ok_or(CompileError::FrameExpansion("wire has no register"))
        };
        for i in order {
            let n = &c.nodes()[i];
            let ins: Vec<usize> = n
                .inputs
                .iter()
                .map(|w| get(&reg, *w))
                .collect::<Result<_, _>>()?;
            match &n.generator {
                Generator::State { word } => {
                    if in_hole {
                        return Err(CompileError::FrameExpansion(
                            "a state inside a hole would need an ancilla",
                        ));
                    }
                    let r = self.fresh(c.noun(n.outputs[0]));
                    let a = self.word(word, 1)?;
                    self.place(word, Role::State, a, &[r], false);
                    reg[n.outputs[0]] = Some(r);
                }
                Generator::Effect { word } => {
                    let a = self.word(word, 1)?;
                    self.place(word, Role::Effect, a, &ins, true);
                    let qs = self.qubits(&ins);
                    self.postselect.extend(qs);
                }
                Generator::Box { word, dagger } => {
                    let a = self.word(word, ins.len())?;
                    self.place(word, Role::Box, a, &ins, *dagger);
                    for (w, r) in n.outputs.iter().zip(&ins) {
                        reg[*w] = Some(*r);
                    }
                }
                Generator::Frame {
                    word,
                    holes,
                    dagger,
                } => {
                    let layout = decompose_frame(ins.len(), holes);
                    let width = ins.len();
                    let top = layout.holes.len();
                    let mut ports = ins.clone();
                    for step in 0..=top {
                        let layer = if *dagger { top - step } else { step };
                        self.layer(word, layer, width, &ports, *dagger)?;
                        if step < top {
                            let h = &layout.holes[step];
                            let mapped: Vec<usize> = h.mapping.iter().flatten().copied().collect();
                            let hole_in: Vec<usize> = mapped.iter().map(|p| ports[*p]).collect();
                            let hole_out = self.run(&h.content, &hole_in, true)?;
                            for (p, r) in mapped.iter().zip(hole_out) {
                                ports[*p] = r;
                            }
                        }
                    }
                    for (w, r) in n.outputs.iter().zip(&ports) {
                        reg[*w] = Some(*r);
                    }
                }
                Generator::Identity => reg[n.outputs[0]] = Some(ins[0]),
                Generator::Swap => {
                    reg[n.outputs[0]] = Some(ins[1]);
                    reg[n.outputs[1]] = Some(ins[0]);
                }
                Generator::Discard => {
                    let qs = self.qubits(&ins);
                    self.discards.extend(qs);
                    self.discarded_nouns.push(c.noun(n.inputs[0]).to_string());
                }
                Generator::Cap => {
                    if in_hole {
                        return Err(CompileError::FrameExpansion(
                            "a cap inside a hole would need ancillas",
                        ));
                    }
                    let a = self.fresh(c.noun(n.outputs[0]));
                    let b = self.fresh(c.noun(n.outputs[1]));
                    let (qa, qb) = (self.qubits(&[a]), self.qubits(&[b]));
                    for (x, y) in qa.iter().zip(&qb) {
                        self.gates.push(Gate::H(*x));
                        self.gates.push(Gate::Cx {
                            control: *x,
                            target: *y,
                        });
                    }
                    reg[n.outputs[0]] = Some(a);
                    reg[n.outputs[1]] = Some(b);
                }
                Generator::Cup => {
                    let (qa, qb) = (self.qubits(&ins[..1]), self.qubits(&ins[1..]));
                    for (x, y) in qa.iter().zip(&qb) {
                        self.gates.push(Gate::Cx {
                            control: *x,
                            target: *y,
                        });
                        self.gates.push(Gate::H(*x));
                    }
                    self.postselect.extend(qa);
                    self.postselect.extend(qb);
                }
            }
        }
        c.outputs().iter().map(|w| get(&reg, *w)).collect()
    }
}

/// Compile with the default locality bound.
pub fn compile(c: &TextCircuit, v: &WordEmbeddingSet) -> Result<CompiledText, CompileError> {
    compile_with(c, v, DEFAULT_D_MAX)
}

pub fn compile_with(
    c: &TextCircuit,
    v: &WordEmbeddingSet,
    d_max: usize,
) -> Result<CompiledText, CompileError> {
    let report = validate(c, d_max);
    if !report.is_empty() {
        return Err(CompileError::Invalid(report));
    }
    v.check()?;
    let mut e = Emitter {
        v,
        q: v.qubits_per_wire(),
        gates: Vec::new(),
        registers: Vec::new(),
        postselect: Vec::new(),
        discards: Vec::new(),
        discarded_nouns: Vec::new(),
        applications: Vec::new(),
    };
    let input_registers: Vec<usize> = c.inputs().iter().map(|w| e.fresh(c.noun(*w))).collect();
    let output_registers = e.run(c, &input_registers, false)?;
    let mut circuit = QuantumCircuit::new(e.registers.len() * e.q);
    circuit.gates = e.gates;
    for q in &e.postselect {
        circuit.postselect.insert(*q, false);
    }
    circuit.discards = e.discards.iter().copied().collect();
    circuit.outputs = output_registers
        .iter()
        .flat_map(|r| e.registers[*r].qubits.clone())
        .collect();
    circuit.validate().map_err(SimError::from)?;
    let discarded: BTreeSet<usize> = circuit.discards.clone();
    Ok(CompiledText {
        circuit,
        qubits_per_wire: e.q,
        registers: e.registers,
        input_registers,
        output_registers,
        is_pure: discarded.is_empty(),
        discarded,
        discarded_nouns: e.discarded_nouns,
        applications: e.applications,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("both sides are mixed (discarded nouns: [{}] and [{}])", .left.join(", "), .right.join(", "))]
pub struct PurityViolation {
    pub left: Vec<String>,
    pub right: Vec<String>,
}

/// Overlaps are defined only when at most one side is mixed.
pub fn check_purity_for_task(a: &CompiledText, b: &CompiledText) -> Result<(), PurityViolation> {
    if !a.is_pure && !b.is_pure {
        return Err(PurityViolation {
            left: a.discarded_nouns.clone(),
            right: b.discarded_nouns.clone(),
        });
    }
    Ok(())
}

/// Embedding set over a given vocabulary where every box, state and frame
/// layer is the identity (zero-angle Euler layers).
pub fn identity_embeddings(
    wire_dim: usize,
    words: &[(&str, usize, crate::parser::Pos)],
) -> WordEmbeddingSet {
    let mut v = WordEmbeddingSet::new(wire_dim, 16);
    let q = v.qubits_per_wire();
    for (w, a, p) in words {
        v.insert(w, *a, *p, AnsatzInstance::identity(a * q));
    }
    v
}

/// Vector `(1/√N)·Σᵢ|ii⟩` on two wires of dimension `N`, for tests and
/// analytic checks.
pub fn bell_vector(wire_dim: usize) -> Vec<C64> {
    let mut v = vec![ZERO; wire_dim * wire_dim];
    let s = 1.0 / (wire_dim as f64).sqrt();
    for i in 0..wire_dim {
        v[i * wire_dim + i] = C64::new(s, 0.0);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{compose_seq, frame_around_box, inverse, Builder};
    use crate::parser::Pos;

    fn v() -> WordEmbeddingSet {
        let mut v = WordEmbeddingSet::new(2, 16);
        v.insert(
            "Alice",
            1,
            Pos::ProperNoun,
            AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.0; 3]),
        );
        v.insert(
            "Bob",
            1,
            Pos::ProperNoun,
            AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.3, 1.2, -0.4]),
        );
        v.insert(
            "runs",
            1,
            Pos::IntransitiveVerb,
            AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.5, 0.7, 0.9]),
        );
        v.insert(
            "greets",
            2,
            Pos::TransitiveVerb,
            AnsatzInstance::new(AnsatzKind::Sim9, 2, vec![0.1, 0.2, 0.3, 0.4]),
        );
        v.insert_frame(
            "quickly",
            0,
            2,
            Pos::Adverb,
            AnsatzInstance::new(AnsatzKind::Sim9, 1, vec![0.6, -0.2]),
        );
        v.insert_frame(
            "quickly",
            1,
            2,
            Pos::Adverb,
            AnsatzInstance::new(AnsatzKind::Sim9, 1, vec![1.6, 0.8]),
        );
        v
    }

    #[test]
    fn zero_state_prepares_ground() {
        let mut b = Builder::new();
        b.state("Alice", "Alice").unwrap();
        let ct = compile(&b.finish(), &v()).unwrap();
        let st = ct.state(&Simulator::default()).unwrap();
        assert!((st.amplitudes().unwrap()[0].norm() - 1.0).abs() < 1e-12);
        assert_eq!(ct.circuit.qubit_count, 1);
    }

    #[test]
    fn text_then_inverse_is_certain() {
        let mut b = Builder::new();
        b.state("Alice", "Alice")
            .unwrap()
            .state("Bob", "Bob")
            .unwrap();
        b.boxed("greets", &["Alice", "Bob"])
            .unwrap()
            .boxed("runs", &["Bob"])
            .unwrap();
        let t = b.finish();
        let scalar = compose_seq(&t, &inverse(&t).unwrap()).unwrap();
        let ct = compile(&scalar, &v()).unwrap();
        let st = ct.state(&Simulator::default()).unwrap();
        assert!((st.weight() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn frame_sandwich_uses_no_ancillas() {
        let f = frame_around_box("quickly", "greets", &["Alice", "Bob"], false).unwrap();
        let ct = compile(&f, &v()).unwrap();
        assert_eq!(ct.circuit.qubit_count, 2);
        let roles: Vec<Role> = ct.applications.iter().map(|a| a.role).collect();
        assert_eq!(
            roles,
            vec![
                Role::FrameLayer { layer: 0, width: 2 },
                Role::Box,
                Role::FrameLayer { layer: 1, width: 2 }
            ]
        );
        let inv = compile(&inverse(&f).unwrap(), &v()).unwrap();
        let pm = ct.process_matrix(&Simulator::default()).unwrap();
        let pi = inv.process_matrix(&Simulator::default()).unwrap();
        assert!(pm.adjoint().sub(&pi).max_abs() < 1e-10);
    }

    #[test]
    fn snake_is_one_over_n() {
        let mut b = Builder::new();
        b.input("A")
            .unwrap()
            .cap("p", "B")
            .unwrap()
            .cup("A", "p")
            .unwrap();
        let ct = compile(&b.finish(), &v()).unwrap();
        let pm = ct.process_matrix(&Simulator::default()).unwrap();
        assert!(
            pm.sub(&Matrix::identity(2).scale(C64::new(0.5, 0.0)))
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn purity_check() {
        let mut b = Builder::new();
        b.state("Alice", "Alice")
            .unwrap()
            .state("Bob", "Bob")
            .unwrap()
            .discard("Bob")
            .unwrap();
        let mixed = compile(&b.finish(), &v()).unwrap();
        let mut p = Builder::new();
        p.state("Alice", "Alice").unwrap();
        let pure = compile(&p.finish(), &v()).unwrap();
        assert!(check_purity_for_task(&pure, &pure).is_ok());
        assert!(check_purity_for_task(&pure, &mixed).is_ok());
        let err = check_purity_for_task(&mixed, &mixed).unwrap_err();
        assert_eq!(err.left, vec!["Bob".to_string()]);
    }

    #[test]
    fn missing_embedding() {
        let mut b = Builder::new();
        b.state("Carol", "Carol").unwrap();
        assert_eq!(
            compile(&b.finish(), &v()).unwrap_err(),
            CompileError::MissingEmbedding {
                word: "Carol".into(),
                arity: 1
            }
        );
    }
}
