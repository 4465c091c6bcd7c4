use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use crate::linalg::{Matrix, C64};
use crate::parser::{Pos, Vocabulary};
use crate::qsim::Gate;

/// Circuit template a word's parameters are poured into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AnsatzKind {
    /// Per qubit and layer: `Rz(a) H Rz(b) H Rz(c)`; zero angles give the
    /// identity and any single-qubit unitary is reachable up to phase.
    Euler,
    /// Layered template: Hadamards, a CZ ladder, then one `Rx` per qubit.
    Sim9,
    /// Explicit unitary; parameters are the real and imaginary parts of the
    /// matrix entries, row-major.
    Dense,
}

impl AnsatzKind {
    pub fn name(self) -> &'static str {
        match self {
            AnsatzKind::Euler => "euler",
            AnsatzKind::Sim9 => "sim9",
            AnsatzKind::Dense => "dense",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "euler" => AnsatzKind::Euler,
            "sim9" => AnsatzKind::Sim9,
            "dense" => AnsatzKind::Dense,
            _ => return None,
        })
    }

    pub fn param_count(self, qubits: usize, layers: usize) -> usize {
        match self {
            AnsatzKind::Euler => 3 * qubits * layers,
            AnsatzKind::Sim9 => qubits * layers,
            AnsatzKind::Dense => 2 << (2 * qubits),
        }
    }

    /// Whether every parameter is a rotation angle (as opposed to a matrix
    /// entry); only those can be fed from angle tables.
    pub fn is_rotational(self) -> bool {
        !matches!(self, AnsatzKind::Dense)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AnsatzInstance {
    pub kind: AnsatzKind,
    pub layers: usize,
    pub params: Vec<f64>,
}

/// One gate of a template with its angle left symbolic.
#[derive(Clone, Debug, PartialEq)]
pub enum TemplateGate {
    H(usize),
    Cx(usize, usize),
    /// `Rz(params[index])` on a qubit.
    Rz {
        qubit: usize,
        param: usize,
    },
}

/// Gate skeleton of a rotational template on `qubits` local qubits.
pub fn template_gates(kind: AnsatzKind, qubits: usize, layers: usize) -> Vec<TemplateGate> {
    let mut g = Vec::new();
    match kind {
        AnsatzKind::Euler => {
            for l in 0..layers {
                for q in 0..qubits {
                    let base = 3 * (l * qubits + q);
                    g.push(TemplateGate::Rz {
                        qubit: q,
                        param: base,
                    });
                    g.push(TemplateGate::H(q));
                    g.push(TemplateGate::Rz {
                        qubit: q,
                        param: base + 1,
                    });
                    g.push(TemplateGate::H(q));
                    g.push(TemplateGate::Rz {
                        qubit: q,
                        param: base + 2,
                    });
                }
            }
        }
        AnsatzKind::Sim9 => {
            for l in 0..layers {
                for q in 0..qubits {
                    g.push(TemplateGate::H(q));
                }
                for q in 0..qubits.saturating_sub(1) {
                    g.push(TemplateGate::H(q + 1));
                    g.push(TemplateGate::Cx(q, q + 1));
                    g.push(TemplateGate::H(q + 1));
                }
                for q in 0..qubits {
                    g.push(TemplateGate::H(q));
                    g.push(TemplateGate::Rz {
                        qubit: q,
                        param: l * qubits + q,
                    });
                    g.push(TemplateGate::H(q));
                }
            }
        }
        AnsatzKind::Dense => panic!("dense ansatz has no gate skeleton"),
    }
    g
}

impl AnsatzInstance {
    pub fn new(kind: AnsatzKind, layers: usize, params: Vec<f64>) -> Self {
        AnsatzInstance {
            kind,
            layers,
            params,
        }
    }

    /// Zero-angle Euler layer: the identity on any width.
    pub fn identity(qubits: usize) -> Self {
        AnsatzInstance::new(AnsatzKind::Euler, 1, vec![0.0; 3 * qubits])
    }

    pub fn from_unitary(u: &Matrix) -> Self {
        let params = u.data().iter().flat_map(|z| [z.re, z.im]).collect();
        AnsatzInstance::new(AnsatzKind::Dense, 1, params)
    }

    pub fn expected_params(&self, qubits: usize) -> usize {
        self.kind.param_count(qubits, self.layers)
    }

    pub fn dense_matrix(&self) -> Option<Matrix> {
        if self.kind != AnsatzKind::Dense {
            return None;
        }
        let dim = ((self.params.len() / 2) as f64).sqrt() as usize;
        let data = self
            .params
            .chunks(2)
            .map(|p| C64::new(p[0], p[1]))
            .collect();
        Some(Matrix::from_vec(dim, dim, data))
    }

    /// Gates on the listed qubits (first qubit is the most significant).
    pub fn gates(&self, qubits: &[usize]) -> Vec<Gate> {
        if let Some(m) = self.dense_matrix() {
            return vec![Gate::Unitary {
                controls: vec![],
                targets: qubits.to_vec(),
                matrix: m,
            }];
        }
        template_gates(self.kind, qubits.len(), self.layers)
            .into_iter()
            .map(|t| match t {
                TemplateGate::H(q) => Gate::H(qubits[q]),
                TemplateGate::Cx(c, t) => Gate::Cx {
                    control: qubits[c],
                    target: qubits[t],
                },
                TemplateGate::Rz { qubit, param } => Gate::Rz {
                    target: qubits[qubit],
                    theta: self.params[param],
                },
            })
            .collect()
    }

    /// Adjoint gate list: reversed order, daggered gates.
    pub fn adjoint_gates(&self, qubits: &[usize]) -> Vec<Gate> {
        self.gates(qubits).iter().rev().map(Gate::adjoint).collect()
    }

    /// Round rotation parameters to the nearest multiple of `2^-bits`.
    pub fn quantize(&mut self, bits: u32) {
        if self.kind.is_rotational() {
            let s = (1u64 << bits) as f64;
            for p in &mut self.params {
                *p = (*p * s).round() / s;
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub pos: Pos,
    pub ansatz: AnsatzInstance,
}

/// Word embeddings keyed by (word, arity) and frame layers keyed by
/// (word, layer, width).
#[derive(Clone, Debug, PartialEq)]
pub struct WordEmbeddingSet {
    pub wire_dim: usize,
    pub precision: u32,
    pub entries: BTreeMap<(String, usize), Entry>,
    pub frame_entries: BTreeMap<(String, usize, usize), Entry>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum EmbeddingError {
    #[error("wire dimension {0} is not a power of two")]
    WireDim(usize),
    #[error("embedding for ({word}, {arity}) has {got} parameters, its template needs {expected}")]
    ParamCount {
        word: String,
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("embedding for ({0}, {1}) has a non-finite parameter")]
    NonFinite(String, usize),
    #[error("dense embedding for ({0}, {1}) is not unitary")]
    NotUnitary(String, usize),
}

impl WordEmbeddingSet {
    pub fn new(wire_dim: usize, precision: u32) -> Self {
        WordEmbeddingSet {
            wire_dim,
            precision,
            entries: BTreeMap::new(),
            frame_entries: BTreeMap::new(),
        }
    }

    pub fn qubits_per_wire(&self) -> usize {
        self.wire_dim.trailing_zeros() as usize
    }

    pub fn insert(
        &mut self,
        word: &str,
        arity: usize,
        pos: Pos,
        ansatz: AnsatzInstance,
    ) -> &mut Self {
        self.entries
            .insert((word.to_string(), arity), Entry { pos, ansatz });
        self
    }

    pub fn insert_frame(
        &mut self,
        word: &str,
        layer: usize,
        width: usize,
        pos: Pos,
        ansatz: AnsatzInstance,
    ) -> &mut Self {
        self.frame_entries
            .insert((word.to_string(), layer, width), Entry { pos, ansatz });
        self
    }

    pub fn get(&self, word: &str, arity: usize) -> Option<&Entry> {
        self.entries.get(&(word.to_string(), arity))
    }

    pub fn get_frame(&self, word: &str, layer: usize, width: usize) -> Option<&Entry> {
        self.frame_entries.get(&(word.to_string(), layer, width))
    }

    /// Vocabulary implied by the entries' parts of speech.
    pub fn vocabulary(&self) -> Vocabulary {
        let mut v = Vocabulary::new();
        for ((w, _), e) in self.entries.iter() {
            v.insert(w, e.pos);
        }
        for ((w, _, _), e) in self.frame_entries.iter() {
            v.insert(w, e.pos);
        }
        v
    }

    pub fn check(&self) -> Result<(), EmbeddingError> {
        if !self.wire_dim.is_power_of_two() || self.wire_dim < 2 {
            return Err(EmbeddingError::WireDim(self.wire_dim));
        }
        let q = self.qubits_per_wire();
        let all = self.entries.iter().map(|((w, a), e)| (w, *a, e)).chain(
            self.frame_entries
                .iter()
                .map(|((w, _, width), e)| (w, *width, e)),
        );
        for (w, a, e) in all {
            let expected = e.ansatz.expected_params(a * q);
            if expected != e.ansatz.params.len() {
                return Err(EmbeddingError::ParamCount {
                    word: w.clone(),
                    arity: a,
                    expected,
                    got: e.ansatz.params.len(),
                });
            }
            if e.ansatz.params.iter().any(|p| !p.is_finite()) {
                return Err(EmbeddingError::NonFinite(w.clone(), a));
            }
            if let Some(m) = e.ansatz.dense_matrix() {
                if !m.is_unitary(1e-8) {
                    return Err(EmbeddingError::NotUnitary(w.clone(), a));
                }
            }
        }
        Ok(())
    }

    pub fn quantize(&mut self) {
        let bits = self.precision;
        for e in self
            .entries
            .values_mut()
            .chain(self.frame_entries.values_mut())
        {
            e.ansatz.quantize(bits);
        }
    }

    /// Euler angles (ZXZ, up to global phase) reproducing a 2×2 unitary.
    pub fn euler_angles(u: &Matrix) -> [f64; 3] {
        euler_zxz(u)
    }
}

/// Angles `(a, b, c)` with `Rz(c)·Rx(b)·Rz(a) ∝ u`; this is the Euler
/// template's single-qubit layer since `H Rz(b) H = Rx(b)`.
pub fn euler_zxz(u: &Matrix) -> [f64; 3] {
    let su = crate::linalg::project_su2(u);
    // su = [[cos(b/2) e^{-i(a+c)/2}, -i sin(b/2) e^{i(a-c)/2}],
    //       [-i sin(b/2) e^{-i(a-c)/2}, cos(b/2) e^{i(a+c)/2}]]
    let p = su[(0, 0)];
    let q = su[(1, 0)];
    let b = 2.0 * q.norm().atan2(p.norm());
    let sum = if p.norm() > 1e-12 {
        -2.0 * p.arg()
    } else {
        0.0
    };
    let diff = if q.norm() > 1e-12 {
        -2.0 * (q * C64::new(0.0, 1.0)).arg()
    } else {
        0.0
    };
    let a = (sum + diff) / 2.0;
    let c = (sum - diff) / 2.0;
    [a, b, c]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, pauli_x, rx, rz};
    use crate::qsim::QuantumCircuit;

    fn unitary(inst: &AnsatzInstance, q: usize) -> Matrix {
        let mut c = QuantumCircuit::new(q);
        c.extend(inst.gates(&(0..q).collect::<Vec<_>>()));
        c.unitary()
    }

    #[test]
    fn zero_euler_is_identity() {
        let u = unitary(&AnsatzInstance::identity(2), 2);
        assert!(u.sub(&Matrix::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn euler_reaches_arbitrary_rotations() {
        for m in [hadamard(), pauli_x(), rz(0.3).mul(&rx(1.1)).mul(&rz(-2.0))] {
            let [a, b, c] = euler_zxz(&m);
            let inst = AnsatzInstance::new(AnsatzKind::Euler, 1, vec![a, b, c]);
            assert!(unitary(&inst, 1).phase_distance(&m) < 1e-10, "{m:?}");
        }
    }

    #[test]
    fn parameter_counts() {
        assert_eq!(AnsatzKind::Euler.param_count(1, 1), 3);
        assert_eq!(AnsatzKind::Sim9.param_count(4, 2), 8);
        assert_eq!(AnsatzKind::Dense.param_count(2, 1), 32);
    }

    #[test]
    fn adjoint_gates_invert() {
        let inst = AnsatzInstance::new(AnsatzKind::Sim9, 2, vec![0.1, 0.2, 0.3, 0.4]);
        let mut c = QuantumCircuit::new(2);
        c.extend(inst.gates(&[0, 1]));
        c.extend(inst.adjoint_gates(&[0, 1]));
        assert!(c.unitary().sub(&Matrix::identity(4)).max_abs() < 1e-12);
    }
}
