//! Gate-level circuits and dense simulation.

mod gate;
mod sim;
mod swap;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

pub use gate::{u3_matrix, Gate};
pub use sim::{exact_overlap, Input, QuantumState, SimError, Simulator};
pub use swap::{
    build_swap_test, estimate_overlap, hoeffding_shots, sample_from, shot_uniform, OverlapEstimate,
    SwapTest,
};

use crate::linalg::Matrix;

/// Ordered gate list over `qubit_count` qubits. Post-selection and discards
/// are applied after all gates; the remaining qubits, in `outputs` order,
/// carry the result state.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumCircuit {
    pub qubit_count: usize,
    pub gates: Vec<Gate>,
    pub postselect: BTreeMap<usize, bool>,
    pub discards: BTreeSet<usize>,
    pub outputs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum CircuitError {
    #[error("gate {index} ({name}) touches qubit {qubit} outside 0..{count}")]
    QubitOutOfRange {
        index: usize,
        name: &'static str,
        qubit: usize,
        count: usize,
    },
    #[error("gate {index} ({name}) repeats a qubit, has a non-finite angle or a misshaped matrix")]
    Malformed { index: usize, name: &'static str },
    #[error("qubit {0} is both post-selected and discarded")]
    PostselectDiscardOverlap(usize),
    #[error("output list does not cover the qubits left after post-selection and discards")]
    OutputMismatch,
}

impl QuantumCircuit {
    pub fn new(qubit_count: usize) -> Self {
        QuantumCircuit {
            qubit_count,
            gates: Vec::new(),
            postselect: BTreeMap::new(),
            discards: BTreeSet::new(),
            outputs: (0..qubit_count).collect(),
        }
    }

    pub fn push(&mut self, gate: Gate) -> &mut Self {
        self.gates.push(gate);
        self
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> &mut Self {
        self.gates.extend(gates);
        self
    }

    /// Require `qubit` to read `bit` at the end.
    pub fn postselect(&mut self, qubit: usize, bit: bool) -> &mut Self {
        self.postselect.insert(qubit, bit);
        self.outputs.retain(|q| *q != qubit);
        self
    }

    pub fn discard(&mut self, qubit: usize) -> &mut Self {
        self.discards.insert(qubit);
        self.outputs.retain(|q| *q != qubit);
        self
    }

    pub fn is_unitary_only(&self) -> bool {
        self.postselect.is_empty() && self.discards.is_empty()
    }

    pub fn validate(&self) -> Result<(), CircuitError> {
        for (index, g) in self.gates.iter().enumerate() {
            if let Some(&qubit) = g.qubits().iter().find(|q| **q >= self.qubit_count) {
                return Err(CircuitError::QubitOutOfRange {
                    index,
                    name: g.name(),
                    qubit,
                    count: self.qubit_count,
                });
            }
            if !g.is_well_formed() {
                return Err(CircuitError::Malformed {
                    index,
                    name: g.name(),
                });
            }
        }
        if let Some(q) = self.postselect.keys().find(|q| self.discards.contains(q)) {
            return Err(CircuitError::PostselectDiscardOverlap(*q));
        }
        let mut covered: Vec<usize> = self
            .outputs
            .iter()
            .chain(self.postselect.keys())
            .chain(self.discards.iter())
            .copied()
            .collect();
        covered.sort_unstable();
        if covered != (0..self.qubit_count).collect::<Vec<_>>() {
            return Err(CircuitError::OutputMismatch);
        }
        Ok(())
    }

    /// Adjoint of the gate sequence. Measurement bookkeeping is dropped.
    pub fn adjoint(&self) -> QuantumCircuit {
        let mut out = QuantumCircuit::new(self.qubit_count);
        out.gates = self.gates.iter().rev().map(Gate::adjoint).collect();
        out
    }

    /// Append `other`'s gates with its qubit `q` mapped to `map[q]`.
    pub fn append_mapped(&mut self, other: &QuantumCircuit, map: &[usize]) {
        self.gates.extend(other.gates.iter().map(|g| g.remap(map)));
    }

    /// Unitary of the gate list over all qubits; qubit 0 is the most
    /// significant bit of the matrix index.
    pub fn unitary(&self) -> Matrix {
        let n = self.qubit_count;
        let dim = 1usize << n;
        let mut out = Matrix::zeros(dim, dim);
        for col in 0..dim {
            let amps = sim::run_gates(&self.gates, n, sim::little_endian(col, n));
            for (i, a) in amps.iter().enumerate() {
                out[(sim::big_endian_of(i, n), col)] = *a;
            }
        }
        out
    }

    pub fn gate_histogram(&self) -> BTreeMap<&'static str, usize> {
        let mut h = BTreeMap::new();
        for g in &self.gates {
            *h.entry(g.name()).or_insert(0) += 1;
        }
        h
    }
}
