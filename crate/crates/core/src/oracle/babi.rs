//! The warmup oracles for "Where is X?": `W` runs the context text and
//! lifts noun `i` to the top wire, `V` prepares one candidate answer.

use alloc::string::String;
use alloc::vec::Vec;

use super::primitives::{binary_mux_gates, mux_code, mux_levels};
use super::OracleError;
use crate::compiler::CompiledText;
use crate::qsim::{exact_overlap, Input, QuantumCircuit, SimError, Simulator};

#[derive(Clone, Debug, PartialEq)]
pub struct BabiOracles {
    /// Index register (level bits), then the context's registers; only the
    /// top noun survives.
    pub w: QuantumCircuit,
    pub index_bits: usize,
    /// Context nouns in register order.
    pub nouns: Vec<String>,
    /// One preparation per candidate answer, on a single wire.
    pub v: Vec<(String, QuantumCircuit)>,
}

impl BabiOracles {
    pub fn slot(&self, noun: &str) -> Option<usize> {
        self.nouns.iter().position(|n| n == noun)
    }

    /// `⟨v_p|ρ_i|v_p⟩` for each candidate `p`, where `ρ_i` is the top wire
    /// of `W|code(i)⟩`.
    pub fn scores(&self, slot: usize, sim: &Simulator) -> Result<Vec<f64>, SimError> {
        let code = mux_code(self.nouns.len(), slot);
        let n = self.w.qubit_count;
        let basis = (0..self.index_bits).fold(0usize, |acc, l| {
            acc | (((code >> l) & 1) as usize) << (n - 1 - l)
        });
        let rho = sim.run(&self.w, &Input::Basis(basis))?;
        self.v
            .iter()
            .map(|(_, v)| exact_overlap(&rho, &sim.run(v, &Input::Basis(0))?))
            .collect()
    }
}

/// Build `W` from a compiled context and `V` from single-wire answers.
pub fn babi_oracles(
    context: &CompiledText,
    answers: &[(String, CompiledText)],
) -> Result<BabiOracles, OracleError> {
    let q = context.qubits_per_wire;
    let n = context.registers.len();
    if n == 0 {
        return Err(OracleError::Empty);
    }
    let b = mux_levels(n).max(1);
    let map: Vec<usize> = (b..b + context.circuit.qubit_count).collect();
    let mut w = QuantumCircuit::new(b + n * q);
    w.append_mapped(&context.circuit, &map);
    for (qubit, bit) in &context.circuit.postselect {
        w.postselect(map[*qubit], *bit);
    }
    let nouns: Vec<Vec<usize>> = (0..n)
        .map(|s| (b + s * q..b + (s + 1) * q).collect())
        .collect();
    let idx: Vec<usize> = (0..b).collect();
    w.extend(binary_mux_gates(&idx, &nouns));
    for qb in (0..b).chain(b + q..b + n * q) {
        if !w.postselect.contains_key(&qb) {
            w.discard(qb);
        }
    }
    w.outputs = nouns[0].clone();
    let mut v = Vec::new();
    for (label, a) in answers {
        if a.circuit.outputs.len() != q {
            return Err(OracleError::Unsupported(alloc::format!(
                "answer {label:?} is not a single wire"
            )));
        }
        v.push((label.clone(), a.circuit.clone()));
    }
    Ok(BabiOracles {
        w,
        index_bits: b,
        nouns: context.registers.iter().map(|r| r.noun.clone()).collect(),
        v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::compile;
    use crate::tasks::{babi, closest_text, restrict};

    #[test]
    fn matches_closest_text() {
        let v = babi::embeddings();
        let ctx = babi::context().unwrap();
        let compiled = compile(&ctx, &v).unwrap();
        let sim = Simulator::default();
        for person in babi::PEOPLE {
            let qs = babi::questions(person);
            let answers: Vec<(String, CompiledText)> = qs
                .iter()
                .map(|(p, t)| (p.clone(), compile(t, &v).unwrap()))
                .collect();
            let o = babi_oracles(&compiled, &answers).unwrap();
            let scores = o.scores(o.slot(person).unwrap(), &sim).unwrap();
            let t0 = restrict(&ctx, &[person]).unwrap();
            let cands: Vec<_> = qs.iter().map(|(_, t)| t.clone()).collect();
            let (best, want) = closest_text(&t0, &cands, &v, &sim).unwrap();
            for (a, b) in scores.iter().zip(&want) {
                assert!((a - b).abs() < 1e-10, "{person}: {scores:?} vs {want:?}");
            }
            assert_eq!(qs[best].0, babi::expected(person).unwrap());
        }
    }
}
