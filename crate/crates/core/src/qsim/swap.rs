use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Gate, Input, QuantumCircuit, SimError, Simulator};

/// Swap-test circuit over an ancilla (qubit 0) and the two prepared states.
#[derive(Clone, Debug)]
pub struct SwapTest {
    pub circuit: QuantumCircuit,
    pub ancilla: usize,
}

/// Place `a` and `b` side by side and compare their outputs pairwise
/// through ancilla-controlled swaps. Every qubit except the ancilla is
/// post-selected or traced out.
pub fn build_swap_test(a: &QuantumCircuit, b: &QuantumCircuit) -> Result<SwapTest, SimError> {
    if a.outputs.len() != b.outputs.len() {
        return Err(SimError::DimensionMismatch {
            left: a.outputs.len(),
            right: b.outputs.len(),
        });
    }
    let na = a.qubit_count;
    let mut qc = QuantumCircuit::new(1 + na + b.qubit_count);
    let map_a: Vec<usize> = (1..=na).collect();
    let map_b: Vec<usize> = (1 + na..1 + na + b.qubit_count).collect();
    qc.append_mapped(a, &map_a);
    qc.append_mapped(b, &map_b);
    qc.push(Gate::H(0));
    for (x, y) in a.outputs.iter().zip(&b.outputs) {
        qc.push(Gate::Cswap {
            control: 0,
            a: map_a[*x],
            b: map_b[*y],
        });
    }
    qc.push(Gate::H(0));
    for (q, bit) in &a.postselect {
        qc.postselect(map_a[*q], *bit);
    }
    for (q, bit) in &b.postselect {
        qc.postselect(map_b[*q], *bit);
    }
    for q in a
        .discards
        .iter()
        .chain(&a.outputs)
        .map(|q| map_a[*q])
        .collect::<Vec<_>>()
    {
        qc.discard(q);
    }
    for q in b
        .discards
        .iter()
        .chain(&b.outputs)
        .map(|q| map_b[*q])
        .collect::<Vec<_>>()
    {
        qc.discard(q);
    }
    Ok(SwapTest {
        circuit: qc,
        ancilla: 0,
    })
}

impl SwapTest {
    /// Probability that the ancilla reads 0, conditioned on the
    /// post-selections of both preparations.
    pub fn zero_probability(&self, sim: &Simulator) -> Result<f64, SimError> {
        let st = sim.run(&self.circuit, &Input::Basis(0))?;
        if st.is_zero() {
            return Err(SimError::ZeroWeight);
        }
        Ok(st.probabilities()[0].clamp(0.0, 1.0))
    }
}

/// Shots for an ε-accurate overlap at failure probability δ across `k`
/// comparisons: `⌈(2/ε'²)·ln(2k/δ)⌉` with `ε' = ε/2`.
pub fn hoeffding_shots(epsilon: f64, delta: f64, comparisons: usize) -> Result<u64, SimError> {
    if !(epsilon > 0.0 && epsilon < 1.0 && delta > 0.0 && delta < 1.0) {
        return Err(SimError::InvalidPrecision { epsilon, delta });
    }
    let e = epsilon / 2.0;
    let k = comparisons.max(1) as f64;
    let n = (2.0 / (e * e)) * (2.0 * k / delta).ln();
    // guard against 599.9999999 style rounding of exact products
    Ok((n - 1e-9).ceil() as u64)
}

/// Uniform draw in [0,1) for one shot; depends only on (seed, shot).
pub fn shot_uniform(seed: u64, shot: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(u128::from(shot) * 2);
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapEstimate {
    /// `2·(zero fraction) − 1`.
    pub estimate: f64,
    pub shots: u64,
    pub zeros: u64,
    /// Exact ancilla zero probability the shots were drawn from.
    pub p_zero: f64,
}

/// Sampled swap test between two preparations.
pub fn estimate_overlap(
    sim: &Simulator,
    a: &QuantumCircuit,
    b: &QuantumCircuit,
    epsilon: f64,
    delta: f64,
    comparisons: usize,
    seed: u64,
) -> Result<OverlapEstimate, SimError> {
    let shots = hoeffding_shots(epsilon, delta, comparisons)?;
    let p = build_swap_test(a, b)?.zero_probability(sim)?;
    Ok(sample_from(p, shots, seed))
}

/// Draw `shots` seeded swap-test outcomes from a known zero probability.
pub fn sample_from(p_zero: f64, shots: u64, seed: u64) -> OverlapEstimate {
    // outcomes that are certain up to rounding are sampled as certain
    let p = if 1.0 - p_zero < 1e-12 {
        1.0
    } else if p_zero < 1e-12 {
        0.0
    } else {
        p_zero
    };
    let zeros = (0..shots).filter(|s| shot_uniform(seed, *s) < p).count() as u64;
    OverlapEstimate {
        estimate: 2.0 * zeros as f64 / shots as f64 - 1.0,
        shots,
        zeros,
        p_zero,
    }
}
