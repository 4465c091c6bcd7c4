//! Building blocks of the oracles: parameterized controlled rotations,
//! noun multiplexers and unary iteration.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use crate::qsim::{Gate, QuantumCircuit};

/// Control levels the halving multiplexer needs for `n` nouns,
/// `ceil(log2 n)`.
pub fn mux_levels(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Bits needed to address `count` values (at least one).
pub fn register_bits(count: usize) -> usize {
    mux_levels(count).max(1)
}

/// `gate` with one extra control. Common gates keep a named form; the rest
/// become a controlled dense unitary.
pub fn controlled(gate: &Gate, ctrl: usize) -> Gate {
    match gate {
        Gate::H(q) => Gate::Ch {
            control: ctrl,
            target: *q,
        },
        Gate::X(q) => Gate::Cx {
            control: ctrl,
            target: *q,
        },
        Gate::Cx { control, target } => Gate::Ccx {
            controls: [ctrl, *control],
            target: *target,
        },
        Gate::Rz { target, theta } => Gate::Crz {
            control: ctrl,
            target: *target,
            theta: *theta,
        },
        Gate::Crz {
            control,
            target,
            theta,
        } => Gate::Ccrz {
            controls: [ctrl, *control],
            target: *target,
            theta: *theta,
        },
        Gate::Swap(a, b) => Gate::Cswap {
            control: ctrl,
            a: *a,
            b: *b,
        },
        Gate::Unitary {
            controls,
            targets,
            matrix,
        } => {
            let mut c = vec![ctrl];
            c.extend(controls);
            Gate::Unitary {
                controls: c,
                targets: targets.clone(),
                matrix: matrix.clone(),
            }
        }
        Gate::Lookup { .. } => panic!("table lookups are not controllable"),
        other => Gate::Unitary {
            controls: vec![ctrl],
            targets: other.qubits(),
            matrix: other.local_matrix(),
        },
    }
}

/// `gate` applied only when every qubit in `ctrls` is one.
pub fn multi_controlled(gate: &Gate, ctrls: &[usize]) -> Gate {
    let mut controls = ctrls.to_vec();
    let targets = gate.qubits();
    if let Gate::Unitary {
        controls: inner,
        targets: t,
        matrix,
    } = gate
    {
        controls.extend(inner);
        return Gate::Unitary {
            controls,
            targets: t.clone(),
            matrix: matrix.clone(),
        };
    }
    Gate::Unitary {
        controls,
        targets,
        matrix: gate.local_matrix(),
    }
}

/// `Rz(θ)` on `q` with `θ = Σ_i angle[i]·π/2^i`, applied when `ctrl` is one.
pub fn pcrz_gates(ctrl: usize, angle: &[usize], q: usize) -> Vec<Gate> {
    angle
        .iter()
        .enumerate()
        .map(|(i, a)| Gate::Ccrz {
            controls: [*a, ctrl],
            target: q,
            theta: core::f64::consts::PI / (1u64 << i) as f64,
        })
        .collect()
}

/// Standalone PCRz at precision `P`: qubit 0 is the control, qubits
/// `1..=P+1` the angle register (weight π, π/2, …), the last qubit the
/// target.
pub fn synth_pcrz(precision: u32) -> QuantumCircuit {
    let p = precision as usize;
    let mut qc = QuantumCircuit::new(p + 3);
    let angle: Vec<usize> = (1..=p + 1).collect();
    qc.extend(pcrz_gates(0, &angle, p + 2));
    qc
}

/// Fixed-point code of an angle: the integer `c < 2^(P+1)` nearest to
/// `θ mod 2π` in units of `π/2^P`.
pub fn angle_code(theta: f64, precision: u32) -> u64 {
    let unit = core::f64::consts::PI / (1u64 << precision) as f64;
    let wrapped = num_traits::Euclid::rem_euclid(&theta, &(2.0 * core::f64::consts::PI));
    ((wrapped / unit).round() as u64) % (1u64 << (precision + 1))
}

pub fn code_angle(code: u64, precision: u32) -> f64 {
    code as f64 * core::f64::consts::PI / (1u64 << precision) as f64
}

/// Register value for an angle code: bit `i` of the value drives the
/// rotation of weight `π/2^i`.
pub fn angle_register_value(code: u64, precision: u32) -> u64 {
    (0..=precision).fold(0, |acc, i| acc | ((code >> (precision - i)) & 1) << i)
}

/// Which multiplexer flavour to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuxVariant {
    /// Swap noun `i` with the top noun, once per index bitstring.
    Naive,
    /// Halving construction: level `l` swaps the two halves of the nouns
    /// still in play. Other nouns end up permuted.
    Binary,
}

impl MuxVariant {
    pub fn name(self) -> &'static str {
        match self {
            MuxVariant::Naive => "naive",
            MuxVariant::Binary => "binary",
        }
    }

    pub fn ancillas(self, n: usize) -> usize {
        match self {
            MuxVariant::Naive => mux_levels(n).saturating_sub(1),
            MuxVariant::Binary => 0,
        }
    }
}

/// Level bits that make the halving multiplexer bring position `p` of `n`
/// to the top. Bit `l` of the result controls level `l`.
pub fn mux_code(n: usize, mut p: usize) -> u64 {
    assert!(p < n.max(1));
    let mut len = n;
    let mut code = 0u64;
    let mut level = 0;
    while len > 1 {
        let mc = len.div_ceil(2);
        if p >= mc {
            code |= 1 << level;
            p -= mc;
        }
        len = mc;
        level += 1;
    }
    code
}

/// Apply the halving multiplexer's permutation to `order` (position to
/// content) for level bits `code`.
pub fn mux_permute<T>(order: &mut [T], code: u64) {
    let mut len = order.len();
    let mut level = 0;
    while len > 1 {
        let (mf, mc) = (len / 2, len.div_ceil(2));
        if (code >> level) & 1 == 1 {
            for j in 0..mf {
                order.swap(j, mc + j);
            }
        }
        len = mc;
        level += 1;
    }
}

/// CSWAP every qubit of two noun wires.
pub fn noun_cswap(ctrl: usize, n1: &[usize], n2: &[usize]) -> Vec<Gate> {
    n1.iter()
        .zip(n2)
        .map(|(a, b)| Gate::Cswap {
            control: ctrl,
            a: *a,
            b: *b,
        })
        .collect()
}

/// Halving multiplexer on `nouns`, level `l` controlled by `idx[l]`.
pub fn binary_mux_gates(idx: &[usize], nouns: &[Vec<usize>]) -> Vec<Gate> {
    let mut g = Vec::new();
    let mut len = nouns.len();
    let mut level = 0;
    while len > 1 {
        let (mf, mc) = (len / 2, len.div_ceil(2));
        for j in 0..mf {
            g.extend(noun_cswap(idx[level], &nouns[j], &nouns[mc + j]));
        }
        len = mc;
        level += 1;
    }
    g
}

/// Multi-controlled X as a Toffoli ladder through `ancillas`
/// (`controls.len() − 2` of them).
pub fn mcx_gates(controls: &[usize], target: usize, ancillas: &[usize]) -> Vec<Gate> {
    match controls.len() {
        0 => vec![Gate::X(target)],
        1 => vec![Gate::Cx {
            control: controls[0],
            target,
        }],
        2 => vec![Gate::Ccx {
            controls: [controls[0], controls[1]],
            target,
        }],
        k => {
            let mut up = vec![Gate::Ccx {
                controls: [controls[0], controls[1]],
                target: ancillas[0],
            }];
            for i in 2..k - 1 {
                up.push(Gate::Ccx {
                    controls: [controls[i], ancillas[i - 2]],
                    target: ancillas[i - 1],
                });
            }
            let mut g = up.clone();
            g.push(Gate::Ccx {
                controls: [controls[k - 1], ancillas[k - 3]],
                target,
            });
            g.extend(up.into_iter().rev());
            g
        }
    }
}

/// Naive multiplexer: for each index value `p ≥ 1` (plain binary, first
/// bit most significant) swap noun `p` with noun 0.
pub fn naive_mux_gates(idx: &[usize], nouns: &[Vec<usize>], ancillas: &[usize]) -> Vec<Gate> {
    let b = idx.len();
    let mut g = Vec::new();
    for (p, noun) in nouns.iter().enumerate().skip(1) {
        let flips: Vec<Gate> = (0..b)
            .filter(|l| (p >> (b - 1 - l)) & 1 == 0)
            .map(|l| Gate::X(idx[l]))
            .collect();
        g.extend(flips.iter().cloned());
        for (top, other) in nouns[0].iter().zip(noun) {
            // Fredkin from CX · C^k X · CX with the top qubit as an extra control
            let mut ctrls = idx.to_vec();
            ctrls.push(*top);
            g.push(Gate::Cx {
                control: *other,
                target: *top,
            });
            g.extend(mcx_gates(&ctrls, *other, ancillas));
            g.push(Gate::Cx {
                control: *other,
                target: *top,
            });
        }
        g.extend(flips);
    }
    g
}

/// Standalone multiplexer over `n` nouns of dimension `wire_dim`: index
/// register first (`mux_levels(n)` qubits), then the nouns, then any
/// ancillas.
pub fn synth_multiplexer(n: usize, wire_dim: usize, variant: MuxVariant) -> QuantumCircuit {
    let q = wire_dim.trailing_zeros() as usize;
    let b = mux_levels(n);
    let idx: Vec<usize> = (0..b).collect();
    let nouns: Vec<Vec<usize>> = (0..n)
        .map(|i| (b + i * q..b + (i + 1) * q).collect())
        .collect();
    let anc_start = b + n * q;
    let ancillas: Vec<usize> = (anc_start..anc_start + variant.ancillas(n)).collect();
    let mut qc = QuantumCircuit::new(anc_start + ancillas.len());
    qc.extend(match variant {
        MuxVariant::Binary => binary_mux_gates(&idx, &nouns),
        MuxVariant::Naive => naive_mux_gates(&idx, &nouns, &ancillas),
    });
    qc
}

/// Select circuit over the index register `ctrls` (first qubit most
/// significant) using `ctrls.len() − 1` clean ancillas. `func(i, c)` must
/// return the gates for branch `i` controlled on qubit `c`.
pub fn unary_iteration<F>(ctrls: &[usize], ancillas: &[usize], func: &mut F) -> Vec<Gate>
where
    F: FnMut(usize, usize) -> Vec<Gate>,
{
    let mut g = Vec::new();
    if ctrls.is_empty() {
        return g;
    }
    let c0 = ctrls[0];
    g.push(Gate::X(c0));
    controlled_iteration(&ctrls[1..], 0, c0, ancillas, func, &mut g);
    g.push(Gate::X(c0));
    controlled_iteration(&ctrls[1..], 1, c0, ancillas, func, &mut g);
    g
}

fn controlled_iteration<F>(
    ctrls: &[usize],
    base: usize,
    prev: usize,
    ancillas: &[usize],
    func: &mut F,
    g: &mut Vec<Gate>,
) where
    F: FnMut(usize, usize) -> Vec<Gate>,
{
    if ctrls.is_empty() {
        g.extend(func(base, prev));
        return;
    }
    let (c, fresh) = (ctrls[0], ancillas[0]);
    // fresh = prev ∧ ¬c, then prev ∧ c, then back to zero
    g.push(Gate::X(c));
    g.push(Gate::Ccx {
        controls: [prev, c],
        target: fresh,
    });
    g.push(Gate::X(c));
    controlled_iteration(&ctrls[1..], 2 * base, fresh, &ancillas[1..], func, g);
    g.push(Gate::Cx {
        control: prev,
        target: fresh,
    });
    controlled_iteration(&ctrls[1..], 2 * base + 1, fresh, &ancillas[1..], func, g);
    g.push(Gate::Ccx {
        controls: [prev, c],
        target: fresh,
    });
}

/// Layout of a standalone select circuit: `controls` index qubits, then
/// the payload's target qubits, then `controls − 1` ancillas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SelectLayout {
    pub controls: usize,
    pub targets: usize,
    pub ancillas: usize,
}

impl SelectLayout {
    pub fn qubits(&self) -> usize {
        self.controls + self.targets + self.ancillas
    }
}

fn select_layout(controls: usize, payload: &[Vec<Gate>]) -> SelectLayout {
    assert!(
        payload.len() <= 1 << controls,
        "payload larger than the index range"
    );
    let targets = payload
        .iter()
        .flatten()
        .flat_map(Gate::qubits)
        .map(|q| q + 1)
        .max()
        .unwrap_or(0);
    SelectLayout {
        controls,
        targets,
        ancillas: controls.saturating_sub(1),
    }
}

/// Unary-iteration select: applies `payload[i]` (gates on local target
/// qubits `0..`) when the index register holds `i`; missing or empty
/// entries are the identity.
pub fn synth_unary_iteration(
    controls: usize,
    payload: &[Vec<Gate>],
) -> (QuantumCircuit, SelectLayout) {
    let lay = select_layout(controls, payload);
    let map: Vec<usize> = (controls..controls + lay.targets).collect();
    let ctrls: Vec<usize> = (0..controls).collect();
    let ancillas: Vec<usize> = (controls + lay.targets..lay.qubits()).collect();
    let mut qc = QuantumCircuit::new(lay.qubits());
    qc.extend(unary_iteration(
        &ctrls,
        &ancillas,
        &mut |i, c| match payload.get(i) {
            Some(gs) => gs.iter().map(|g| controlled(&g.remap(&map), c)).collect(),
            None => Vec::new(),
        },
    ));
    (qc, lay)
}

/// Reference select built from fully multi-controlled gates, on the same
/// layout minus the ancillas.
pub fn synth_naive_select(controls: usize, payload: &[Vec<Gate>]) -> QuantumCircuit {
    let lay = select_layout(controls, payload);
    let map: Vec<usize> = (controls..controls + lay.targets).collect();
    let ctrls: Vec<usize> = (0..controls).collect();
    let mut qc = QuantumCircuit::new(controls + lay.targets);
    for (i, gs) in payload.iter().enumerate() {
        if gs.is_empty() {
            continue;
        }
        let flips: Vec<Gate> = (0..controls)
            .filter(|l| (i >> (controls - 1 - l)) & 1 == 0)
            .map(|l| Gate::X(ctrls[l]))
            .collect();
        qc.extend(flips.iter().cloned());
        qc.extend(gs.iter().map(|g| multi_controlled(&g.remap(&map), &ctrls)));
        qc.extend(flips);
    }
    qc
}
