use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use super::gate::{Gate, Kernel};
use super::{CircuitError, QuantumCircuit};
use crate::linalg::{Matrix, C64, ONE, ZERO};

/// Weights at or below this are reported as the tagged zero state.
pub const ZERO_WEIGHT: f64 = 1e-24;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("{kind} simulation of {qubits} qubits exceeds the cap of {cap}")]
    Capacity {
        kind: &'static str,
        qubits: usize,
        cap: usize,
    },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error("input state has {got} qubits, circuit has {expected}")]
    InputDimension { expected: usize, got: usize },
    #[error("states act on {left} and {right} qubits")]
    DimensionMismatch { left: usize, right: usize },
    #[error("both states are mixed; their overlap is not a model quantity")]
    BothMixed,
    #[error("post-selection weight is zero")]
    ZeroWeight,
    #[error("precision parameters must lie in (0,1), got epsilon={epsilon}, delta={delta}")]
    InvalidPrecision { epsilon: f64, delta: f64 },
}

#[derive(Clone, Debug)]
enum Repr {
    Pure(Vec<C64>),
    Mixed(Matrix),
    Zero,
}

/// Normalized state on `qubits` qubits (first qubit is the most significant
/// bit of an index) together with the post-selection weight that produced it.
#[derive(Clone, Debug)]
pub struct QuantumState {
    repr: Repr,
    qubits: usize,
    weight: f64,
}

impl QuantumState {
    pub fn from_amplitudes(mut amps: Vec<C64>) -> Self {
        let qubits = amps.len().trailing_zeros() as usize;
        assert_eq!(
            1usize << qubits,
            amps.len(),
            "amplitude count must be a power of two"
        );
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= ZERO_WEIGHT {
            return QuantumState::zero(qubits);
        }
        for a in &mut amps {
            *a /= norm;
        }
        QuantumState {
            repr: Repr::Pure(amps),
            qubits,
            weight: 1.0,
        }
    }

    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << qubits];
        amps[index] = ONE;
        QuantumState {
            repr: Repr::Pure(amps),
            qubits,
            weight: 1.0,
        }
    }

    /// Density matrix, normalized to unit trace.
    pub fn from_density(rho: Matrix) -> Self {
        let qubits = rho.rows().trailing_zeros() as usize;
        assert!(
            rho.is_square() && 1usize << qubits == rho.rows(),
            "density must be 2^q square"
        );
        let tr = rho.trace().re;
        if tr <= ZERO_WEIGHT {
            return QuantumState::zero(qubits);
        }
        QuantumState {
            repr: Repr::Mixed(rho.scale(C64::new(1.0 / tr, 0.0))),
            qubits,
            weight: 1.0,
        }
    }

    pub fn zero(qubits: usize) -> Self {
        QuantumState {
            repr: Repr::Zero,
            qubits,
            weight: 0.0,
        }
    }

    pub fn with_weight(mut self, weight: f64) -> Self {
        self.weight = weight;
        self
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    pub fn is_pure(&self) -> bool {
        matches!(self.repr, Repr::Pure(_))
    }

    pub fn amplitudes(&self) -> Option<&[C64]> {
        match &self.repr {
            Repr::Pure(a) => Some(a),
            _ => None,
        }
    }

    pub fn density_matrix(&self) -> Matrix {
        let dim = 1usize << self.qubits;
        match &self.repr {
            Repr::Pure(a) => {
                let mut m = Matrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        m[(i, j)] = a[i] * a[j].conj();
                    }
                }
                m
            }
            Repr::Mixed(m) => m.clone(),
            Repr::Zero => Matrix::zeros(dim, dim),
        }
    }

    /// Diagonal of the density matrix.
    pub fn probabilities(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Pure(a) => a.iter().map(|x| x.norm_sqr()).collect(),
            Repr::Mixed(m) => (0..m.rows()).map(|i| m[(i, i)].re).collect(),
            Repr::Zero => vec![0.0; 1 << self.qubits],
        }
    }
}

/// `tr(ρσ)` for two states, at most one of them mixed.
pub fn exact_overlap(a: &QuantumState, b: &QuantumState) -> Result<f64, SimError> {
    if a.qubits != b.qubits {
        return Err(SimError::DimensionMismatch {
            left: a.qubits,
            right: b.qubits,
        });
    }
    match (&a.repr, &b.repr) {
        (Repr::Zero, _) | (_, Repr::Zero) => Ok(0.0),
        (Repr::Pure(x), Repr::Pure(y)) => {
            let ip: C64 = x.iter().zip(y).map(|(p, q)| p.conj() * q).sum();
            Ok(ip.norm_sqr())
        }
        (Repr::Pure(v), Repr::Mixed(m)) | (Repr::Mixed(m), Repr::Pure(v)) => {
            let mv = m.mul_vec(v);
            let e: C64 = v.iter().zip(&mv).map(|(p, q)| p.conj() * q).sum();
            Ok(e.re)
        }
        (Repr::Mixed(_), Repr::Mixed(_)) => Err(SimError::BothMixed),
    }
}

#[derive(Clone, Debug)]
pub enum Input {
    /// Computational basis state; qubit 0 is the most significant bit.
    Basis(usize),
    State(QuantumState),
}

#[derive(Clone, Copy, Debug)]
pub struct Simulator {
    pub max_statevector_qubits: usize,
    pub max_density_qubits: usize,
}

impl Default for Simulator {
    fn default() -> Self {
        Simulator {
            max_statevector_qubits: 24,
            max_density_qubits: 12,
        }
    }
}

fn reverse_bits(i: usize, n: usize) -> usize {
    if n == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS as usize - n)
    }
}

pub(crate) fn little_endian(big: usize, n: usize) -> usize {
    reverse_bits(big, n)
}

pub(crate) fn big_endian_of(little: usize, n: usize) -> usize {
    reverse_bits(little, n)
}

/// Statevector after `gates` on the little-endian basis state `start`.
pub(crate) fn run_gates(gates: &[Gate], n: usize, start: usize) -> Vec<C64> {
    let mut s = vec![ZERO; 1 << n];
    s[start] = ONE;
    for g in gates {
        apply(&mut s, &g.kernel(), 0, false);
    }
    s
}

fn mask(qs: &[usize], shift: usize) -> usize {
    qs.iter().fold(0, |m, q| m | 1 << (q + shift))
}

fn apply(s: &mut [C64], k: &Kernel, shift: usize, conj: bool) {
    let c = |z: C64| if conj { z.conj() } else { z };
    match k {
        Kernel::Single {
            controls,
            target,
            m,
        } => {
            let cm = mask(controls, shift);
            let t = 1usize << (target + shift);
            let [m0, m1, m2, m3] = [c(m[0]), c(m[1]), c(m[2]), c(m[3])];
            for i in 0..s.len() {
                if i & t != 0 || i & cm != cm {
                    continue;
                }
                let (a, b) = (s[i], s[i | t]);
                s[i] = m0 * a + m1 * b;
                s[i | t] = m2 * a + m3 * b;
            }
        }
        Kernel::Swap { controls, a, b } => {
            let cm = mask(controls, shift);
            let (ba, bb) = (1usize << (a + shift), 1usize << (b + shift));
            for i in 0..s.len() {
                if i & ba != 0 && i & bb == 0 && i & cm == cm {
                    s.swap(i, i ^ ba ^ bb);
                }
            }
        }
        Kernel::Dense {
            controls,
            targets,
            m,
        } => {
            let cm = mask(controls, shift);
            let tm = mask(targets, shift);
            let k = targets.len();
            let dim = 1usize << k;
            let offs: Vec<usize> = (0..dim)
                .map(|r| {
                    (0..k)
                        .filter(|j| r >> (k - 1 - j) & 1 == 1)
                        .fold(0, |acc, j| acc | 1 << (targets[j] + shift))
                })
                .collect();
            let mut buf = vec![ZERO; dim];
            for base in 0..s.len() {
                if base & tm != 0 || base & cm != cm {
                    continue;
                }
                for (r, o) in offs.iter().enumerate() {
                    buf[r] = s[base | o];
                }
                for r in 0..dim {
                    let mut acc = ZERO;
                    for (col, v) in buf.iter().enumerate() {
                        acc += c(m[(r, col)]) * v;
                    }
                    s[base | offs[r]] = acc;
                }
            }
        }
        Kernel::Lookup {
            address,
            target,
            table,
        } => {
            let mut out = vec![ZERO; s.len()];
            let na = address.len();
            for (i, amp) in s.iter().enumerate() {
                let addr = address.iter().enumerate().fold(0usize, |acc, (j, q)| {
                    acc | ((i >> (q + shift)) & 1) << (na - 1 - j)
                });
                let val = table.get(addr).copied().unwrap_or(0);
                let flip = target.iter().enumerate().fold(0usize, |acc, (j, q)| {
                    acc | (((val >> j) & 1) as usize) << (q + shift)
                });
                out[i ^ flip] = *amp;
            }
            s.copy_from_slice(&out);
        }
    }
}

impl Simulator {
    /// Evolve `input`, then apply post-selection and discards.
    pub fn run(&self, qc: &QuantumCircuit, input: &Input) -> Result<QuantumState, SimError> {
        qc.validate()?;
        let n = qc.qubit_count;
        let kernels: Vec<Kernel> = qc.gates.iter().map(Gate::kernel).collect();
        let mixed_input = matches!(
            input,
            Input::State(QuantumState {
                repr: Repr::Mixed(_),
                ..
            })
        );
        if mixed_input {
            if n > self.max_density_qubits {
                return Err(SimError::Capacity {
                    kind: "density",
                    qubits: n,
                    cap: self.max_density_qubits,
                });
            }
        } else if n > self.max_statevector_qubits {
            return Err(SimError::Capacity {
                kind: "statevector",
                qubits: n,
                cap: self.max_statevector_qubits,
            });
        }
        if !qc.discards.is_empty() && qc.outputs.len() > self.max_density_qubits {
            return Err(SimError::Capacity {
                kind: "density",
                qubits: qc.outputs.len(),
                cap: self.max_density_qubits,
            });
        }
        let in_weight = match input {
            Input::State(st) => {
                if st.qubits != n {
                    return Err(SimError::InputDimension {
                        expected: n,
                        got: st.qubits,
                    });
                }
                st.weight
            }
            Input::Basis(_) => 1.0,
        };
        let layout = Layout::new(qc);
        match input {
            Input::State(QuantumState {
                repr: Repr::Zero, ..
            }) => Ok(QuantumState::zero(qc.outputs.len())),
            Input::State(QuantumState {
                repr: Repr::Mixed(rho),
                ..
            }) => {
                let dim = 1usize << n;
                let mut v = vec![ZERO; dim * dim];
                for r in 0..dim {
                    for c in 0..dim {
                        v[little_endian(r, n) | little_endian(c, n) << n] = rho[(r, c)];
                    }
                }
                for k in &kernels {
                    apply(&mut v, k, 0, false);
                    apply(&mut v, k, n, true);
                }
                Ok(layout.extract_mixed(&v, n, in_weight))
            }
            _ => {
                let mut s = vec![ZERO; 1 << n];
                match input {
                    Input::Basis(b) => s[little_endian(*b, n)] = ONE,
                    Input::State(QuantumState {
                        repr: Repr::Pure(a),
                        ..
                    }) => {
                        for (i, x) in a.iter().enumerate() {
                            s[little_endian(i, n)] = *x;
                        }
                    }
                    Input::State(_) => unreachable!(),
                }
                for k in &kernels {
                    apply(&mut s, k, 0, false);
                }
                Ok(layout.extract_pure(&s, in_weight))
            }
        }
    }
}

/// Index bookkeeping for reading outputs out of a full register.
struct Layout {
    ps_mask: usize,
    ps_value: usize,
    outputs: Vec<usize>,
    /// Offsets enumerating every assignment of the discarded qubits.
    traced: Vec<usize>,
    mixed: bool,
}

impl Layout {
    fn new(qc: &QuantumCircuit) -> Self {
        let ps_mask = qc.postselect.keys().fold(0, |m, q| m | 1 << q);
        let ps_value = qc
            .postselect
            .iter()
            .filter(|(_, b)| **b)
            .fold(0, |m, (q, _)| m | 1 << q);
        let ds: Vec<usize> = qc.discards.iter().copied().collect();
        let traced = (0..1usize << ds.len())
            .map(|t| {
                ds.iter()
                    .enumerate()
                    .filter(|(j, _)| t >> j & 1 == 1)
                    .fold(0, |m, (_, q)| m | 1 << q)
            })
            .collect();
        Layout {
            ps_mask,
            ps_value,
            outputs: qc.outputs.clone(),
            traced,
            mixed: !ds.is_empty(),
        }
    }

    fn out_index(&self, j: usize) -> usize {
        let o = self.outputs.len();
        self.outputs
            .iter()
            .enumerate()
            .filter(|(k, _)| j >> (o - 1 - k) & 1 == 1)
            .fold(self.ps_value, |m, (_, q)| m | 1 << q)
    }

    fn extract_pure(&self, s: &[C64], in_weight: f64) -> QuantumState {
        let o = self.outputs.len();
        let w: f64 = s
            .iter()
            .enumerate()
            .filter(|(i, _)| i & self.ps_mask == self.ps_value)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if w <= ZERO_WEIGHT {
            return QuantumState::zero(o);
        }
        let idx: Vec<usize> = (0..1usize << o).map(|j| self.out_index(j)).collect();
        let scale = 1.0 / w;
        let weight = w * in_weight;
        if !self.mixed {
            let amps = idx.iter().map(|i| s[*i] * scale.sqrt()).collect();
            return QuantumState {
                repr: Repr::Pure(amps),
                qubits: o,
                weight,
            };
        }
        let dim = idx.len();
        let mut rho = Matrix::zeros(dim, dim);
        for t in &self.traced {
            let v: Vec<C64> = idx.iter().map(|i| s[i | t]).collect();
            for r in 0..dim {
                if v[r] == ZERO {
                    continue;
                }
                for c in 0..dim {
                    rho[(r, c)] += v[r] * v[c].conj() * scale;
                }
            }
        }
        QuantumState {
            repr: Repr::Mixed(rho),
            qubits: o,
            weight,
        }
    }

    fn extract_mixed(&self, v: &[C64], n: usize, in_weight: f64) -> QuantumState {
        let o = self.outputs.len();
        let at = |r: usize, c: usize| v[r | c << n];
        let w: f64 = (0..1usize << n)
            .filter(|i| i & self.ps_mask == self.ps_value)
            .map(|i| at(i, i).re)
            .sum();
        if w <= ZERO_WEIGHT {
            return QuantumState::zero(o);
        }
        let idx: Vec<usize> = (0..1usize << o).map(|j| self.out_index(j)).collect();
        let dim = idx.len();
        let mut rho = Matrix::zeros(dim, dim);
        for t in &self.traced {
            for r in 0..dim {
                for c in 0..dim {
                    rho[(r, c)] += at(idx[r] | t, idx[c] | t) / w;
                }
            }
        }
        QuantumState {
            repr: Repr::Mixed(rho),
            qubits: o,
            weight: w * in_weight,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hadamard, Matrix};

    fn close(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-12
    }

    #[test]
    fn hadamard_on_zero() {
        let mut qc = QuantumCircuit::new(1);
        qc.push(Gate::H(0));
        let st = Simulator::default().run(&qc, &Input::Basis(0)).unwrap();
        let a = st.amplitudes().unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!(close(a[0], h) && close(a[1], h));
    }

    #[test]
    fn bell_amplitudes() {
        let mut qc = QuantumCircuit::new(2);
        qc.push(Gate::H(0)).push(Gate::Cx {
            control: 0,
            target: 1,
        });
        let st = Simulator::default().run(&qc, &Input::Basis(0)).unwrap();
        let a = st.amplitudes().unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!(close(a[0], h) && close(a[1], 0.0) && close(a[2], 0.0) && close(a[3], h));
    }

    #[test]
    fn unitary_uses_first_qubit_as_msb() {
        let mut qc = QuantumCircuit::new(2);
        qc.push(Gate::H(0));
        let expected = hadamard().kron(&Matrix::identity(2));
        assert!(qc.unitary().sub(&expected).max_abs() < 1e-12);
    }

    #[test]
    fn postselection_weight_and_zero_tag() {
        let mut qc = QuantumCircuit::new(2);
        qc.push(Gate::H(0)).push(Gate::Cx {
            control: 0,
            target: 1,
        });
        qc.postselect(0, true);
        let st = Simulator::default().run(&qc, &Input::Basis(0)).unwrap();
        assert!((st.weight() - 0.5).abs() < 1e-12);
        assert!(close(st.amplitudes().unwrap()[1], 1.0));

        let mut z = QuantumCircuit::new(1);
        z.postselect(0, true);
        let st = Simulator::default().run(&z, &Input::Basis(0)).unwrap();
        assert!(st.is_zero());
        assert_eq!(st.weight(), 0.0);
    }

    #[test]
    fn discard_gives_maximally_mixed_half_of_bell_pair() {
        let mut qc = QuantumCircuit::new(2);
        qc.push(Gate::H(0)).push(Gate::Cx {
            control: 0,
            target: 1,
        });
        qc.discard(1);
        let st = Simulator::default().run(&qc, &Input::Basis(0)).unwrap();
        let rho = st.density_matrix();
        assert!(!st.is_pure());
        assert!(close(rho[(0, 0)], 0.5) && close(rho[(1, 1)], 0.5) && close(rho[(0, 1)], 0.0));
    }

    #[test]
    fn mixed_input_evolves_by_conjugation() {
        let rho = Matrix::from_rows(&[&[C64::new(0.75, 0.0), ZERO], &[ZERO, C64::new(0.25, 0.0)]]);
        let mut qc = QuantumCircuit::new(1);
        qc.push(Gate::X(0));
        let st = Simulator::default()
            .run(&qc, &Input::State(QuantumState::from_density(rho)))
            .unwrap();
        let out = st.density_matrix();
        assert!(close(out[(0, 0)], 0.25) && close(out[(1, 1)], 0.75));
    }

    #[test]
    fn overlaps() {
        let zero = QuantumState::basis(1, 0);
        let one = QuantumState::basis(1, 1);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let plus = QuantumState::from_amplitudes(vec![C64::new(h, 0.0), C64::new(h, 0.0)]);
        assert!((exact_overlap(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(exact_overlap(&zero, &one).unwrap().abs() < 1e-12);
        assert!((exact_overlap(&zero, &plus).unwrap() - 0.5).abs() < 1e-12);
        let mixed = QuantumState::from_density(Matrix::identity(2));
        assert!((exact_overlap(&plus, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(exact_overlap(&mixed, &mixed), Err(SimError::BothMixed));
    }

    #[test]
    fn capacity_is_enforced() {
        let sim = Simulator {
            max_statevector_qubits: 3,
            max_density_qubits: 2,
        };
        let qc = QuantumCircuit::new(4);
        assert!(matches!(
            sim.run(&qc, &Input::Basis(0)),
            Err(SimError::Capacity { .. })
        ));
    }

    #[test]
    fn lookup_xors_table_value() {
        let mut qc = QuantumCircuit::new(4);
        qc.push(Gate::Lookup {
            address: vec![0, 1],
            target: vec![2, 3],
            table: vec![0, 1, 2, 3],
        });
        // address 10 (= 2) writes value 2: bit 1 set, lands on qubit 3
        let st = Simulator::default()
            .run(&qc, &Input::Basis(0b1000))
            .unwrap();
        assert!(close(st.amplitudes().unwrap()[0b1001], 1.0));
    }
}
