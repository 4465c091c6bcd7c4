use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use crate::linalg::{self, Matrix, C64};

/// Elementary gate. Angles are radians.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    S(usize),
    Sdg(usize),
    Rz {
        target: usize,
        theta: f64,
    },
    U3 {
        target: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    Cx {
        control: usize,
        target: usize,
    },
    Ccx {
        controls: [usize; 2],
        target: usize,
    },
    Swap(usize, usize),
    Cswap {
        control: usize,
        a: usize,
        b: usize,
    },
    Ch {
        control: usize,
        target: usize,
    },
    Crz {
        control: usize,
        target: usize,
        theta: f64,
    },
    Ccrz {
        controls: [usize; 2],
        target: usize,
        theta: f64,
    },
    /// Arbitrary unitary on `targets` (first target is the most significant
    /// bit of the matrix index), applied when every control is one.
    Unitary {
        controls: Vec<usize>,
        targets: Vec<usize>,
        matrix: Matrix,
    },
    /// Classical table read: `|k⟩|y⟩ ↦ |k⟩|y ⊕ table[k]⟩`. `address` is read
    /// most-significant bit first; bit `j` of the table value lands on
    /// `target[j]`.
    Lookup {
        address: Vec<usize>,
        target: Vec<usize>,
        table: Vec<u64>,
    },
}

/// Primitive a gate is applied as.
pub(crate) enum Kernel {
    Single {
        controls: Vec<usize>,
        target: usize,
        m: [C64; 4],
    },
    Swap {
        controls: Vec<usize>,
        a: usize,
        b: usize,
    },
    Dense {
        controls: Vec<usize>,
        targets: Vec<usize>,
        m: Matrix,
    },
    Lookup {
        address: Vec<usize>,
        target: Vec<usize>,
        table: Vec<u64>,
    },
}

fn m2(m: &Matrix) -> [C64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Matrix {
    let (s, c) = (theta / 2.0).sin_cos();
    Matrix::from_rows(&[
        &[C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        &[C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ])
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::S(_) => "S",
            Gate::Sdg(_) => "SDG",
            Gate::Rz { .. } => "RZ",
            Gate::U3 { .. } => "U3",
            Gate::Cx { .. } => "CX",
            Gate::Ccx { .. } => "CCX",
            Gate::Swap(..) => "SWAP",
            Gate::Cswap { .. } => "CSWAP",
            Gate::Ch { .. } => "CH",
            Gate::Crz { .. } => "CRZ",
            Gate::Ccrz { .. } => "CCRZ",
            Gate::Unitary { .. } => "UNITARY",
            Gate::Lookup { .. } => "LOOKUP",
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::X(q) | Gate::S(q) | Gate::Sdg(q) => vec![*q],
            Gate::Rz { target, .. } | Gate::U3 { target, .. } => vec![*target],
            Gate::Cx { control, target }
            | Gate::Ch { control, target }
            | Gate::Crz {
                control, target, ..
            } => {
                vec![*control, *target]
            }
            Gate::Ccx { controls, target }
            | Gate::Ccrz {
                controls, target, ..
            } => {
                vec![controls[0], controls[1], *target]
            }
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::Cswap { control, a, b } => vec![*control, *a, *b],
            Gate::Unitary {
                controls, targets, ..
            } => controls.iter().chain(targets).copied().collect(),
            Gate::Lookup {
                address, target, ..
            } => address.iter().chain(target).copied().collect(),
        }
    }

    pub fn angles(&self) -> Vec<f64> {
        match self {
            Gate::Rz { theta, .. } | Gate::Crz { theta, .. } | Gate::Ccrz { theta, .. } => {
                vec![*theta]
            }
            Gate::U3 {
                theta, phi, lambda, ..
            } => vec![*theta, *phi, *lambda],
            _ => Vec::new(),
        }
    }

    /// Distinct qubits and finite angles.
    pub fn is_well_formed(&self) -> bool {
        let qs = self.qubits();
        let distinct = qs.iter().enumerate().all(|(i, q)| !qs[..i].contains(q));
        let finite = self.angles().iter().all(|a| a.is_finite());
        let shaped = match self {
            Gate::Unitary {
                targets, matrix, ..
            } => matrix.is_square() && matrix.rows() == 1usize << targets.len(),
            Gate::Lookup { address, table, .. } => table.len() <= 1usize << address.len(),
            _ => true,
        };
        distinct && finite && shaped
    }

    pub fn remap(&self, map: &[usize]) -> Gate {
        let m = |q: &usize| map[*q];
        match self {
            Gate::H(q) => Gate::H(m(q)),
            Gate::X(q) => Gate::X(m(q)),
            Gate::S(q) => Gate::S(m(q)),
            Gate::Sdg(q) => Gate::Sdg(m(q)),
            Gate::Rz { target, theta } => Gate::Rz {
                target: m(target),
                theta: *theta,
            },
            Gate::U3 {
                target,
                theta,
                phi,
                lambda,
            } => Gate::U3 {
                target: m(target),
                theta: *theta,
                phi: *phi,
                lambda: *lambda,
            },
            Gate::Cx { control, target } => Gate::Cx {
                control: m(control),
                target: m(target),
            },
            Gate::Ccx { controls, target } => Gate::Ccx {
                controls: [m(&controls[0]), m(&controls[1])],
                target: m(target),
            },
            Gate::Swap(a, b) => Gate::Swap(m(a), m(b)),
            Gate::Cswap { control, a, b } => Gate::Cswap {
                control: m(control),
                a: m(a),
                b: m(b),
            },
            Gate::Ch { control, target } => Gate::Ch {
                control: m(control),
                target: m(target),
            },
            Gate::Crz {
                control,
                target,
                theta,
            } => Gate::Crz {
                control: m(control),
                target: m(target),
                theta: *theta,
            },
            Gate::Ccrz {
                controls,
                target,
                theta,
            } => Gate::Ccrz {
                controls: [m(&controls[0]), m(&controls[1])],
                target: m(target),
                theta: *theta,
            },
            Gate::Unitary {
                controls,
                targets,
                matrix,
            } => Gate::Unitary {
                controls: controls.iter().map(m).collect(),
                targets: targets.iter().map(m).collect(),
                matrix: matrix.clone(),
            },
            Gate::Lookup {
                address,
                target,
                table,
            } => Gate::Lookup {
                address: address.iter().map(m).collect(),
                target: target.iter().map(m).collect(),
                table: table.clone(),
            },
        }
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::S(q) => Gate::Sdg(*q),
            Gate::Sdg(q) => Gate::S(*q),
            Gate::Rz { target, theta } => Gate::Rz {
                target: *target,
                theta: -theta,
            },
            Gate::U3 {
                target,
                theta,
                phi,
                lambda,
            } => Gate::U3 {
                target: *target,
                theta: -theta,
                phi: -lambda,
                lambda: -phi,
            },
            Gate::Crz {
                control,
                target,
                theta,
            } => Gate::Crz {
                control: *control,
                target: *target,
                theta: -theta,
            },
            Gate::Ccrz {
                controls,
                target,
                theta,
            } => Gate::Ccrz {
                controls: *controls,
                target: *target,
                theta: -theta,
            },
            Gate::Unitary {
                controls,
                targets,
                matrix,
            } => Gate::Unitary {
                controls: controls.clone(),
                targets: targets.clone(),
                matrix: matrix.adjoint(),
            },
            other => other.clone(),
        }
    }

    pub(crate) fn kernel(&self) -> Kernel {
        use Kernel::*;
        let single = |controls: Vec<usize>, target: usize, m: Matrix| Single {
            controls,
            target,
            m: m2(&m),
        };
        match self {
            Gate::H(q) => single(vec![], *q, linalg::hadamard()),
            Gate::X(q) => single(vec![], *q, linalg::pauli_x()),
            Gate::S(q) => single(vec![], *q, linalg::phase_s()),
            Gate::Sdg(q) => single(vec![], *q, linalg::phase_s().adjoint()),
            Gate::Rz { target, theta } => single(vec![], *target, linalg::rz(*theta)),
            Gate::U3 {
                target,
                theta,
                phi,
                lambda,
            } => single(vec![], *target, u3_matrix(*theta, *phi, *lambda)),
            Gate::Cx { control, target } => single(vec![*control], *target, linalg::pauli_x()),
            Gate::Ccx { controls, target } => single(controls.to_vec(), *target, linalg::pauli_x()),
            Gate::Ch { control, target } => single(vec![*control], *target, linalg::hadamard()),
            Gate::Crz {
                control,
                target,
                theta,
            } => single(vec![*control], *target, linalg::rz(*theta)),
            Gate::Ccrz {
                controls,
                target,
                theta,
            } => single(controls.to_vec(), *target, linalg::rz(*theta)),
            Gate::Swap(a, b) => Swap {
                controls: vec![],
                a: *a,
                b: *b,
            },
            Gate::Cswap { control, a, b } => Swap {
                controls: vec![*control],
                a: *a,
                b: *b,
            },
            Gate::Unitary {
                controls,
                targets,
                matrix,
            } => {
                if targets.len() == 1 {
                    Single {
                        controls: controls.clone(),
                        target: targets[0],
                        m: m2(matrix),
                    }
                } else {
                    Dense {
                        controls: controls.clone(),
                        targets: targets.clone(),
                        m: matrix.clone(),
                    }
                }
            }
            Gate::Lookup {
                address,
                target,
                table,
            } => Lookup {
                address: address.clone(),
                target: target.clone(),
                table: table.clone(),
            },
        }
    }

    /// Matrix of the gate on its own qubits in [`Gate::qubits`] order.
    pub fn local_matrix(&self) -> Matrix {
        let qs = self.qubits();
        let max = qs.iter().copied().max().unwrap_or(0);
        let mut map = vec![0usize; max + 1];
        for (i, q) in qs.iter().enumerate() {
            map[*q] = i;
        }
        let mut circuit = super::QuantumCircuit::new(qs.len());
        circuit.push(self.remap(&map));
        circuit.unitary()
    }
}
