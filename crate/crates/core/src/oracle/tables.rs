use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use super::primitives::{angle_code, code_angle, mux_code, mux_levels, mux_permute, register_bits};
use super::OracleError;
use crate::compiler::{template_gates, AnsatzKind, CompiledText, Role};

/// Bounds a corpus is laid out against: `M` texts, `w` boxes per text,
/// `n` nouns, boxes of at most `d` wires of dimension `N`, angles at
/// precision `P`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleDims {
    pub texts: usize,
    pub boxes: usize,
    pub nouns: usize,
    pub arity: usize,
    pub wire_dim: usize,
    pub precision: u32,
}

impl OracleDims {
    pub fn qubits_per_wire(&self) -> usize {
        self.wire_dim.trailing_zeros() as usize
    }

    /// Widest ansatz in qubits.
    pub fn max_width(&self) -> usize {
        self.arity * self.qubits_per_wire()
    }

    pub fn text_bits(&self) -> usize {
        register_bits(self.texts)
    }

    pub fn index_bits(&self) -> usize {
        register_bits(self.nouns)
    }

    pub fn angle_bits(&self) -> usize {
        self.precision as usize + 1
    }

    pub fn width_bits(&self) -> usize {
        register_bits(self.max_width())
    }

    fn check(&self) -> Result<(), OracleError> {
        let ok = self.texts >= 1
            && self.nouns >= 1
            && self.arity >= 1
            && self.arity <= self.nouns
            && self.wire_dim >= 2
            && self.wire_dim.is_power_of_two()
            && self.precision >= 1
            && self.precision <= 60;
        if ok {
            Ok(())
        } else {
            Err(OracleError::Dims(format!("{self:?}")))
        }
    }
}

/// Rotational template used for every ansatz of a given width (in qubits).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzFamily {
    pub widths: BTreeMap<usize, (AnsatzKind, usize)>,
}

impl AnsatzFamily {
    /// Euler rotations at width one, one Sim9 layer everywhere else.
    pub fn standard(max_width: usize) -> Self {
        let mut widths = BTreeMap::new();
        widths.insert(1, (AnsatzKind::Euler, 1));
        for w in 2..=max_width {
            widths.insert(w, (AnsatzKind::Sim9, 1));
        }
        AnsatzFamily { widths }
    }

    pub fn get(&self, width: usize) -> Option<(AnsatzKind, usize)> {
        self.widths.get(&width).copied()
    }

    pub fn param_count(&self, width: usize) -> usize {
        self.get(width).map_or(0, |(k, l)| k.param_count(width, l))
    }

    /// Largest parameter count over all widths.
    pub fn max_params(&self) -> usize {
        self.widths
            .keys()
            .map(|w| self.param_count(*w))
            .max()
            .unwrap_or(0)
    }

    /// Largest gate count of any template.
    pub fn max_gates(&self) -> usize {
        self.widths
            .iter()
            .map(|(w, (k, l))| template_gates(*k, *w, *l).len())
            .max()
            .unwrap_or(0)
    }

    /// Family read off a corpus: each width must always use the same
    /// template, and width one must be Euler so zero angles pad.
    pub fn from_corpus(corpus: &[CompiledText]) -> Result<Self, OracleError> {
        let mut widths = BTreeMap::new();
        widths.insert(1, (AnsatzKind::Euler, 1));
        for t in corpus {
            for a in &t.applications {
                let width = a.registers.len() * t.qubits_per_wire;
                let kl = (a.ansatz.kind, a.ansatz.layers);
                if !a.ansatz.kind.is_rotational() {
                    return Err(OracleError::Unsupported(format!(
                        "word {:?} has a dense ansatz",
                        a.word
                    )));
                }
                match widths.get(&width) {
                    Some(prev) if *prev != kl => {
                        return Err(OracleError::Family {
                            width,
                            found: kl.0,
                            expected: prev.0,
                        });
                    }
                    _ => {
                        widths.insert(width, kl);
                    }
                }
            }
        }
        Ok(AnsatzFamily { widths })
    }
}

/// One ansatz slot of one text, before encoding.
#[derive(Clone, Debug, PartialEq)]
struct Slot {
    width: usize,
    registers: Vec<usize>,
    params: Vec<f64>,
}

/// Contents of the Param, Width and Index tables.
///
/// Entries are indexed `[box][…][text]`. Widths are in qubits. Parameter
/// entries hold fixed-point codes `c` standing for the angle `c·π/2^P`.
/// Index entries hold the multiplexer level bits (bit `l` drives level
/// `l`) that bring argument `j` to position `j` once arguments `0..j`
/// are in place.
#[derive(Clone, Debug, PartialEq)]
pub struct QramTableSet {
    pub dims: OracleDims,
    pub family: AnsatzFamily,
    pub max_params: usize,
    pub widths: Vec<Vec<usize>>,
    pub params: Vec<Vec<Vec<u64>>>,
    pub indices: Vec<Vec<Vec<u64>>>,
    /// Per text, the summed operator-norm error of its rotations after
    /// rounding to the fixed-point grid.
    pub rotation_error: Vec<f64>,
}

impl QramTableSet {
    /// Tables for `dims.texts` texts that are all identity padding.
    pub fn zeros(dims: OracleDims, family: AnsatzFamily) -> Self {
        let m = dims.texts;
        let max_params = family.max_params();
        QramTableSet {
            dims,
            max_params,
            family,
            widths: vec![vec![1; m]; dims.boxes],
            params: vec![vec![vec![0; m]; max_params]; dims.boxes],
            indices: vec![vec![vec![0; m]; dims.arity]; dims.boxes],
            rotation_error: vec![0.0; m],
        }
    }

    pub fn angle(&self, i: usize, j: usize, k: usize) -> f64 {
        code_angle(self.params[i][j][k], self.dims.precision)
    }
}

fn slots(t: &CompiledText, k: usize) -> Result<Vec<Slot>, OracleError> {
    if !t.circuit.postselect.is_empty() {
        return Err(OracleError::Text {
            text: k,
            reason: "post-selection (effects or cups) has no oracle form".into(),
        });
    }
    let mut out = Vec::new();
    let mut gates = 0;
    for a in &t.applications {
        if a.adjoint {
            return Err(OracleError::Text {
                text: k,
                reason: format!("daggered box {:?}", a.word),
            });
        }
        if a.role == Role::Effect {
            return Err(OracleError::Text {
                text: k,
                reason: format!("effect {:?}", a.word),
            });
        }
        let width = a.registers.len() * t.qubits_per_wire;
        gates += a.ansatz.gates(&(0..width).collect::<Vec<_>>()).len();
        out.push(Slot {
            width,
            registers: a.registers.clone(),
            params: a.ansatz.params.clone(),
        });
    }
    if gates != t.circuit.gates.len() {
        return Err(OracleError::Text {
            text: k,
            reason: "circuit has gates outside word boxes (caps)".into(),
        });
    }
    Ok(out)
}

/// Smallest bounds that fit `corpus`.
pub fn corpus_dims(corpus: &[CompiledText], precision: u32) -> Result<OracleDims, OracleError> {
    let first = corpus.first().ok_or(OracleError::Empty)?;
    let wire_dim = 1usize << first.qubits_per_wire;
    let boxes = corpus
        .iter()
        .map(|t| t.applications.len())
        .max()
        .unwrap_or(0);
    let nouns = corpus
        .iter()
        .map(|t| t.registers.len())
        .max()
        .unwrap_or(1)
        .max(1);
    let arity = corpus
        .iter()
        .flat_map(|t| t.applications.iter().map(|a| a.registers.len()))
        .max()
        .unwrap_or(1)
        .max(1);
    Ok(OracleDims {
        texts: corpus.len(),
        boxes,
        nouns,
        arity,
        wire_dim,
        precision,
    })
}

/// Tables at the smallest bounds that fit `corpus`.
pub fn build_qram_tables(
    corpus: &[CompiledText],
    precision: u32,
) -> Result<QramTableSet, OracleError> {
    let dims = corpus_dims(corpus, precision)?;
    build_qram_tables_with(corpus, dims, AnsatzFamily::from_corpus(corpus)?)
}

/// Tables laid out against explicit bounds and a template family. Texts
/// with fewer than `w` boxes are padded with zero-angle width-one slots.
pub fn build_qram_tables_with(
    corpus: &[CompiledText],
    dims: OracleDims,
    family: AnsatzFamily,
) -> Result<QramTableSet, OracleError> {
    dims.check()?;
    if corpus.is_empty() {
        return Err(OracleError::Empty);
    }
    if corpus.len() > dims.texts {
        return Err(OracleError::Bound {
            what: "texts",
            value: corpus.len(),
            max: dims.texts,
        });
    }
    if family.get(1).map(|f| f.0) != Some(AnsatzKind::Euler) {
        return Err(OracleError::Unsupported(
            "width-one template must be Euler so zero angles pad".into(),
        ));
    }
    let mut tables = QramTableSet::zeros(dims, family);
    let (n, precision) = (dims.nouns, dims.precision);
    for (k, t) in corpus.iter().enumerate() {
        if 1usize << t.qubits_per_wire != dims.wire_dim {
            return Err(OracleError::WireDim {
                expected: dims.wire_dim,
                found: 1 << t.qubits_per_wire,
            });
        }
        if t.registers.len() > n {
            return Err(OracleError::Bound {
                what: "nouns",
                value: t.registers.len(),
                max: n,
            });
        }
        let s = slots(t, k)?;
        if s.len() > dims.boxes {
            return Err(OracleError::Bound {
                what: "boxes",
                value: s.len(),
                max: dims.boxes,
            });
        }
        let mut err = 0.0;
        for (i, slot) in s.iter().enumerate() {
            if slot.registers.len() > dims.arity {
                return Err(OracleError::Bound {
                    what: "arity",
                    value: slot.registers.len(),
                    max: dims.arity,
                });
            }
            let (kind, layers) = tables
                .family
                .get(slot.width)
                .ok_or(OracleError::Unsupported(format!(
                    "no template for width {}",
                    slot.width
                )))?;
            if kind.param_count(slot.width, layers) != slot.params.len() {
                return Err(OracleError::Text {
                    text: k,
                    reason: format!("box {i} does not match the {} template", kind.name()),
                });
            }
            tables.widths[i][k] = slot.width;
            for (j, theta) in slot.params.iter().enumerate() {
                let c = angle_code(*theta, precision);
                tables.params[i][j][k] = c;
                let d = (code_angle(c, precision)
                    - num_traits::Euclid::rem_euclid(theta, &(2.0 * core::f64::consts::PI)))
                .abs();
                // Rz(a) and Rz(b) are |a−b|/2 apart, up to the sign of a 2π wrap
                err += d.min(2.0 * core::f64::consts::PI - d) / 2.0;
            }
            // forward-propagate earlier placements through the permutation
            let mut order: Vec<usize> = (0..n).collect();
            for (j, r) in slot.registers.iter().enumerate() {
                let p = order
                    .iter()
                    .position(|x| x == r)
                    .expect("register within noun range")
                    - j;
                let code = mux_code(n - j, p);
                mux_permute(&mut order[j..], code);
                tables.indices[i][j][k] = code;
            }
        }
        tables.rotation_error[k] = err;
    }
    Ok(tables)
}

/// Level bits the index register needs for argument `j`.
pub fn index_levels(dims: &OracleDims, j: usize) -> usize {
    mux_levels(dims.nouns - j)
}
