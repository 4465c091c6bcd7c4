//! Gate counts of synthesized circuits against their closed forms.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
#[allow(unused_imports)] // float math comes from libm unless std is linked
use num_traits::Float;

use super::primitives::{mux_levels, synth_multiplexer, MuxVariant};
use super::tables::{AnsatzFamily, OracleDims, QramTableSet};
use super::w::synth_oracle_w;
use crate::qsim::{Gate, QuantumCircuit};

/// What a circuit is, so the matching closed forms can be attached.
#[derive(Clone, Debug, PartialEq)]
pub enum Primitive {
    Pcrz {
        precision: u32,
    },
    Multiplexer {
        nouns: usize,
        wire_dim: usize,
        variant: MuxVariant,
    },
    /// Select scaffold with an empty payload.
    UnaryIteration {
        controls: usize,
    },
    PAnsatz {
        dims: OracleDims,
        family: AnsatzFamily,
    },
    OracleW {
        dims: OracleDims,
        family: AnsatzFamily,
    },
    Other,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Prediction {
    pub name: String,
    pub predicted: f64,
    pub actual: f64,
    /// `None` for an exact closed form, otherwise the constant the
    /// big-O bound is allowed.
    pub constant: Option<f64>,
}

impl Prediction {
    pub fn holds(&self) -> bool {
        match self.constant {
            None => (self.predicted - self.actual).abs() < 0.5,
            Some(c) => self.actual <= c * self.predicted,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GateCountReport {
    pub counts: BTreeMap<String, usize>,
    pub total: usize,
    pub qubits: usize,
    pub ancillas: usize,
    /// Table bits written by lookups; each costs `log2 M` oracle calls.
    pub lookup_bits: usize,
    /// Gates other than lookups plus `lookup_bits · log2 M`.
    pub cost: f64,
    pub predictions: Vec<Prediction>,
    /// Predictions that do not hold.
    pub flags: Vec<String>,
}

impl GateCountReport {
    pub fn count(&self, name: &str) -> usize {
        self.counts.get(name).copied().unwrap_or(0)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.counts {
            s.push_str(&format!("count\t{k}\t{v}\n"));
        }
        s.push_str(&format!(
            "total\t{}\nqubits\t{}\nancillas\t{}\n",
            self.total, self.qubits, self.ancillas
        ));
        s.push_str(&format!(
            "lookup_bits\t{}\ncost\t{}\n",
            self.lookup_bits, self.cost
        ));
        for p in &self.predictions {
            let c = p
                .constant
                .map_or("exact".to_string(), |c| format!("<= {c} x"));
            s.push_str(&format!(
                "predict\t{}\t{}\t{}\t{c}\t{}\n",
                p.name,
                p.predicted,
                p.actual,
                if p.holds() { "ok" } else { "deviates" }
            ));
        }
        for f in &self.flags {
            s.push_str(&format!("flag\t{f}\n"));
        }
        s
    }
}

/// Noun CSWAPs of the halving multiplexer: each level retires
/// `floor(len/2)` nouns, so the sum telescopes to `n − 1`.
pub fn binary_mux_noun_cswaps(n: usize) -> usize {
    n.saturating_sub(1)
}

/// CCX count of the naive multiplexer: `(n−1)·log2 N` Fredkins, each with
/// a `(b+1)`-control X of `2(b+1) − 3` Toffolis.
pub fn naive_mux_ccx(n: usize, wire_dim: usize) -> usize {
    let q = wire_dim.trailing_zeros() as usize;
    let b = mux_levels(n);
    if n < 2 {
        return 0;
    }
    (n - 1) * q * (2 * b - 1)
}

/// Bits of a text index register, as a float for the formulas.
fn log_m(d: &OracleDims) -> f64 {
    d.text_bits() as f64
}

pub const PANSATZ_CONSTANT: f64 = 4.0;
pub const ORACLE_W_CONSTANT: f64 = 4.0;

fn predictions(p: &Primitive, counts: &BTreeMap<String, usize>, cost: f64) -> Vec<Prediction> {
    let get = |k: &str| counts.get(k).copied().unwrap_or(0) as f64;
    let exact = |name: &str, predicted: usize, actual: f64| Prediction {
        name: name.into(),
        predicted: predicted as f64,
        actual,
        constant: None,
    };
    match p {
        Primitive::Pcrz { precision } => {
            alloc::vec![exact("CCRZ", *precision as usize + 1, get("CCRZ"))]
        }
        Primitive::Multiplexer {
            nouns,
            wire_dim,
            variant,
        } => {
            let q = wire_dim.trailing_zeros() as usize;
            match variant {
                MuxVariant::Binary => alloc::vec![
                    exact(
                        "noun_cswap",
                        binary_mux_noun_cswaps(*nouns),
                        get("CSWAP") / q as f64
                    ),
                    exact(
                        "qubit_cswap",
                        binary_mux_noun_cswaps(*nouns) * q,
                        get("CSWAP")
                    ),
                ],
                MuxVariant::Naive => alloc::vec![
                    exact("CCX", naive_mux_ccx(*nouns, *wire_dim), get("CCX")),
                    exact("CX", 2 * nouns.saturating_sub(1) * q, get("CX")),
                ],
            }
        }
        Primitive::UnaryIteration { controls } => {
            let c = *controls;
            if c == 0 {
                return Vec::new();
            }
            alloc::vec![
                exact("CCX", (1 << (c + 1)) - 4, get("CCX")),
                exact("CX", (1 << c) - 2, get("CX")),
                exact("X", (1 << (c + 1)) - 2, get("X")),
            ]
        }
        Primitive::PAnsatz { dims, family } => {
            let (ag, ap) = (family.max_gates() as f64, family.max_params() as f64);
            let d = dims.max_width() as f64;
            let p = dims.precision as f64;
            alloc::vec![Prediction {
                name: "d(A_g + P log M A_p)".into(),
                predicted: d * (ag + p * log_m(dims) * ap),
                actual: cost,
                constant: Some(PANSATZ_CONSTANT),
            }]
        }
        Primitive::OracleW { dims, family } => {
            let ag = family.max_gates() as f64;
            let (w, d, n) = (
                dims.boxes as f64,
                dims.max_width() as f64,
                dims.nouns as f64,
            );
            let (logn_wire, p) = (dims.qubits_per_wire() as f64, dims.precision as f64);
            alloc::vec![Prediction {
                name: "w d log M (n log N + P A_g)".into(),
                predicted: w * d * log_m(dims) * (n * logn_wire + p * ag),
                actual: cost,
                constant: Some(ORACLE_W_CONSTANT),
            }]
        }
        Primitive::Other => Vec::new(),
    }
}

/// Count gates of `qc` and attach the closed forms for `primitive`.
/// `ancillas` is the number of clean work qubits in the layout.
pub fn gate_count(qc: &QuantumCircuit, primitive: &Primitive, ancillas: usize) -> GateCountReport {
    let counts: BTreeMap<String, usize> = qc
        .gate_histogram()
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let total = counts.values().sum();
    let lookup_bits: usize = qc
        .gates
        .iter()
        .map(|g| match g {
            Gate::Lookup { target, .. } => target.len(),
            _ => 0,
        })
        .sum();
    let address = qc
        .gates
        .iter()
        .find_map(|g| match g {
            Gate::Lookup { address, .. } => Some(address.len()),
            _ => None,
        })
        .unwrap_or(0);
    let lookups = counts.get("LOOKUP").copied().unwrap_or(0);
    let cost = (total - lookups) as f64 + (lookup_bits * address) as f64;
    let predictions = predictions(primitive, &counts, cost);
    let flags = predictions
        .iter()
        .filter(|p| !p.holds())
        .map(|p| format!("{}: predicted {} actual {}", p.name, p.predicted, p.actual))
        .collect();
    GateCountReport {
        counts,
        total,
        qubits: qc.qubit_count,
        ancillas,
        lookup_bits,
        cost,
        predictions,
        flags,
    }
}

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_linear(xs: &[f64], ys: &[f64]) -> LinearFit {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_tot: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r2 = if ss_tot > 0.0 {
        1.0 - ss_res / ss_tot
    } else {
        1.0
    };
    LinearFit {
        slope,
        intercept,
        r2,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MuxSweepRow {
    pub variant: MuxVariant,
    pub nouns: usize,
    pub wire_dim: usize,
    pub total: usize,
}

impl MuxSweepRow {
    /// `n · log2 N`.
    pub fn linear_size(&self) -> f64 {
        (self.nouns * self.wire_dim.trailing_zeros() as usize) as f64
    }

    /// `n · log2 N · log2 n`.
    pub fn superlinear_size(&self) -> f64 {
        self.linear_size() * (self.nouns as f64).log2()
    }
}

pub fn multiplexer_sweep(nouns: &[usize], wire_dims: &[usize]) -> Vec<MuxSweepRow> {
    let mut rows = Vec::new();
    for variant in [MuxVariant::Binary, MuxVariant::Naive] {
        for n in nouns {
            for dim in wire_dims {
                let total = synth_multiplexer(*n, *dim, variant).gates.len();
                rows.push(MuxSweepRow {
                    variant,
                    nouns: *n,
                    wire_dim: *dim,
                    total,
                });
            }
        }
    }
    rows
}

/// Regression of one variant's totals against both growth models.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthFit {
    pub variant: MuxVariant,
    pub linear: LinearFit,
    pub superlinear: LinearFit,
    /// Spread of `total / (n log N)` over the sweep: at most 1 plus
    /// rounding for linear growth, increasing for superlinear.
    pub normalized: Vec<f64>,
}

impl GrowthFit {
    /// Whether the normalized totals keep growing with `n`.
    pub fn normalized_increasing(&self) -> bool {
        self.normalized.windows(2).all(|w| w[1] > w[0])
    }
}

/// Fit each variant; rows of one wire dimension give the cleanest trend.
pub fn fit_growth(rows: &[MuxSweepRow], wire_dim: usize) -> Vec<GrowthFit> {
    let mut out = Vec::new();
    for variant in [MuxVariant::Binary, MuxVariant::Naive] {
        let sel: Vec<&MuxSweepRow> = rows
            .iter()
            .filter(|r| r.variant == variant && r.wire_dim == wire_dim && r.nouns >= 2)
            .collect();
        let ys: Vec<f64> = sel.iter().map(|r| r.total as f64).collect();
        let lin: Vec<f64> = sel.iter().map(|r| r.linear_size()).collect();
        let sup: Vec<f64> = sel.iter().map(|r| r.superlinear_size()).collect();
        out.push(GrowthFit {
            variant,
            linear: fit_linear(&lin, &ys),
            superlinear: fit_linear(&sup, &ys),
            normalized: ys.iter().zip(&lin).map(|(y, x)| y / x).collect(),
        });
    }
    out
}

/// W gate totals and costs for each box count in `boxes`, other bounds
/// fixed. Counts do not depend on table contents, so zero tables are used.
pub fn oracle_w_sweep(
    dims: OracleDims,
    family: &AnsatzFamily,
    boxes: &[usize],
) -> Vec<(usize, usize, f64)> {
    boxes
        .iter()
        .map(|w| {
            let d = OracleDims { boxes: *w, ..dims };
            let (qc, lay) =
                synth_oracle_w(&QramTableSet::zeros(d, family.clone())).expect("zero tables fit");
            let r = gate_count(
                &qc,
                &Primitive::OracleW {
                    dims: d,
                    family: family.clone(),
                },
                lay.ancillas().len(),
            );
            (*w, r.total, r.cost)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::primitives::{synth_pcrz, synth_unary_iteration};
    use super::*;

    #[test]
    fn exact_forms() {
        let r = gate_count(&synth_pcrz(8), &Primitive::Pcrz { precision: 8 }, 0);
        assert_eq!(r.count("CCRZ"), 9);
        assert!(r.flags.is_empty());
        for n in [2usize, 3, 4, 5, 8, 16] {
            for dim in [2usize, 4] {
                for variant in [MuxVariant::Binary, MuxVariant::Naive] {
                    let qc = synth_multiplexer(n, dim, variant);
                    let r = gate_count(
                        &qc,
                        &Primitive::Multiplexer {
                            nouns: n,
                            wire_dim: dim,
                            variant,
                        },
                        0,
                    );
                    assert!(r.flags.is_empty(), "{n} {dim} {variant:?}: {:?}", r.flags);
                }
            }
        }
        for c in 1..=4 {
            let (qc, _) = synth_unary_iteration(c, &[]);
            let r = gate_count(&qc, &Primitive::UnaryIteration { controls: c }, c - 1);
            assert!(r.flags.is_empty(), "{:?}", r.flags);
        }
    }

    #[test]
    fn growth_separates_variants() {
        let rows = multiplexer_sweep(&[2, 4, 8, 16], &[2, 4]);
        for dim in [2, 4] {
            let fits = fit_growth(&rows, dim);
            let (bin, naive) = (&fits[0], &fits[1]);
            assert!(bin.linear.r2 > 0.999);
            assert!(!bin.normalized_increasing() || bin.normalized.last().unwrap() <= &1.0);
            assert!(naive.normalized_increasing());
            assert!(naive.superlinear.r2 > naive.linear.r2);
        }
    }

    #[test]
    fn oracle_linear_in_boxes() {
        let dims = OracleDims {
            texts: 4,
            boxes: 1,
            nouns: 4,
            arity: 2,
            wire_dim: 2,
            precision: 8,
        };
        let fam = AnsatzFamily::standard(2);
        let s = oracle_w_sweep(dims, &fam, &[1, 2, 3, 4]);
        let xs: Vec<f64> = s.iter().map(|r| r.0 as f64).collect();
        let ys: Vec<f64> = s.iter().map(|r| r.1 as f64).collect();
        let f = fit_linear(&xs, &ys);
        assert!(f.r2 > 1.0 - 1e-12 && f.intercept.abs() < 1e-6);
    }
}
