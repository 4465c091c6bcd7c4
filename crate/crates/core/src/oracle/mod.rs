//! QRAM-backed oracle circuits for the closest-vector formulation of the
//! tasks, and their gate counts.
//!
//! Table reads are single [`Gate::Lookup`](crate::qsim::Gate::Lookup)
//! gates: a classically indexed write into an ancilla register. Reports
//! charge each written bit `log2 M`, the depth of a bucket-brigade read.

mod babi;
mod counts;
mod primitives;
mod tables;
mod w;

pub use babi::{babi_oracles, BabiOracles};
pub use counts::{
    binary_mux_noun_cswaps, fit_growth, fit_linear, gate_count, multiplexer_sweep, naive_mux_ccx,
    oracle_w_sweep, GateCountReport, GrowthFit, LinearFit, MuxSweepRow, Prediction, Primitive,
    ORACLE_W_CONSTANT, PANSATZ_CONSTANT,
};
pub use primitives::{
    angle_code, angle_register_value, binary_mux_gates, code_angle, controlled, mcx_gates,
    multi_controlled, mux_code, mux_levels, mux_permute, naive_mux_gates, noun_cswap, pcrz_gates,
    register_bits, synth_multiplexer, synth_naive_select, synth_pcrz, synth_unary_iteration,
    unary_iteration, MuxVariant, SelectLayout,
};
pub use tables::{
    build_qram_tables, build_qram_tables_with, corpus_dims, index_levels, AnsatzFamily, OracleDims,
    QramTableSet,
};
pub use w::{
    nounmux_gates, pansatz_gates, pcansatz_gates, synth_oracle_w, synth_pansatz, verify_oracle_w,
    OracleCheck, OracleLayout,
};

use alloc::string::String;

use crate::compiler::AnsatzKind;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("empty corpus")]
    Empty,
    #[error("invalid bounds {0}")]
    Dims(String),
    #[error("{what} = {value} exceeds the bound {max}")]
    Bound {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("wire dimension {found}, expected {expected}")]
    WireDim { expected: usize, found: usize },
    #[error("width {width} uses {found:?}, earlier boxes used {expected:?}")]
    Family {
        width: usize,
        found: AnsatzKind,
        expected: AnsatzKind,
    },
    #[error("text {text}: {reason}")]
    Text { text: usize, reason: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("table shapes do not match the bounds")]
    TableShape,
}
