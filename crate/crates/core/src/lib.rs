//! Text circuits for quantum DisCoCirc models: a templated parser, a compiler
//! to gate-level circuits, a dense simulator, the model-native tasks,
//! numerical hardness checks and QRAM-backed oracle synthesis.
//!
//! The crate is `no_std` and needs only `alloc`; file formats and the
//! command-line driver live in `qdiscocirc-cli`.

#![no_std]
#![cfg_attr(test, allow(unused_imports))]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod compiler;
pub mod hardness;
pub mod ir;
pub mod linalg;
pub mod oracle;
pub mod parser;
pub mod qsim;
pub mod tasks;
