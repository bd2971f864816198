//! Extended distributed compressed sparse row (dCSR) storage for spiking
//! neural networks.
//!
//! A [`Network`] is a `k`-way partition of a directed graph whose vertices
//! (neurons) and edges (synapses) carry tuples of model state. Each partition
//! owns a contiguous range of global vertex indices, and every directed edge
//! is stored with its target vertex. On disk a network is a set of plain-text
//! files sharing a prefix (`.dist`, `.model`, and per partition `.adjcy.p`,
//! `.coord.p`, `.state.p`, `.event.p`); see [`io`].
//!
//! The crate also contains a voxel partitioner and redistribution
//! ([`partition`]), a seeded synthetic network generator ([`generator`]), and
//! a small clock-driven LIF simulator ([`sim`]) whose state checkpoints back
//! into the same file format.

pub mod error;
pub mod generator;
pub mod io;
pub mod model;
pub mod partition;
pub mod sim;
pub mod validate;

pub use error::{Error, Result};
pub use model::{
    Distribution, EdgeState, Event, InCsr, Model, ModelId, ModelKind, ModelTable, Network,
    PartitionBlock, Tuple, VertexState, NONE_MODEL,
};
pub use validate::{validate, Code, FileKind, ValidationReport, Violation};
