#![no_std]
//! Graph label selection: pick at most `k` vertices to label so that every
//! unlabeled region stays well connected to the labels.
//!
//! The pipeline decomposes a graph into a weighted binary tree, solves the
//! leaf-label problem on the tree exactly with a flow-gadget dynamic program
//! wrapped in an exact rational threshold search, and evaluates the chosen
//! labels on the original graph.

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bisect;
pub mod decompose;
pub mod dp;
pub mod error;
pub mod eval;
pub mod flow;
pub mod graph;
pub mod importance;
pub mod ratio;
pub mod select;
pub mod spectral;
pub mod tree;

pub use bisect::{BisectMethod, Partitioner};
pub use error::{Error, Result};
pub use graph::{VertexSet, WeightedGraph};
pub use importance::{Importance, ImportanceSpec};
pub use ratio::{Objective, Ratio};
pub use select::{gls_pipeline, select_labels, PipelineOptions, Selection};
pub use tree::{DecompTree, Weight};
