//! File formats, an external partitioner adapter and the benchmark harness
//! around [`gls_core`]. The `gls` binary is a thin layer over this crate.

pub mod bench;
pub mod edgelist;
pub mod error;
pub mod labels;
pub mod partitioner;
pub mod treefile;

pub use error::{CliError, Result};
