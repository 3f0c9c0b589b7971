//! Per-vertex importance weights.

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Resolved importance: every vertex weighs 1, or an explicit nonnegative
/// integer per vertex index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Importance {
    Uniform,
    PerVertex(Vec<u64>),
}

impl Importance {
    pub fn get(&self, v: usize) -> u64 {
        match self {
            Importance::Uniform => 1,
            Importance::PerVertex(f) => f[v],
        }
    }

    /// Checks that values exist for `n` vertices and returns their total.
    pub fn total(&self, n: usize) -> Result<u64> {
        match self {
            Importance::Uniform => Ok(n as u64),
            Importance::PerVertex(f) => {
                if f.len() != n {
                    return Err(Error::DimensionMismatch { expected: n, got: f.len() });
                }
                f.iter().try_fold(0u64, |acc, &x| acc.checked_add(x)).ok_or(Error::Overflow)
            }
        }
    }

    /// The values as a slice of length `n`.
    pub fn values(&self, n: usize) -> Cow<'_, [u64]> {
        match self {
            Importance::Uniform => Cow::Owned(alloc::vec![1; n]),
            Importance::PerVertex(f) => Cow::Borrowed(f),
        }
    }
}

/// How importance is chosen for a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImportanceSpec {
    Uniform,
    /// Unweighted degree, so that `f(C)` is the volume of `C`.
    Degree,
    /// Explicit values indexed by vertex.
    Values(Vec<u64>),
}

impl ImportanceSpec {
    pub fn resolve(&self, g: &WeightedGraph) -> Result<Importance> {
        let imp = match self {
            ImportanceSpec::Uniform => Importance::Uniform,
            ImportanceSpec::Degree => Importance::PerVertex((0..g.n()).map(|v| g.degree(v) as u64).collect()),
            ImportanceSpec::Values(f) => Importance::PerVertex(f.clone()),
        };
        if imp.total(g.n())? == 0 {
            return Err(Error::InvalidParameter(format!("total importance over {} vertices is zero", g.n())));
        }
        Ok(imp)
    }

    pub fn descriptor(&self) -> &'static str {
        match self {
            ImportanceSpec::Uniform => "uniform",
            ImportanceSpec::Degree => "degree",
            ImportanceSpec::Values(_) => "file",
        }
    }
}
