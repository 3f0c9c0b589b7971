//! Label selection on a decomposition tree and the end-to-end pipeline.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::time::Duration;

use crate::bisect::{BisectMethod, Partitioner};
use crate::decompose::hierarchical_decomposition;
use crate::dp::{backtrack, dp_solve, min_sinks, min_sinks_streaming, ScaledInstance};
use crate::error::{Error, Result};
use crate::eval::eval_graph_objective;
use crate::graph::{VertexSet, WeightedGraph};
use crate::importance::{Importance, ImportanceSpec};
use crate::ratio::{max_feasible_threshold, Objective, Ratio};
use crate::tree::{perfect_tree_sparsifier, DecompTree};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub decompose: Duration,
    pub select: Duration,
    pub evaluate: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selection {
    /// Original ids of the labeled vertices, in vertex-index order.
    pub labels: Vec<u64>,
    pub label_vertices: VertexSet,
    pub k_requested: usize,
    pub k_used: usize,
    pub tree_value: Objective,
    pub graph_value: Option<Objective>,
    pub method: Option<String>,
    pub seed: Option<u64>,
    pub timings: PhaseTimings,
}

/// The feasibility predicate of the threshold search: can at most `k`
/// labeled leaves absorb demand `tau f(v)` from every leaf?
pub fn budget_feasible(tree: &DecompTree, tau: Ratio, k: usize, f: &Importance) -> Result<bool> {
    let inst = ScaledInstance::new(tree, tau, f, k)?;
    Ok(min_sinks_streaming(&inst)?.is_some())
}

/// Picks at most `k` leaves maximizing the tree objective exactly.
pub fn select_labels(tree: &DecompTree, k: usize, f: &Importance) -> Result<Selection> {
    if k < 1 {
        return Err(Error::InvalidParameter(String::from("budget k must be at least 1")));
    }
    let n = tree.num_leaves();
    let total = f.total(n)?;
    if total == 0 {
        return Err(Error::InvalidParameter(String::from("total importance is zero")));
    }
    if !tree.is_binary() {
        let bad = (0..tree.len()).find(|&v| !matches!(tree.node(v).children.len(), 0 | 2)).unwrap_or(0);
        return Err(Error::NonBinary { node: bad, children: tree.node(bad).children.len() });
    }
    let (labels, value) = if k >= n {
        (VertexSet::new(0..n), Objective::Infinite)
    } else {
        let upper = tree.total_finite_weight();
        let value = max_feasible_threshold(total, upper, |tau| budget_feasible(tree, tau, k, f))?;
        let tau = match value {
            Objective::Finite(r) => r,
            Objective::Infinite => Ratio::from_integer(upper as i128 + 1),
        };
        let inst = ScaledInstance::new(tree, tau, f, k)?;
        let table = dp_solve(&inst)?;
        let used = min_sinks(&table).ok_or_else(|| Error::Reconstruction(format!("threshold {tau} is infeasible")))?;
        (backtrack(&inst, &table, used)?, value)
    };
    Ok(Selection {
        labels: labels.iter().map(|v| tree.vertex_ids()[v]).collect(),
        k_used: labels.len(),
        label_vertices: labels,
        k_requested: k,
        tree_value: value,
        graph_value: None,
        method: None,
        seed: None,
        timings: PhaseTimings::default(),
    })
}

/// Builds the decomposition tree for `g`: the exact sparsifier when `g` is a
/// tree, recursive bisection otherwise.
pub fn decompose(
    g: &WeightedGraph,
    method: &BisectMethod,
    partitioner: Option<&mut dyn Partitioner>,
) -> Result<DecompTree> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if g.is_tree() {
        return perfect_tree_sparsifier(g);
    }
    let mut bisector = method.bisector(partitioner)?;
    hierarchical_decomposition(g, bisector.as_mut())
}

/// Options for [`gls_pipeline`].
pub struct PipelineOptions<'a> {
    pub k: usize,
    pub method: BisectMethod,
    pub importance: ImportanceSpec,
    pub evaluate_graph: bool,
    pub partitioner: Option<&'a mut dyn Partitioner>,
}

/// Decompose, select and optionally evaluate on the graph.
pub fn gls_pipeline(g: &WeightedGraph, opts: PipelineOptions<'_>) -> Result<Selection> {
    gls_pipeline_with_clock(g, opts, &|| Duration::ZERO)
}

/// [`gls_pipeline`] with phase timings taken from `now`.
pub fn gls_pipeline_with_clock(
    g: &WeightedGraph,
    opts: PipelineOptions<'_>,
    now: &dyn Fn() -> Duration,
) -> Result<Selection> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if opts.k < 1 || opts.k > g.n() {
        return Err(Error::InvalidParameter(format!("budget k = {} outside 1..={}", opts.k, g.n())));
    }
    let f = opts.importance.resolve(g)?;
    let t0 = now();
    let tree = decompose(g, &opts.method, opts.partitioner)?;
    let t1 = now();
    let mut sel = select_labels(&tree, opts.k, &f)?;
    let t2 = now();
    if opts.evaluate_graph {
        sel.graph_value = Some(eval_graph_objective(g, &sel.label_vertices, &f)?);
    }
    let t3 = now();
    sel.method = Some(opts.method.descriptor());
    sel.seed = Some(opts.method.seed);
    sel.timings = PhaseTimings { decompose: t1 - t0, select: t2 - t1, evaluate: t3 - t2 };
    Ok(sel)
}
