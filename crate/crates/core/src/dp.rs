//! Sink selection on a binary tree at a fixed threshold.
//!
//! `DP[v][k]` is the largest extra flow that can be pushed into the subtree
//! of `v` from above while every leaf below still routes its own demand,
//! using at most `k` labeled leaves as sinks. Values are scaled by the
//! threshold's denominator so the whole table is integral.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Add;

use crate::error::{Error, Result};
use crate::flow::Capacity;
use crate::graph::VertexSet;
use crate::importance::Importance;
use crate::ratio::Ratio;
use crate::tree::DecompTree;

/// An integer extended by both infinities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtScaled {
    NegInf,
    Fin(i128),
    PosInf,
}

impl ExtScaled {
    pub const ZERO: ExtScaled = ExtScaled::Fin(0);

    pub fn is_feasible(self) -> bool {
        self >= ExtScaled::ZERO
    }
}

impl Add for ExtScaled {
    type Output = ExtScaled;

    /// `NegInf` absorbs everything, `PosInf` absorbs finite values.
    fn add(self, rhs: ExtScaled) -> ExtScaled {
        use ExtScaled::*;
        match (self, rhs) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            // instance construction bounds every finite magnitude far below overflow
            (Fin(a), Fin(b)) => Fin(a + b),
        }
    }
}

/// Flow that can cross an edge of capacity `w` given what the subtree below
/// can absorb (`x >= 0`) or must export (`x < 0`).
pub fn edge_bound(w: Capacity, x: ExtScaled) -> ExtScaled {
    match w {
        Capacity::Inf => x,
        Capacity::Finite(w) => match x {
            ExtScaled::NegInf => ExtScaled::NegInf,
            ExtScaled::Fin(v) if v < -w => ExtScaled::NegInf,
            ExtScaled::Fin(v) if v <= w => x,
            _ => ExtScaled::Fin(w),
        },
    }
}

/// A tree with a threshold `tau = p / q` and importance, scaled to integers.
#[derive(Debug, Clone)]
pub struct ScaledInstance<'t> {
    tree: &'t DecompTree,
    tau: Ratio,
    k_max: usize,
    /// `p f(v)` per node, zero for internal nodes
    demand: Vec<i128>,
    /// `q w` for the edge above each node
    weight: Vec<Capacity>,
}

impl<'t> ScaledInstance<'t> {
    pub fn new(tree: &'t DecompTree, tau: Ratio, importance: &Importance, k_max: usize) -> Result<Self> {
        let (p, q) = (*tau.numer(), *tau.denom());
        if p < 0 {
            return Err(Error::InvalidParameter("negative threshold".into()));
        }
        importance.total(tree.num_leaves())?;
        let mut demand = vec![0i128; tree.len()];
        let mut weight = vec![Capacity::Inf; tree.len()];
        let mut magnitude: i128 = 0;
        for (i, node) in tree.nodes().iter().enumerate() {
            if let Some(v) = node.leaf_label {
                demand[i] = p.checked_mul(importance.get(v) as i128).ok_or(Error::Overflow)?;
                magnitude = magnitude.checked_add(demand[i]).ok_or(Error::Overflow)?;
            }
            if node.parent.is_some() {
                weight[i] = Capacity::scaled(node.parent_edge_weight, q)?;
                if let Capacity::Finite(w) = weight[i] {
                    magnitude = magnitude.checked_add(w).ok_or(Error::Overflow)?;
                }
            }
        }
        if magnitude > i128::MAX / 4 {
            return Err(Error::Overflow);
        }
        Ok(ScaledInstance { tree, tau, k_max, demand, weight })
    }

    pub fn tree(&self) -> &'t DecompTree {
        self.tree
    }

    pub fn tau(&self) -> Ratio {
        self.tau
    }

    pub fn k_max(&self) -> usize {
        self.k_max
    }

    fn leaf_row(&self, v: usize, len: usize) -> Vec<ExtScaled> {
        let mut row = vec![ExtScaled::PosInf; len];
        row[0] = ExtScaled::Fin(-self.demand[v]);
        row
    }

    fn children(&self, v: usize) -> Result<(usize, usize)> {
        match self.tree.node(v).children[..] {
            [a, b] => Ok((a, b)),
            ref other => Err(Error::NonBinary { node: v, children: other.len() }),
        }
    }

    fn bounded(&self, c: usize, row: &[ExtScaled]) -> Vec<ExtScaled> {
        row.iter().map(|&x| edge_bound(self.weight[c], x)).collect()
    }
}

/// Max-plus merge of two bounded child rows into a row of length `len`;
/// ties go to the smallest split.
fn merge(b1: &[ExtScaled], b2: &[ExtScaled], len: usize) -> Vec<ExtScaled> {
    let mut row = vec![ExtScaled::NegInf; len];
    for (a, &x) in b1.iter().enumerate() {
        if x == ExtScaled::NegInf {
            continue;
        }
        for (b, &y) in b2.iter().enumerate().take(len.saturating_sub(a)) {
            let s = x + y;
            if s > row[a + b] {
                row[a + b] = s;
            }
        }
    }
    row
}

/// The full table; row `v` has `min(k_max, leaves below v) + 1` cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DPTable {
    rows: Vec<Vec<ExtScaled>>,
    root: usize,
}

impl DPTable {
    /// `DP[v][k]`, reading past the end of a row as its last cell.
    pub fn get(&self, v: usize, k: usize) -> ExtScaled {
        let row = &self.rows[v];
        row[k.min(row.len() - 1)]
    }

    pub fn row(&self, v: usize) -> &[ExtScaled] {
        &self.rows[v]
    }

    pub fn root(&self) -> usize {
        self.root
    }
}

pub fn dp_solve(inst: &ScaledInstance<'_>) -> Result<DPTable> {
    let tree = inst.tree;
    let counts = tree.leaf_counts();
    let mut rows: Vec<Vec<ExtScaled>> = vec![Vec::new(); tree.len()];
    for v in tree.postorder() {
        let len = inst.k_max.min(counts[v]) + 1;
        rows[v] = if tree.node(v).is_leaf() {
            inst.leaf_row(v, len)
        } else {
            let (c1, c2) = inst.children(v)?;
            merge(&inst.bounded(c1, &rows[c1]), &inst.bounded(c2, &rows[c2]), len)
        };
    }
    Ok(DPTable { rows, root: tree.root() })
}

/// Smallest `k` with `DP[root][k] >= 0`.
pub fn min_sinks(table: &DPTable) -> Option<usize> {
    table.rows[table.root].iter().position(|x| x.is_feasible())
}

/// `min_sinks` without keeping the table: child rows are dropped as soon as
/// their parent is computed.
pub fn min_sinks_streaming(inst: &ScaledInstance<'_>) -> Result<Option<usize>> {
    let tree = inst.tree;
    let counts = tree.leaf_counts();
    let mut stack: Vec<Vec<ExtScaled>> = Vec::new();
    for v in tree.postorder() {
        let len = inst.k_max.min(counts[v]) + 1;
        let row = if tree.node(v).is_leaf() {
            inst.leaf_row(v, len)
        } else {
            let (c1, c2) = inst.children(v)?;
            let r2 = stack.pop().expect("postorder visits children first");
            let r1 = stack.pop().expect("postorder visits children first");
            merge(&inst.bounded(c1, &r1), &inst.bounded(c2, &r2), len)
        };
        stack.push(row);
    }
    Ok(stack.pop().and_then(|root| root.iter().position(|x| x.is_feasible())))
}

/// Recovers a label set of size at most `k` achieving `DP[root][k]`.
/// Returns vertex indices of the chosen leaves.
pub fn backtrack(inst: &ScaledInstance<'_>, table: &DPTable, k: usize) -> Result<VertexSet> {
    if !table.get(table.root, k).is_feasible() {
        return Err(Error::InfeasibleBudget(k));
    }
    let tree = inst.tree;
    let mut chosen = Vec::new();
    let mut stack = vec![(table.root, k)];
    while let Some((v, k)) = stack.pop() {
        let k = k.min(table.rows[v].len() - 1);
        let node = tree.node(v);
        if let Some(label) = node.leaf_label {
            if k >= 1 {
                chosen.push(label);
            }
            continue;
        }
        let (c1, c2) = inst.children(v)?;
        let target = table.rows[v][k];
        let (r1, r2) = (&table.rows[c1], &table.rows[c2]);
        let lo = k.saturating_sub(r2.len() - 1);
        let hi = k.min(r1.len() - 1);
        let a = (lo..=hi)
            .find(|&a| edge_bound(inst.weight[c1], r1[a]) + edge_bound(inst.weight[c2], r2[k - a]) == target)
            .ok_or_else(|| Error::Reconstruction(alloc::format!("no split reproduces DP[{v}][{k}]")))?;
        stack.push((c2, k - a));
        stack.push((c1, a));
    }
    Ok(VertexSet::new(chosen))
}

/// Root value with the label set fixed: labeled leaves absorb anything,
/// the rest export their demand. Works for any arity.
pub fn fixed_selection_flow(inst: &ScaledInstance<'_>, labels: &VertexSet) -> Result<ExtScaled> {
    let tree = inst.tree;
    if let Some(m) = labels.max() {
        if m >= tree.num_leaves() {
            return Err(Error::NotEligible(m));
        }
    }
    let mut val = vec![ExtScaled::ZERO; tree.len()];
    for v in tree.postorder() {
        let node = tree.node(v);
        val[v] = match node.leaf_label {
            Some(x) if labels.contains(x) => ExtScaled::PosInf,
            Some(_) => ExtScaled::Fin(-inst.demand[v]),
            None => node.children.iter().fold(ExtScaled::ZERO, |acc, &c| acc + edge_bound(inst.weight[c], val[c])),
        };
    }
    Ok(val[tree.root()])
}
