//! Rooted leaf-labeled decomposition trees.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// An edge capacity or cut value: a nonnegative integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Weight {
    Finite(u64),
    Inf,
}

impl Weight {
    pub fn is_inf(self) -> bool {
        matches!(self, Weight::Inf)
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Weight::Finite(w) => Some(w),
            Weight::Inf => None,
        }
    }

    /// Saturating sum: anything plus infinity is infinity.
    pub fn plus(self, other: Weight) -> Weight {
        match (self, other) {
            (Weight::Finite(a), Weight::Finite(b)) => a.checked_add(b).map_or(Weight::Inf, Weight::Finite),
            _ => Weight::Inf,
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Finite(w) => write!(f, "{w}"),
            Weight::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub parent: Option<usize>,
    /// Weight of the edge to the parent; meaningless at the root.
    pub parent_edge_weight: Weight,
    pub children: Vec<usize>,
    /// Dense vertex id for leaves.
    pub leaf_label: Option<usize>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// A rooted tree whose leaves biject with the vertices `0..n` of a graph.
///
/// `vertex_ids[v]` is the external id of vertex `v`, so a tree can be read
/// and written without its graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompTree {
    nodes: Vec<TreeNode>,
    root: usize,
    leaf_of_vertex: Vec<usize>,
    vertex_ids: Vec<u64>,
}

impl DecompTree {
    /// Validates and assembles a tree. Children lists are derived from the
    /// parent links, in node-id order.
    pub fn from_parents(parents: Vec<(Option<usize>, Weight, Option<usize>)>, vertex_ids: Vec<u64>) -> Result<Self> {
        let count = parents.len();
        if count == 0 {
            return Err(Error::InvalidTree(String::from("no nodes")));
        }
        let mut nodes: Vec<TreeNode> = parents
            .iter()
            .map(|&(parent, w, label)| TreeNode {
                parent,
                parent_edge_weight: w,
                children: Vec::new(),
                leaf_label: label,
            })
            .collect();
        let mut root = None;
        for (i, &(parent, _, _)) in parents.iter().enumerate() {
            match parent {
                None if root.is_some() => return Err(Error::InvalidTree(String::from("multiple roots"))),
                None => root = Some(i),
                Some(p) if p >= count || p == i => {
                    return Err(Error::InvalidTree(format!("node {i} has invalid parent {p}")))
                }
                Some(p) => nodes[p].children.push(i),
            }
        }
        let root = root.ok_or_else(|| Error::InvalidTree(String::from("no root")))?;
        let tree = DecompTree { nodes, root, leaf_of_vertex: Vec::new(), vertex_ids };
        tree.finish()
    }

    fn finish(mut self) -> Result<Self> {
        // reachability from the root rules out cycles
        let order = self.preorder();
        if order.len() != self.nodes.len() {
            return Err(Error::InvalidTree(String::from("nodes unreachable from the root (cycle)")));
        }
        let n = self.vertex_ids.len();
        let mut leaf_of_vertex = vec![usize::MAX; n];
        for (i, node) in self.nodes.iter().enumerate() {
            match (node.is_leaf(), node.leaf_label) {
                (true, Some(v)) => {
                    if v >= n || leaf_of_vertex[v] != usize::MAX {
                        return Err(Error::InvalidTree(format!("leaf {i} has duplicate or invalid label {v}")));
                    }
                    leaf_of_vertex[v] = i;
                }
                (true, None) => return Err(Error::InvalidTree(format!("leaf {i} has no label"))),
                (false, Some(_)) => return Err(Error::InvalidTree(format!("internal node {i} carries a label"))),
                (false, None) => {}
            }
            if i != self.root && node.parent_edge_weight == Weight::Finite(0) {
                return Err(Error::InvalidTree(format!("node {i} has a zero-weight parent edge")));
            }
        }
        if leaf_of_vertex.contains(&usize::MAX) {
            return Err(Error::InvalidTree(String::from("leaves do not cover every vertex")));
        }
        self.leaf_of_vertex = leaf_of_vertex;
        Ok(self)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &TreeNode {
        &self.nodes[i]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn num_leaves(&self) -> usize {
        self.vertex_ids.len()
    }

    pub fn vertex_ids(&self) -> &[u64] {
        &self.vertex_ids
    }

    pub fn leaf_of_vertex(&self, v: usize) -> usize {
        self.leaf_of_vertex[v]
    }

    pub fn is_binary(&self) -> bool {
        self.nodes.iter().all(|n| n.children.is_empty() || n.children.len() == 2)
    }

    /// Sum of all finite edge weights.
    pub fn total_finite_weight(&self) -> u128 {
        self.nodes
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != self.root)
            .filter_map(|(_, n)| n.parent_edge_weight.finite())
            .map(u128::from)
            .sum()
    }

    /// Parents before children, children in list order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if out.len() > self.nodes.len() {
                break;
            }
            out.push(v);
            stack.extend(self.nodes[v].children.iter().rev());
        }
        out
    }

    /// Children before parents, children in list order.
    pub fn postorder(&self) -> Vec<usize> {
        // a preorder that takes the last child first, reversed
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            if out.len() > self.nodes.len() {
                break;
            }
            out.push(v);
            stack.extend(self.nodes[v].children.iter());
        }
        out.reverse();
        out
    }

    /// Number of leaves below each node.
    pub fn leaf_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.nodes.len()];
        for v in self.postorder() {
            let node = &self.nodes[v];
            counts[v] = if node.is_leaf() { 1 } else { node.children.iter().map(|&c| counts[c]).sum() };
        }
        counts
    }

    /// Re-expresses leaf labels in the dense ids of `g`, which must carry
    /// exactly the same external vertex ids.
    pub fn align_to_graph(&self, g: &WeightedGraph) -> Result<DecompTree> {
        if g.n() != self.num_leaves() {
            return Err(Error::InvalidTree(format!(
                "tree has {} leaves but graph has {} vertices",
                self.num_leaves(),
                g.n()
            )));
        }
        let mut by_orig: Vec<(u64, usize)> = g.orig_ids().iter().copied().zip(0..).collect();
        by_orig.sort_unstable();
        let mut relabel = vec![0usize; self.num_leaves()];
        for (v, &id) in self.vertex_ids.iter().enumerate() {
            let pos = by_orig
                .binary_search_by_key(&id, |&(o, _)| o)
                .map_err(|_| Error::InvalidTree(format!("leaf vertex {id} is not in the graph")))?;
            relabel[v] = by_orig[pos].1;
        }
        let parents =
            self.nodes.iter().map(|n| (n.parent, n.parent_edge_weight, n.leaf_label.map(|v| relabel[v]))).collect();
        DecompTree::from_parents(parents, g.orig_ids().to_vec())
    }

    /// Renumbers nodes in preorder so that every parent precedes its children
    /// and the root is node 0.
    pub fn canonical(&self) -> DecompTree {
        let order = self.preorder();
        let mut new_id = vec![0usize; self.nodes.len()];
        for (i, &v) in order.iter().enumerate() {
            new_id[v] = i;
        }
        let nodes = order
            .iter()
            .map(|&v| {
                let n = &self.nodes[v];
                TreeNode {
                    parent: n.parent.map(|p| new_id[p]),
                    parent_edge_weight: n.parent_edge_weight,
                    children: n.children.iter().map(|&c| new_id[c]).collect(),
                    leaf_label: n.leaf_label,
                }
            })
            .collect::<Vec<_>>();
        let leaf_of_vertex = self.leaf_of_vertex.iter().map(|&l| new_id[l]).collect();
        DecompTree { nodes, root: 0, leaf_of_vertex, vertex_ids: self.vertex_ids.clone() }
    }
}

/// Makes every internal node binary.
///
/// A node with `d > 2` children keeps its first child and hands the rest to
/// a chain of `d - 2` auxiliary nodes attached by infinite-weight edges.
/// Unary internal nodes are contracted: the merged edge takes the smaller of
/// the two weights, which is what any leaf-separating cut would pay.
pub fn binarize(t: &DecompTree) -> DecompTree {
    let mut out: Vec<(Option<usize>, Weight, Option<usize>)> = Vec::with_capacity(2 * t.len());
    // (old node, first child still to place, new parent, edge weight); a
    // nonzero start stands for an auxiliary node holding the remaining children
    let mut stack: Vec<(usize, usize, Option<usize>, Weight)> = vec![(t.root(), 0, None, Weight::Inf)];
    while let Some((mut v, start, parent, mut w)) = stack.pop() {
        let id = out.len();
        if start == 0 {
            while t.node(v).children.len() == 1 {
                let c = t.node(v).children[0];
                if parent.is_some() {
                    w = w.min(t.node(c).parent_edge_weight);
                }
                v = c;
            }
            out.push((parent, w, t.node(v).leaf_label));
        } else {
            out.push((parent, Weight::Inf, None));
        }
        let rest = &t.node(v).children[start..];
        if rest.len() <= 2 {
            for &c in rest.iter().rev() {
                stack.push((c, 0, Some(id), t.node(c).parent_edge_weight));
            }
        } else {
            stack.push((v, start + 1, Some(id), Weight::Inf));
            stack.push((rest[0], 0, Some(id), t.node(rest[0]).parent_edge_weight));
        }
    }
    DecompTree::from_parents(out, t.vertex_ids().to_vec()).expect("binarize preserves tree validity").canonical()
}

/// Exact tree sparsifier for a tree-shaped graph.
///
/// Roots `g` at vertex 0; every vertex with children gains an extra leaf
/// attached by an infinite-weight edge, and vertices without children become
/// leaves. The result is binarized.
pub fn perfect_tree_sparsifier(g: &WeightedGraph) -> Result<DecompTree> {
    if !g.is_tree() {
        return Err(Error::NotATree);
    }
    let n = g.n();
    if n == 1 {
        return DecompTree::from_parents(vec![(None, Weight::Inf, Some(0))], g.orig_ids().to_vec());
    }
    let mut parent = vec![usize::MAX; n];
    let mut parent_w = vec![0u64; n];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut queue = VecDeque::from([0usize]);
    parent[0] = 0;
    while let Some(u) = queue.pop_front() {
        for &(v, w) in g.neighbors(u) {
            if parent[v] == usize::MAX {
                parent[v] = u;
                parent_w[v] = w;
                children[u].push(v);
                queue.push_back(v);
            }
        }
    }
    // node id == vertex id for graph vertices; extra leaves appended after
    let mut nodes: Vec<(Option<usize>, Weight, Option<usize>)> = (0..n)
        .map(|v| {
            let p = if v == 0 { None } else { Some(parent[v]) };
            let label = if children[v].is_empty() { Some(v) } else { None };
            (p, Weight::Finite(parent_w[v]), label)
        })
        .collect();
    nodes[0].1 = Weight::Inf;
    for (v, kids) in children.iter().enumerate() {
        if !kids.is_empty() {
            nodes.push((Some(v), Weight::Inf, Some(v)));
        }
    }
    let raw = DecompTree::from_parents(nodes, g.orig_ids().to_vec())?;
    Ok(binarize(&raw))
}
