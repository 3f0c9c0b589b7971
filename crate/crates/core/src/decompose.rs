//! Recursive bisection into a binary decomposition tree.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bisect::{component_split, Bisection, Bisector};
use crate::error::{Error, Result};
use crate::graph::{cut_weight_masked, induced_subgraph, VertexSet, WeightedGraph};
use crate::tree::{DecompTree, Weight};

/// Builds a binary tree whose leaves are the vertices of `g` by recursive
/// bisection.
///
/// The edge above a cluster `C` weighs `cut_weight(g, C)` measured in the
/// original graph, which makes every leaf-separating tree cut at least as
/// heavy as the corresponding graph cut. Disconnected clusters are first
/// split along a component boundary; two-vertex clusters split directly.
pub fn hierarchical_decomposition(g: &WeightedGraph, bisector: &mut dyn Bisector) -> Result<DecompTree> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut nodes: Vec<(Option<usize>, Weight, Option<usize>)> = vec![(None, Weight::Inf, None)];
    let mut mask = vec![false; n];
    let mut work: Vec<(Vec<usize>, usize)> = vec![((0..n).collect(), 0)];
    while let Some((cluster, node)) = work.pop() {
        if cluster.len() == 1 {
            nodes[node].2 = Some(cluster[0]);
            continue;
        }
        let (sub, back) = induced_subgraph(g, &VertexSet::new(cluster.iter().copied()))?;
        let split = split_cluster(&sub, bisector, &cluster)?;
        let mut children = Vec::with_capacity(2);
        for side in [&split.a, &split.b] {
            let members: Vec<usize> = side.iter().map(|v| back[v]).collect();
            for &v in &members {
                mask[v] = true;
            }
            let w = cut_weight_masked(g, &members, &mask);
            for &v in &members {
                mask[v] = false;
            }
            let child = nodes.len();
            nodes.push((Some(node), Weight::Finite(w), None));
            children.push((members, child));
        }
        // process the first side first
        work.extend(children.into_iter().rev());
    }
    Ok(DecompTree::from_parents(nodes, g.orig_ids().to_vec())?.canonical())
}

fn split_cluster(sub: &WeightedGraph, bisector: &mut dyn Bisector, cluster: &[usize]) -> Result<Bisection> {
    if !sub.is_connected() {
        return component_split(sub);
    }
    if sub.n() == 2 {
        return Bisection::new(sub, VertexSet::new([0]), VertexSet::new([1]));
    }
    // nested clusters with the same minimum differ in size
    let salt = (cluster[0] as u64) << 32 ^ cluster.len() as u64;
    let b = bisector.bisect(sub, salt)?;
    if b.a.is_empty() || b.b.is_empty() || b.a.len() + b.b.len() != sub.n() {
        return Err(Error::InvalidBisection(format!("bisector returned sides of {} and {}", b.a.len(), b.b.len())));
    }
    Ok(b)
}
