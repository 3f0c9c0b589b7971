//! Random instances and exhaustive reference implementations shared by the
//! integration tests. Nothing here calls the tree DP.

#![allow(dead_code)]

use gls_core::flow::build_tree_gadget;
use gls_core::tree::{DecompTree, Weight};
use gls_core::{Importance, Objective, Ratio, VertexSet, WeightedGraph};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random rooted binary tree built by merging random pairs of roots.
/// Leaf labels are a random permutation of `0..leaves`; each edge is
/// infinite with probability `inf_prob`, else uniform in `1..=max_w`.
pub fn random_binary_tree(r: &mut impl Rng, leaves: usize, max_w: u64, inf_prob: f64) -> DecompTree {
    let mut labels: Vec<usize> = (0..leaves).collect();
    labels.shuffle(r);
    let mut parent: Vec<Option<usize>> = vec![None; leaves];
    let mut weight: Vec<Weight> = vec![Weight::Inf; leaves];
    let mut label: Vec<Option<usize>> = labels.into_iter().map(Some).collect();
    let mut roots: Vec<usize> = (0..leaves).collect();
    while roots.len() > 1 {
        let a = roots.swap_remove(r.random_range(0..roots.len()));
        let b = roots.swap_remove(r.random_range(0..roots.len()));
        let id = parent.len();
        parent.push(None);
        weight.push(Weight::Inf);
        label.push(None);
        for c in [a, b] {
            parent[c] = Some(id);
            weight[c] = if r.random_bool(inf_prob) { Weight::Inf } else { Weight::Finite(r.random_range(1..=max_w)) };
        }
        roots.push(id);
    }
    let nodes = (0..parent.len()).map(|i| (parent[i], weight[i], label[i])).collect();
    DecompTree::from_parents(nodes, (0..leaves as u64).collect()).unwrap()
}

/// Perfectly balanced binary tree with `leaves` leaves (a power of two is
/// not required) and random finite weights.
pub fn balanced_binary_tree(r: &mut impl Rng, leaves: usize, max_w: u64) -> DecompTree {
    let mut nodes: Vec<(Option<usize>, Weight, Option<usize>)> = vec![(None, Weight::Inf, None)];
    // (node, first leaf, leaf count)
    let mut stack = vec![(0usize, 0usize, leaves)];
    while let Some((v, first, count)) = stack.pop() {
        if count == 1 {
            nodes[v].2 = Some(first);
            continue;
        }
        let half = count / 2;
        for (start, len) in [(first, half), (first + half, count - half)] {
            let id = nodes.len();
            nodes.push((Some(v), Weight::Finite(r.random_range(1..=max_w)), None));
            stack.push((id, start, len));
        }
    }
    DecompTree::from_parents(nodes, (0..leaves as u64).collect()).unwrap()
}

/// Random tree-shaped graph with shuffled external ids.
pub fn random_tree_graph(r: &mut impl Rng, n: usize, max_w: u64) -> WeightedGraph {
    let mut ids: Vec<u64> = (0..n as u64).map(|i| 100 + 7 * i).collect();
    ids.shuffle(r);
    let edges: Vec<_> = (1..n).map(|v| (r.random_range(0..v), v, r.random_range(1..=max_w))).collect();
    WeightedGraph::from_edges(ids, edges).unwrap()
}

/// Random connected graph: a random spanning tree plus `extra` random edges.
pub fn random_connected_graph(r: &mut impl Rng, n: usize, extra: usize, max_w: u64) -> WeightedGraph {
    let mut edges: Vec<_> = (1..n).map(|v| (r.random_range(0..v), v, r.random_range(1..=max_w))).collect();
    for _ in 0..extra {
        let u = r.random_range(0..n);
        let v = r.random_range(0..n);
        if u != v {
            edges.push((u, v, r.random_range(1..=max_w)));
        }
    }
    WeightedGraph::from_edges((0..n as u64).collect(), edges).unwrap()
}

pub fn mask_to_set(mask: u32) -> VertexSet {
    VertexSet::new((0..32).filter(|&v| mask >> v & 1 == 1))
}

/// `lambda(S, leaves \ S)` for every leaf-vertex mask `S`, by trying every
/// side assignment of the internal nodes. `None` means no finite cut.
pub fn all_leaf_lambdas(tree: &DecompTree) -> Vec<Option<u64>> {
    let n = tree.num_leaves();
    let internal: Vec<usize> = (0..tree.len()).filter(|&v| !tree.node(v).is_leaf()).collect();
    assert!(internal.len() <= 16 && n <= 16);
    let mut pos = vec![usize::MAX; tree.len()];
    for (i, &v) in internal.iter().enumerate() {
        pos[v] = i;
    }
    let mut best: Vec<Option<u64>> = vec![None; 1 << n];
    for assign in 0u32..1 << internal.len() {
        let side = |v: usize| assign >> pos[v] & 1 == 1;
        // edges between internal nodes are fixed by the assignment
        let mut base = Some(0u64);
        let mut leaf_edges = Vec::new();
        for v in 0..tree.len() {
            let node = tree.node(v);
            let Some(p) = node.parent else { continue };
            match node.leaf_label {
                Some(x) => leaf_edges.push((x, side(p), node.parent_edge_weight)),
                None => {
                    if side(v) != side(p) {
                        base = match (base, node.parent_edge_weight) {
                            (Some(b), Weight::Finite(w)) => Some(b + w),
                            _ => None,
                        };
                    }
                }
            }
        }
        let Some(base) = base else { continue };
        'sets: for s in 0u32..1 << n {
            let mut cost = base;
            for &(x, parent_side, w) in &leaf_edges {
                if (s >> x & 1 == 1) != parent_side {
                    match w {
                        Weight::Finite(w) => cost += w,
                        Weight::Inf => continue 'sets,
                    }
                }
            }
            let slot = &mut best[s as usize];
            if slot.is_none_or(|b| cost < b) {
                *slot = Some(cost);
            }
        }
    }
    best
}

/// Minimum over nonempty leaf sets `S` outside `labels` with `f(S) > 0` of
/// `lambda(S) / f(S)`.
pub fn tree_objective_by_enumeration(lambdas: &[Option<u64>], labels: u32, f: &[u64]) -> Objective {
    let n = f.len();
    let free = ((1u32 << n) - 1) & !labels;
    let mut best = Objective::Infinite;
    let mut s = free;
    while s != 0 {
        let fs: u64 = (0..n).filter(|&v| s >> v & 1 == 1).map(|v| f[v]).sum();
        if let (Some(l), true) = (lambdas[s as usize], fs > 0) {
            best = best.min(Objective::finite(l as i128, fs as i128));
        }
        s = (s - 1) & free;
    }
    best
}

/// Best tree objective over label sets of size at most `k`.
pub fn tree_opt_by_enumeration(lambdas: &[Option<u64>], k: usize, f: &[u64]) -> Objective {
    let n = f.len();
    (0u32..1 << n)
        .filter(|l| l.count_ones() as usize <= k)
        .map(|l| tree_objective_by_enumeration(lambdas, l, f))
        .max()
        .unwrap()
}

/// Every distinct finite value `lambda(S) / f(S)`, sorted.
pub fn candidate_thresholds(lambdas: &[Option<u64>], f: &[u64]) -> Vec<Ratio> {
    let n = f.len();
    let mut out: Vec<Ratio> = (1u32..1 << n)
        .filter_map(|s| {
            let fs: u64 = (0..n).filter(|&v| s >> v & 1 == 1).map(|v| f[v]).sum();
            match lambdas[s as usize] {
                Some(l) if fs > 0 => Some(Ratio::new(l as i128, fs as i128)),
                _ => None,
            }
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Fewest labeled leaves making the tree gadget route its full demand,
/// trying label sets by increasing size and solving each max-flow.
pub fn min_sinks_by_flow(tree: &DecompTree, tau: Ratio, f: &Importance) -> Option<usize> {
    let n = tree.num_leaves();
    for size in 0..=n {
        for mask in 0u32..1 << n {
            if mask.count_ones() as usize != size {
                continue;
            }
            if build_tree_gadget(tree, &mask_to_set(mask), tau, f).unwrap().feasible().unwrap() {
                return Some(size);
            }
        }
    }
    None
}

pub fn r(n: i128, d: i128) -> Ratio {
    Ratio::new(n, d)
}
