//! Exact objective evaluation and exhaustive oracles.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::dp::{fixed_selection_flow, ScaledInstance};
use crate::error::{Error, Result};
use crate::flow::{build_graph_gadget, Capacity};
use crate::graph::{VertexSet, WeightedGraph};
use crate::importance::Importance;
use crate::ratio::{max_feasible_threshold, Objective};
use crate::tree::{DecompTree, Weight};

/// Largest graph accepted by the exhaustive oracles.
pub const BRUTE_FORCE_MAX_VERTICES: usize = 20;
/// Largest number of label sets `brute_force_opt` will enumerate.
pub const BRUTE_FORCE_MAX_LABEL_SETS: u64 = 1_000_000;

fn cap_add(a: Capacity, b: Capacity) -> Capacity {
    match (a, b) {
        (Capacity::Finite(x), Capacity::Finite(y)) => Capacity::Finite(x + y),
        _ => Capacity::Inf,
    }
}

/// Cheapest set of tree edges separating the leaves labeled by `a` from
/// all other leaves. Infinite edges can never be cut.
pub fn tree_leafset_mincut(tree: &DecompTree, a: &VertexSet) -> Result<Capacity> {
    if let Some(m) = a.max() {
        if m >= tree.num_leaves() {
            return Err(Error::NotEligible(m));
        }
    }
    // cost[v][side] with v placed on side 1 (with `a`) or side 0
    let mut cost = vec![[Capacity::Finite(0); 2]; tree.len()];
    for v in tree.postorder() {
        let node = tree.node(v);
        if let Some(x) = node.leaf_label {
            cost[v] =
                if a.contains(x) { [Capacity::Inf, Capacity::Finite(0)] } else { [Capacity::Finite(0), Capacity::Inf] };
            continue;
        }
        for side in 0..2 {
            let mut total = Capacity::Finite(0);
            for &c in &node.children {
                let w = match tree.node(c).parent_edge_weight {
                    Weight::Finite(w) => Capacity::Finite(w as i128),
                    Weight::Inf => Capacity::Inf,
                };
                total = cap_add(total, cost[c][side].min(cap_add(cost[c][1 - side], w)));
            }
            cost[v][side] = total;
        }
    }
    let r = cost[tree.root()];
    Ok(r[0].min(r[1]))
}

fn check_labels(labels: &VertexSet, n: usize) -> Result<()> {
    match labels.max() {
        Some(m) if m >= n => Err(Error::NotEligible(m)),
        _ => Ok(()),
    }
}

/// Exact tree objective of a fixed label set: the minimum over nonempty leaf
/// sets `S` avoiding the labels, with `f(S) > 0`, of `lambda(S) / f(S)`.
pub fn eval_tree_objective(tree: &DecompTree, labels: &VertexSet, f: &Importance) -> Result<Objective> {
    let n = tree.num_leaves();
    check_labels(labels, n)?;
    let total = f.total(n)?;
    max_feasible_threshold(total, tree.total_finite_weight(), |tau| {
        let inst = ScaledInstance::new(tree, tau, f, 0)?;
        Ok(fixed_selection_flow(&inst, labels)?.is_feasible())
    })
}

/// Exact graph objective of a fixed label set: the minimum over nonempty
/// `C` avoiding the labels, with `f(C) > 0`, of `w(C, V \ C) / f(C)`.
pub fn eval_graph_objective(g: &WeightedGraph, labels: &VertexSet, f: &Importance) -> Result<Objective> {
    check_labels(labels, g.n())?;
    let total = f.total(g.n())?;
    max_feasible_threshold(total, g.total_weight() as u128, |tau| build_graph_gadget(g, labels, tau, f)?.feasible())
}

/// Cut weight and importance of every vertex subset, indexed by bitmask.
fn all_subsets(g: &WeightedGraph, f: &Importance) -> Vec<(u64, u64)> {
    let n = g.n();
    let mut out = vec![(0u64, 0u64); 1 << n];
    let mut inside = vec![false; n];
    let (mut mask, mut cut, mut fc) = (0usize, 0u64, 0u64);
    for i in 1usize..1 << n {
        // Gray code: flip the lowest set bit of i
        let x = i.trailing_zeros() as usize;
        let entering = !inside[x];
        for &(y, w) in g.neighbors(x) {
            if y == x {
                continue;
            }
            if inside[y] == entering {
                cut -= w;
            } else {
                cut += w;
            }
        }
        inside[x] = entering;
        mask ^= 1 << x;
        if entering {
            fc += f.get(x);
        } else {
            fc -= f.get(x);
        }
        out[mask] = (cut, fc);
    }
    out
}

/// `a/b < c/d` where a zero denominator means infinity.
fn ratio_less(a: (u64, u64), b: (u64, u64)) -> bool {
    match (a.1, b.1) {
        (0, _) => false,
        (_, 0) => true,
        _ => (a.0 as u128) * (b.1 as u128) < (b.0 as u128) * (a.1 as u128),
    }
}

fn to_objective(v: (u64, u64)) -> Objective {
    if v.1 == 0 {
        Objective::Infinite
    } else {
        Objective::finite(v.0 as i128, v.1 as i128)
    }
}

fn guard_size(g: &WeightedGraph) -> Result<()> {
    if g.n() > BRUTE_FORCE_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "{} vertices exceed the exhaustive limit of {BRUTE_FORCE_MAX_VERTICES}",
            g.n()
        )));
    }
    Ok(())
}

/// The graph objective by enumerating every candidate set.
pub fn brute_force_objective(g: &WeightedGraph, labels: &VertexSet, f: &Importance) -> Result<Objective> {
    guard_size(g)?;
    check_labels(labels, g.n())?;
    f.total(g.n())?;
    let subsets = all_subsets(g, f);
    let free = ((1usize << g.n()) - 1) & !labels.iter().fold(0usize, |m, v| m | 1 << v);
    let mut best = (0u64, 0u64);
    let mut c = free;
    while c != 0 {
        let v = subsets[c];
        if v.1 > 0 && ratio_less(v, best) {
            best = v;
        }
        c = (c - 1) & free;
    }
    Ok(to_objective(best))
}

/// Number of label sets of size at most `k` among `n` vertices, saturating.
pub fn count_label_sets(n: usize, k: usize) -> u64 {
    let mut total: u64 = 0;
    let mut binom: u64 = 1;
    for j in 0..=k.min(n) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul((n - j) as u64) / (j as u64 + 1);
    }
    total
}

/// The best label set of size at most `k`, by exhaustion. Ties go to the
/// lexicographically smallest sorted vertex list.
pub fn brute_force_opt(g: &WeightedGraph, k: usize, f: &Importance) -> Result<(VertexSet, Objective)> {
    guard_size(g)?;
    let n = g.n();
    let sets = count_label_sets(n, k);
    if sets > BRUTE_FORCE_MAX_LABEL_SETS {
        return Err(Error::TooLarge(format!(
            "{sets} label sets exceed the exhaustive limit of {BRUTE_FORCE_MAX_LABEL_SETS}"
        )));
    }
    f.total(n)?;
    let subsets = all_subsets(g, f);
    // best[m]: minimum ratio over nonempty subsets of m with positive importance
    let mut best: Vec<(u64, u64)> = subsets.iter().map(|&v| if v.1 > 0 { v } else { (0, 0) }).collect();
    best[0] = (0, 0);
    for bit in 0..n {
        for m in 0..best.len() {
            if m >> bit & 1 == 1 && ratio_less(best[m ^ 1 << bit], best[m]) {
                best[m] = best[m ^ 1 << bit];
            }
        }
    }
    let full = (1usize << n) - 1;
    let mut winner: Option<(Vec<usize>, (u64, u64))> = None;
    for labels in 0usize..1 << n {
        if labels.count_ones() as usize > k {
            continue;
        }
        let value = best[full & !labels];
        let set: Vec<usize> = (0..n).filter(|&v| labels >> v & 1 == 1).collect();
        let better = match &winner {
            None => true,
            Some((ws, wv)) => ratio_less(*wv, value) || (!ratio_less(value, *wv) && set < *ws),
        };
        if better {
            winner = Some((set, value));
        }
    }
    let (set, value) = winner.expect("the empty label set is always enumerated");
    Ok((VertexSet::new(set), to_objective(value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::unit;
    use crate::tree::perfect_tree_sparsifier;

    fn star(n: usize) -> WeightedGraph {
        unit(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>())
    }

    fn two_leaf_star() -> DecompTree {
        DecompTree::from_parents(
            vec![
                (None, Weight::Inf, None),
                (Some(0), Weight::Finite(1), Some(0)),
                (Some(0), Weight::Finite(1), Some(1)),
            ],
            vec![0, 1],
        )
        .unwrap()
    }

    #[test]
    fn leafset_mincut_examples() {
        let t = two_leaf_star();
        assert_eq!(tree_leafset_mincut(&t, &VertexSet::empty()).unwrap(), Capacity::Finite(0));
        assert_eq!(tree_leafset_mincut(&t, &VertexSet::new([1])).unwrap(), Capacity::Finite(1));
        let edge = WeightedGraph::from_edges(vec![0, 1], [(0, 1, 5)]).unwrap();
        let t = perfect_tree_sparsifier(&edge).unwrap();
        assert_eq!(tree_leafset_mincut(&t, &VertexSet::new([1])).unwrap(), Capacity::Finite(5));
        assert_eq!(tree_leafset_mincut(&t, &VertexSet::new([0])).unwrap(), Capacity::Finite(5));
    }

    #[test]
    fn leafset_mincut_with_uncuttable_path() {
        let t = DecompTree::from_parents(
            vec![(None, Weight::Inf, None), (Some(0), Weight::Inf, Some(0)), (Some(0), Weight::Inf, Some(1))],
            vec![0, 1],
        )
        .unwrap();
        assert_eq!(tree_leafset_mincut(&t, &VertexSet::new([0])).unwrap(), Capacity::Inf);
    }

    #[test]
    fn tree_objective_examples() {
        let t = two_leaf_star();
        assert_eq!(
            eval_tree_objective(&t, &VertexSet::new([0]), &Importance::Uniform).unwrap(),
            Objective::finite(1, 1)
        );
        assert_eq!(
            eval_tree_objective(&t, &VertexSet::new([0, 1]), &Importance::Uniform).unwrap(),
            Objective::Infinite
        );
        let p3 = unit(3, &[(0, 1), (1, 2)]);
        let t = perfect_tree_sparsifier(&p3).unwrap();
        assert_eq!(
            eval_tree_objective(&t, &VertexSet::new([1]), &Importance::Uniform).unwrap(),
            Objective::finite(1, 1)
        );
    }

    #[test]
    fn graph_objective_examples() {
        let s = star(4);
        let outer = VertexSet::new([1, 2, 3]);
        assert_eq!(eval_graph_objective(&s, &outer, &Importance::Uniform).unwrap(), Objective::finite(3, 1));
        assert_eq!(brute_force_objective(&s, &outer, &Importance::Uniform).unwrap(), Objective::finite(3, 1));
        let p3 = unit(3, &[(0, 1), (1, 2)]);
        assert_eq!(
            eval_graph_objective(&p3, &VertexSet::new([1]), &Importance::Uniform).unwrap(),
            Objective::finite(1, 1)
        );
        let all = VertexSet::new(0..3);
        assert_eq!(eval_graph_objective(&p3, &all, &Importance::Uniform).unwrap(), Objective::Infinite);
        assert_eq!(brute_force_objective(&p3, &all, &Importance::Uniform).unwrap(), Objective::Infinite);
    }

    #[test]
    fn unlabeled_graph_scores_zero() {
        // with nothing labeled the whole vertex set is a candidate with an empty boundary
        let k3 = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(
            eval_graph_objective(&k3, &VertexSet::empty(), &Importance::Uniform).unwrap(),
            Objective::finite(0, 1)
        );
        assert_eq!(
            brute_force_objective(&k3, &VertexSet::empty(), &Importance::Uniform).unwrap(),
            Objective::finite(0, 1)
        );
    }

    #[test]
    fn oracle_examples() {
        let (l, v) = brute_force_opt(&star(4), 3, &Importance::Uniform).unwrap();
        assert_eq!(l, VertexSet::new([1, 2, 3]));
        assert_eq!(v, Objective::finite(3, 1));
        let (l, v) = brute_force_opt(&unit(3, &[(0, 1), (1, 2)]), 1, &Importance::Uniform).unwrap();
        assert_eq!(l, VertexSet::new([1]));
        assert_eq!(v, Objective::finite(1, 1));
    }

    #[test]
    fn oracle_size_guards() {
        let path = unit(25, &(0..24).map(|i| (i, i + 1)).collect::<Vec<_>>());
        assert!(matches!(brute_force_opt(&path, 12, &Importance::Uniform), Err(Error::TooLarge(_))));
        let path = unit(20, &(0..19).map(|i| (i, i + 1)).collect::<Vec<_>>());
        assert!(matches!(brute_force_opt(&path, 14, &Importance::Uniform), Err(Error::TooLarge(_))));
        assert_eq!(count_label_sets(4, 2), 1 + 4 + 6);
        assert_eq!(count_label_sets(3, 7), 8);
    }

    #[test]
    fn zero_importance_sets_are_skipped() {
        let p3 = unit(3, &[(0, 1), (1, 2)]);
        let f = Importance::PerVertex(vec![0, 0, 1]);
        // only sets containing vertex 2 count; labeling it leaves nothing
        assert_eq!(brute_force_objective(&p3, &VertexSet::new([2]), &f).unwrap(), Objective::Infinite);
        assert_eq!(eval_graph_objective(&p3, &VertexSet::new([2]), &f).unwrap(), Objective::Infinite);
        assert_eq!(eval_graph_objective(&p3, &VertexSet::new([0]), &f).unwrap(), Objective::finite(1, 1));
    }
}
