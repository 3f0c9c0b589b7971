//! Undirected integer-weighted graphs, cut arithmetic and Laplacian products.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A sorted, duplicate-free set of dense vertex ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct VertexSet {
    members: Vec<usize>,
}

impl VertexSet {
    pub fn new(ids: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = ids.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VertexSet { members }
    }

    pub fn empty() -> Self {
        VertexSet::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.members
    }

    pub fn max(&self) -> Option<usize> {
        self.members.last().copied()
    }

    /// Membership mask over `0..n`.
    pub fn mask(&self, n: usize) -> Result<Vec<bool>> {
        let mut mask = vec![false; n];
        for &v in &self.members {
            if v >= n {
                return Err(Error::VertexOutOfRange { id: v, n });
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// The complement within `0..n`.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut members = Vec::with_capacity(n.saturating_sub(self.len()));
        let mut it = self.members.iter().peekable();
        for v in 0..n {
            if it.peek() == Some(&&v) {
                it.next();
            } else {
                members.push(v);
            }
        }
        VertexSet { members }
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet::new(iter)
    }
}

/// Undirected graph with positive integer weights and dense ids `0..n`.
///
/// Parallel edges are merged by summing weights. Self-loops are kept until
/// [`preprocess`] removes them; a self-loop `(u, u, w)` appears once in the
/// adjacency list of `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    adjacency: Vec<Vec<(usize, u64)>>,
    total_weight: u64,
    orig_id: Vec<u64>,
}

impl WeightedGraph {
    /// Builds a graph on `orig_ids.len()` vertices from dense-id edges.
    pub fn from_edges(orig_ids: Vec<u64>, edges: impl IntoIterator<Item = (usize, usize, u64)>) -> Result<Self> {
        let n = orig_ids.len();
        let mut merged: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (u, v, w) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange { id: u, n });
            }
            if v >= n {
                return Err(Error::VertexOutOfRange { id: v, n });
            }
            if w == 0 {
                return Err(Error::NonPositiveWeight);
            }
            let key = if u <= v { (u, v) } else { (v, u) };
            let slot = merged.entry(key).or_insert(0);
            *slot = slot.checked_add(w).ok_or(Error::Overflow)?;
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut total_weight: u64 = 0;
        for (&(u, v), &w) in &merged {
            total_weight = total_weight.checked_add(w).ok_or(Error::Overflow)?;
            adjacency[u].push((v, w));
            if u != v {
                adjacency[v].push((u, w));
            }
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(WeightedGraph { adjacency, total_weight, orig_id: orig_ids })
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn total_weight(&self) -> u64 {
        self.total_weight
    }

    pub fn orig_ids(&self) -> &[u64] {
        &self.orig_id
    }

    pub fn orig_id(&self, v: usize) -> u64 {
        self.orig_id[v]
    }

    /// Neighbors of `u` with edge weights, sorted by neighbor id.
    pub fn neighbors(&self, u: usize) -> &[(usize, u64)] {
        &self.adjacency[u]
    }

    /// Weighted degree, ignoring self-loops.
    pub fn weighted_degree(&self, u: usize) -> u64 {
        self.adjacency[u].iter().filter(|&&(v, _)| v != u).map(|&(_, w)| w).sum()
    }

    /// Number of distinct neighbors, ignoring self-loops.
    pub fn degree(&self, u: usize) -> usize {
        self.adjacency[u].iter().filter(|&&(v, _)| v != u).count()
    }

    /// Each undirected edge once as `(u, v, w)` with `u <= v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&(v, _)| u <= v).map(move |&(v, w)| (u, v, w)))
    }

    pub fn num_edges(&self) -> usize {
        self.edges().count()
    }

    pub fn has_self_loops(&self) -> bool {
        self.adjacency.iter().enumerate().any(|(u, list)| list.iter().any(|&(v, _)| v == u))
    }

    /// Connected components; each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = Vec::new();
            comp[s] = id;
            stack.push(s);
            while let Some(u) = stack.pop() {
                members.push(u);
                for &(v, _) in &self.adjacency[u] {
                    if comp[v] == usize::MAX {
                        comp[v] = id;
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.components().len() == 1
    }

    /// Connected, loop-free and with exactly `n - 1` edges.
    pub fn is_tree(&self) -> bool {
        self.is_connected() && !self.has_self_loops() && self.num_edges() + 1 == self.n()
    }

    /// Matrix-free Laplacian product into `out`; no dimension checks.
    pub(crate) fn laplacian_apply(&self, x: &[f64], out: &mut [f64]) {
        for (u, list) in self.adjacency.iter().enumerate() {
            let mut acc = 0.0;
            let xu = x[u];
            for &(v, w) in list {
                if v != u {
                    acc += w as f64 * (xu - x[v]);
                }
            }
            out[u] = acc;
        }
    }
}

/// Removes self-loops and keeps the largest connected component.
///
/// Ties between equally large components go to the one containing the
/// smallest original id. Surviving vertices keep their relative order.
pub fn preprocess(g: &WeightedGraph) -> Result<WeightedGraph> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph);
    }
    let best = g
        .components()
        .into_iter()
        .map(|c| {
            let min_orig = c.iter().map(|&v| g.orig_id(v)).min().unwrap_or(u64::MAX);
            (c, min_orig)
        })
        .max_by(|(a, ma), (b, mb)| a.len().cmp(&b.len()).then(mb.cmp(ma)))
        .map(|(c, _)| c)
        .ok_or(Error::EmptyGraph)?;
    let mut dense = vec![usize::MAX; g.n()];
    for (i, &v) in best.iter().enumerate() {
        dense[v] = i;
    }
    let orig_ids = best.iter().map(|&v| g.orig_id(v)).collect();
    let edges =
        g.edges().filter(|&(u, v, _)| u != v && dense[u] != usize::MAX).map(|(u, v, w)| (dense[u], dense[v], w));
    WeightedGraph::from_edges(orig_ids, edges)
}

/// Total weight of edges with exactly one endpoint in `a`.
pub fn cut_weight(g: &WeightedGraph, a: &VertexSet) -> Result<u64> {
    let mask = a.mask(g.n())?;
    Ok(cut_weight_masked(g, a.as_slice(), &mask))
}

pub(crate) fn cut_weight_masked(g: &WeightedGraph, members: &[usize], mask: &[bool]) -> u64 {
    members.iter().flat_map(|&u| g.neighbors(u).iter()).filter(|&&(v, _)| !mask[v]).map(|&(_, w)| w).sum()
}

/// Subgraph induced by `a`, with dense ids and the back-map to `g`'s ids.
pub fn induced_subgraph(g: &WeightedGraph, a: &VertexSet) -> Result<(WeightedGraph, Vec<usize>)> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let mask = a.mask(g.n())?;
    let mut local = vec![usize::MAX; g.n()];
    for (i, v) in a.iter().enumerate() {
        local[v] = i;
    }
    let orig_ids = a.iter().map(|v| g.orig_id(v)).collect();
    let edges = a.iter().flat_map(|u| {
        let local = &local;
        let mask = &mask;
        g.neighbors(u).iter().filter(move |&&(v, _)| mask[v] && u <= v).map(move |&(v, w)| (local[u], local[v], w))
    });
    let sub = WeightedGraph::from_edges(orig_ids, edges)?;
    Ok((sub, a.as_slice().to_vec()))
}

/// `(Lx)_u = deg_w(u) x_u - sum_v w(u,v) x_v`.
pub fn laplacian_matvec(g: &WeightedGraph, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), got: x.len() });
    }
    let mut out = vec![0.0; g.n()];
    g.laplacian_apply(x, &mut out);
    Ok(out)
}

/// Incrementally maps external ids to dense ids in first-appearance order.
#[derive(Debug, Default)]
pub struct GraphBuilder {
    index: BTreeMap<u64, usize>,
    orig_ids: Vec<u64>,
    edges: Vec<(usize, usize, u64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, orig: u64) -> usize {
        let next = self.orig_ids.len();
        *self.index.entry(orig).or_insert_with(|| {
            self.orig_ids.push(orig);
            next
        })
    }

    pub fn add_edge(&mut self, u: u64, v: u64, w: u64) -> Result<()> {
        if w == 0 {
            return Err(Error::NonPositiveWeight);
        }
        let (a, b) = (self.vertex(u), self.vertex(v));
        self.edges.push((a, b, w));
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.orig_ids.len()
    }

    pub fn build(self) -> Result<WeightedGraph> {
        WeightedGraph::from_edges(self.orig_ids, self.edges)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::from_edges((0..n as u64).collect(), edges.iter().map(|&(u, v)| (u, v, 1))).unwrap()
    }

    #[test]
    fn builder_merges_parallel_edges() {
        let mut b = GraphBuilder::new();
        b.add_edge(5, 9, 3).unwrap();
        b.add_edge(9, 5, 4).unwrap();
        let g = b.build().unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.orig_ids(), &[5, 9]);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1, 7)]);
    }

    #[test]
    fn self_loops_survive_until_preprocess() {
        let mut b = GraphBuilder::new();
        b.add_edge(0, 0, 2).unwrap();
        b.add_edge(0, 1, 1).unwrap();
        let g = b.build().unwrap();
        assert!(g.has_self_loops());
        assert_eq!(g.total_weight(), 3);
        let p = preprocess(&g).unwrap();
        assert!(!p.has_self_loops());
        assert_eq!(p.edges().collect::<Vec<_>>(), vec![(0, 1, 1)]);
    }

    #[test]
    fn preprocess_keeps_largest_component() {
        // {0,1,2} path and {3,4} edge
        let g = unit(5, &[(0, 1), (1, 2), (3, 4)]);
        let p = preprocess(&g).unwrap();
        assert_eq!(p.n(), 3);
        assert_eq!(p.orig_ids(), &[0, 1, 2]);
    }

    #[test]
    fn preprocess_tie_prefers_smallest_original_id() {
        let g = WeightedGraph::from_edges(vec![40, 41, 7, 8], [(0, 1, 1), (2, 3, 1)]).unwrap();
        let p = preprocess(&g).unwrap();
        assert_eq!(p.orig_ids(), &[7, 8]);
    }

    #[test]
    fn preprocess_is_identity_on_clean_graph() {
        let g = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(preprocess(&g).unwrap(), g);
    }

    #[test]
    fn preprocess_rejects_empty() {
        let g = WeightedGraph::from_edges(Vec::new(), []).unwrap();
        assert_eq!(preprocess(&g), Err(Error::EmptyGraph));
    }

    #[test]
    fn cut_weight_examples() {
        let k3 = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(cut_weight(&k3, &VertexSet::new([1])).unwrap(), 2);
        assert_eq!(cut_weight(&k3, &VertexSet::empty()).unwrap(), 0);
        let star = unit(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(cut_weight(&star, &VertexSet::new([0])).unwrap(), 3);
        assert_eq!(cut_weight(&star, &VertexSet::new([7])), Err(Error::VertexOutOfRange { id: 7, n: 4 }));
    }

    #[test]
    fn induced_subgraph_examples() {
        let k3 = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        let (s, back) = induced_subgraph(&k3, &VertexSet::new([0, 1])).unwrap();
        assert_eq!(s.edges().collect::<Vec<_>>(), vec![(0, 1, 1)]);
        assert_eq!(back, vec![0, 1]);
        let (all, _) = induced_subgraph(&k3, &VertexSet::new(0..3)).unwrap();
        assert_eq!(all, k3);
        let p3 = unit(3, &[(0, 1), (1, 2)]);
        let (iso, back) = induced_subgraph(&p3, &VertexSet::new([0, 2])).unwrap();
        assert_eq!(iso.n(), 2);
        assert_eq!(iso.num_edges(), 0);
        assert_eq!(back, vec![0, 2]);
        assert_eq!(induced_subgraph(&p3, &VertexSet::empty()).unwrap_err(), Error::EmptySet);
    }

    #[test]
    fn laplacian_examples() {
        let p2 = unit(2, &[(0, 1)]);
        assert_eq!(laplacian_matvec(&p2, &[1.0, 0.0]).unwrap(), vec![1.0, -1.0]);
        let k3 = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(laplacian_matvec(&k3, &[1.0, 1.0, 1.0]).unwrap(), vec![0.0; 3]);
        assert_eq!(laplacian_matvec(&k3, &[1.0, -1.0, 0.0]).unwrap(), vec![3.0, -3.0, 0.0]);
        assert!(matches!(laplacian_matvec(&k3, &[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    fn arb_graph() -> impl Strategy<Value = WeightedGraph> {
        (2usize..12).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, 1u64..6), 1..30).prop_map(move |edges| {
                WeightedGraph::from_edges((0..n as u64).collect(), edges.into_iter().filter(|(u, v, _)| u != v))
                    .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn cut_is_symmetric_and_subadditive(g in arb_graph(), bits in any::<u64>(), other in any::<u64>()) {
            let n = g.n();
            let a = VertexSet::new((0..n).filter(|&i| bits >> i & 1 == 1));
            let b = VertexSet::new((0..n).filter(|&i| other >> i & 1 == 1 && bits >> i & 1 == 0));
            let ca = cut_weight(&g, &a).unwrap();
            prop_assert_eq!(ca, cut_weight(&g, &a.complement(n)).unwrap());
            let union = VertexSet::new(a.iter().chain(b.iter()));
            prop_assert!(cut_weight(&g, &union).unwrap() <= ca + cut_weight(&g, &b).unwrap());
        }

        #[test]
        fn laplacian_quadratic_form(g in arb_graph(), xs in proptest::collection::vec(-10.0f64..10.0, 12)) {
            let x = &xs[..g.n()];
            let lx = laplacian_matvec(&g, x).unwrap();
            let form: f64 = x.iter().zip(&lx).map(|(a, b)| a * b).sum();
            let direct: f64 = g.edges().map(|(u, v, w)| w as f64 * (x[u] - x[v]).powi(2)).sum();
            prop_assert!(form >= -1e-9 * direct.max(1.0));
            prop_assert!((form - direct).abs() <= 1e-9 * direct.max(1.0));
        }
    }
}
