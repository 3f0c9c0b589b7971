//! Exact integral max-flow with min-cut certificates, and the flow gadgets
//! built on trees and graphs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{VertexSet, WeightedGraph};
use crate::importance::Importance;
use crate::ratio::Ratio;
use crate::tree::{DecompTree, Weight};

/// Arc capacity: a nonnegative integer or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Capacity {
    Finite(i128),
    Inf,
}

impl Capacity {
    pub fn finite(self) -> Option<i128> {
        match self {
            Capacity::Finite(c) => Some(c),
            Capacity::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, Capacity::Inf)
    }

    /// Scales a tree weight by `q`.
    pub fn scaled(w: Weight, q: i128) -> Result<Capacity> {
        match w {
            Weight::Finite(x) => (x as i128).checked_mul(q).map(Capacity::Finite).ok_or(Error::Overflow),
            Weight::Inf => Ok(Capacity::Inf),
        }
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Finite(c) => write!(f, "{c}"),
            Capacity::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub cap: Capacity,
}

/// A directed network with distinguished source and sink.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowNetwork {
    n: usize,
    source: usize,
    sink: usize,
    arcs: Vec<Arc>,
}

/// Source side of a minimum cut together with its capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutCertificate {
    pub source_side: Vec<bool>,
    pub value: Capacity,
}

impl FlowNetwork {
    pub fn new(n: usize, source: usize, sink: usize) -> Result<Self> {
        if source >= n || sink >= n {
            return Err(Error::VertexOutOfRange { id: source.max(sink), n });
        }
        if source == sink {
            return Err(Error::InvalidParameter("source and sink coincide".into()));
        }
        Ok(FlowNetwork { n, source, sink, arcs: Vec::new() })
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn sink(&self) -> usize {
        self.sink
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: Capacity) -> Result<()> {
        for x in [from, to] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { id: x, n: self.n });
            }
        }
        if matches!(cap, Capacity::Finite(c) if c < 0) {
            return Err(Error::InvalidParameter("negative capacity".into()));
        }
        self.arcs.push(Arc { from, to, cap });
        Ok(())
    }

    /// An undirected edge, stored as two opposing arcs.
    pub fn add_edge(&mut self, u: usize, v: usize, cap: Capacity) -> Result<()> {
        self.add_arc(u, v, cap)?;
        self.add_arc(v, u, cap)
    }

    /// Total capacity of arcs leaving `side`.
    pub fn cut_capacity(&self, side: &[bool]) -> Result<Capacity> {
        let mut total: i128 = 0;
        for a in &self.arcs {
            if side[a.from] && !side[a.to] {
                match a.cap {
                    Capacity::Inf => return Ok(Capacity::Inf),
                    Capacity::Finite(c) => total = total.checked_add(c).ok_or(Error::Overflow)?,
                }
            }
        }
        Ok(Capacity::Finite(total))
    }
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<i128>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    fn levels(&self, s: usize, level: &mut [usize]) {
        level.fill(usize::MAX);
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.head[e];
                if self.cap[e] > 0 && level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }

    /// One blocking flow in the level graph, found without recursion.
    fn blocking_flow(&mut self, s: usize, t: usize, level: &mut [usize]) -> Result<i128> {
        let n = self.adj.len();
        let mut next = vec![0usize; n];
        let mut path: Vec<usize> = Vec::new();
        let mut tails: Vec<usize> = Vec::new();
        let mut total: i128 = 0;
        let mut u = s;
        loop {
            if u == t {
                let push = path.iter().map(|&e| self.cap[e]).min().unwrap_or(0);
                let mut cut_at = path.len();
                for (i, &e) in path.iter().enumerate() {
                    self.cap[e] -= push;
                    self.cap[e ^ 1] += push;
                    if self.cap[e] == 0 && cut_at == path.len() {
                        cut_at = i;
                    }
                }
                total = total.checked_add(push).ok_or(Error::Overflow)?;
                u = tails[cut_at];
                path.truncate(cut_at);
                tails.truncate(cut_at);
                continue;
            }
            let mut advanced = false;
            while next[u] < self.adj[u].len() {
                let e = self.adj[u][next[u]];
                let v = self.head[e];
                if self.cap[e] > 0 && level[v] == level[u] + 1 {
                    path.push(e);
                    tails.push(u);
                    u = v;
                    advanced = true;
                    break;
                }
                next[u] += 1;
            }
            if advanced {
                continue;
            }
            level[u] = usize::MAX;
            match tails.pop() {
                None => break,
                Some(prev) => {
                    path.pop();
                    u = prev;
                    next[u] += 1;
                }
            }
        }
        Ok(total)
    }
}

/// Maximum flow value together with a minimum cut certificate.
///
/// Infinite-capacity arcs are kept symbolic: if the sink is reachable through
/// infinite arcs alone the value is infinite; otherwise they are replaced by
/// a capacity exceeding every finite cut, which leaves the minimum unchanged.
pub fn max_flow(net: &FlowNetwork) -> Result<(Capacity, CutCertificate)> {
    let (s, t, n) = (net.source, net.sink, net.n);
    let mut inf_reach = vec![false; n];
    inf_reach[s] = true;
    let mut inf_adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in &net.arcs {
        if a.cap.is_inf() {
            inf_adj[a.from].push(a.to);
        }
    }
    let mut stack = vec![s];
    while let Some(u) = stack.pop() {
        for &v in &inf_adj[u] {
            if !inf_reach[v] {
                inf_reach[v] = true;
                stack.push(v);
            }
        }
    }
    if inf_reach[t] {
        let mut side = vec![false; n];
        side[s] = true;
        return Ok((Capacity::Inf, CutCertificate { source_side: side, value: Capacity::Inf }));
    }
    let finite_sum = net
        .arcs
        .iter()
        .filter_map(|a| a.cap.finite())
        .try_fold(0i128, |acc, c| acc.checked_add(c))
        .ok_or(Error::Overflow)?;
    let big = finite_sum.checked_add(1).ok_or(Error::Overflow)?;
    let mut res = Residual { head: Vec::with_capacity(2 * net.arcs.len()), cap: Vec::new(), adj: vec![Vec::new(); n] };
    for a in &net.arcs {
        let c = a.cap.finite().unwrap_or(big);
        res.adj[a.from].push(res.head.len());
        res.head.push(a.to);
        res.cap.push(c);
        res.adj[a.to].push(res.head.len());
        res.head.push(a.from);
        res.cap.push(0);
    }
    let mut level = vec![usize::MAX; n];
    let mut value: i128 = 0;
    loop {
        res.levels(s, &mut level);
        if level[t] == usize::MAX {
            break;
        }
        value = value.checked_add(res.blocking_flow(s, t, &mut level)?).ok_or(Error::Overflow)?;
    }
    let side = res.reachable(s);
    let cert = net.cut_capacity(&side)?;
    assert_eq!(cert, Capacity::Finite(value), "max-flow value differs from its cut certificate");
    Ok((Capacity::Finite(value), CutCertificate { source_side: side, value: cert }))
}

/// A gadget network plus the demand that must be routed for feasibility.
#[derive(Debug, Clone)]
pub struct Gadget {
    pub network: FlowNetwork,
    pub demand: i128,
}

impl Gadget {
    pub fn feasible(&self) -> Result<bool> {
        let (value, _) = max_flow(&self.network)?;
        Ok(match value {
            Capacity::Inf => true,
            Capacity::Finite(v) => v >= self.demand,
        })
    }
}

fn split_tau(tau: Ratio) -> Result<(i128, i128)> {
    if *tau.numer() < 0 {
        return Err(Error::InvalidParameter("negative threshold".into()));
    }
    Ok((*tau.numer(), *tau.denom()))
}

/// The tree gadget: tree edges at `q w`, a source arc of capacity `p f(v)`
/// to every leaf and an infinite sink arc from every leaf labeled in `labels`,
/// where `tau = p / q`. `labels` holds vertex indices of the tree's leaves.
pub fn build_tree_gadget(tree: &DecompTree, labels: &VertexSet, tau: Ratio, f: &Importance) -> Result<Gadget> {
    let (p, q) = split_tau(tau)?;
    let nodes = tree.len();
    let leaves = tree.num_leaves();
    let total = f.total(leaves)?;
    if let Some(m) = labels.max() {
        if m >= leaves {
            return Err(Error::NotEligible(m));
        }
    }
    let (s, t) = (nodes, nodes + 1);
    let mut net = FlowNetwork::new(nodes + 2, s, t)?;
    for (i, node) in tree.nodes().iter().enumerate() {
        if let Some(par) = node.parent {
            net.add_edge(par, i, Capacity::scaled(node.parent_edge_weight, q)?)?;
        }
    }
    for v in 0..leaves {
        let leaf = tree.leaf_of_vertex(v);
        net.add_arc(s, leaf, Capacity::Finite(p.checked_mul(f.get(v) as i128).ok_or(Error::Overflow)?))?;
        if labels.contains(v) {
            net.add_arc(leaf, t, Capacity::Inf)?;
        }
    }
    let demand = p.checked_mul(total as i128).ok_or(Error::Overflow)?;
    Ok(Gadget { network: net, demand })
}

/// The same construction on a graph: every vertex is a source and labeled
/// vertices drain into the sink.
pub fn build_graph_gadget(g: &WeightedGraph, labels: &VertexSet, tau: Ratio, f: &Importance) -> Result<Gadget> {
    let (p, q) = split_tau(tau)?;
    let n = g.n();
    let total = f.total(n)?;
    if let Some(m) = labels.max() {
        if m >= n {
            return Err(Error::NotEligible(m));
        }
    }
    let (s, t) = (n, n + 1);
    let mut net = FlowNetwork::new(n + 2, s, t)?;
    for (u, v, w) in g.edges() {
        if u != v {
            net.add_edge(u, v, Capacity::Finite((w as i128).checked_mul(q).ok_or(Error::Overflow)?))?;
        }
    }
    for v in 0..n {
        net.add_arc(s, v, Capacity::Finite(p.checked_mul(f.get(v) as i128).ok_or(Error::Overflow)?))?;
        if labels.contains(v) {
            net.add_arc(v, t, Capacity::Inf)?;
        }
    }
    let demand = p.checked_mul(total as i128).ok_or(Error::Overflow)?;
    Ok(Gadget { network: net, demand })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::unit;
    use proptest::prelude::*;

    fn two_leaf_star() -> DecompTree {
        DecompTree::from_parents(
            vec![
                (None, Weight::Inf, None),
                (Some(0), Weight::Finite(1), Some(0)),
                (Some(0), Weight::Finite(1), Some(1)),
            ],
            vec![10, 11],
        )
        .unwrap()
    }

    #[test]
    fn single_path_bottleneck() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, Capacity::Finite(3)).unwrap();
        net.add_arc(1, 2, Capacity::Finite(5)).unwrap();
        let (v, cert) = max_flow(&net).unwrap();
        assert_eq!(v, Capacity::Finite(3));
        assert_eq!(cert.source_side, vec![true, false, false]);
        assert_eq!(cert.value, Capacity::Finite(3));
    }

    #[test]
    fn disconnected_sink_gets_nothing() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, Capacity::Finite(3)).unwrap();
        assert_eq!(max_flow(&net).unwrap().0, Capacity::Finite(0));
    }

    #[test]
    fn infinite_paths_and_infinite_arcs_behind_finite_cuts() {
        let mut net = FlowNetwork::new(3, 0, 2).unwrap();
        net.add_arc(0, 1, Capacity::Inf).unwrap();
        net.add_arc(1, 2, Capacity::Inf).unwrap();
        assert_eq!(max_flow(&net).unwrap().0, Capacity::Inf);

        let mut net = FlowNetwork::new(4, 0, 3).unwrap();
        net.add_arc(0, 1, Capacity::Inf).unwrap();
        net.add_arc(1, 2, Capacity::Finite(4)).unwrap();
        net.add_arc(0, 2, Capacity::Finite(1)).unwrap();
        net.add_arc(2, 3, Capacity::Inf).unwrap();
        let (v, cert) = max_flow(&net).unwrap();
        assert_eq!(v, Capacity::Finite(5));
        assert_eq!(cert.source_side, vec![true, true, false, false]);
    }

    #[test]
    fn two_leaf_gadget_routes_both_demands() {
        let t = two_leaf_star();
        let labels = VertexSet::new([0]);
        let gad = build_tree_gadget(&t, &labels, Ratio::from_integer(1), &Importance::Uniform).unwrap();
        assert_eq!(gad.demand, 2);
        assert_eq!(max_flow(&gad.network).unwrap().0, Capacity::Finite(2));
        assert!(gad.feasible().unwrap());
        let over = build_tree_gadget(&t, &labels, Ratio::new(3, 2), &Importance::Uniform).unwrap();
        assert!(!over.feasible().unwrap());
    }

    #[test]
    fn gadget_arcs() {
        let t = two_leaf_star();
        let gad = build_tree_gadget(&t, &VertexSet::new([0]), Ratio::from_integer(1), &Importance::Uniform).unwrap();
        let (s, sink) = (gad.network.source(), gad.network.sink());
        let arcs = gad.network.arcs();
        assert!(arcs.contains(&Arc { from: s, to: 1, cap: Capacity::Finite(1) }));
        assert!(arcs.contains(&Arc { from: s, to: 2, cap: Capacity::Finite(1) }));
        assert!(arcs.contains(&Arc { from: 1, to: sink, cap: Capacity::Inf }));
        assert_eq!(arcs.iter().filter(|a| a.to == sink).count(), 1);
        // four tree arcs, two source arcs, one sink arc
        assert_eq!(arcs.len(), 7);
    }

    #[test]
    fn degenerate_gadgets() {
        let t = two_leaf_star();
        let none = build_tree_gadget(&t, &VertexSet::empty(), Ratio::from_integer(1), &Importance::Uniform).unwrap();
        assert_eq!(max_flow(&none.network).unwrap().0, Capacity::Finite(0));
        let zero = build_tree_gadget(&t, &VertexSet::empty(), Ratio::from_integer(0), &Importance::Uniform).unwrap();
        assert!(zero.feasible().unwrap());
        assert_eq!(
            build_tree_gadget(&t, &VertexSet::new([2]), Ratio::from_integer(1), &Importance::Uniform).unwrap_err(),
            Error::NotEligible(2)
        );
    }

    #[test]
    fn graph_gadget_on_a_star() {
        let g = unit(4, &[(0, 1), (0, 2), (0, 3)]);
        let outer = VertexSet::new([1, 2, 3]);
        let ok = build_graph_gadget(&g, &outer, Ratio::from_integer(3), &Importance::Uniform).unwrap();
        assert!(ok.feasible().unwrap());
        let too_much = build_graph_gadget(&g, &outer, Ratio::new(31, 10), &Importance::Uniform).unwrap();
        assert!(!too_much.feasible().unwrap());
    }

    fn brute_min_cut(n: usize, arcs: &[(usize, usize, i128)]) -> i128 {
        // source 0, sink n - 1
        let mut best = i128::MAX;
        for mask in 0u32..1 << n {
            if mask & 1 == 0 || mask >> (n - 1) & 1 == 1 {
                continue;
            }
            let c = arcs.iter().filter(|&&(u, v, _)| mask >> u & 1 == 1 && mask >> v & 1 == 0).map(|a| a.2).sum();
            best = best.min(c);
        }
        best
    }

    proptest! {
        #[test]
        fn flow_equals_enumerated_min_cut(
            n in 2usize..8,
            raw in proptest::collection::vec((0usize..8, 0usize..8, 0i128..10), 0..25),
        ) {
            let arcs: Vec<_> = raw.into_iter().map(|(u, v, c)| (u % n, v % n, c)).filter(|a| a.0 != a.1).collect();
            let mut net = FlowNetwork::new(n, 0, n - 1).unwrap();
            for &(u, v, c) in &arcs {
                net.add_arc(u, v, Capacity::Finite(c)).unwrap();
            }
            let (value, cert) = max_flow(&net).unwrap();
            prop_assert_eq!(value, Capacity::Finite(brute_min_cut(n, &arcs)));
            prop_assert!(cert.source_side[0] && !cert.source_side[n - 1]);
        }
    }
}
