//! Sparse-cut bisection heuristics: spectral sweep cuts and sampled
//! external partitioner calls.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{cut_weight, VertexSet, WeightedGraph};
use crate::ratio::Ratio;
use crate::spectral::{fiedler_vector, EigenOptions};

/// A split of the current vertex set into two nonempty halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bisection {
    pub a: VertexSet,
    pub b: VertexSet,
    /// `cut_weight(a) / min(|a|, |b|)`.
    pub score: Ratio,
}

impl Bisection {
    /// Validates that `a` and `b` partition `0..n` and scores the split.
    pub fn new(g: &WeightedGraph, a: VertexSet, b: VertexSet) -> Result<Self> {
        let n = g.n();
        if a.is_empty() || b.is_empty() {
            return Err(Error::InvalidBisection(String::from("empty side")));
        }
        if a.len() + b.len() != n || a.iter().any(|v| b.contains(v)) {
            return Err(Error::InvalidBisection(String::from("sides must be disjoint and cover the vertex set")));
        }
        if let Some(max) = a.max().max(b.max()).filter(|&m| m >= n) {
            return Err(Error::VertexOutOfRange { id: max, n });
        }
        let cut = cut_weight(g, &a)?;
        let score = Ratio::new(cut as i128, a.len().min(b.len()) as i128);
        Ok(Bisection { a, b, score })
    }

    /// Deterministic preference: lower score, then smaller `|a|`, then
    /// smaller maximum id in `a`.
    pub fn better_than(&self, other: &Bisection) -> bool {
        self.rank_cmp(other) == Ordering::Less
    }

    fn rank_cmp(&self, other: &Bisection) -> Ordering {
        self.score.cmp(&other.score).then(self.a.len().cmp(&other.a.len())).then(self.a.max().cmp(&other.a.max()))
    }
}

/// Splits off the connected component that contains vertex 0.
pub fn component_split(g: &WeightedGraph) -> Result<Bisection> {
    let comps = g.components();
    if comps.len() < 2 {
        return Err(Error::InvalidBisection(String::from("graph is connected")));
    }
    let a = VertexSet::new(comps[0].iter().copied());
    let b = a.complement(g.n());
    Bisection::new(g, a, b)
}

/// Splits by vertex id: the first `n / 2` ids against the rest.
pub fn id_split(g: &WeightedGraph) -> Result<Bisection> {
    let half = g.n() / 2;
    Bisection::new(g, VertexSet::new(0..half), VertexSet::new(half..g.n()))
}

/// Best threshold cut of `v`: `A = {i : v_i <= t}` over the distinct values
/// `t` of `v`. With `beta > 0`, cuts with `min(|A|, |B|) <= n * beta` are
/// skipped.
pub fn sweep_cut(g: &WeightedGraph, v: &[f64], beta: f64) -> Result<Bisection> {
    let n = g.n();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: v.len() });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| v[a].total_cmp(&v[b]).then(a.cmp(&b)));
    let mut in_a = vec![false; n];
    let mut cut: i128 = 0;
    let mut max_id = 0usize;
    // (score, |A|, max id)
    let mut best: Option<(Ratio, usize, usize)> = None;
    for (pos, &u) in order.iter().enumerate() {
        for &(x, w) in g.neighbors(u) {
            if x == u {
                continue;
            }
            if in_a[x] {
                cut -= w as i128;
            } else {
                cut += w as i128;
            }
        }
        in_a[u] = true;
        max_id = max_id.max(u);
        let size_a = pos + 1;
        if size_a == n || v[order[pos + 1]].total_cmp(&v[u]) == Ordering::Equal {
            continue;
        }
        let small = size_a.min(n - size_a);
        if beta > 0.0 && (small as f64) <= n as f64 * beta {
            continue;
        }
        let cand = (Ratio::new(cut, small as i128), size_a, max_id);
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand);
        }
    }
    let (_, size_a, _) = best.ok_or(Error::NoAdmissibleSweep)?;
    let a = VertexSet::new(order[..size_a].iter().copied());
    let b = VertexSet::new(order[size_a..].iter().copied());
    Bisection::new(g, a, b)
}

/// An external graph partitioner producing a two-way split with the given
/// target weight fraction for the first part.
pub trait Partitioner {
    fn partition(&mut self, g: &WeightedGraph, target_fraction: f64) -> Result<(Vec<usize>, Vec<usize>)>;
}

impl<F> Partitioner for F
where
    F: FnMut(&WeightedGraph, f64) -> Result<(Vec<usize>, Vec<usize>)>,
{
    fn partition(&mut self, g: &WeightedGraph, target_fraction: f64) -> Result<(Vec<usize>, Vec<usize>)> {
        self(g, target_fraction)
    }
}

/// `samples` points geometrically spaced over `[1, n/2]`; one sample gives `[1]`.
pub fn geometric_targets(n: usize, samples: usize) -> Vec<f64> {
    let hi = n as f64 / 2.0;
    if samples <= 1 {
        return vec![1.0];
    }
    let ratio = libm::log(hi);
    (0..samples)
        .map(|i| if i + 1 == samples { hi } else { libm::exp(ratio * i as f64 / (samples - 1) as f64) })
        .collect()
}

/// Calls the partitioner once per geometric target weight `w`, with target
/// fraction `w / n`, and keeps the best-scoring bisection.
pub fn sampled_bisect(g: &WeightedGraph, partitioner: &mut dyn Partitioner, samples: usize) -> Result<Bisection> {
    if samples == 0 {
        return Err(Error::InvalidParameter(String::from("samples must be at least 1")));
    }
    let n = g.n();
    let mut best: Option<Bisection> = None;
    for w in geometric_targets(n, samples) {
        let (a, b) = partitioner.partition(g, w / n as f64)?;
        let cand = Bisection::new(g, VertexSet::new(a), VertexSet::new(b))
            .map_err(|e| Error::Partitioner(format!("malformed partition: {e}")))?;
        if best.as_ref().is_none_or(|b| cand.better_than(b)) {
            best = Some(cand);
        }
    }
    best.ok_or_else(|| Error::Partitioner(String::from("no partition produced")))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BisectVariant {
    Fiedler,
    FiedlerBalanced { beta: f64 },
    Sampled { samples: usize },
}

/// Which heuristic splits each cluster, plus the seed that drives it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BisectMethod {
    pub variant: BisectVariant,
    pub seed: u64,
}

impl BisectMethod {
    pub fn fiedler(seed: u64) -> Self {
        BisectMethod { variant: BisectVariant::Fiedler, seed }
    }

    pub fn fiedler_balanced(beta: f64, seed: u64) -> Result<Self> {
        if !(beta > 0.0 && beta < 0.5) {
            return Err(Error::InvalidParameter(format!("beta must lie in (0, 0.5), got {beta}")));
        }
        Ok(BisectMethod { variant: BisectVariant::FiedlerBalanced { beta }, seed })
    }

    pub fn sampled(samples: usize, seed: u64) -> Result<Self> {
        if samples == 0 {
            return Err(Error::InvalidParameter(String::from("samples must be at least 1")));
        }
        Ok(BisectMethod { variant: BisectVariant::Sampled { samples }, seed })
    }

    /// Short name such as `fiedler`, `fiedler-balanced:0.1`, `sampled:10`.
    pub fn descriptor(&self) -> String {
        match self.variant {
            BisectVariant::Fiedler => String::from("fiedler"),
            BisectVariant::FiedlerBalanced { beta } => format!("fiedler-balanced:{beta}"),
            BisectVariant::Sampled { samples } => format!("sampled:{samples}"),
        }
    }

    /// Builds the bisector; sampled methods need a partitioner.
    pub fn bisector<'p>(&self, partitioner: Option<&'p mut dyn Partitioner>) -> Result<Box<dyn Bisector + 'p>> {
        match self.variant {
            BisectVariant::Fiedler => Ok(Box::new(SpectralBisector::new(0.0, self.seed))),
            BisectVariant::FiedlerBalanced { beta } => Ok(Box::new(SpectralBisector::new(beta, self.seed))),
            BisectVariant::Sampled { samples } => {
                let partitioner = partitioner
                    .ok_or_else(|| Error::InvalidParameter(String::from("sampled bisection needs a partitioner")))?;
                Ok(Box::new(SampledBisector { partitioner, samples }))
            }
        }
    }
}

/// Splits a connected graph with at least two vertices.
pub trait Bisector {
    /// `salt` distinguishes clusters so that seeded heuristics stay
    /// deterministic independent of processing order.
    fn bisect(&mut self, g: &WeightedGraph, salt: u64) -> Result<Bisection>;
}

/// Fiedler vector plus sweep cut; falls back to the unconstrained sweep when
/// the balance constraint rejects every threshold, and to [`id_split`] when
/// the eigensolver fails or the vector is constant.
#[derive(Debug, Clone)]
pub struct SpectralBisector {
    pub beta: f64,
    pub options: EigenOptions,
}

impl SpectralBisector {
    pub fn new(beta: f64, seed: u64) -> Self {
        SpectralBisector { beta, options: EigenOptions { seed, ..EigenOptions::default() } }
    }
}

fn mix(seed: u64, salt: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Bisector for SpectralBisector {
    fn bisect(&mut self, g: &WeightedGraph, salt: u64) -> Result<Bisection> {
        let opts = EigenOptions { seed: mix(self.options.seed, salt), ..self.options };
        let Ok(pair) = fiedler_vector(g, &opts) else {
            return id_split(g);
        };
        match sweep_cut(g, &pair.vector, self.beta) {
            Ok(b) => Ok(b),
            Err(Error::NoAdmissibleSweep) if self.beta > 0.0 => {
                sweep_cut(g, &pair.vector, 0.0).or_else(|_| id_split(g))
            }
            Err(_) => id_split(g),
        }
    }
}

pub struct SampledBisector<'p> {
    pub partitioner: &'p mut dyn Partitioner,
    pub samples: usize,
}

impl Bisector for SampledBisector<'_> {
    fn bisect(&mut self, g: &WeightedGraph, _salt: u64) -> Result<Bisection> {
        sampled_bisect(g, self.partitioner, self.samples)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::RefCell;

    fn unit(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
        WeightedGraph::from_edges((0..n as u64).collect(), edges.iter().map(|&(u, v)| (u, v, 1))).unwrap()
    }

    #[test]
    fn p4_sweep_picks_middle_cut() {
        let g = unit(4, &[(0, 1), (1, 2), (2, 3)]);
        let c = libm::cos(core::f64::consts::PI / 8.0);
        let s = libm::cos(3.0 * core::f64::consts::PI / 8.0);
        let b = sweep_cut(&g, &[c, s, -s, -c], 0.0).unwrap();
        assert_eq!(b.score, Ratio::new(1, 2));
        assert_eq!(b.a, VertexSet::new([2, 3]));
    }

    #[test]
    fn constant_vector_has_no_sweep() {
        let g = unit(3, &[(0, 1), (1, 2)]);
        assert_eq!(sweep_cut(&g, &[0.5; 3], 0.0), Err(Error::NoAdmissibleSweep));
    }

    #[test]
    fn k3_sweep_scores_two() {
        let g = unit(3, &[(0, 1), (1, 2), (0, 2)]);
        let b = sweep_cut(&g, &[0.3, -0.1, 0.9], 0.0).unwrap();
        assert_eq!(b.score, Ratio::new(2, 1));
    }

    #[test]
    fn balance_filter_skips_lopsided_cuts() {
        // a pendant vertex 0 hanging off a 5-clique: the cheapest sweep cut peels it off
        let mut edges = vec![(0, 1)];
        for i in 1..6 {
            for j in i + 1..6 {
                edges.push((i, j));
            }
        }
        let g = unit(6, &edges);
        let v = [-1.0, -0.5, -0.2, 0.1, 0.3, 0.4];
        let free = sweep_cut(&g, &v, 0.0).unwrap();
        assert_eq!(free.a.len(), 1);
        let balanced = sweep_cut(&g, &v, 0.2).unwrap();
        assert!(balanced.a.len().min(balanced.b.len()) > 1);
        // only one threshold exists and it is lopsided
        let peel = [0.0, 1.0, 1.0, 1.0, 1.0, 1.0];
        assert_eq!(sweep_cut(&g, &peel, 0.2), Err(Error::NoAdmissibleSweep));
    }

    #[test]
    fn sweep_is_argmin_over_thresholds() {
        let g = unit(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (0, 3), (2, 5)]);
        let v = [0.7, -0.3, 0.1, -0.9, 0.25, 0.1, -0.3];
        let got = sweep_cut(&g, &v, 0.0).unwrap();
        let mut vals: Vec<f64> = v.to_vec();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        let best = vals[..vals.len() - 1]
            .iter()
            .map(|&t| {
                let a = VertexSet::new((0..7).filter(|&i| v[i] <= t));
                let b = a.complement(7);
                Bisection::new(&g, a, b).unwrap()
            })
            .reduce(|x, y| if y.better_than(&x) { y } else { x })
            .unwrap();
        assert_eq!(got, best);
    }

    #[test]
    fn geometric_grid_endpoints() {
        assert_eq!(geometric_targets(10, 1), vec![1.0]);
        let grid = geometric_targets(10, 4);
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[0], 1.0);
        assert_eq!(grid[3], 5.0);
        assert!(grid.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn sampled_bisect_with_stub() {
        let g = unit(4, &[(0, 1), (1, 2), (2, 3)]);
        let calls = RefCell::new(Vec::new());
        let mut stub = |_: &WeightedGraph, frac: f64| {
            calls.borrow_mut().push(frac);
            Ok((vec![0, 1], vec![2, 3]))
        };
        let b = sampled_bisect(&g, &mut stub, 1).unwrap();
        assert_eq!(*calls.borrow(), vec![0.25]);
        assert_eq!(b.a, VertexSet::new([0, 1]));
        assert_eq!(b.score, Ratio::new(1, 2));
    }

    #[test]
    fn sampled_bisect_rejects_bad_partitions() {
        let g = unit(3, &[(0, 1), (1, 2)]);
        let mut overlapping = |_: &WeightedGraph, _: f64| Ok((vec![0, 1], vec![1, 2]));
        assert!(matches!(sampled_bisect(&g, &mut overlapping, 2), Err(Error::Partitioner(_))));
        let mut empty = |_: &WeightedGraph, _: f64| Ok((vec![], vec![0, 1, 2]));
        assert!(matches!(sampled_bisect(&g, &mut empty, 2), Err(Error::Partitioner(_))));
        let mut failing = |_: &WeightedGraph, _: f64| Err(Error::Partitioner(String::from("boom")));
        assert!(sampled_bisect(&g, &mut failing, 2).is_err());
    }

    #[test]
    fn method_validation_and_descriptors() {
        assert!(BisectMethod::fiedler_balanced(0.6, 0).is_err());
        assert!(BisectMethod::fiedler_balanced(0.0, 0).is_err());
        assert!(BisectMethod::sampled(0, 0).is_err());
        assert_eq!(BisectMethod::fiedler_balanced(0.1, 0).unwrap().descriptor(), "fiedler-balanced:0.1");
        assert_eq!(BisectMethod::sampled(10, 0).unwrap().descriptor(), "sampled:10");
        assert!(BisectMethod::sampled(3, 0).unwrap().bisector(None).is_err());
    }
}
