//! Local core-number estimators.
//!
//! * The propagating estimator starts from degrees and repeatedly applies the
//!   max-min upper-bound step over neighbours' previous values. It never drops
//!   below the true core number and never increases with more rounds.
//! * The induced estimator is the core number of `v` inside the subgraph
//!   induced on its `delta`-ball. It never exceeds the true core number and
//!   never decreases as the ball grows.
//!
//! Both only look at `N_delta(v)`.

use std::collections::HashMap;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::cores::{core_decomposition, CoreDecomposition};
use crate::error::{Error, Result};
use crate::graph::{BfsScratch, Graph, VertexId, UNSEEN};

/// `max_i min(bounds_(i), deg - i + 1)` over the bounds sorted ascending.
///
/// Bounds above `deg` cannot change the result, so they are clipped and the
/// sort is a counting sort over `0..=deg`.
pub fn upper_bound_step(deg: usize, neighbor_bounds: &[usize]) -> Result<usize> {
    if neighbor_bounds.len() != deg {
        return Err(Error::argument(format!(
            "degree {deg} but {} neighbour bounds",
            neighbor_bounds.len()
        )));
    }
    let mut counts = Vec::new();
    Ok(bucket_max_min(
        deg,
        neighbor_bounds.iter().copied(),
        &mut counts,
    ))
}

pub(crate) fn bucket_max_min<I>(deg: usize, bounds: I, counts: &mut Vec<usize>) -> usize
where
    I: Iterator<Item = usize>,
{
    counts.clear();
    counts.resize(deg + 1, 0);
    for b in bounds {
        counts[b.min(deg)] += 1;
    }
    let mut best = 0;
    let mut i = 1;
    for (value, &c) in counts.iter().enumerate() {
        for _ in 0..c {
            best = best.max(value.min(deg + 1 - i));
            i += 1;
        }
    }
    best
}

/// Propagating estimate of `v` after `delta` rounds, computed only over
/// `N_delta(v)`.
///
/// Members are held in BFS order, so the vertices within distance `t` of `v`
/// form a prefix. Round `r` refreshes the prefix at distance `<= delta - r`,
/// whose neighbours all lie in the prefix refreshed by round `r - 1`.
pub fn propagate_estimate(g: &Graph, v: VertexId, delta: usize) -> Result<usize> {
    g.check_vertex(v)?;
    if delta == 0 {
        return Ok(g.degree(v));
    }
    let mut bfs = BfsScratch::new(g.n());
    bfs.run(g, v, delta);
    let order = &bfs.order;
    let local: HashMap<VertexId, usize> =
        order.iter().enumerate().map(|(i, &u)| (u, i)).collect();

    // prefix_len[t] = number of members at distance <= t
    let mut prefix_len = vec![0usize; delta + 1];
    for &u in order {
        prefix_len[bfs.dist(u)] += 1;
    }
    for t in 1..=delta {
        prefix_len[t] += prefix_len[t - 1];
    }

    let mut prev: Vec<usize> = order.iter().map(|&u| g.degree(u)).collect();
    let mut next = prev.clone();
    let mut counts = Vec::new();
    for round in 1..=delta {
        let live = prefix_len[delta - round];
        for i in 0..live {
            let u = order[i];
            next[i] = bucket_max_min(
                g.degree(u),
                g.neighbors(u).iter().map(|w| prev[local[w]]),
                &mut counts,
            );
        }
        std::mem::swap(&mut prev, &mut next);
    }
    Ok(prev[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Induced,
    Propagating,
}

impl EstimatorKind {
    pub fn as_str(self) -> &'static str {
        match self {
            EstimatorKind::Induced => "induced",
            EstimatorKind::Propagating => "propagating",
        }
    }
}

/// Per-vertex estimates over an inclusive range of radii.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EstimateTable {
    pub kind: EstimatorKind,
    pub deltas: RangeInclusive<usize>,
    /// `values[delta - deltas.start()][v]`.
    pub values: Vec<Vec<usize>>,
    pub exact_core: Option<Vec<usize>>,
}

impl EstimateTable {
    pub fn get(&self, v: VertexId, delta: usize) -> Option<usize> {
        if !self.deltas.contains(&delta) {
            return None;
        }
        self.values[delta - self.deltas.start()].get(v).copied()
    }

    /// Values at one radius for every vertex.
    pub fn at(&self, delta: usize) -> Option<&[usize]> {
        if !self.deltas.contains(&delta) {
            return None;
        }
        Some(&self.values[delta - self.deltas.start()])
    }

    pub fn vertex_count(&self) -> usize {
        self.values.first().map(Vec::len).unwrap_or(0)
    }

    pub fn with_exact_core(mut self, core: &CoreDecomposition) -> Self {
        self.exact_core = Some(core.core.clone());
        self
    }

    /// Keeps only the radii in `range`.
    pub fn restrict(&self, range: RangeInclusive<usize>) -> Result<Self> {
        if range.is_empty()
            || range.start() < self.deltas.start()
            || range.end() > self.deltas.end()
        {
            return Err(Error::argument(format!(
                "range {range:?} not within {:?}",
                self.deltas
            )));
        }
        let lo = range.start() - self.deltas.start();
        let hi = range.end() - self.deltas.start();
        Ok(EstimateTable {
            kind: self.kind,
            deltas: range,
            values: self.values[lo..=hi].to_vec(),
            exact_core: self.exact_core.clone(),
        })
    }
}

/// One synchronous round of the upper-bound step at every vertex.
fn propagate_round(g: &Graph, prev: &[usize]) -> Vec<usize> {
    (0..g.n())
        .into_par_iter()
        .map_init(Vec::new, |counts, u| {
            bucket_max_min(
                g.degree(u),
                g.neighbors(u).iter().map(|&w| prev[w]),
                counts,
            )
        })
        .collect()
}

/// Propagating estimates for all vertices at radii `0..=delta`.
pub fn propagate_all(g: &Graph, delta: usize) -> EstimateTable {
    let mut values = Vec::with_capacity(delta + 1);
    values.push(g.degrees());
    for _ in 0..delta {
        let next = propagate_round(g, values.last().unwrap());
        values.push(next);
    }
    EstimateTable {
        kind: EstimatorKind::Propagating,
        deltas: 0..=delta,
        values,
        exact_core: None,
    }
}

/// Propagating estimates over an arbitrary non-empty range of radii.
pub fn propagate_range(g: &Graph, deltas: RangeInclusive<usize>) -> Result<EstimateTable> {
    if deltas.is_empty() {
        return Err(Error::argument("empty delta range"));
    }
    propagate_all(g, *deltas.end()).restrict(deltas)
}

/// Induced estimate: `v`'s core number in `G[N_delta(v)]`.
pub fn induced_estimate(g: &Graph, v: VertexId, delta: usize) -> Result<usize> {
    g.check_vertex(v)?;
    let mut scratch = InducedScratch::new(g.n());
    scratch.search(g, v, delta);
    let len = scratch.bfs.order.len();
    Ok(scratch.center_core(g, len))
}

/// BFS plus bucket-peeling workspace. Vertices are identified by their
/// position in the BFS order, so every ball is a prefix.
struct InducedScratch {
    bfs: BfsScratch,
    local: Vec<usize>,
    deg: Vec<usize>,
    bin: Vec<usize>,
    pos: Vec<usize>,
    vert: Vec<usize>,
}

impl InducedScratch {
    fn new(n: usize) -> Self {
        InducedScratch {
            bfs: BfsScratch::new(n),
            local: vec![UNSEEN; n],
            deg: Vec::new(),
            bin: Vec::new(),
            pos: Vec::new(),
            vert: Vec::new(),
        }
    }

    fn search(&mut self, g: &Graph, v: VertexId, radius: usize) {
        for &u in &self.bfs.order {
            self.local[u] = UNSEEN;
        }
        self.bfs.run(g, v, radius);
        for (i, &u) in self.bfs.order.iter().enumerate() {
            self.local[u] = i;
        }
    }

    /// Core number of the BFS source within the subgraph induced on the
    /// first `len` vertices of the BFS order. Peeling stops as soon as the
    /// source is removed.
    fn center_core(&mut self, g: &Graph, len: usize) -> usize {
        let order = &self.bfs.order[..len];
        let local = &self.local;
        self.deg.clear();
        self.deg.extend(order.iter().map(|&u| {
            g.neighbors(u).iter().filter(|&&w| local[w] < len).count()
        }));
        let max_deg = self.deg.iter().copied().max().unwrap_or(0);
        self.bin.clear();
        self.bin.resize(max_deg + 1, 0);
        for &d in &self.deg {
            self.bin[d] += 1;
        }
        let mut start = 0;
        for b in self.bin.iter_mut() {
            let c = *b;
            *b = start;
            start += c;
        }
        self.pos.clear();
        self.pos.resize(len, 0);
        self.vert.clear();
        self.vert.resize(len, 0);
        for i in 0..len {
            let d = self.deg[i];
            self.pos[i] = self.bin[d];
            self.vert[self.pos[i]] = i;
            self.bin[d] += 1;
        }
        for d in (1..=max_deg).rev() {
            self.bin[d] = self.bin[d - 1];
        }
        self.bin[0] = 0;
        for k in 0..len {
            let i = self.vert[k];
            if i == 0 {
                return self.deg[0];
            }
            for &w in g.neighbors(order[i]) {
                let x = local[w];
                if x < len && self.deg[x] > self.deg[i] {
                    let dx = self.deg[x];
                    let px = self.pos[x];
                    let pw = self.bin[dx];
                    let y = self.vert[pw];
                    if x != y {
                        self.pos[x] = pw;
                        self.vert[px] = y;
                        self.pos[y] = px;
                        self.vert[pw] = x;
                    }
                    self.bin[dx] += 1;
                    self.deg[x] -= 1;
                }
            }
        }
        unreachable!("the source is always peeled")
    }
}

/// Induced estimates for all vertices over `deltas`.
///
/// Each vertex runs one BFS to the largest radius and evaluates growing
/// prefixes of the BFS order. The value is final once the ball stops
/// growing or the estimate reaches the exact core number, which bounds the
/// non-decreasing sequence from above.
pub fn induced_range(g: &Graph, deltas: RangeInclusive<usize>) -> Result<EstimateTable> {
    if deltas.is_empty() {
        return Err(Error::argument("empty delta range"));
    }
    let (lo, hi) = (*deltas.start(), *deltas.end());
    let n = g.n();
    let core = core_decomposition(g).core;
    let per_vertex: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map_init(
            || InducedScratch::new(n),
            |scratch, v| {
                scratch.search(g, v, hi);
                let order_len = scratch.bfs.order.len();
                let mut prefix = vec![0usize; hi + 1];
                for &u in &scratch.bfs.order {
                    prefix[scratch.bfs.dist(u)] += 1;
                }
                for t in 1..=hi {
                    prefix[t] += prefix[t - 1];
                }
                let mut out = Vec::with_capacity(hi - lo + 1);
                let mut last: Option<(usize, usize)> = None;
                for delta in lo..=hi {
                    let len = prefix[delta];
                    let value = match last {
                        Some((l, val)) if l == len => val,
                        _ => scratch.center_core(g, len),
                    };
                    last = Some((len, value));
                    out.push(value);
                    if len == order_len || value == core[v] {
                        out.resize(hi - lo + 1, value);
                        break;
                    }
                }
                out
            },
        )
        .collect();
    let values = (0..=hi - lo)
        .map(|i| per_vertex.iter().map(|row| row[i]).collect())
        .collect();
    Ok(EstimateTable {
        kind: EstimatorKind::Induced,
        deltas,
        values,
        exact_core: None,
    })
}

/// Counts of ratios falling in `[edges[i], edges[i + 1])`, with overflow
/// on both sides.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub counts: Vec<usize>,
    pub below: usize,
    pub above: usize,
}

impl Histogram {
    fn new(edges: Vec<f64>) -> Self {
        let bins = edges.len().saturating_sub(1);
        Histogram {
            edges,
            counts: vec![0; bins],
            below: 0,
            above: 0,
        }
    }

    fn add(&mut self, x: f64) {
        if self.edges.is_empty() || x < self.edges[0] {
            self.below += 1;
            return;
        }
        match self.edges.windows(2).position(|w| x >= w[0] && x < w[1]) {
            Some(i) => self.counts[i] += 1,
            None => self.above += 1,
        }
    }
}

/// Default bins: `[0, 1)` in tenths for the induced estimator and `[1, 3)`
/// in quarters for the propagating one.
pub fn default_bin_edges(kind: EstimatorKind) -> Vec<f64> {
    match kind {
        EstimatorKind::Induced => (0..=10).map(|i| i as f64 / 10.0).collect(),
        EstimatorKind::Propagating => (0..=8).map(|i| 1.0 + i as f64 / 4.0).collect(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioOptions {
    /// Skip vertices with core number 0 instead of failing.
    pub exclude_zero_core: bool,
    /// Histogram edges; `None` selects [`default_bin_edges`].
    pub bin_edges: Option<Vec<f64>>,
}

impl Default for RatioOptions {
    fn default() -> Self {
        RatioOptions {
            exclude_zero_core: true,
            bin_edges: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioSlice {
    pub delta: usize,
    /// Estimate divided by core number; `None` for excluded vertices.
    pub ratios: Vec<Option<f64>>,
    pub optimal_fraction: f64,
    /// Non-optimal ratios only.
    pub histogram: Histogram,
    pub excluded: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioReport {
    pub kind: EstimatorKind,
    pub slices: Vec<RatioSlice>,
}

impl RatioReport {
    pub fn slice(&self, delta: usize) -> Option<&RatioSlice> {
        self.slices.iter().find(|s| s.delta == delta)
    }
}

/// Core number estimate ratios per radius.
pub fn ratio_report(
    estimates: &EstimateTable,
    decomp: &CoreDecomposition,
    options: &RatioOptions,
) -> Result<RatioReport> {
    let n = decomp.core.len();
    if estimates.vertex_count() != n {
        return Err(Error::argument(format!(
            "estimates cover {} vertices, decomposition {}",
            estimates.vertex_count(),
            n
        )));
    }
    if !options.exclude_zero_core {
        if let Some(v) = decomp.core.iter().position(|&k| k == 0) {
            return Err(Error::argument(format!(
                "vertex {v} has core number 0; ratio undefined"
            )));
        }
    }
    let edges = options
        .bin_edges
        .clone()
        .unwrap_or_else(|| default_bin_edges(estimates.kind));

    let slices = estimates
        .deltas
        .clone()
        .zip(&estimates.values)
        .map(|(delta, values)| {
            let mut histogram = Histogram::new(edges.clone());
            let mut excluded = 0;
            let mut optimal = 0;
            let ratios: Vec<Option<f64>> = values
                .iter()
                .zip(&decomp.core)
                .map(|(&est, &k)| {
                    if k == 0 {
                        excluded += 1;
                        return None;
                    }
                    if est == k {
                        optimal += 1;
                    } else {
                        histogram.add(est as f64 / k as f64);
                    }
                    Some(est as f64 / k as f64)
                })
                .collect();
            let counted = n - excluded;
            RatioSlice {
                delta,
                ratios,
                optimal_fraction: if counted == 0 {
                    0.0
                } else {
                    optimal as f64 / counted as f64
                },
                histogram,
                excluded,
            }
        })
        .collect();
    Ok(RatioReport {
        kind: estimates.kind,
        slices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_complete_ary_tree, gen_tree_prime};

    fn complete(n: usize) -> Graph {
        let mut e = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                e.push((u, v));
            }
        }
        Graph::from_edges(n, e).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|i| (0, i))).unwrap()
    }

    /// Comparison-sort evaluation of the max-min step.
    fn max_min_by_sort(deg: usize, bounds: &[usize]) -> usize {
        let mut b = bounds.to_vec();
        b.sort();
        (1..=deg).map(|i| b[i - 1].min(deg - i + 1)).max().unwrap_or(0)
    }

    #[test]
    fn upper_bound_step_examples() {
        // min(1,4)=1, min(3,3)=3, min(3,2)=2, min(5,1)=1
        assert_eq!(upper_bound_step(4, &[1, 3, 3, 5]).unwrap(), 3);
        assert_eq!(upper_bound_step(5, &[1; 5]).unwrap(), 1);
        assert_eq!(upper_bound_step(3, &[3, 3, 3]).unwrap(), 3);
        assert_eq!(upper_bound_step(0, &[]).unwrap(), 0);
        assert!(upper_bound_step(2, &[1]).is_err());
        assert_eq!(upper_bound_step(4, &[5, 1, 3, 3]).unwrap(), max_min_by_sort(4, &[5, 1, 3, 3]));
    }

    #[test]
    fn propagating_examples() {
        let s = star(5);
        assert_eq!(propagate_estimate(&s, 0, 0).unwrap(), 5);
        assert_eq!(propagate_estimate(&s, 0, 1).unwrap(), 1);
        assert!(propagate_estimate(&s, 6, 1).is_err());

        let k4 = complete(4);
        let t = propagate_all(&k4, 7);
        assert!(t.values.iter().all(|row| row == &vec![3; 4]));

        // path 0-1-2-3: round 1 gives interior min-structure 1
        let p = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        let t = propagate_all(&p, 2);
        assert_eq!(t.at(0).unwrap(), &[1, 2, 2, 1]);
        assert_eq!(t.at(1).unwrap(), &[1, 1, 1, 1]);
        assert_eq!(t.at(2).unwrap(), &[1, 1, 1, 1]);
    }

    #[test]
    fn binary_tree_root_overestimates_until_leaves_reach_it() {
        // T_{2,4}: root degree 2, internal degree 3, leaves degree 1.
        // By hand: root k̂ = 2 for delta 1 and 2; the leaves' value 1 arrives
        // after three rounds.
        let (t, root) = gen_complete_ary_tree(2, 4).unwrap();
        let expect = [2, 2, 2, 1];
        for (delta, &e) in expect.iter().enumerate() {
            assert_eq!(propagate_estimate(&t, root, delta).unwrap(), e, "delta {delta}");
        }
    }

    #[test]
    fn induced_examples() {
        let k4 = complete(4);
        assert_eq!(induced_estimate(&k4, 2, 0).unwrap(), 0);
        assert_eq!(induced_estimate(&k4, 2, 1).unwrap(), 3);
        let (tp, root) = gen_tree_prime(2, 3).unwrap();
        assert_eq!(induced_estimate(&tp, root, 1).unwrap(), 1);
        // the w vertices sit at distance 3
        assert_eq!(induced_estimate(&tp, root, 2).unwrap(), 1);
        assert_eq!(induced_estimate(&tp, root, 3).unwrap(), 2);
    }

    #[test]
    fn induced_range_matches_pointwise() {
        let (tp, _) = gen_tree_prime(3, 3).unwrap();
        let t = induced_range(&tp, 0..=5).unwrap();
        for v in 0..tp.n() {
            for d in 0..=5 {
                assert_eq!(t.get(v, d).unwrap(), induced_estimate(&tp, v, d).unwrap());
            }
        }
        let sub = induced_range(&tp, 2..=3).unwrap();
        assert_eq!(sub.at(2), t.at(2));
    }

    #[test]
    fn ratio_examples() {
        let k4 = complete(4);
        let d = core_decomposition(&k4);
        let r = ratio_report(&propagate_all(&k4, 1), &d, &RatioOptions::default()).unwrap();
        assert_eq!(r.slice(1).unwrap().optimal_fraction, 1.0);

        let (t, root) = gen_complete_ary_tree(2, 4).unwrap();
        let d = core_decomposition(&t);
        let r = ratio_report(&propagate_all(&t, 2), &d, &RatioOptions::default()).unwrap();
        assert_eq!(r.slice(2).unwrap().ratios[root], Some(2.0));

        let (tp, root) = gen_tree_prime(2, 3).unwrap();
        let d = core_decomposition(&tp);
        let r = ratio_report(&induced_range(&tp, 0..=1).unwrap(), &d, &RatioOptions::default())
            .unwrap();
        assert_eq!(r.slice(1).unwrap().ratios[root], Some(0.5));
        assert_eq!(r.slice(0).unwrap().optimal_fraction, 0.0);
    }

    #[test]
    fn ratio_zero_core_handling() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        let d = core_decomposition(&g);
        let t = propagate_all(&g, 1);
        let strict = RatioOptions {
            exclude_zero_core: false,
            bin_edges: None,
        };
        assert!(ratio_report(&t, &d, &strict).is_err());
        let r = ratio_report(&t, &d, &RatioOptions::default()).unwrap();
        assert_eq!(r.slices[0].excluded, 1);
        assert_eq!(r.slices[0].ratios[2], None);
        assert_eq!(r.slices[0].optimal_fraction, 1.0);
    }

    #[test]
    fn histogram_bins_non_optimal_ratios() {
        // star: centre k̂_0 = 5, k = 1 -> ratio 5 lands above the default bins
        let s = star(5);
        let d = core_decomposition(&s);
        let r = ratio_report(&propagate_all(&s, 0), &d, &RatioOptions::default()).unwrap();
        let h = &r.slices[0].histogram;
        assert_eq!(h.above, 1);
        assert_eq!(h.counts.iter().sum::<usize>(), 0);
        let opts = RatioOptions {
            exclude_zero_core: true,
            bin_edges: Some(vec![1.0, 4.0, 6.0]),
        };
        let r = ratio_report(&propagate_all(&s, 0), &d, &opts).unwrap();
        assert_eq!(r.slices[0].histogram.counts, vec![0, 1]);
    }
}
