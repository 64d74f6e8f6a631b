//! Immutable simple undirected graphs in compressed adjacency form.
//!
//! Vertices are dense ids `0..n`. Each adjacency list is sorted ascending and
//! free of duplicates and self-loops, so `(u, v)` is stored iff `(v, u)` is.
//! Original string labels from an edge-list file are kept for output.

use std::collections::{HashMap, VecDeque};
use std::io::{BufRead, Write};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

pub type VertexId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Builds a graph on `n` vertices. Self-loops are dropped and repeated
    /// edges collapse to one.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::argument(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u != v {
                pairs.push((u, v));
            }
        }
        Ok(Self::build(n, &pairs).0)
    }

    /// Returns the graph and the number of duplicate undirected edges removed.
    fn build(n: usize, pairs: &[(VertexId, VertexId)]) -> (Self, usize) {
        let mut degree = vec![0usize; n];
        for &(u, v) in pairs {
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0; offsets[n]];
        for &(u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }

        // sort and dedup each list, then compact
        let mut compact_offsets = Vec::with_capacity(n + 1);
        compact_offsets.push(0);
        let mut write = 0;
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            targets[lo..hi].sort_unstable();
            let mut last = None;
            for i in lo..hi {
                let t = targets[i];
                if last != Some(t) {
                    targets[write] = t;
                    write += 1;
                    last = Some(t);
                }
            }
            compact_offsets.push(write);
        }
        let removed = (targets.len() - write) / 2;
        targets.truncate(write);
        (
            Graph {
                offsets: compact_offsets,
                targets,
                labels: None,
            },
            removed,
        )
    }

    /// Attaches display labels, one per vertex.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::argument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.n() == 0
    }

    #[inline]
    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    #[inline]
    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|v| self.degree(v)).collect()
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.n()).filter(|&v| self.degree(v) == 0).count()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Label of `v`, falling back to its numeric id.
    pub fn label(&self, v: VertexId) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    /// Edges as `(u, v)` with `u < v`, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub(crate) fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v >= self.n() {
            Err(Error::argument(format!(
                "vertex {v} out of range for {} vertices",
                self.n()
            )))
        } else {
            Ok(())
        }
    }
}

/// Counts of input irregularities dropped while parsing.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct ParseReport {
    pub edge_lines: usize,
    pub self_loops: usize,
    pub duplicate_edges: usize,
}

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub report: ParseReport,
}

/// Parses a whitespace-separated edge list.
///
/// Tokens are re-indexed densely in first-appearance order. Lines starting
/// with `#` or `%` and blank lines are skipped. Any other line must carry
/// exactly two tokens.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<ParsedGraph> {
    let mut index: HashMap<String, VertexId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut pairs = Vec::new();
    let mut report = ParseReport::default();

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut tokens = trimmed.split_whitespace();
        let (a, b) = match (tokens.next(), tokens.next(), tokens.next()) {
            (Some(a), Some(b), None) => (a, b),
            _ => {
                return Err(Error::Parse {
                    line: lineno + 1,
                    message: format!(
                        "expected 2 tokens, found {}",
                        trimmed.split_whitespace().count()
                    ),
                })
            }
        };
        let mut intern = |tok: &str| -> VertexId {
            if let Some(&id) = index.get(tok) {
                return id;
            }
            let id = labels.len();
            index.insert(tok.to_string(), id);
            labels.push(tok.to_string());
            id
        };
        let u = intern(a);
        let v = intern(b);
        report.edge_lines += 1;
        if u == v {
            report.self_loops += 1;
        } else {
            pairs.push((u, v));
        }
    }

    if labels.is_empty() {
        return Err(Error::EmptyInput);
    }
    let (mut graph, duplicates) = Graph::build(labels.len(), &pairs);
    report.duplicate_edges = duplicates;
    graph.labels = Some(labels);
    Ok(ParsedGraph { graph, report })
}

/// Writes one `u v` line per edge, `u < v` by dense id, ascending. With
/// `use_labels` the original tokens are written in place of the ids.
pub fn write_edge_list<W: Write>(g: &Graph, mut out: W, use_labels: bool) -> Result<()> {
    for (u, v) in g.edges() {
        if use_labels {
            writeln!(out, "{} {}", g.label(u), g.label(v))?;
        } else {
            writeln!(out, "{u} {v}")?;
        }
    }
    Ok(())
}

/// The vertices within `radius` hops of `center`, with exact distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NeighborhoodView {
    pub center: VertexId,
    pub radius: usize,
    /// Members in BFS order; `members[0] == center`.
    pub members: Vec<VertexId>,
    /// `distances[i]` is the hop distance of `members[i]`.
    pub distances: Vec<usize>,
}

impl NeighborhoodView {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.contains(&v)
    }

    pub fn distance(&self, v: VertexId) -> Option<usize> {
        self.members
            .iter()
            .position(|&m| m == v)
            .map(|i| self.distances[i])
    }
}

/// Reusable BFS workspace sized to a graph. Distances are reset lazily from
/// the visited list, so repeated truncated searches cost only what they touch.
#[derive(Debug, Clone)]
pub(crate) struct BfsScratch {
    dist: Vec<usize>,
    pub(crate) order: Vec<VertexId>,
    queue: VecDeque<VertexId>,
}

pub(crate) const UNSEEN: usize = usize::MAX;

impl BfsScratch {
    pub(crate) fn new(n: usize) -> Self {
        BfsScratch {
            dist: vec![UNSEEN; n],
            order: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    fn reset(&mut self) {
        for &v in &self.order {
            self.dist[v] = UNSEEN;
        }
        self.order.clear();
        self.queue.clear();
    }

    /// BFS from `src` truncated at depth `radius`; fills `order`.
    pub(crate) fn run(&mut self, g: &Graph, src: VertexId, radius: usize) {
        self.reset();
        self.dist[src] = 0;
        self.order.push(src);
        self.queue.push_back(src);
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du == radius {
                continue;
            }
            for &w in g.neighbors(u) {
                if self.dist[w] == UNSEEN {
                    self.dist[w] = du + 1;
                    self.order.push(w);
                    self.queue.push_back(w);
                }
            }
        }
    }

    #[inline]
    pub(crate) fn dist(&self, v: VertexId) -> usize {
        self.dist[v]
    }

    /// Distance of the last vertex reached, i.e. the eccentricity when the
    /// search was not truncated.
    pub(crate) fn depth(&self) -> usize {
        self.order.last().map(|&v| self.dist[v]).unwrap_or(0)
    }
}

/// BFS ball `N_radius(v)`.
pub fn neighborhood(g: &Graph, v: VertexId, radius: usize) -> Result<NeighborhoodView> {
    g.check_vertex(v)?;
    let mut bfs = BfsScratch::new(g.n());
    bfs.run(g, v, radius);
    let distances = bfs.order.iter().map(|&u| bfs.dist(u)).collect();
    Ok(NeighborhoodView {
        center: v,
        radius,
        members: bfs.order.clone(),
        distances,
    })
}

/// A subgraph with the mapping between its ids and the parent graph's ids.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `original[new] = old`.
    pub original: Vec<VertexId>,
    local: HashMap<VertexId, VertexId>,
}

impl InducedSubgraph {
    /// New id of a parent vertex, if it is a member.
    pub fn local_id(&self, old: VertexId) -> Option<VertexId> {
        self.local.get(&old).copied()
    }
}

/// `G[members]`. New ids follow the order of first occurrence in `members`;
/// repeated members are ignored.
pub fn induced_subgraph(g: &Graph, members: &[VertexId]) -> Result<InducedSubgraph> {
    let mut local = HashMap::with_capacity(members.len());
    let mut original = Vec::with_capacity(members.len());
    for &v in members {
        g.check_vertex(v)?;
        if let std::collections::hash_map::Entry::Vacant(e) = local.entry(v) {
            e.insert(original.len());
            original.push(v);
        }
    }
    let mut pairs = Vec::new();
    for (new_u, &old_u) in original.iter().enumerate() {
        for &old_w in g.neighbors(old_u) {
            if let Some(&new_w) = local.get(&old_w) {
                if new_u < new_w {
                    pairs.push((new_u, new_w));
                }
            }
        }
    }
    let (mut graph, _) = Graph::build(original.len(), &pairs);
    if let Some(labels) = g.labels() {
        graph.labels = Some(original.iter().map(|&v| labels[v].clone()).collect());
    }
    Ok(InducedSubgraph {
        graph,
        original,
        local,
    })
}

/// Connected components: per-vertex component id (ids in order of the
/// smallest member) and component sizes.
pub fn components(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut comp = vec![UNSEEN; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != UNSEEN {
            continue;
        }
        let id = sizes.len();
        comp[s] = id;
        stack.push(s);
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in g.neighbors(u) {
                if comp[w] == UNSEEN {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    (comp, sizes)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiameterReport {
    /// Diameter of the largest connected component (ties broken by the
    /// lowest component id).
    pub diameter: usize,
    pub largest_component_size: usize,
    pub component_count: usize,
    /// Exact diameter of every component, indexed like [`components`].
    pub component_diameters: Vec<usize>,
}

/// Per-vertex eccentricity within its own component.
pub fn eccentricities(g: &Graph) -> Vec<usize> {
    let n = g.n();
    (0..n)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |bfs, v| {
                bfs.run(g, v, usize::MAX);
                bfs.depth()
            },
        )
        .collect()
}

/// Exact diameters by BFS from every vertex.
pub fn diameter(g: &Graph) -> Result<DiameterReport> {
    if g.is_empty() {
        return Err(Error::argument("diameter of an empty graph"));
    }
    let (comp, sizes) = components(g);
    let ecc = eccentricities(g);
    let mut component_diameters = vec![0; sizes.len()];
    for v in 0..g.n() {
        let c = comp[v];
        component_diameters[c] = component_diameters[c].max(ecc[v]);
    }
    let largest = (0..sizes.len())
        .max_by(|&a, &b| sizes[a].cmp(&sizes[b]).then(b.cmp(&a)))
        .unwrap();
    Ok(DiameterReport {
        diameter: component_diameters[largest],
        largest_component_size: sizes[largest],
        component_count: sizes.len(),
        component_diameters,
    })
}

/// Size statistics of `N_delta` over all vertices.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NeighborhoodStats {
    pub delta: usize,
    pub mean: f64,
    pub max: usize,
    /// Population variance of `|N_delta(v)|`.
    pub variance: f64,
    /// Mean of `|N_delta(v)| / n`.
    pub mean_fraction: f64,
    /// Population variance of `|N_delta(v)| / n`.
    pub variance_fraction: f64,
}

/// Neighborhood sizes for every vertex and every radius in `0..=max_delta`;
/// `sizes[delta][v] == |N_delta(v)|`.
pub fn neighborhood_sizes(g: &Graph, max_delta: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let per_vertex: Vec<Vec<usize>> = (0..n)
        .into_par_iter()
        .map_init(
            || BfsScratch::new(n),
            |bfs, v| {
                bfs.run(g, v, max_delta);
                let mut counts = vec![0usize; max_delta + 1];
                for &u in &bfs.order {
                    counts[bfs.dist(u)] += 1;
                }
                for d in 1..=max_delta {
                    counts[d] += counts[d - 1];
                }
                counts
            },
        )
        .collect();
    (0..=max_delta)
        .map(|d| per_vertex.iter().map(|c| c[d]).collect())
        .collect()
}

pub fn neighborhood_stats(g: &Graph, deltas: &[usize]) -> Vec<NeighborhoodStats> {
    let max_delta = deltas.iter().copied().max().unwrap_or(0);
    let sizes = neighborhood_sizes(g, max_delta);
    let n = g.n() as f64;
    deltas
        .iter()
        .map(|&delta| {
            let s = &sizes[delta];
            let mean = s.iter().sum::<usize>() as f64 / n;
            let variance = s.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / n;
            NeighborhoodStats {
                delta,
                mean,
                max: s.iter().copied().max().unwrap_or(0),
                variance,
                mean_fraction: mean / n,
                variance_fraction: variance / (n * n),
            }
        })
        .collect()
}
