//! Exact core decomposition by bucketed peeling, plus a quadratic
//! scan-and-delete oracle used to cross-check it.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoreDecomposition {
    /// Core number `k(v)` per vertex.
    pub core: Vec<usize>,
    /// Largest core number present.
    pub degeneracy: usize,
    /// `shell_sizes[i - 1]` vertices have core number `i`, for `i = 1..=D`.
    pub shell_sizes: Vec<usize>,
    /// Vertices with core number 0 (isolated vertices).
    pub isolated: usize,
}

impl CoreDecomposition {
    fn from_cores(core: Vec<usize>) -> Self {
        let degeneracy = core.iter().copied().max().unwrap_or(0);
        let mut shell_sizes = vec![0; degeneracy];
        let mut isolated = 0;
        for &k in &core {
            if k == 0 {
                isolated += 1;
            } else {
                shell_sizes[k - 1] += 1;
            }
        }
        CoreDecomposition {
            core,
            degeneracy,
            shell_sizes,
            isolated,
        }
    }
}

/// Linear-time core decomposition.
///
/// Vertices sit in an array sorted by current degree with `bin[d]` marking
/// where degree `d` starts. Removing the front vertex and decrementing a
/// neighbour is a swap to the front of its bin plus a bin-boundary shift.
/// Within a degree the initial order is ascending id.
pub fn core_decomposition(g: &Graph) -> CoreDecomposition {
    let n = g.n();
    let mut deg = g.degrees();
    let max_deg = deg.iter().copied().max().unwrap_or(0);

    let mut bin = vec![0usize; max_deg + 1];
    for &d in &deg {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut pos = vec![0usize; n];
    let mut vert = vec![0usize; n];
    for v in 0..n {
        pos[v] = bin[deg[v]];
        vert[pos[v]] = v;
        bin[deg[v]] += 1;
    }
    for d in (1..=max_deg).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = vert[i];
        for &u in g.neighbors(v) {
            if deg[u] > deg[v] {
                let du = deg[u];
                let pu = pos[u];
                let pw = bin[du];
                let w = vert[pw];
                if u != w {
                    pos[u] = pw;
                    vert[pu] = w;
                    pos[w] = pu;
                    vert[pw] = u;
                }
                bin[du] += 1;
                deg[u] -= 1;
            }
        }
    }
    CoreDecomposition::from_cores(deg)
}

/// Largest graph [`naive_core_oracle`] accepts.
pub const NAIVE_ORACLE_MAX_VERTICES: usize = 10_000;

/// Quadratic reference: at threshold `i`, sweep all vertices repeatedly and
/// delete any with remaining degree `<= i` until a sweep deletes nothing.
pub fn naive_core_oracle(g: &Graph) -> Result<CoreDecomposition> {
    let n = g.n();
    if n > NAIVE_ORACLE_MAX_VERTICES {
        return Err(Error::Refused(format!(
            "naive core oracle limited to {NAIVE_ORACLE_MAX_VERTICES} vertices, got {n}"
        )));
    }
    let mut deg = g.degrees();
    let mut removed = vec![false; n];
    let mut core = vec![0; n];
    let mut remaining = n;
    let mut i = 0;
    while remaining > 0 {
        loop {
            let mut changed = false;
            for v in 0..n {
                if !removed[v] && deg[v] <= i {
                    removed[v] = true;
                    core[v] = i;
                    remaining -= 1;
                    changed = true;
                    for &u in g.neighbors(v) {
                        if !removed[u] {
                            deg[u] -= 1;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        i += 1;
    }
    Ok(CoreDecomposition::from_cores(core))
}

/// Target or observed shell sizes `c_1..c_D`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShellDistribution {
    /// `counts[i - 1] == c_i`.
    pub counts: Vec<usize>,
    /// Vertices of core number 0, kept apart from the shells.
    pub isolated: usize,
}

impl ShellDistribution {
    /// A generator target. Requires `D >= 1` and `c_D >= 1`.
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        match counts.last() {
            None => Err(Error::argument("shell distribution needs at least one shell")),
            Some(0) => Err(Error::argument(format!(
                "deepest shell c_{} must be non-empty",
                counts.len()
            ))),
            Some(_) => Ok(ShellDistribution {
                counts,
                isolated: 0,
            }),
        }
    }

    pub fn degeneracy(&self) -> usize {
        self.counts.len()
    }

    /// `c_i` for `i >= 1`; zero beyond `D`.
    pub fn count(&self, shell: usize) -> usize {
        if shell == 0 {
            self.isolated
        } else {
            self.counts.get(shell - 1).copied().unwrap_or(0)
        }
    }

    pub fn total(&self) -> usize {
        self.isolated + self.counts.iter().sum::<usize>()
    }

    /// Every non-empty shell `i` needs at least `i + 1` vertices at depth
    /// `>= i` to give its members degree `i`.
    pub fn check_feasible(&self) -> Result<()> {
        let mut deeper = 0;
        for i in (1..=self.counts.len()).rev() {
            let c = self.counts[i - 1];
            deeper += c;
            if c > 0 && deeper < i + 1 {
                return Err(Error::Generation {
                    shell: i,
                    message: format!(
                        "shell {i} needs at least {} vertices in shells >= {i}, only {deeper} requested",
                        i + 1
                    ),
                });
            }
        }
        Ok(())
    }
}

/// Shell sizes of a decomposition; isolated vertices are reported apart.
pub fn shell_distribution(d: &CoreDecomposition) -> ShellDistribution {
    ShellDistribution {
        counts: d.shell_sizes.clone(),
        isolated: d.isolated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn k4_plus_pendant() -> Graph {
        graph(
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)],
        )
    }

    #[test]
    fn triangle() {
        let g = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let d = core_decomposition(&g);
        assert_eq!(d.core, vec![2, 2, 2]);
        assert_eq!(d.degeneracy, 2);
        assert_eq!(naive_core_oracle(&g).unwrap(), d);
        assert_eq!(shell_distribution(&d).counts, vec![0, 3]);
    }

    #[test]
    fn path_and_star_are_one_degenerate() {
        let p = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        assert_eq!(core_decomposition(&p).core, vec![1; 4]);
        let star = graph(9, &(1..9).map(|i| (0, i)).collect::<Vec<_>>());
        let d = naive_core_oracle(&star).unwrap();
        assert_eq!(d.core, vec![1; 9]);
        assert_eq!(core_decomposition(&star), d);
    }

    #[test]
    fn k4_with_pendant_shells() {
        // hand peeling: the pendant leaves at i = 1, the K4 at i = 3
        let d = core_decomposition(&k4_plus_pendant());
        assert_eq!(d.core, vec![3, 3, 3, 3, 1]);
        assert_eq!(shell_distribution(&d).counts, vec![1, 0, 4]);
    }

    #[test]
    fn isolated_vertices_get_zero() {
        let g = graph(4, &[(0, 1)]);
        let d = core_decomposition(&g);
        assert_eq!(d.core, vec![1, 1, 0, 0]);
        assert_eq!(d.isolated, 2);
        let s = shell_distribution(&d);
        assert_eq!(s.counts, vec![2]);
        assert_eq!(s.total(), 4);
        let empty = core_decomposition(&Graph::from_edges(0, []).unwrap());
        assert_eq!(empty.degeneracy, 0);
    }

    #[test]
    fn oracle_size_guard() {
        let g = Graph::from_edges(NAIVE_ORACLE_MAX_VERTICES + 1, []).unwrap();
        assert!(matches!(naive_core_oracle(&g), Err(Error::Refused(_))));
    }

    #[test]
    fn feasibility() {
        assert!(ShellDistribution::new(vec![2]).unwrap().check_feasible().is_ok());
        assert!(ShellDistribution::new(vec![0, 4]).unwrap().check_feasible().is_ok());
        let err = ShellDistribution::new(vec![0, 0, 2])
            .unwrap()
            .check_feasible()
            .unwrap_err();
        assert!(matches!(err, Error::Generation { shell: 3, .. }));
        // shell 1 satisfied by the deeper vertices even though c_1 = 1
        assert!(ShellDistribution::new(vec![1, 0, 4]).unwrap().check_feasible().is_ok());
        assert!(ShellDistribution::new(vec![1]).unwrap().check_feasible().is_err());
        assert!(ShellDistribution::new(vec![]).is_err());
        assert!(ShellDistribution::new(vec![3, 0]).is_err());
    }
}
