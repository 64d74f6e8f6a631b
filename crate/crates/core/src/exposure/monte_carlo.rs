use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_probability, Clustering, Diagnostics, ExposureKind, ExposureResult};
use crate::error::{Error, Result};
use crate::generators::seeded_rng;
use crate::graph::{Graph, VertexId};

/// Random stream for one trial: the seed picks the key, the trial index the
/// ChaCha stream, so results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = seeded_rng(seed);
    rng.set_stream(trial);
    rng
}

/// Hit counts per level for every vertex over a batch of trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloTable {
    pub kappa_max: usize,
    pub p: f64,
    pub trials: usize,
    pub seed: u64,
    /// `hits[kappa][v]`: trials in which `v` lay in the `kappa`-core of the
    /// treated subgraph.
    pub hits: Vec<Vec<usize>>,
}

impl MonteCarloTable {
    pub fn estimate(&self, v: VertexId, kappa: usize) -> f64 {
        self.hits[kappa][v] as f64 / self.trials as f64
    }

    /// Binomial standard error of [`estimate`](Self::estimate).
    pub fn std_error(&self, v: VertexId, kappa: usize) -> f64 {
        let q = self.estimate(v, kappa);
        (q * (1.0 - q) / self.trials as f64).sqrt()
    }

    pub fn result(&self, v: VertexId, kappa: usize) -> ExposureResult {
        let std_error = self.std_error(v, kappa);
        ExposureResult {
            kind: ExposureKind::CoreMonteCarlo,
            kappa,
            probability: self.estimate(v, kappa),
            diagnostics: Diagnostics::MonteCarlo {
                trials: self.trials,
                hits: self.hits[kappa][v],
                std_error,
                half_width: 1.959_963_984_540_054 * std_error,
            },
        }
    }
}

struct Peeler {
    deg: Vec<usize>,
    bin: Vec<usize>,
    pos: Vec<usize>,
    vert: Vec<usize>,
    active: Vec<bool>,
}

impl Peeler {
    fn new(n: usize) -> Self {
        Peeler {
            deg: vec![0; n],
            bin: Vec::new(),
            pos: vec![0; n],
            vert: Vec::with_capacity(n),
            active: vec![false; n],
        }
    }

    /// Core numbers of the subgraph induced by `active`, left in `deg`;
    /// inactive vertices get 0.
    fn run(&mut self, g: &Graph) {
        let n = g.n();
        let mut max_deg = 0;
        for v in 0..n {
            self.deg[v] = if self.active[v] {
                g.neighbors(v).iter().filter(|&&u| self.active[u]).count()
            } else {
                0
            };
            max_deg = max_deg.max(self.deg[v]);
        }
        self.bin.clear();
        self.bin.resize(max_deg + 1, 0);
        self.vert.clear();
        for v in 0..n {
            if self.active[v] {
                self.bin[self.deg[v]] += 1;
            }
        }
        let mut start = 0;
        for b in self.bin.iter_mut() {
            let c = *b;
            *b = start;
            start += c;
        }
        self.vert.resize(start, 0);
        for v in 0..n {
            if self.active[v] {
                let d = self.deg[v];
                self.pos[v] = self.bin[d];
                self.vert[self.pos[v]] = v;
                self.bin[d] += 1;
            }
        }
        for d in (1..=max_deg).rev() {
            self.bin[d] = self.bin[d - 1];
        }
        self.bin[0] = 0;
        for i in 0..self.vert.len() {
            let v = self.vert[i];
            for &u in g.neighbors(v) {
                if self.active[u] && self.deg[u] > self.deg[v] {
                    let du = self.deg[u];
                    let pu = self.pos[u];
                    let pw = self.bin[du];
                    let w = self.vert[pw];
                    if u != w {
                        self.pos[u] = pw;
                        self.vert[pu] = w;
                        self.pos[w] = pu;
                        self.vert[pw] = u;
                    }
                    self.bin[du] += 1;
                    self.deg[u] -= 1;
                }
            }
        }
    }
}

fn sample_treatment(clustering: &Clustering, p: f64, rng: &mut ChaCha8Rng, active: &mut [bool]) {
    for members in &clustering.clusters {
        let on = rng.gen::<f64>() < p;
        for &u in members {
            active[u] = on;
        }
    }
}

/// Estimates core exposure at every level `0..=kappa_max` for every vertex.
///
/// Each trial treats every cluster independently with probability `p`
/// (drawn in cluster-id order from the trial's own stream) and peels the
/// treated subgraph once.
pub fn monte_carlo_core_exposure_all(
    g: &Graph,
    clustering: &Clustering,
    kappa_max: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<MonteCarloTable> {
    check_probability(p)?;
    clustering.check_graph(g)?;
    if trials == 0 {
        return Err(Error::argument("at least one trial is required"));
    }
    let n = g.n();
    let levels = kappa_max + 1;
    let hits = (0..trials as u64)
        .into_par_iter()
        .fold(
            || (Peeler::new(n), vec![vec![0usize; n]; levels]),
            |(mut peeler, mut hits), t| {
                let mut rng = trial_rng(seed, t);
                sample_treatment(clustering, p, &mut rng, &mut peeler.active);
                peeler.run(g);
                for v in 0..n {
                    if peeler.active[v] {
                        let top = peeler.deg[v].min(kappa_max);
                        for row in hits.iter_mut().take(top + 1) {
                            row[v] += 1;
                        }
                    }
                }
                (peeler, hits)
            },
        )
        .map(|(_, h)| h)
        .reduce(
            || vec![vec![0usize; n]; levels],
            |mut a, b| {
                for (ra, rb) in a.iter_mut().zip(b) {
                    for (x, y) in ra.iter_mut().zip(rb) {
                        *x += y;
                    }
                }
                a
            },
        );
    Ok(MonteCarloTable {
        kappa_max,
        p,
        trials,
        seed,
        hits,
    })
}

/// Monte Carlo core exposure of a single vertex; identical to the matching
/// entry of [`monte_carlo_core_exposure_all`] under the same seed.
pub fn monte_carlo_core_exposure(
    g: &Graph,
    clustering: &Clustering,
    v: VertexId,
    kappa: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<ExposureResult> {
    g.check_vertex(v)?;
    check_probability(p)?;
    clustering.check_graph(g)?;
    if trials == 0 {
        return Err(Error::argument("at least one trial is required"));
    }
    let n = g.n();
    let hits: usize = (0..trials as u64)
        .into_par_iter()
        .map_init(
            || Peeler::new(n),
            |peeler, t| {
                let mut rng = trial_rng(seed, t);
                sample_treatment(clustering, p, &mut rng, &mut peeler.active);
                if !peeler.active[v] {
                    return 0;
                }
                peeler.run(g);
                usize::from(peeler.deg[v] >= kappa)
            },
        )
        .sum();
    let mut table_hits = vec![Vec::new(); kappa + 1];
    table_hits[kappa] = vec![0; n];
    table_hits[kappa][v] = hits;
    let table = MonteCarloTable {
        kappa_max: kappa,
        p,
        trials,
        seed,
        hits: table_hits,
    };
    Ok(table.result(v, kappa))
}
