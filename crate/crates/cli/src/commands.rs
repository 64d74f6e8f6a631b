use std::fmt::Write as _;
use std::fs;
use std::io::Read;
use std::path::Path;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use corescope::estimators::{
    induced_range, propagate_range, ratio_report, EstimateTable, RatioOptions, RatioReport,
};
use corescope::exposure::{
    degree_exposure_prob, exposure_profile, monte_carlo_core_exposure_all,
    neighbor_degree_exposure_with_options, pruned_degree_exposure_prob, three_net_clustering,
    Clustering, NeighborDegreeOptions,
};
use corescope::generators::{
    analytic_khat1_pmf_with_tolerance, default_d_max, gen_complete_ary_tree, gen_erdos_renyi,
    gen_shell_distribution, gen_tree_prime,
};
use corescope::graph::{diameter, neighborhood_stats, parse_edge_list, write_edge_list, ParsedGraph};
use corescope::{core_decomposition, shell_distribution, Graph, ShellDistribution};

use crate::output::{emit, Metadata};
use crate::{Cli, Command, EstimatorChoice, Format};

struct Loaded {
    parsed: ParsedGraph,
    digest: String,
}

fn load(path: &Path) -> Result<Loaded> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        std::io::stdin().read_to_end(&mut buf)?;
        buf
    } else {
        fs::read(path).map_err(|e| corescope::Error::Io(format!("{}: {e}", path.display())))?
    };
    let digest = Sha256::digest(&bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
    let parsed = parse_edge_list(bytes.as_slice())?;
    Ok(Loaded { parsed, digest })
}

/// Artifact bytes plus sidecar summary.
struct Artifact {
    body: Vec<u8>,
    summary: Value,
}

fn json_body<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn edge_list(g: &Graph) -> Result<Vec<u8>> {
    let mut body = Vec::new();
    write_edge_list(g, &mut body, false)?;
    Ok(body)
}

fn estimator_tables(g: &Graph, delta: &std::ops::RangeInclusive<usize>, which: EstimatorChoice) -> Result<Vec<EstimateTable>> {
    let mut out = Vec::new();
    if matches!(which, EstimatorChoice::Hat | EstimatorChoice::Both) {
        out.push(propagate_range(g, delta.clone())?);
    }
    if matches!(which, EstimatorChoice::Breve | EstimatorChoice::Both) {
        out.push(induced_range(g, delta.clone())?);
    }
    Ok(out)
}

fn ratio_cell(est: usize, core: usize) -> String {
    if core == 0 {
        String::new()
    } else {
        format!("{}", est as f64 / core as f64)
    }
}

fn optimal_summary(reports: &[RatioReport]) -> Value {
    let mut by_kind = serde_json::Map::new();
    for r in reports {
        let per_delta: serde_json::Map<String, Value> = r
            .slices
            .iter()
            .map(|s| (s.delta.to_string(), json!(s.optimal_fraction)))
            .collect();
        by_kind.insert(r.kind.as_str().to_string(), Value::Object(per_delta));
    }
    Value::Object(by_kind)
}

fn cores(g: &Graph, format: Format) -> Result<Artifact> {
    let d = core_decomposition(g);
    let shells = shell_distribution(&d);
    let summary = json!({
        "n": g.n(),
        "degeneracy": d.degeneracy,
        "shells": shells.counts,
        "isolated": shells.isolated,
    });
    let body = match format {
        Format::Csv => {
            let mut s = String::from("vertex,core\n");
            for v in 0..g.n() {
                let _ = writeln!(s, "{},{}", g.label(v), d.core[v]);
            }
            s.into_bytes()
        }
        Format::Json => {
            let vertices: Vec<Value> = (0..g.n())
                .map(|v| json!({"vertex": g.label(v), "core": d.core[v]}))
                .collect();
            json_body(&json!({"vertices": vertices, "shells": shells.counts, "isolated": shells.isolated, "degeneracy": d.degeneracy}))?
        }
    };
    Ok(Artifact { body, summary })
}

fn estimate(g: &Graph, delta: &std::ops::RangeInclusive<usize>, which: EstimatorChoice, format: Format) -> Result<Artifact> {
    let d = core_decomposition(g);
    let tables = estimator_tables(g, delta, which)?;
    let reports: Vec<RatioReport> = tables
        .iter()
        .map(|t| ratio_report(t, &d, &RatioOptions::default()))
        .collect::<corescope::Result<_>>()?;
    let summary = json!({ "optimal_fraction": optimal_summary(&reports) });
    let body = match format {
        Format::Csv => {
            let mut s = String::from("vertex,delta,kind,estimate,core,ratio\n");
            for t in &tables {
                for (delta, values) in t.deltas.clone().zip(&t.values) {
                    for v in 0..g.n() {
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{},{}",
                            g.label(v),
                            delta,
                            t.kind.as_str(),
                            values[v],
                            d.core[v],
                            ratio_cell(values[v], d.core[v])
                        );
                    }
                }
            }
            s.into_bytes()
        }
        Format::Json => {
            let tables: Vec<Value> = tables
                .iter()
                .map(|t| {
                    json!({
                        "kind": t.kind.as_str(),
                        "deltas": t.deltas.clone().collect::<Vec<_>>(),
                        "estimates": t.values,
                    })
                })
                .collect();
            let labels: Vec<String> = (0..g.n()).map(|v| g.label(v)).collect();
            json_body(&json!({
                "vertices": labels,
                "core": d.core,
                "tables": tables,
                "optimal_fraction": summary["optimal_fraction"],
            }))?
        }
    };
    Ok(Artifact { body, summary })
}

fn ratio(
    g: &Graph,
    delta: &std::ops::RangeInclusive<usize>,
    which: EstimatorChoice,
    bins: Option<&Vec<f64>>,
    format: Format,
) -> Result<Artifact> {
    if let Some(b) = bins {
        if b.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
            return Err(corescope::Error::Argument("bin edges must be strictly increasing".into()).into());
        }
    }
    let d = core_decomposition(g);
    let opts = RatioOptions {
        exclude_zero_core: true,
        bin_edges: bins.cloned(),
    };
    let reports: Vec<RatioReport> = estimator_tables(g, delta, which)?
        .iter()
        .map(|t| ratio_report(t, &d, &opts))
        .collect::<corescope::Result<_>>()?;
    let summary = json!({ "optimal_fraction": optimal_summary(&reports) });
    let body = match format {
        Format::Csv => {
            let mut s = String::from("kind,delta,optimal_fraction,excluded,bin_low,bin_high,count\n");
            for r in &reports {
                for sl in &r.slices {
                    let h = &sl.histogram;
                    let head = format!("{},{},{},{}", r.kind.as_str(), sl.delta, sl.optimal_fraction, sl.excluded);
                    let first = h.edges.first().map(|e| e.to_string()).unwrap_or_default();
                    let last = h.edges.last().map(|e| e.to_string()).unwrap_or_default();
                    let _ = writeln!(s, "{head},,{first},{}", h.below);
                    for (i, c) in h.counts.iter().enumerate() {
                        let _ = writeln!(s, "{head},{},{},{c}", h.edges[i], h.edges[i + 1]);
                    }
                    let _ = writeln!(s, "{head},{last},,{}", h.above);
                }
            }
            s.into_bytes()
        }
        Format::Json => {
            let slim: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let slices: Vec<Value> = r
                        .slices
                        .iter()
                        .map(|s| {
                            json!({
                                "delta": s.delta,
                                "optimal_fraction": s.optimal_fraction,
                                "excluded": s.excluded,
                                "histogram": s.histogram,
                            })
                        })
                        .collect();
                    json!({"kind": r.kind.as_str(), "slices": slices})
                })
                .collect();
            json_body(&slim)?
        }
    };
    Ok(Artifact { body, summary })
}

fn generated(g: &Graph, extra: Value) -> Result<Artifact> {
    let mut summary = json!({"n": g.n(), "m": g.m()});
    if let (Value::Object(s), Value::Object(e)) = (&mut summary, extra) {
        s.extend(e);
    }
    Ok(Artifact {
        body: edge_list(g)?,
        summary,
    })
}

fn pmf(mean_degree: f64, kappa_max: usize, d_max: Option<usize>, tol: f64, format: Format) -> Result<Artifact> {
    let d_max = d_max.unwrap_or_else(|| default_d_max(mean_degree, kappa_max));
    let pmf = analytic_khat1_pmf_with_tolerance(mean_degree, kappa_max, d_max, tol)?;
    if pmf.tail_warning {
        eprintln!(
            "{}",
            json!({"warning": "tail_mass", "tail_mass": pmf.tail_mass, "tolerance": tol})
        );
    }
    let summary = json!({
        "mean_degree": pmf.mean_degree,
        "d_max": pmf.d_max,
        "tail_mass": pmf.tail_mass,
        "beyond_kappa_max": pmf.beyond_kappa_max,
        "tail_warning": pmf.tail_warning,
    });
    let body = match format {
        Format::Csv => {
            let mut s = String::from("kappa,probability\n");
            for (k, q) in pmf.probabilities.iter().enumerate() {
                let _ = writeln!(s, "{k},{q}");
            }
            s.into_bytes()
        }
        Format::Json => json_body(&pmf)?,
    };
    Ok(Artifact { body, summary })
}

fn clustering_artifact(g: &Graph, c: &Clustering, format: Format) -> Result<Artifact> {
    let summary = json!({"clusters": c.len()});
    let body = match format {
        Format::Csv => {
            let mut s = String::from("vertex,cluster,center\n");
            for v in 0..g.n() {
                let k = c.cluster_of[v];
                let _ = writeln!(s, "{},{},{}", g.label(v), k, g.label(c.centers[k]));
            }
            s.into_bytes()
        }
        Format::Json => {
            let clusters: Vec<Value> = c
                .clusters
                .iter()
                .zip(&c.centers)
                .map(|(m, &ctr)| {
                    json!({
                        "center": g.label(ctr),
                        "members": m.iter().map(|&v| g.label(v)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            json_body(&json!({ "clusters": clusters }))?
        }
    };
    Ok(Artifact { body, summary })
}

#[derive(Serialize)]
struct ExposureRow {
    vertex: String,
    kappa: usize,
    p: f64,
    degree_prob: f64,
    /// `None` when the exact enumeration was refused.
    neighbor_degree_prob: Option<f64>,
    pruned_degree_prob: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_core_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mc_halfwidth: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn exposure(
    g: &Graph,
    kappa: usize,
    p: f64,
    trials: usize,
    degree_biased: bool,
    cluster_limit: usize,
    seed: u64,
    format: Format,
) -> Result<Artifact> {
    let c = three_net_clustering(g, seed, degree_biased);
    let opts = NeighborDegreeOptions { cluster_limit };
    let exact: Vec<(f64, Option<f64>, f64)> = (0..g.n())
        .into_par_iter()
        .map(|v| -> corescope::Result<_> {
            let degree = degree_exposure_prob(&exposure_profile(g, &c, v, p)?, kappa).probability;
            let neighbor = match neighbor_degree_exposure_with_options(g, &c, v, kappa, p, &opts) {
                Ok(r) => Some(r.probability),
                Err(corescope::Error::Refused(_)) => None,
                Err(e) => return Err(e),
            };
            let pruned = pruned_degree_exposure_prob(g, &c, v, kappa, p)?.probability;
            Ok((degree, neighbor, pruned))
        })
        .collect::<corescope::Result<_>>()?;
    let mc = if trials > 0 {
        // decorrelated from the clustering stream
        let mc_seed = seed ^ 0x9e37_79b9_7f4a_7c15;
        Some(monte_carlo_core_exposure_all(g, &c, kappa, p, trials, mc_seed)?)
    } else {
        None
    };
    let rows: Vec<ExposureRow> = exact
        .iter()
        .enumerate()
        .map(|(v, &(degree, neighbor, pruned))| {
            let r = mc.as_ref().map(|t| t.result(v, kappa));
            ExposureRow {
                vertex: g.label(v),
                kappa,
                p,
                degree_prob: degree,
                neighbor_degree_prob: neighbor,
                pruned_degree_prob: pruned,
                mc_core_estimate: r.as_ref().map(|r| r.probability),
                mc_halfwidth: r.map(|r| match r.diagnostics {
                    corescope::exposure::Diagnostics::MonteCarlo { half_width, .. } => half_width,
                    _ => unreachable!(),
                }),
            }
        })
        .collect();
    let refused = rows.iter().filter(|r| r.neighbor_degree_prob.is_none()).count();
    let summary = json!({
        "clusters": c.len(),
        "neighbor_degree_refused": refused,
        "trials": trials,
    });
    let body = match format {
        Format::Csv => {
            let mut s = String::from("vertex,kappa,p,degree_prob,neighbor_degree_prob,pruned_degree_prob");
            if mc.is_some() {
                s.push_str(",mc_core_estimate,mc_halfwidth");
            }
            s.push('\n');
            for r in &rows {
                let nd = r.neighbor_degree_prob.map(|x| x.to_string()).unwrap_or_default();
                let _ = write!(s, "{},{},{},{},{},{}", r.vertex, r.kappa, r.p, r.degree_prob, nd, r.pruned_degree_prob);
                if let (Some(e), Some(h)) = (r.mc_core_estimate, r.mc_halfwidth) {
                    let _ = write!(s, ",{e},{h}");
                }
                s.push('\n');
            }
            s.into_bytes()
        }
        Format::Json => json_body(&rows)?,
    };
    Ok(Artifact { body, summary })
}

fn stats(g: &Graph, delta: &std::ops::RangeInclusive<usize>, format: Format) -> Result<Artifact> {
    let d = core_decomposition(g);
    let diam = diameter(g)?;
    let deltas: Vec<usize> = delta.clone().collect();
    let nb = neighborhood_stats(g, &deltas);
    let report = json!({
        "n": g.n(),
        "m": g.m(),
        "max_degree": g.max_degree(),
        "degeneracy": d.degeneracy,
        "diameter": diam.diameter,
        "largest_component_size": diam.largest_component_size,
        "component_count": diam.component_count,
        "isolated": g.isolated_count(),
        "neighborhoods": nb,
    });
    let body = match format {
        Format::Csv => {
            let mut s = String::from("statistic,value\n");
            for key in ["n", "m", "max_degree", "degeneracy", "diameter", "largest_component_size", "component_count", "isolated"] {
                let _ = writeln!(s, "{key},{}", report[key]);
            }
            for st in &nb {
                let dl = st.delta;
                let _ = writeln!(s, "n{dl}_mean,{}", st.mean);
                let _ = writeln!(s, "n{dl}_max,{}", st.max);
                let _ = writeln!(s, "n{dl}_variance,{}", st.variance);
                let _ = writeln!(s, "n{dl}_mean_fraction,{}", st.mean_fraction);
                let _ = writeln!(s, "n{dl}_variance_fraction,{}", st.variance_fraction);
            }
            s.into_bytes()
        }
        Format::Json => json_body(&report)?,
    };
    Ok(Artifact {
        body,
        summary: report,
    })
}

pub fn run(cli: &Cli) -> Result<()> {
    let format = cli.common.format;
    let seed = cli.common.seed;
    let mut digest = None;
    let mut graph = |input: &Path| -> Result<Graph> {
        let loaded = load(input).with_context(|| format!("reading {}", input.display()))?;
        digest = Some(loaded.digest);
        Ok(loaded.parsed.graph)
    };
    let artifact = match &cli.command {
        Command::Cores { input } => cores(&graph(&input.input)?, format)?,
        Command::Estimate { input, delta, estimator } => {
            estimate(&graph(&input.input)?, delta, *estimator, format)?
        }
        Command::Ratio { input, delta, estimator, bins } => {
            ratio(&graph(&input.input)?, delta, *estimator, bins.as_ref(), format)?
        }
        Command::GenEr { n, p } => generated(&gen_erdos_renyi(*n, *p, seed)?, json!({}))?,
        Command::GenShell { counts } => {
            let dist = ShellDistribution::new(counts.clone())?;
            generated(&gen_shell_distribution(&dist, seed)?, json!({"shells": counts}))?
        }
        Command::GenTree { j, levels, prime } => {
            let (g, root) = if *prime {
                gen_tree_prime(*j, *levels)?
            } else {
                gen_complete_ary_tree(*j, *levels)?
            };
            generated(&g, json!({"root": root}))?
        }
        Command::Pmf { mean_degree, kappa_max, d_max, tail_tolerance } => {
            pmf(*mean_degree, *kappa_max, *d_max, *tail_tolerance, format)?
        }
        Command::Cluster { input, degree_biased } => {
            let g = graph(&input.input)?;
            let c = three_net_clustering(&g, seed, *degree_biased);
            clustering_artifact(&g, &c, format)?
        }
        Command::Exposure { input, kappa, p, trials, degree_biased, cluster_limit } => exposure(
            &graph(&input.input)?,
            *kappa,
            *p,
            *trials,
            *degree_biased,
            *cluster_limit,
            seed,
            format,
        )?,
        Command::Stats { input, delta } => stats(&graph(&input.input)?, delta, format)?,
    };
    let meta = Metadata {
        tool: "corescope",
        version: env!("CARGO_PKG_VERSION"),
        command: cli.command.name(),
        seed,
        input_sha256: digest,
        config: json!({"command": cli.command, "common": cli.common}),
        summary: artifact.summary,
    };
    emit(cli.common.output.as_deref(), &artifact.body, &meta)
}
