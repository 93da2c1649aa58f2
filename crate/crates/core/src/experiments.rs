//! Monte-Carlo statistics for the random bipartite lower-bound construction, and an
//! end-to-end demo that embeds block-model patterns.

use rand::seq::index::sample;
use rayon::prelude::*;
use serde::Serialize;

use crate::certify::Mode;
use crate::config::RunConfig;
use crate::embed::{embed_dense_short, embed_sparse_th, EmbeddingOutcome};
use crate::error::{invalid, precondition, Result};
use crate::graph::{HostGraph, Vertex, VertexSet};
use crate::patterns::{biseparate, gen_sbm, gen_standard, Family, SbmParams};
use crate::rng;

/// Injections enumerated exhaustively when there are at most this many.
pub const EXHAUSTIVE_CAP: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundReport {
    pub seed: u64,
    pub n1: usize,
    pub samples: usize,
    pub exhaustive: bool,
    pub min_missing: Option<usize>,
    pub mean_missing: Option<f64>,
    /// Fraction of injections with at most `e(H)/4` missing edges.
    pub frac_below_quarter: Option<f64>,
    /// Mean over injections of `m(f) + (e(H) - m(f))/2`, where `m(f)` counts edges mapped
    /// inside one side.
    pub mean_expectation_bound: Option<f64>,
    pub edge_count: usize,
    pub pattern_edges: usize,
    /// `e(G) >= n1^2/4`.
    pub edges_hold: bool,
}

/// Pattern edges whose images are not host edges, and how many of them land inside one side.
pub fn missing_edges(g: &HostGraph, h: &HostGraph, f: &[Vertex]) -> (usize, usize) {
    let mut missing = 0;
    let mut same_side = 0;
    for (u, v) in h.edges() {
        let (a, b) = (f[u], f[v]);
        if g.sides().is_some() && g.side(a) == g.side(b) {
            same_side += 1;
        }
        if !g.has_edge(a, b) {
            missing += 1;
        }
    }
    (missing, same_side)
}

struct Tally {
    q: usize,
    count: usize,
    min: usize,
    sum: f64,
    below: usize,
    bound: f64,
}

impl Tally {
    fn new(q: usize) -> Self {
        Tally { q, count: 0, min: usize::MAX, sum: 0.0, below: 0, bound: 0.0 }
    }

    fn add(&mut self, (x, m): (usize, usize)) {
        self.count += 1;
        self.min = self.min.min(x);
        self.sum += x as f64;
        if 4 * x <= self.q {
            self.below += 1;
        }
        self.bound += m as f64 + (self.q - m) as f64 / 2.0;
    }
}

fn injections(n: usize, k: usize) -> Option<u64> {
    (0..k).try_fold(1u64, |acc, i| acc.checked_mul((n - i) as u64))
}

fn enumerate(g: &HostGraph, h: &HostGraph, t: &mut Tally) {
    let n = g.n();
    let k = h.n();
    let mut f = Vec::with_capacity(k);
    let mut used = vec![false; n];
    fn rec(g: &HostGraph, h: &HostGraph, f: &mut Vec<Vertex>, used: &mut [bool], t: &mut Tally) {
        if f.len() == h.n() {
            t.add(missing_edges(g, h, f));
            return;
        }
        for v in 0..g.n() {
            if !used[v] {
                used[v] = true;
                f.push(v);
                rec(g, h, f, used, t);
                f.pop();
                used[v] = false;
            }
        }
    }
    if k <= n {
        rec(g, h, &mut f, &mut used, t);
    }
}

/// Missing-edge statistics for injections of `h` into a given host. With `samples = None`
/// every injection is enumerated (refused above [`EXHAUSTIVE_CAP`]).
pub fn lowerbound_on_host(g: &HostGraph, h: &HostGraph, samples: Option<usize>, seed: u64) -> Result<LowerBoundReport> {
    if h.edge_count() == 0 {
        return invalid("the pattern needs at least one edge");
    }
    if h.n() > g.n() {
        return precondition(format!("pattern has {} vertices, host only {}", h.n(), g.n()));
    }
    let q = h.edge_count();
    let mut t = Tally::new(q);
    let exhaustive = samples.is_none();
    match samples {
        None => {
            match injections(g.n(), h.n()) {
                Some(c) if c <= EXHAUSTIVE_CAP => {}
                _ => return precondition("too many injections to enumerate"),
            }
            enumerate(g, h, &mut t);
        }
        Some(s) => {
            let mut r = rng::stream(seed, "lowerbound-injections");
            for _ in 0..s {
                let f = sample(&mut r, g.n(), h.n()).into_vec();
                t.add(missing_edges(g, h, &f));
            }
        }
    }
    let n1 = g.sides().map_or(g.n() / 2, |s| s.iter().filter(|&&x| x == 0).count());
    let stat = |x: f64| (t.count > 0).then_some(x / t.count as f64);
    Ok(LowerBoundReport {
        seed,
        n1,
        samples: t.count,
        exhaustive,
        min_missing: (t.count > 0).then_some(t.min),
        mean_missing: stat(t.sum),
        frac_below_quarter: stat(t.below as f64),
        mean_expectation_bound: stat(t.bound),
        edge_count: g.edge_count(),
        pattern_edges: q,
        edges_hold: 4 * g.edge_count() >= n1 * n1,
    })
}

/// Samples `G(n1, n1, 1/2)` from `seed` and reports missing-edge statistics over
/// `samples` uniform injections of `h`.
pub fn lowerbound_experiment(h: &HostGraph, n1: usize, samples: usize, seed: u64) -> Result<LowerBoundReport> {
    if n1 < 2 {
        return invalid("n1 must be at least 2");
    }
    let g = gen_standard(&Family::RandomBipartite(n1, n1, 0.5, seed))?;
    lowerbound_on_host(&g, h, Some(samples), seed)
}

/// Runs [`lowerbound_experiment`] for each seed on `jobs` threads. Reports come back in seed
/// order regardless of scheduling.
pub fn lowerbound_suite(h: &HostGraph, n1: usize, samples: usize, seeds: &[u64], jobs: usize) -> Result<Vec<LowerBoundReport>> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().map_err(|e| crate::Error::Invalid(e.to_string()))?;
    pool.install(|| seeds.par_iter().map(|&s| lowerbound_experiment(h, n1, samples, s)).collect())
}

pub fn reports_to_csv(reports: &[LowerBoundReport]) -> String {
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.6}"));
    let mut out = String::from("seed,n1,samples,exhaustive,min_missing,mean_missing,frac_below_quarter,mean_expectation_bound,edge_count,pattern_edges,edges_hold\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.seed,
            r.n1,
            r.samples,
            r.exhaustive,
            r.min_missing.map_or(String::new(), |v| v.to_string()),
            opt(r.mean_missing),
            opt(r.frac_below_quarter),
            opt(r.mean_expectation_bound),
            r.edge_count,
            r.pattern_edges,
            r.edges_hold
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SbmRun {
    pub seed: u64,
    pub pattern_vertices: usize,
    pub pattern_edges: usize,
    pub separated_edges: usize,
    pub engine: String,
    pub certified: bool,
    pub mode: Option<Mode>,
    pub max_path_len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SbmDemoReport {
    pub runs: Vec<SbmRun>,
    pub successes: usize,
}

/// Host density at or above which the dense engine is used.
const DENSE_HOST: f64 = 0.25;

/// Draws a block-model pattern per seed, strips isolated vertices, separates it into pieces
/// of at most `2t` vertices and embeds it into `host`: the dense engine when the host's
/// edge density is at least 1/4, the sparse one otherwise.
pub fn sbm_pipeline_demo(base: &SbmParams, host: &HostGraph, seeds: &[u64], cfg: &RunConfig) -> Result<SbmDemoReport> {
    let n = host.n();
    let density = if n < 2 { 0.0 } else { 2.0 * host.edge_count() as f64 / (n * (n - 1)) as f64 };
    let mut runs = Vec::new();
    for &seed in seeds {
        let raw = gen_sbm(&SbmParams { seed, ..*base })?;
        let keep: VertexSet = (0..raw.n()).filter(|&v| raw.degree(v) > 0).collect();
        let (h, _) = raw.induced(&keep);
        if h.n() > n {
            return precondition(format!("pattern has {} vertices, host only {n}", h.n()));
        }
        let cap = (2 * base.t).max(1);
        let bisep = biseparate(&h, cap)?;
        let cfg = RunConfig { seed, ..cfg.clone() };
        let (engine, out): (&str, EmbeddingOutcome) = match (&bisep, density >= DENSE_HOST) {
            (Some(b), true) => ("dense", embed_dense_short(host, &h, b, &cfg)?),
            _ => ("sparse", embed_sparse_th(host, &h, &cfg)?),
        };
        runs.push(SbmRun {
            seed,
            pattern_vertices: h.n(),
            pattern_edges: h.edge_count(),
            separated_edges: bisep.as_ref().map_or(0, |b| b.e1.len()),
            engine: engine.into(),
            certified: out.is_certified(),
            mode: out.mode,
            max_path_len: out.certificate.as_ref().map_or(0, |c| c.max_path_len()),
        });
    }
    let successes = runs.iter().filter(|r| r.certified).count();
    Ok(SbmDemoReport { runs, successes })
}
