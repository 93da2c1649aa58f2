//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero if any fails.
//! Tolerances and corpus sizes are the constants below.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use subforge::audit;
use subforge::certify::{brute_force_subdivision, verify_subdivision, CertVerdict, Mode, SubdivisionCertificate};
use subforge::embed::{drc_th3, embed_balanced, embed_dense_short, embed_large_degree, embed_sparse_th, EmbeddingOutcome};
use subforge::expander::{check_expander, extract_expander, rho, CheckMode, ExpanderParams, Verdict};
use subforge::experiments::lowerbound_suite;
use subforge::gadgets::{chain_adjusters, Adjuster};
use subforge::graph::{average_degree, HostGraph, Vertex, VertexSet};
use subforge::patterns::{biseparate, cartesian_power, degeneracy, gen_sbm, gen_standard, lift_biseparation, Biseparation, Family, SbmParams};
use subforge::{rng, RunConfig};

const E2E_SEEDS: u64 = 500;
const E2E_BUDGET: Duration = Duration::from_secs(600);
const ORACLE_MAX_ELL: usize = 3;
const ORACLE_RANDOM_HOSTS: u64 = 300;
const EXTRACT_RANDOM: u64 = 100;
const EXTRACT_EXACT_N: usize = 16;
const EXTRACT_SAMPLES: usize = 10_000;
const DRC_SEEDS: u64 = 20;
const DRC_NEED: usize = 19;
const DRC_BUDGET: Duration = Duration::from_secs(10);
const ADJUSTERS: usize = 50;
const ADJUSTER_ATTEMPTS: u64 = 1_000;
const ADJUSTER_DFS_BUDGET: u64 = 50_000_000;
const LB_SEEDS: u64 = 20;
const LB_SAMPLES: usize = 10_000;
const LB_MEAN_SLACK: f64 = 0.05;
const LB_BUDGET: Duration = Duration::from_secs(120);
const RHO_PAIRS: usize = 100_000;

static CERT_PATHS: AtomicUsize = AtomicUsize::new(0);
static CERT_PARITY_BAD: AtomicUsize = AtomicUsize::new(0);

struct Outcome {
    pass: bool,
    detail: String,
    digest: String,
}

fn std_graph(f: Family) -> HostGraph {
    gen_standard(&f).unwrap()
}

/// Independent parity check of certificate paths in a two-coloured host.
fn check_cert_parity(g: &HostGraph, c: &SubdivisionCertificate) {
    let Some(s) = g.sides() else { return };
    for p in &c.paths {
        let (a, b) = (p.vertices[0], *p.vertices.last().unwrap());
        CERT_PATHS.fetch_add(1, Ordering::Relaxed);
        if (s[a] == s[b]) != ((p.vertices.len() - 1) % 2 == 0) {
            CERT_PARITY_BAD.fetch_add(1, Ordering::Relaxed);
        }
    }
}

fn cert_json(c: &Option<SubdivisionCertificate>) -> String {
    c.as_ref().map_or_else(|| "null".to_string(), |c| c.to_json())
}

/// Every engine that applies to `(g, h)`, with its certificate when it produced one.
fn all_engines(g: &HostGraph, h: &HostGraph, cfg: &RunConfig, large_modes: &[Mode]) -> Vec<(String, Option<SubdivisionCertificate>)> {
    let take = |r: subforge::Result<EmbeddingOutcome>| r.ok().and_then(|o| o.certificate);
    let mut out = vec![
        ("balanced".to_string(), take(embed_balanced(g, h, cfg))),
        ("sparse".to_string(), take(embed_sparse_th(g, h, cfg))),
    ];
    if g.sides().is_some() {
        out.push(("drc".into(), take(drc_th3(g, h, cfg).map(|x| x.0))));
    }
    if let Ok(Some(b)) = biseparate(h, 4) {
        out.push(("dense".into(), take(embed_dense_short(g, h, &b, cfg))));
    }
    let avg = average_degree(g).to_integer() as usize;
    let lcfg = RunConfig { large_degree_threshold: Some(avg.max(1)), ..cfg.clone() };
    for &m in large_modes {
        out.push((format!("large-{m:?}"), take(embed_large_degree(g, h, m, &lcfg))));
    }
    out
}

fn patterns() -> Vec<(&'static str, HostGraph)> {
    vec![
        ("K3", std_graph(Family::Clique(3))),
        ("K4", std_graph(Family::Clique(4))),
        ("C4", std_graph(Family::Cycle(4))),
        ("P4", std_graph(Family::Path(4))),
        ("S3", std_graph(Family::Star(3))),
        ("S4", std_graph(Family::Star(4))),
    ]
}

fn e2e_host(seed: u64) -> HostGraph {
    let mut r = rng::stream(seed, "acceptance-host");
    match seed % 3 {
        0 => std_graph(Family::CompleteBipartite(r.gen_range(6..=30), r.gen_range(6..=30))),
        1 => std_graph(Family::Gnp(r.gen_range(15..=60), r.gen_range(0.15..0.6), seed)),
        _ => {
            let (t, k) = (r.gen_range(3..=6), r.gen_range(2..=4));
            gen_sbm(&SbmParams { n: 2 * k * t, t, k_blocks: k, p: r.gen_range(0.2..0.6), q: r.gen_range(0.5..1.0), seed }).unwrap()
        }
    }
}

/// 1. Every certificate from every engine on mixed random fixtures verifies.
fn certificate_soundness() -> Outcome {
    let start = Instant::now();
    let pats = patterns();
    let runs: Vec<(usize, usize, String)> = (0..E2E_SEEDS)
        .into_par_iter()
        .map(|seed| {
            let g = e2e_host(seed);
            let (_, h) = &pats[(seed / 3) as usize % pats.len()];
            let cfg = RunConfig { seed, ..RunConfig::default() };
            let mut emitted = 0;
            let mut bad = 0;
            let mut digest = String::new();
            for (name, c) in all_engines(&g, h, &cfg, &[Mode::Balanced(1), Mode::Bounded(3)]) {
                if let Some(c) = &c {
                    emitted += 1;
                    check_cert_parity(&g, c);
                    if verify_subdivision(&g, h, c) != CertVerdict::Accept {
                        bad += 1;
                    }
                }
                digest.push_str(&format!("{seed}/{name}:{}\n", cert_json(&c)));
            }
            (emitted, bad, digest)
        })
        .collect();
    let elapsed = start.elapsed();
    let emitted: usize = runs.iter().map(|r| r.0).sum();
    let bad: usize = runs.iter().map(|r| r.1).sum();
    Outcome {
        pass: bad == 0 && emitted > 0 && elapsed < E2E_BUDGET,
        detail: format!("{E2E_SEEDS} runs, {emitted} certificates, {bad} rejected, {:.1}s", elapsed.as_secs_f64()),
        digest: runs.into_iter().map(|r| r.2).collect(),
    }
}

fn oracle_corpus() -> Vec<HostGraph> {
    let mut out = Vec::new();
    let pairs: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<_> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        out.push(HostGraph::from_edges(5, &edges).unwrap().with_detected_bipartition());
    }
    for seed in 0..ORACLE_RANDOM_HOSTS {
        let mut r = rng::stream(seed, "acceptance-oracle");
        let n = r.gen_range(6..=10);
        let p = [0.3, 0.5, 0.7][seed as usize % 3];
        out.push(std_graph(Family::Gnp(n, p, seed)).with_detected_bipartition());
    }
    for f in [
        Family::Cycle(6),
        Family::Cycle(7),
        Family::Cycle(9),
        Family::Cycle(10),
        Family::CompleteBipartite(3, 3),
        Family::CompleteBipartite(3, 4),
        Family::CompleteBipartite(4, 4),
        Family::CompleteBipartite(5, 5),
        Family::Grid(3, 3),
        Family::Hypercube(3),
        Family::Clique(6),
        Family::Clique(8),
        Family::Star(8),
    ] {
        out.push(std_graph(f));
    }
    let petersen = [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), (5, 7), (7, 9), (6, 9), (6, 8), (5, 8)];
    out.push(HostGraph::from_edges(10, &petersen).unwrap());
    out
}

/// 2. No engine certifies a subdivision the exhaustive oracle proves absent.
fn oracle_agreement() -> Outcome {
    let hosts = oracle_corpus();
    let pats = [
        std_graph(Family::Clique(3)),
        std_graph(Family::Path(3)),
        std_graph(Family::Cycle(4)),
    ];
    let modes: Vec<Mode> = (0..=ORACLE_MAX_ELL).flat_map(|l| [Mode::Balanced(l), Mode::Bounded(l)]).collect();
    let rows: Vec<(usize, usize, usize, usize, String)> = hosts
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, g)| pats.iter().enumerate().map(move |(j, h)| (i, g, j, h)))
        .map(|(i, g, j, h)| {
            let cfg = RunConfig { seed: i as u64, ..RunConfig::default() };
            let (mut checked, mut contra) = (0, 0);
            let mut digest = String::new();
            let mut balanced_hit = false;
            for (name, c) in all_engines(g, h, &cfg, &modes) {
                if let Some(c) = &c {
                    check_cert_parity(g, c);
                    if c.mode.ell() <= ORACLE_MAX_ELL {
                        checked += 1;
                        if brute_force_subdivision(g, h, c.mode).unwrap().is_none() {
                            contra += 1;
                        }
                    }
                    if name == "balanced" && matches!(c.mode, Mode::Balanced(l) if l <= ORACLE_MAX_ELL) {
                        balanced_hit = true;
                    }
                }
                digest.push_str(&format!("{i}/{j}/{name}:{}\n", cert_json(&c)));
            }
            let oracle_has = (1..=ORACLE_MAX_ELL).any(|l| brute_force_subdivision(g, h, Mode::Balanced(l)).unwrap().is_some());
            let gap = usize::from(oracle_has && !balanced_hit);
            (checked, contra, gap, usize::from(oracle_has), digest)
        })
        .collect();
    let sum = |f: fn(&(usize, usize, usize, usize, String)) -> usize| rows.iter().map(f).sum::<usize>();
    let (checked, contra, gap, present) = (sum(|r| r.0), sum(|r| r.1), sum(|r| r.2), sum(|r| r.3));
    Outcome {
        pass: contra == 0 && checked > 0,
        detail: format!(
            "{} instances, {checked} certificates checked, {contra} contradictions; balanced misses where the oracle finds 1 <= ell <= {ORACLE_MAX_ELL}: {gap} of {present}",
            rows.len()
        ),
        digest: rows.into_iter().map(|r| r.4).collect(),
    }
}

/// External neighbourhood of the set given by `mask`.
fn boundary_size(g: &HostGraph, mask: u64) -> usize {
    let mut nb = 0u64;
    for v in 0..g.n() {
        if mask >> v & 1 == 1 {
            for &w in g.neighbors(v) {
                nb |= 1 << w;
            }
        }
    }
    (nb & !mask).count_ones() as usize
}

/// Exhaustive expansion check over all sets `X` with `k/2 <= |X| <= n/2`.
fn exact_expands(g: &HostGraph, p: &ExpanderParams) -> bool {
    let n = g.n();
    (1u64..1 << n).all(|mask| {
        let s = mask.count_ones() as usize;
        if (s as f64) < p.k / 2.0 || 2 * s > n {
            return true;
        }
        boundary_size(g, mask) as f64 >= rho(s as f64, p).unwrap() * s as f64
    })
}

fn extract_fixtures() -> Vec<(String, HostGraph)> {
    let mut out: Vec<(String, HostGraph)> = (0..EXTRACT_RANDOM).map(|s| (format!("gnp-{s}"), std_graph(Family::Gnp(200, 0.05, s)))).collect();
    let structured = [
        Family::Hypercube(3),
        Family::Hypercube(4),
        Family::Hypercube(6),
        Family::Cycle(8),
        Family::Cycle(12),
        Family::Cycle(50),
        Family::CompleteBipartite(4, 4),
        Family::CompleteBipartite(3, 5),
        Family::CompleteBipartite(20, 20),
        Family::Grid(3, 4),
        Family::Grid(4, 4),
        Family::Grid(10, 10),
        Family::Clique(6),
        Family::Clique(8),
        Family::Clique(20),
        Family::Path(10),
        Family::Star(8),
        Family::RandomBipartite(8, 8, 0.5, 1),
        Family::RandomBipartite(50, 50, 0.2, 2),
        Family::Gnp(14, 0.5, 3),
    ];
    out.extend(structured.into_iter().map(|f| (format!("{f:?}"), std_graph(f))));
    out
}

/// 3. Extraction output keeps half the average degree, has minimum degree at least half its
/// own average, and expands.
fn extraction_contract() -> Outcome {
    let fx = extract_fixtures();
    let rows: Vec<(bool, bool, bool, String)> = fx
        .par_iter()
        .enumerate()
        .map(|(i, (name, g))| {
            let cfg = RunConfig { seed: i as u64, ..RunConfig::default() };
            let p = cfg.expander_params(cfg.eps2 * (2 * g.edge_count()) as f64 / g.n() as f64);
            let x = match extract_expander(g, &p, false, &cfg) {
                Ok(x) => x,
                Err(e) => return (false, false, false, format!("{name}: {e}\n")),
            };
            let out = &x.graph;
            let (n_in, e_in) = (g.n() as u128, g.edge_count() as u128);
            let (n_out, e_out) = (out.n() as u128, out.edge_count() as u128);
            let min = (0..out.n()).map(|v| out.degree(v)).min().unwrap_or(0) as u128;
            // d(out) >= d(in)/2 and min degree >= d(out)/2, cross-multiplied.
            let degrees = n_out > 0 && 2 * (2 * e_out) * n_in >= 2 * e_in * n_out && 2 * min * n_out >= 2 * e_out;
            let exact = out.n() <= EXTRACT_EXACT_N;
            let expands = if exact {
                exact_expands(out, &p)
            } else {
                check_expander(out, &p, CheckMode::Sampled { trials: EXTRACT_SAMPLES, seed: i as u64 }).unwrap().verdict != Verdict::Refuted
            };
            (degrees, expands, exact, format!("{name}: n {} e {} ids {:?}\n", out.n(), out.edge_count(), x.original_ids))
        })
        .collect();
    let exact = rows.iter().filter(|r| r.2).count();
    let deg_bad = rows.iter().filter(|r| !r.0).count();
    let exp_bad = rows.iter().filter(|r| !r.1).count();
    Outcome {
        pass: deg_bad == 0 && exp_bad == 0,
        detail: format!("{} fixtures ({exact} outputs checked exactly), {deg_bad} degree violations, {exp_bad} expansion violations", rows.len()),
        digest: rows.into_iter().map(|r| r.3).collect(),
    }
}

/// 4. Balanced length-4 subdivisions of K4 in random bipartite hosts.
fn drc_quantitative() -> Outcome {
    let h = std_graph(Family::Clique(4));
    let mut ok = 0;
    let mut seed0 = false;
    let mut slowest = Duration::ZERO;
    let mut digest = String::new();
    for seed in 0..DRC_SEEDS {
        let g = std_graph(Family::RandomBipartite(120, 8000, 0.5, seed));
        let cfg = RunConfig { seed, ..RunConfig::default() };
        let t = Instant::now();
        let (out, _) = drc_th3(&g, &h, &cfg).unwrap();
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        let good = out.certificate.as_ref().is_some_and(|c| {
            check_cert_parity(&g, c);
            c.mode == Mode::Balanced(3) && verify_subdivision(&g, &h, c) == CertVerdict::Accept
        }) && dt < DRC_BUDGET;
        ok += usize::from(good);
        seed0 |= seed == 0 && good;
        digest.push_str(&format!("{seed}:{}\n", cert_json(&out.certificate)));
    }
    Outcome {
        pass: seed0 && ok >= DRC_NEED,
        detail: format!("{ok}/{DRC_SEEDS} verified (need {DRC_NEED}, seed 0 {}), slowest {:.2}s", if seed0 { "ok" } else { "missed" }, slowest.as_secs_f64()),
        digest,
    }
}

/// Depth-first search for a simple `u,v`-path of exactly `len` edges through `allowed`.
fn exact_path(g: &HostGraph, u: Vertex, v: Vertex, len: usize, allowed: &[bool], budget: &mut u64) -> Option<bool> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut queue = std::collections::VecDeque::from([v]);
    dist[v] = 0;
    while let Some(x) = queue.pop_front() {
        for &y in g.neighbors(x) {
            if allowed[y] && dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    fn go(g: &HostGraph, x: Vertex, v: Vertex, left: usize, allowed: &[bool], dist: &[usize], on: &mut [bool], budget: &mut u64) -> Option<bool> {
        if *budget == 0 {
            return None;
        }
        *budget -= 1;
        if x == v {
            return Some(left == 0);
        }
        if dist[x] > left {
            return Some(false);
        }
        for &y in g.neighbors(x) {
            if allowed[y] && !on[y] && (y != v || left == 1) {
                on[y] = true;
                let r = go(g, y, v, left - 1, allowed, dist, on, budget);
                on[y] = false;
                if r != Some(false) {
                    return r;
                }
            }
        }
        Some(false)
    }
    let mut on = vec![false; n];
    on[u] = true;
    go(g, u, v, len, allowed, &dist, &mut on, budget)
}

fn adjuster_ok(g: &HostGraph, a: &Adjuster, want_k: usize) -> bool {
    let mut allowed = a.centers.to_mask(g.n());
    allowed[a.v1] = true;
    allowed[a.v2] = true;
    let mut budget = ADJUSTER_DFS_BUDGET;
    a.k >= want_k
        && a.centers.len() <= 10 * a.m * a.k
        && (0..=a.k).all(|i| exact_path(g, a.v1, a.v2, a.ell + 2 * i, &allowed, &mut budget) == Some(true))
}

/// 5. Built adjusters realise every length of their ladder inside their own vertices.
fn adjuster_ladder() -> Outcome {
    let mut built = 0;
    let mut bad = 0;
    let mut tried = 0;
    let mut digest = String::new();
    let mut hosts = Vec::new();
    for s in 0..8u64 {
        let mut r = rng::stream(s, "acceptance-adjuster-host");
        let n = r.gen_range(40..=120);
        let g = std_graph(Family::Gnp(n, r.gen_range(0.08..0.25), s));
        let cfg = RunConfig { seed: s, ..RunConfig::default() };
        let d = (2 * g.edge_count()) as f64 / n as f64;
        if let Ok(x) = extract_expander(&g, &cfg.expander_params(cfg.eps2 * d), true, &cfg) {
            hosts.push(x.graph);
        }
    }
    for attempt in 0..ADJUSTER_ATTEMPTS {
        if built == ADJUSTERS || hosts.is_empty() {
            break;
        }
        tried += 1;
        let mut r = rng::stream(attempt, "acceptance-adjuster");
        let g = &hosts[attempt as usize % hosts.len()];
        let (d, m, k) = (r.gen_range(1..=20), r.gen_range(1..=4), r.gen_range(1..=3));
        let avoid: VertexSet = (0..g.n()).filter(|_| r.gen_bool(0.1)).collect();
        if let Ok(a) = chain_adjusters(g, &avoid, d, m, k).unwrap() {
            built += 1;
            if !adjuster_ok(g, &a, k) || a.vertices().iter().any(|v| avoid.contains(v)) {
                bad += 1;
            }
            digest.push_str(&format!("{attempt}:{}\n", serde_json::to_string(&a).unwrap()));
        }
    }
    Outcome {
        pass: built == ADJUSTERS && bad == 0,
        detail: format!("{built} adjusters built in {tried} attempts on {} hosts, {bad} violations", hosts.len()),
        digest,
    }
}

/// Minimum-degree peeling, written out independently of the library.
fn peel(g: &HostGraph) -> usize {
    let mut alive = vec![true; g.n()];
    let mut best = 0;
    for _ in 0..g.n() {
        let (v, d) = (0..g.n())
            .filter(|&v| alive[v])
            .map(|v| (v, g.neighbors(v).iter().filter(|&&w| alive[w]).count()))
            .min_by_key(|&(_, d)| d)
            .unwrap();
        best = best.max(d);
        alive[v] = false;
    }
    best
}

/// 6. Vertex and edge counts of Cartesian powers, lifted biseparations and degeneracy.
fn cartesian_arithmetic() -> Outcome {
    let fs = [
        ("P3", std_graph(Family::Path(3))),
        ("P4", std_graph(Family::Path(4))),
        ("C6", std_graph(Family::Cycle(6))),
        ("K2", std_graph(Family::Path(2))),
    ];
    let mut checks = 0;
    let mut bad = Vec::new();
    let mut digest = String::new();
    for (name, f) in &fs {
        let (fv, fe) = (f.n(), f.edge_count());
        let kf = peel(f);
        let mut biseps: Vec<Biseparation> = f.edges().map(|e| Biseparation { e1: vec![e], component_cap: fv, components: vec![] }).collect();
        for cap in 1..=fv {
            if let Ok(Some(b)) = biseparate(f, cap) {
                biseps.push(b);
            }
        }
        for r in 1..=3u32 {
            let p = cartesian_power(f, r as usize).unwrap();
            let (pv, pe) = (fv.pow(r), r as usize * fv.pow(r - 1) * fe);
            checks += 3;
            if p.n() != pv || p.edge_count() != pe {
                bad.push(format!("{name}^{r}: {} vertices {} edges", p.n(), p.edge_count()));
            }
            let kp = peel(&p);
            if kp > r as usize * kf || degeneracy(&p).degeneracy != kp {
                bad.push(format!("{name}^{r}: degeneracy {kp} vs {kf}"));
            }
            for b in &biseps {
                checks += 1;
                let l = lift_biseparation(f, b, r as usize).unwrap();
                let e1: BTreeSet<_> = b.e1.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
                if l.e1.len() != r as usize * fv.pow(r - 1) * e1.len() {
                    bad.push(format!("{name}^{r}: lifted {} from {}", l.e1.len(), e1.len()));
                }
                digest.push_str(&format!("{name}^{r}:{:?}\n", l.e1));
            }
        }
    }
    Outcome { pass: bad.is_empty(), detail: format!("{checks} exact checks, {} failed {bad:?}", bad.len()), digest }
}

/// 7. Missing-edge statistics for K10 against `G(100, 100, 1/2)`.
fn lowerbound_stats() -> Outcome {
    let h = std_graph(Family::Clique(10));
    let q = h.edge_count() as f64;
    let seeds: Vec<u64> = (0..LB_SEEDS).collect();
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    let t = Instant::now();
    let reports = lowerbound_suite(&h, 100, LB_SAMPLES, &seeds, jobs).unwrap();
    let dt = t.elapsed();
    let floor = q / 2.0 * (1.0 - LB_MEAN_SLACK);
    let bad: Vec<u64> = reports
        .iter()
        .filter(|r| !(r.mean_missing.unwrap() >= floor && r.frac_below_quarter == Some(0.0) && r.edges_hold))
        .map(|r| r.seed)
        .collect();
    let lo = reports.iter().map(|r| r.mean_missing.unwrap()).fold(f64::INFINITY, f64::min);
    Outcome {
        pass: bad.is_empty() && dt < LB_BUDGET,
        detail: format!("{} seeds, lowest mean {lo:.3} (floor {floor:.3}), failing seeds {bad:?}, {:.1}s", reports.len(), dt.as_secs_f64()),
        digest: serde_json::to_string(&reports).unwrap(),
    }
}

/// 8a. `rho` never increases past `k/5`.
fn rho_monotone() -> (bool, String) {
    let mut r = rng::stream(0, "acceptance-rho");
    let mut bad = 0;
    for _ in 0..RHO_PAIRS {
        let k = r.gen_range(1.0..1000.0);
        let p = RunConfig { eps1: r.gen_range(0.001..1.0), ..RunConfig::default() }.expander_params(k);
        let span = (1e7f64 / (k / 5.0)).ln();
        let mut x = k / 5.0 * (r.gen_range(0.0..span)).exp();
        let mut y = k / 5.0 * (r.gen_range(0.0..span)).exp();
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        if rho(x, &p).unwrap() < rho(y, &p).unwrap() {
            bad += 1;
        }
    }
    (bad == 0, format!("{RHO_PAIRS} pairs, {bad} increases"))
}

fn report(id: usize, name: &str, pass: bool, detail: &str, failed: &mut bool) {
    println!("{} {id}. {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    *failed |= !pass;
}

/// Criterion numbers given as arguments restrict the run to those criteria.
fn main() {
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let want = |id: usize| only.is_empty() || only.contains(&id);
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    println!("acceptance ({jobs} threads)");
    audit::enable();
    audit::reset();
    let suites: [(&str, fn() -> Outcome); 7] = [
        ("certificate soundness", certificate_soundness),
        ("oracle agreement", oracle_agreement),
        ("expander extraction contract", extraction_contract),
        ("dependent random choice K4", drc_quantitative),
        ("adjuster ladder", adjuster_ladder),
        ("cartesian and biseparation arithmetic", cartesian_arithmetic),
        ("lower-bound statistics", lowerbound_stats),
    ];
    let mut failed = false;
    let mut digests = Vec::new();
    let mut parity = None;
    for (i, (name, f)) in suites.iter().enumerate() {
        if i == 6 {
            parity = Some(audit::snapshot());
        }
        if !(want(i + 1) || want(9) || (want(8) && i < 5)) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        if want(i + 1) {
            report(i + 1, name, o.pass, &format!("{} [{:.1}s]", o.detail, t.elapsed().as_secs_f64()), &mut failed);
        }
        digests.push((i, o.digest));
    }

    if want(8) {
        let (rho_ok, rho_detail) = rho_monotone();
        let (checked, violations) = parity.unwrap_or_else(audit::snapshot);
        let (cp, cbad) = (CERT_PATHS.load(Ordering::Relaxed), CERT_PARITY_BAD.load(Ordering::Relaxed));
        report(
            8,
            "rho and parity laws",
            rho_ok && violations == 0 && checked > 0 && cbad == 0,
            &format!("{rho_detail}; routing hook {checked} paths, {violations} odd; certificate paths {cp}, {cbad} odd"),
            &mut failed,
        );
    }

    if want(9) {
        let t = Instant::now();
        let differing: Vec<usize> = digests.iter().filter(|(i, d)| (suites[*i].1)().digest != *d).map(|(i, _)| i + 1).collect();
        let bytes: usize = digests.iter().map(|(_, d)| d.len()).sum();
        report(
            9,
            "determinism",
            differing.is_empty() && !digests.is_empty(),
            &format!("{} suites rerun, {bytes} bytes compared, differing {differing:?} [{:.1}s]", digests.len(), t.elapsed().as_secs_f64()),
            &mut failed,
        );
    }
    if failed {
        std::process::exit(1);
    }
}
