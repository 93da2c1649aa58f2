//! Sublinear expansion: the rho function, exact and sampled checks, extraction of an
//! expanding subgraph, robust restriction, local density and ball growth.

use num_rational::Ratio;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::config::{LogBase, RunConfig};
use crate::error::{invalid, precondition, Error, Result};
use crate::graph::{self, average_degree, ratio_f64, HostGraph, Vertex, VertexSet, UNREACHED};
use crate::rng;

pub const DEFAULT_EXACT_CAP: usize = 18;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderParams {
    pub eps1: f64,
    pub eps2: f64,
    /// Expansion floor; sets below `k/2` are never tested.
    pub k: f64,
    pub log_base: LogBase,
}

impl ExpanderParams {
    pub fn new(eps1: f64, k: f64) -> Self {
        ExpanderParams { eps1, eps2: 0.1, k, log_base: LogBase::Two }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps1 > 0.0 && self.eps1 <= 0.125) {
            return invalid(format!("eps1={} outside (0, 1/8]", self.eps1));
        }
        if !(self.k > 0.0 && self.k.is_finite()) {
            return invalid(format!("k={} must be positive", self.k));
        }
        Ok(())
    }

    pub fn with_eps1(self, eps1: f64) -> Self {
        ExpanderParams { eps1, ..self }
    }
}

/// `eps1 / log^2(15x/k)` for `x >= k/5`, else 0.
pub fn rho(x: f64, p: &ExpanderParams) -> Result<f64> {
    if !x.is_finite() || x < 0.0 {
        return invalid(format!("rho needs a finite non-negative size, got {x}"));
    }
    if x < p.k / 5.0 {
        return Ok(0.0);
    }
    let l = p.log_base.log(15.0 * x / p.k);
    Ok(p.eps1 / (l * l))
}

fn rho_unchecked(x: f64, p: &ExpanderParams) -> f64 {
    rho(x, p).unwrap_or(0.0)
}

/// Whether a set of size `size` with `boundary` external neighbours violates expansion.
pub fn violates(size: usize, boundary: usize, n: usize, p: &ExpanderParams) -> bool {
    let s = size as f64;
    s >= p.k / 2.0 && 2 * size <= n && size > 0 && (boundary as f64) < rho_unchecked(s, p) * s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    VerifiedExact,
    VerifiedSampled,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpanderReport {
    pub verdict: Verdict,
    pub witness: Option<VertexSet>,
    pub trials: usize,
    pub rho_at_n: f64,
    pub n: usize,
    pub params: ExpanderParams,
}

impl ExpanderReport {
    pub fn is_refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    Exact { cap: usize },
    Sampled { trials: usize, seed: u64 },
}

impl CheckMode {
    pub fn exact() -> Self {
        CheckMode::Exact { cap: DEFAULT_EXACT_CAP }
    }

    /// Exact when `n` is within the configured cap, sampled otherwise.
    pub fn auto(n: usize, cfg: &RunConfig) -> Self {
        if n <= cfg.exact_cap {
            CheckMode::Exact { cap: cfg.exact_cap }
        } else {
            CheckMode::Sampled { trials: cfg.sample_trials, seed: cfg.seed }
        }
    }
}

pub fn check_expander(g: &HostGraph, p: &ExpanderParams, mode: CheckMode) -> Result<ExpanderReport> {
    p.validate()?;
    let n = g.n();
    let rho_at_n = rho(n as f64, p)?;
    let (verdict, witness, trials) = match mode {
        CheckMode::Exact { cap } => {
            if n > cap.min(24) {
                return invalid(format!("exact expansion check limited to {cap} vertices, got {n}"));
            }
            let (w, t) = exact_violator(g, p);
            (if w.is_some() { Verdict::Refuted } else { Verdict::VerifiedExact }, w, t)
        }
        CheckMode::Sampled { trials, seed } => {
            let (w, t) = sampled_violator(g, p, trials, seed);
            (if w.is_some() { Verdict::Refuted } else { Verdict::VerifiedSampled }, w, t)
        }
    };
    if let Some(w) = &witness {
        debug_assert!(violates(w.len(), g.boundary(&w.to_mask(n)).len(), n, p));
    }
    Ok(ExpanderReport { verdict, witness, trials, rho_at_n, n, params: *p })
}

/// Enumerates every nonempty subset of size at most `n/2` in increasing bitmask order.
fn exact_violator(g: &HostGraph, p: &ExpanderParams) -> (Option<VertexSet>, usize) {
    let n = g.n();
    if n < 2 {
        return (None, 0);
    }
    let nb: Vec<u32> = (0..n).map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let total = 1usize << n;
    let mut union = vec![0u32; total];
    let mut tested = 0;
    for mask in 1..total {
        let low = mask.trailing_zeros() as usize;
        union[mask] = union[mask & (mask - 1)] | nb[low];
        let size = mask.count_ones() as usize;
        if 2 * size > n || (size as f64) < p.k / 2.0 {
            continue;
        }
        tested += 1;
        let boundary = (union[mask] & !(mask as u32)).count_ones() as usize;
        if violates(size, boundary, n, p) {
            return (Some((0..n).filter(|&v| mask >> v & 1 == 1).collect()), tested);
        }
    }
    (None, tested)
}

fn sampled_violator(g: &HostGraph, p: &ExpanderParams, trials: usize, seed: u64) -> (Option<VertexSet>, usize) {
    let n = g.n();
    if n < 2 {
        return (None, 0);
    }
    let lo = (p.k / 2.0).ceil().max(1.0) as usize;
    let hi = n / 2;
    if lo > hi {
        return (None, 0);
    }
    let test = |set: &[Vertex]| -> Option<VertexSet> {
        let mut mask = vec![false; n];
        for &v in set {
            mask[v] = true;
        }
        let b = g.boundary(&mask).len();
        violates(set.len(), b, n, p).then(|| set.iter().copied().collect())
    };
    let mut tested = 0;
    // Deterministic candidates first: connected components and their unions.
    let comps = g.components(&vec![true; n]);
    if comps.len() > 1 {
        let mut acc: Vec<Vertex> = Vec::new();
        for c in &comps {
            tested += 1;
            if let Some(w) = test(c) {
                return (Some(w), tested);
            }
            if acc.len() + c.len() <= hi {
                acc.extend(c);
                tested += 1;
                if let Some(w) = test(&acc) {
                    return (Some(w), tested);
                }
            }
        }
    }
    let mut r = rng::stream(seed, "expander-sample");
    let all: Vec<Vertex> = (0..n).collect();
    for t in 0..trials {
        let size = r.gen_range(lo..=hi);
        let set: Vec<Vertex> = if t % 2 == 0 {
            bfs_grown(g, r.gen_range(0..n), size, &mut r)
        } else {
            all.choose_multiple(&mut r, size).copied().collect()
        };
        tested += 1;
        if set.len() >= lo {
            if let Some(w) = test(&set) {
                return (Some(w), tested);
            }
        }
    }
    (None, tested)
}

/// Breadth-first grown set from `start`, jumping to a random unvisited vertex when a
/// component is exhausted. Neighbour order is shuffled so repeated trials differ.
fn bfs_grown(g: &HostGraph, start: Vertex, size: usize, r: &mut impl Rng) -> Vec<Vertex> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut out = Vec::with_capacity(size);
    let mut queue = std::collections::VecDeque::new();
    let mut next = start;
    while out.len() < size {
        if seen[next] {
            match (0..n).find(|&v| !seen[v]) {
                Some(v) => next = v,
                None => break,
            }
        }
        seen[next] = true;
        out.push(next);
        queue.push_back(next);
        while let Some(u) = queue.pop_front() {
            let mut nbrs: Vec<Vertex> = g.neighbors(u).iter().copied().filter(|&w| !seen[w]).collect();
            nbrs.shuffle(r);
            for w in nbrs {
                if out.len() >= size {
                    break;
                }
                seen[w] = true;
                out.push(w);
                queue.push_back(w);
            }
            if out.len() >= size {
                break;
            }
        }
        next = r.gen_range(0..n);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct Extraction {
    pub graph: HostGraph,
    /// `original_ids[i]` is the input vertex that became vertex `i`.
    pub original_ids: Vec<Vertex>,
    pub report: ExpanderReport,
    pub input_avg: Ratio<u64>,
    pub output_avg: Ratio<u64>,
    pub rounds: usize,
}

fn induced_avg(g: &HostGraph, keep: &[bool]) -> Ratio<u64> {
    let n = keep.iter().filter(|&&b| b).count();
    if n == 0 {
        return Ratio::from_integer(0);
    }
    let twice_e: usize = (0..g.n()).filter(|&v| keep[v]).map(|v| g.neighbors(v).iter().filter(|&&w| keep[w]).count()).sum();
    Ratio::new(twice_e as u64, n as u64)
}

/// Removes vertices of degree below half the current average until none remain. Such a
/// removal never lowers the average degree.
fn prune_low_degree(g: &HostGraph, keep: &mut [bool]) {
    let mut deg: Vec<usize> = (0..g.n()).map(|v| if keep[v] { g.neighbors(v).iter().filter(|&&w| keep[w]).count() } else { 0 }).collect();
    let mut n = keep.iter().filter(|&&b| b).count() as u64;
    let mut twice_e: u64 = deg.iter().map(|&d| d as u64).sum();
    loop {
        // degree < (2e/n)/2  <=>  2 n deg < 2e
        let Some(v) = (0..g.n()).find(|&v| keep[v] && 2 * n * (deg[v] as u64) < twice_e) else {
            return;
        };
        keep[v] = false;
        n -= 1;
        twice_e -= 2 * deg[v] as u64;
        for &w in g.neighbors(v) {
            if keep[w] {
                deg[w] -= 1;
            }
        }
        deg[v] = 0;
    }
}

/// Extracts an expanding subgraph with `d(out) >= d(in)/2` and `delta(out) >= d(out)/2`.
///
/// Iterative refinement: prune low-degree vertices, search for a violating set `X`, keep the
/// denser of `G[X u N(X)]` and `G - X`, repeat. Fails if the average degree drops below
/// half the input's.
pub fn extract_expander(g: &HostGraph, p: &ExpanderParams, want_bipartite: bool, cfg: &RunConfig) -> Result<Extraction> {
    p.validate()?;
    if g.n() == 0 || g.edge_count() == 0 {
        return precondition("extraction needs at least one edge");
    }
    let base = if want_bipartite { graph::max_cut_bipartite(g) } else { g.clone() };
    let input_avg = average_degree(g);
    let mut keep = vec![true; base.n()];
    let mut rounds = 0;
    loop {
        rounds += 1;
        prune_low_degree(&base, &mut keep);
        let avg = induced_avg(&base, &keep);
        if avg * 2 < input_avg || avg == Ratio::from_integer(0) {
            return precondition(format!(
                "refinement fell below the degree floor: average {} < {}/2 after {rounds} rounds",
                avg, input_avg
            ));
        }
        let set = VertexSet::from_mask(&keep);
        let (sub, map) = base.induced(&set);
        let report = check_expander(&sub, p, CheckMode::auto(sub.n(), cfg))?;
        let Some(w) = report.witness.clone() else {
            let output_avg = average_degree(&sub);
            let st = graph::stats(&sub)?;
            if output_avg * 2 < input_avg || Ratio::from_integer(2 * st.min as u64) < output_avg {
                return Err(Error::Precondition("extracted graph failed its degree checks".into()));
            }
            log::info!("expander extraction: n {} -> {}, d {} -> {}, {rounds} rounds", g.n(), sub.n(), input_avg, output_avg);
            return Ok(Extraction { graph: sub, original_ids: map, report, input_avg, output_avg, rounds });
        };
        let wmask = w.to_mask(sub.n());
        let mut closed = wmask.clone();
        for b in sub.boundary(&wmask) {
            closed[b] = true;
        }
        let a_closed = induced_avg(&sub, &closed);
        let rest: Vec<bool> = wmask.iter().map(|&b| !b).collect();
        let a_rest = induced_avg(&sub, &rest);
        let chosen = if a_closed > a_rest { closed } else { rest };
        keep.iter_mut().for_each(|b| *b = false);
        for (i, &c) in chosen.iter().enumerate() {
            if c {
                keep[map[i]] = true;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ThresholdMode {
    /// Reject inputs above the size threshold.
    Enforce,
    /// Proceed and record whether the threshold held.
    Report,
}

#[derive(Clone, Debug, Serialize)]
pub struct Restriction {
    pub y: VertexSet,
    pub report: ExpanderReport,
    pub threshold: f64,
    pub within_threshold: bool,
    pub size_bound: f64,
    pub size_bound_holds: bool,
    pub density_holds: bool,
}

/// Finds `Y` disjoint from `X` on which `G` still expands at `eps1/2`, by removing violating
/// sets from `V - X` until none is found.
pub fn robust_restrict(g: &HostGraph, x: &VertexSet, p: &ExpanderParams, mode: ThresholdMode, cfg: &RunConfig) -> Result<Restriction> {
    p.validate()?;
    x.check_range(g.n())?;
    let n = g.n();
    let st = graph::stats(g)?;
    let d = ratio_f64(st.avg);
    let rho_n = rho(n as f64, p)?;
    let threshold = if st.max == 0 { 0.0 } else { n as f64 * rho_n * d / (4.0 * st.max as f64) };
    let within_threshold = (x.len() as f64) < threshold || x.is_empty();
    if mode == ThresholdMode::Enforce && !within_threshold {
        return precondition(format!("|X|={} is not below the restriction threshold {threshold:.4}", x.len()));
    }
    let half = p.with_eps1(p.eps1 / 2.0);
    let mut keep: Vec<bool> = (0..n).map(|v| !x.contains(v)).collect();
    loop {
        let y = VertexSet::from_mask(&keep);
        let (sub, map) = g.induced(&y);
        let report = if sub.n() == 0 {
            ExpanderReport { verdict: Verdict::Refuted, witness: None, trials: 0, rho_at_n: 0.0, n: 0, params: half }
        } else {
            check_expander(&sub, &half, CheckMode::auto(sub.n(), cfg))?
        };
        match &report.witness {
            Some(w) => {
                for v in w.iter() {
                    keep[map[v]] = false;
                }
            }
            None => {
                let size_bound = if st.max == 0 || rho_n == 0.0 {
                    n as f64
                } else {
                    n as f64 - (2.0 * st.max as f64 / d) * (x.len() as f64 / rho_n)
                };
                let sub_avg = average_degree(&sub);
                let density_holds = sub.n() > 0 && sub_avg * 2 >= st.avg;
                return Ok(Restriction {
                    size_bound_holds: y.len() as f64 > size_bound || x.is_empty(),
                    y,
                    report,
                    threshold,
                    within_threshold,
                    size_bound,
                    density_holds,
                });
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SearchMode {
    Exact,
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SparseWitness {
    pub witness: Option<VertexSet>,
    pub mode: SearchMode,
    /// True when absence of a witness is a proof.
    pub exhaustive: bool,
}

fn removal_is_sparse(twice_e_rest: usize, n_rest: usize, beta: f64) -> bool {
    n_rest == 0 || (twice_e_rest as f64) < beta * n_rest as f64
}

/// Looks for `W` with `|W| <= alpha` and `d(G - W) < beta`. Exact mode is exhaustive and
/// limited to 14 vertices; the first witness in (size, lexicographic) order is returned.
pub fn find_sparse_witness(g: &HostGraph, alpha: usize, beta: f64, mode: SearchMode) -> Result<SparseWitness> {
    let n = g.n();
    if alpha >= n {
        return precondition(format!("alpha={alpha} must be below n={n}"));
    }
    match mode {
        SearchMode::Exact => {
            if n > 14 {
                return invalid(format!("exact sparse-witness search limited to 14 vertices, got {n}"));
            }
            let mut best: Option<(usize, u32)> = None;
            for mask in 0u32..1 << n {
                let size = mask.count_ones() as usize;
                if size > alpha || best.is_some_and(|(s, _)| size >= s) {
                    continue;
                }
                let twice_e: usize = g.edges().filter(|&(u, v)| mask >> u & 1 == 0 && mask >> v & 1 == 0).count() * 2;
                if removal_is_sparse(twice_e, n - size, beta) {
                    best = Some((size, mask));
                }
            }
            let witness = best.map(|(_, m)| (0..n).filter(|&v| m >> v & 1 == 1).collect());
            Ok(SparseWitness { witness, mode, exhaustive: true })
        }
        SearchMode::Heuristic => Ok(SparseWitness { witness: greedy_sparse(g, alpha, beta), mode, exhaustive: false }),
    }
}

fn greedy_sparse(g: &HostGraph, alpha: usize, beta: f64) -> Option<VertexSet> {
    let n = g.n();
    let mut removed = vec![false; n];
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut twice_e = 2 * g.edge_count();
    let mut size = 0;
    if removal_is_sparse(twice_e, n, beta) {
        return Some(VertexSet::new());
    }
    let remove = |v: Vertex, removed: &mut Vec<bool>, deg: &mut Vec<usize>, twice_e: &mut usize| {
        removed[v] = true;
        *twice_e -= 2 * deg[v];
        for &w in g.neighbors(v) {
            if !removed[w] {
                deg[w] -= 1;
            }
        }
    };
    while size < alpha {
        let v = (0..n).filter(|&v| !removed[v]).max_by_key(|&v| (deg[v], std::cmp::Reverse(v)))?;
        remove(v, &mut removed, &mut deg, &mut twice_e);
        size += 1;
        if removal_is_sparse(twice_e, n - size, beta) {
            return Some(VertexSet::from_mask(&removed));
        }
    }
    // Local swaps: exchange a removed vertex for a kept one when that lowers e(G - W).
    for _ in 0..n {
        let mut improved = false;
        let outs: Vec<Vertex> = (0..n).filter(|&v| removed[v]).collect();
        let inns: Vec<Vertex> = (0..n).filter(|&v| !removed[v]).collect();
        for &out in &outs {
            for &inn in &inns {
                let back = g.neighbors(out).iter().filter(|&&w| !removed[w]).count();
                let gain = deg[inn] + usize::from(g.has_edge(out, inn));
                if gain > back {
                    let mut trial = removed.clone();
                    trial[out] = false;
                    trial[inn] = true;
                    let te: usize = g.edges().filter(|&(a, b)| !trial[a] && !trial[b]).count() * 2;
                    if te < twice_e {
                        removed = trial;
                        twice_e = te;
                        deg = (0..n).map(|v| g.neighbors(v).iter().filter(|&&w| !removed[w]).count()).collect();
                        improved = true;
                        if removal_is_sparse(twice_e, n - size, beta) {
                            return Some(VertexSet::from_mask(&removed));
                        }
                        break;
                    }
                }
            }
            if improved {
                break;
            }
        }
        if !improved {
            break;
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallGrowthReport {
    pub m: usize,
    pub ball_size: usize,
    pub half_n: f64,
    pub pass: bool,
    /// Degree precondition failed; nothing was measured.
    pub skipped: bool,
    pub expander_verified: bool,
}

/// Measures `|B^m(v)|` against `n/2`, with `m` from the configuration.
pub fn ball_growth_check(g: &HostGraph, v: Vertex, p: &ExpanderParams, cfg: &RunConfig) -> Result<BallGrowthReport> {
    if v >= g.n() {
        return invalid("vertex out of range");
    }
    let d = ratio_f64(average_degree(g));
    let m = cfg.m(g.n(), d);
    let half_n = g.n() as f64 / 2.0;
    let expander_verified = !check_expander(g, p, CheckMode::auto(g.n(), cfg))?.is_refuted();
    if (g.degree(v) as f64) < p.eps2 * d {
        return Ok(BallGrowthReport { m, ball_size: 0, half_n, pass: false, skipped: true, expander_verified });
    }
    let dist = g.distances(&[v], &vec![false; g.n()]);
    let ball_size = dist.iter().filter(|&&x| x != UNREACHED && x <= m).count();
    Ok(BallGrowthReport { m, ball_size, half_n, pass: ball_size as f64 >= half_n, skipped: false, expander_verified })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clique(n: usize) -> HostGraph {
        let e: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        HostGraph::from_edges(n, &e).unwrap()
    }

    fn disjoint_cliques(n: usize, copies: usize) -> HostGraph {
        let mut e = Vec::new();
        for c in 0..copies {
            for u in 0..n {
                for v in u + 1..n {
                    e.push((c * n + u, c * n + v));
                }
            }
        }
        HostGraph::from_edges(n * copies, &e).unwrap()
    }

    /// Independent brute force over all subsets using plain set operations.
    fn brute_force_expands(g: &HostGraph, p: &ExpanderParams) -> bool {
        let n = g.n();
        for mask in 1u32..1 << n {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let s = set.len() as f64;
            if s < p.k / 2.0 || 2 * set.len() > n {
                continue;
            }
            let mut nb: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
            for &v in &set {
                for &w in g.neighbors(v) {
                    if mask >> w & 1 == 0 {
                        nb.insert(w);
                    }
                }
            }
            let r = if s < p.k / 5.0 { 0.0 } else { p.eps1 / (15.0 * s / p.k).log2().powi(2) };
            if (nb.len() as f64) < r * s {
                return false;
            }
        }
        true
    }

    #[test]
    fn rho_examples() {
        let p = ExpanderParams::new(0.125, 10.0);
        assert_eq!(rho(10.0 / 6.0, &p).unwrap(), 0.0);
        let v = rho(10.0, &p).unwrap();
        assert!((v - 0.00819).abs() < 5e-6, "{v}");
        assert!(rho(f64::NAN, &p).is_err());
        assert!(rho(-1.0, &p).is_err());
        assert!(rho(3.0, &p).unwrap() >= rho(30.0, &p).unwrap());
    }

    #[test]
    fn two_k4s_refuted_with_component_witness() {
        let g = disjoint_cliques(4, 2);
        let p = ExpanderParams::new(0.1, 2.0);
        let r = check_expander(&g, &p, CheckMode::exact()).unwrap();
        assert_eq!(r.verdict, Verdict::Refuted);
        let w = r.witness.unwrap();
        assert!(g.boundary(&w.to_mask(8)).is_empty());
        let s = check_expander(&g, &p, CheckMode::Sampled { trials: 100, seed: 0 }).unwrap();
        assert_eq!(s.verdict, Verdict::Refuted);
    }

    #[test]
    fn k6_verified_exact_and_sampling_agrees() {
        let g = clique(6);
        let p = ExpanderParams::new(0.125, 2.0);
        assert!(brute_force_expands(&g, &p));
        assert_eq!(check_expander(&g, &p, CheckMode::exact()).unwrap().verdict, Verdict::VerifiedExact);
        assert_eq!(check_expander(&g, &p, CheckMode::Sampled { trials: 500, seed: 3 }).unwrap().verdict, Verdict::VerifiedSampled);
    }

    #[test]
    fn exact_check_above_cap_rejected() {
        let g = clique(19);
        assert!(check_expander(&g, &ExpanderParams::new(0.1, 2.0), CheckMode::exact()).is_err());
    }

    #[test]
    fn extract_two_k6_gives_one_k6() {
        let g = disjoint_cliques(6, 2);
        let cfg = RunConfig::default();
        let p = cfg.expander_params(2.0);
        let ex = extract_expander(&g, &p, false, &cfg).unwrap();
        assert_eq!(ex.graph.n(), 6);
        assert_eq!(ex.graph.edge_count(), 15);
        assert_eq!(ex.report.verdict, Verdict::VerifiedExact);
        assert!(brute_force_expands(&ex.graph, &p));
    }

    #[test]
    fn extract_k7_is_identity() {
        let g = clique(7);
        let cfg = RunConfig::default();
        let ex = extract_expander(&g, &cfg.expander_params(0.6), false, &cfg).unwrap();
        assert_eq!(ex.graph, g);
        assert_eq!(ex.original_ids, (0..7).collect::<Vec<_>>());
    }

    #[test]
    fn robust_restrict_examples() {
        let g = clique(8);
        let cfg = RunConfig::default();
        let p = cfg.expander_params(2.0);
        let r = robust_restrict(&g, &VertexSet::new(), &p, ThresholdMode::Enforce, &cfg).unwrap();
        assert_eq!(r.y.len(), 8);
        assert_eq!(r.report.verdict, Verdict::VerifiedExact);
        let one = VertexSet::singleton(3);
        assert!(robust_restrict(&g, &one, &p, ThresholdMode::Enforce, &cfg).is_err());
        let r = robust_restrict(&g, &one, &p, ThresholdMode::Report, &cfg).unwrap();
        assert_eq!(r.y.as_slice(), &[0, 1, 2, 4, 5, 6, 7]);
        assert!(!r.within_threshold);
        assert!(r.density_holds);
        assert!(brute_force_expands(&clique(7), &p.with_eps1(0.05)));
    }

    #[test]
    fn sparse_witness_examples() {
        let k5 = clique(5);
        assert_eq!(find_sparse_witness(&k5, 1, 3.0, SearchMode::Exact).unwrap().witness, None);
        assert_eq!(find_sparse_witness(&k5, 0, 4.0, SearchMode::Exact).unwrap().witness, None);
        // With alpha = 0 only the empty set is tried, which witnesses iff d(G) < beta.
        assert_eq!(find_sparse_witness(&k5, 0, 4.5, SearchMode::Exact).unwrap().witness, Some(VertexSet::new()));
        assert!(find_sparse_witness(&k5, 5, 1.0, SearchMode::Exact).is_err());
    }

    #[test]
    fn ball_growth_examples() {
        let cfg = RunConfig::default();
        let p = cfg.expander_params(1.0);
        let r = ball_growth_check(&clique(20), 4, &p, &cfg).unwrap();
        assert!(r.pass && r.expander_verified && !r.skipped);
        assert_eq!(r.ball_size, 20);
        let r = ball_growth_check(&disjoint_cliques(10, 2), 0, &p, &cfg).unwrap();
        assert!(!r.expander_verified);
        assert_eq!(r.ball_size, 10);
    }
}
