//! Hosts with many large-degree vertices: the length-2 shortcut for very dense hosts,
//! anchor-based embedding, and a greedy bounded-length embedder used on auxiliary graphs.

use super::link::Linker;
use super::{require_no_isolated, trivial_outcome, EmbeddingOutcome};
use crate::certify::Mode;
use crate::config::RunConfig;
use crate::error::{precondition, Result};
use crate::graph::{average_degree, ratio_f64, HostGraph, Vertex, VertexSet};
use crate::routing::{shortest_path, Path};

/// Candidates considered per branch vertex by the length-2 shortcut.
const SHORTCUT_POOL: usize = 256;

/// Vertices of degree at least `2dm^12`, or at least the configured threshold.
pub fn large_degree_set(g: &HostGraph, cfg: &RunConfig) -> VertexSet {
    let d = ratio_f64(average_degree(g));
    let thr = match cfg.large_degree_threshold {
        Some(t) => t as f64,
        None => 2.0 * d * (cfg.m(g.n(), d) as f64).powi(12),
    };
    (0..g.n()).filter(|&v| g.degree(v) as f64 >= thr).collect()
}

fn common_count(g: &HostGraph, mark: &[bool], c: Vertex) -> usize {
    g.neighbors(c).iter().filter(|&&w| mark[w]).count()
}

/// Kuhn's augmenting-path matching of pattern edges to distinct host middles.
fn match_middles(options: &[Vec<Vertex>], n: usize) -> Option<Vec<Vertex>> {
    fn augment(e: usize, options: &[Vec<Vertex>], owner: &mut [usize], seen: &mut [bool]) -> bool {
        for &c in &options[e] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if owner[c] == usize::MAX || augment(owner[c], options, owner, seen) {
                owner[c] = e;
                return true;
            }
        }
        false
    }
    let mut owner = vec![usize::MAX; n];
    for e in 0..options.len() {
        let mut seen = vec![false; n];
        if !augment(e, options, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut mid = vec![0; options.len()];
    for (c, &e) in owner.iter().enumerate() {
        if e != usize::MAX {
            mid[e] = c;
        }
    }
    Some(mid)
}

/// A balanced subdivision with every path of length 2, for hosts dense enough that
/// high-degree vertices share many neighbours. Branch vertices are chosen greedily on one
/// side to maximise the weakest codegree to already placed neighbours; middles are then
/// assigned by bipartite matching.
pub fn shortcut_th1(g: &HostGraph, h: &HostGraph) -> Result<EmbeddingOutcome> {
    let mode = Mode::Balanced(1);
    if let Some(out) = trivial_outcome(g, h, mode) {
        return Ok(out);
    }
    require_no_isolated(h)?;
    let mut out = EmbeddingOutcome::default();
    let n = g.n();
    let side_options: Vec<Option<u8>> = match g.sides() {
        Some(_) => vec![Some(0), Some(1)],
        None => vec![None],
    };
    let mut h_order: Vec<Vertex> = (0..h.n()).collect();
    h_order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    for side in side_options {
        let mut pool: Vec<Vertex> = (0..n).filter(|&v| side.is_none() || g.side(v) == side).collect();
        pool.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        pool.truncate(SHORTCUT_POOL.max(h.n()));
        if pool.len() < h.n() {
            continue;
        }
        let mut branch = vec![usize::MAX; h.n()];
        let mut taken = vec![false; n];
        let mut mark = vec![false; n];
        for &x in &h_order {
            let placed: Vec<Vertex> = h.neighbors(x).iter().filter(|&&y| branch[y] != usize::MAX).map(|&y| branch[y]).collect();
            let mut best: Option<(usize, Vertex)> = None;
            for &c in pool.iter().filter(|&&c| !taken[c]) {
                let score = if placed.is_empty() {
                    g.degree(c)
                } else {
                    placed
                        .iter()
                        .map(|&p| {
                            for &w in g.neighbors(p) {
                                mark[w] = true;
                            }
                            let k = common_count(g, &mark, c);
                            for &w in g.neighbors(p) {
                                mark[w] = false;
                            }
                            k
                        })
                        .min()
                        .unwrap_or(0)
                };
                if best.is_none_or(|(s, _)| score > s) {
                    best = Some((score, c));
                }
            }
            let (_, c) = best.expect("pool holds enough candidates");
            branch[x] = c;
            taken[c] = true;
        }
        let options: Vec<Vec<Vertex>> = h
            .edges()
            .map(|(x, y)| {
                let ny = g.neighbors(branch[y]);
                g.neighbors(branch[x]).iter().copied().filter(|&c| !taken[c] && ny.binary_search(&c).is_ok()).collect()
            })
            .collect();
        if let Some(mid) = match_middles(&options, n) {
            let paths = h.edges().zip(mid).map(|((x, y), c)| Path(vec![branch[x], c, branch[y]])).collect();
            out.stage("shortcut", format!("length-2 paths through matched middles, side {side:?}"));
            out.seal(g, h, mode, &branch, paths);
            return Ok(out);
        }
        out.stage("shortcut", format!("middle matching failed on side {side:?}"));
    }
    Ok(out)
}

/// Branch vertices of highest degree and greedy shortest paths of at most `maxlen` edges
/// avoiding other branch vertices and earlier interiors.
pub(crate) fn greedy_bounded(g: &HostGraph, h: &HostGraph, maxlen: usize) -> Option<(Vec<Vertex>, Vec<Path>)> {
    let n = g.n();
    if n < h.n() {
        return None;
    }
    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let branch: Vec<Vertex> = order[..h.n()].to_vec();
    let mut blocked = vec![false; n];
    for &b in &branch {
        blocked[b] = true;
    }
    let mut paths = Vec::with_capacity(h.edge_count());
    for (x, y) in h.edges() {
        let mut target = vec![false; n];
        target[branch[y]] = true;
        blocked[branch[y]] = false;
        let p = shortest_path(g, &[branch[x]], &target, &blocked, maxlen);
        blocked[branch[y]] = true;
        let p = p?;
        for &v in p.interior() {
            blocked[v] = true;
        }
        paths.push(p);
    }
    Some((branch, paths))
}

/// Embeds with branch vertices at large-degree anchors. `Balanced(ell)` needs paths of
/// exactly `ell + 1` edges; anchors sit on one side, so in a two-coloured host an odd
/// `ell + 1` is raised by one and reported. `Bounded` uses shortest paths within `2m`.
pub fn embed_large_degree(g: &HostGraph, h: &HostGraph, mode: Mode, cfg: &RunConfig) -> Result<EmbeddingOutcome> {
    if let Some(out) = trivial_outcome(g, h, mode) {
        return Ok(out);
    }
    require_no_isolated(h)?;
    let l_g = large_degree_set(g, cfg);
    let mut out = EmbeddingOutcome::default();
    let anchors: Vec<Vertex> = match mode {
        Mode::Balanced(_) => {
            let side = match g.sides() {
                Some(s) => {
                    let ones = l_g.iter().filter(|&v| s[v] == 1).count();
                    Some(u8::from(2 * ones > l_g.len()))
                }
                None => None,
            };
            let same: Vec<Vertex> = l_g.iter().filter(|&v| side.is_none() || g.side(v) == side).collect();
            if same.len() < 2 * h.n() {
                return precondition(format!("{} same-side large-degree vertices, need {}", same.len(), 2 * h.n()));
            }
            same
        }
        Mode::Bounded(_) => {
            if l_g.len() < h.n() {
                return precondition(format!("{} large-degree vertices, need {}", l_g.len(), h.n()));
            }
            l_g.iter().collect()
        }
    };
    let branch: Vec<Vertex> = anchors[..h.n()].to_vec();
    let d = ratio_f64(average_degree(g));
    let m = cfg.m(g.n(), d);
    let mode = match mode {
        Mode::Balanced(ell) if g.sides().is_some() && (ell + 1) % 2 == 1 => {
            out.stage("parity", format!("anchors share a side: ell {ell} raised to {}", ell + 1));
            Mode::Balanced(ell + 1)
        }
        other => other,
    };
    out.stage("anchors", format!("|L_G|={} anchors {:?}", l_g.len(), branch));
    let n = g.n();
    let linker = Linker { g, cfg, m, use_adjusters: matches!(mode, Mode::Balanced(_)) };
    let mut used = vec![false; n];
    for &b in &branch {
        used[b] = true;
    }
    let mut paths = Vec::with_capacity(h.edge_count());
    for (x, y) in h.edges() {
        let (u, v) = (branch[x], branch[y]);
        let routes = |a: Vertex| -> Vec<Path> {
            g.neighbors(a).iter().filter(|&&z| !used[z]).map(|&z| Path(vec![a, z])).collect()
        };
        let (rx, ry) = (routes(u), routes(v));
        let direct = g.has_edge(u, v).then(|| Path(vec![u, v]));
        let path = match mode {
            Mode::Bounded(_) => direct.or_else(|| linker.bounded(&rx, &ry, 2 * m.max(1), &used)),
            Mode::Balanced(ell) => match direct.filter(|_| ell == 0) {
                Some(p) => Some(p),
                None => linker.exact(&rx, &ry, ell + 1, &used).map(|(p, _)| p),
            },
        };
        let Some(p) = path else {
            out.stage("large-degree", format!("no path for pattern edge ({x},{y}) after {} paths", paths.len()));
            return Ok(out);
        };
        for &w in p.interior() {
            used[w] = true;
        }
        paths.push(p);
    }
    out.seal(g, h, mode, &branch, paths);
    Ok(out)
}
