//! Short subdivisions in dense hosts: find a dense, roughly regular pair, embed the
//! bipartite pieces of the pattern into it directly and join the removed edges by paths
//! of length at most 4.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use super::{require_no_isolated, trivial_outcome, EmbeddingOutcome};
use crate::certify::Mode;
use crate::config::RunConfig;
use crate::error::{precondition, Result};
use crate::graph::{HostGraph, Vertex, VertexSet};
use crate::patterns::{degeneracy, verify_biseparable, BisepVerdict, Biseparation};
use crate::rng;
use crate::routing::{shortest_path, Path};

/// Random bipartitions tried by the pair search.
const PARTITION_TRIES: usize = 8;
/// Parts at most this large get an exhaustive regularity test.
const EXACT_REGULARITY_MAX: usize = 8;
/// Longest path joining the ends of a removed edge.
const JOIN_LEN: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensePair {
    pub v1: VertexSet,
    pub v2: VertexSet,
    pub density: f64,
    /// The sampled (or exhaustive) regularity test passed.
    pub regular: bool,
    pub exhaustive: bool,
    /// Vertices dropped for low degree into the other part.
    pub removed: usize,
}

fn edges_between(g: &HostGraph, a: &[Vertex], in_b: &[bool]) -> usize {
    a.iter().map(|&u| g.neighbors(u).iter().filter(|&&w| in_b[w]).count()).sum()
}

fn density(g: &HostGraph, a: &[Vertex], b: &[Vertex]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    let mut in_b = vec![false; g.n()];
    for &v in b {
        in_b[v] = true;
    }
    edges_between(g, a, &in_b) as f64 / (a.len() * b.len()) as f64
}

fn subsets(v: &[Vertex], min: usize) -> Vec<Vec<Vertex>> {
    (1u32..1 << v.len())
        .filter(|m| m.count_ones() as usize >= min)
        .map(|m| (0..v.len()).filter(|i| m >> i & 1 == 1).map(|i| v[i]).collect())
        .collect()
}

/// Whether every tested pair of subsets of relative size `eps` has density within `eps`
/// of the whole pair's.
fn regular(g: &HostGraph, a: &[Vertex], b: &[Vertex], eps: f64, trials: usize, rng: &mut impl Rng) -> (bool, bool) {
    let d = density(g, a, b);
    let (ka, kb) = (((eps * a.len() as f64).ceil() as usize).max(1), ((eps * b.len() as f64).ceil() as usize).max(1));
    if a.len() <= EXACT_REGULARITY_MAX && b.len() <= EXACT_REGULARITY_MAX {
        let ok = subsets(a, ka).iter().all(|sa| subsets(b, kb).iter().all(|sb| (density(g, sa, sb) - d).abs() <= eps));
        return (ok, true);
    }
    let ok = (0..trials).all(|_| {
        let sa: Vec<Vertex> = a.choose_multiple(rng, ka).copied().collect();
        let sb: Vec<Vertex> = b.choose_multiple(rng, kb).copied().collect();
        (density(g, &sa, &sb) - d).abs() <= eps
    });
    (ok, false)
}

/// Searches random balanced bipartitions for the densest pair passing a sampled regularity
/// test at `eps2`, then drops vertices whose degree into the other part falls below
/// `(density - eps2)` times its size.
pub fn find_dense_pair(g: &HostGraph, cfg: &RunConfig) -> Result<DensePair> {
    if g.n() < 2 || g.edge_count() == 0 {
        return precondition("a dense pair needs at least one edge");
    }
    let eps = cfg.eps2;
    let mut r = rng::stream(cfg.seed, "dense-pair");
    let mut best: Option<(bool, f64, Vec<Vertex>, Vec<Vertex>, bool)> = None;
    for _ in 0..PARTITION_TRIES {
        let mut vs: Vec<Vertex> = (0..g.n()).collect();
        vs.shuffle(&mut r);
        let (a, b) = vs.split_at(g.n() / 2);
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        let d = density(g, &a, &b);
        let (ok, exhaustive) = regular(g, &a, &b, eps, cfg.regularity_trials, &mut r);
        if best.as_ref().is_none_or(|(bo, bd, ..)| (ok, d) > (*bo, *bd)) {
            best = Some((ok, d, a, b, exhaustive));
        }
    }
    let (regular, d, mut a, mut b, exhaustive) = best.expect("at least one partition");
    let before = a.len() + b.len();
    for _ in 0..2 {
        let mut in_b = vec![false; g.n()];
        b.iter().for_each(|&v| in_b[v] = true);
        let floor = (d - eps) * b.len() as f64;
        a.retain(|&u| g.neighbors(u).iter().filter(|&&w| in_b[w]).count() as f64 >= floor);
        std::mem::swap(&mut a, &mut b);
    }
    let removed = before - a.len() - b.len();
    Ok(DensePair { v1: a.into(), v2: b.into(), density: d, regular, exhaustive, removed })
}

/// Greedy embedding of one bipartite piece: vertices in reverse degeneracy order, each onto
/// an unused host vertex of its colour's part adjacent to all placed neighbours, preferring
/// high degree into the other part.
fn embed_piece(g: &HostGraph, piece: &HostGraph, map: &[Vertex], colour: &[u8], parts: [&VertexSet; 2], taken: &mut [bool], image: &mut [Vertex]) -> bool {
    let order = degeneracy(piece).order;
    let mut local = vec![usize::MAX; piece.n()];
    for &v in order.iter().rev() {
        let part = parts[colour[v] as usize];
        let placed: Vec<Vertex> = piece.neighbors(v).iter().filter(|&&w| local[w] != usize::MAX).map(|&w| local[w]).collect();
        let other = parts[1 - colour[v] as usize];
        let pick = part
            .iter()
            .filter(|&c| !taken[c] && placed.iter().all(|&p| g.has_edge(c, p)))
            .max_by_key(|&c| (g.neighbors(c).iter().filter(|&&w| other.contains(w)).count(), std::cmp::Reverse(c)));
        let Some(c) = pick else {
            for &w in &local {
                if w != usize::MAX {
                    taken[w] = false;
                }
            }
            return false;
        };
        local[v] = c;
        taken[c] = true;
    }
    for (i, &c) in local.iter().enumerate() {
        image[map[i]] = c;
    }
    true
}

/// Embeds a pattern whose edge set splits as `E1` plus bipartite pieces. Pieces go directly
/// into a dense pair; each `E1` edge becomes a path of at most 4 edges inside the pair.
/// Certificates are `Bounded(3)`.
pub fn embed_dense_short(g: &HostGraph, h: &HostGraph, bisep: &Biseparation, cfg: &RunConfig) -> Result<EmbeddingOutcome> {
    let mode = Mode::Bounded(JOIN_LEN - 1);
    if let Some(out) = trivial_outcome(g, h, mode) {
        return Ok(out);
    }
    require_no_isolated(h)?;
    let verdict = verify_biseparable(h, &bisep.e1, usize::MAX, bisep.component_cap);
    if verdict != BisepVerdict::Accept {
        return precondition(format!("not a valid separation of the pattern: {verdict:?}"));
    }
    let mut out = EmbeddingOutcome::default();
    let pair = find_dense_pair(g, cfg)?;
    out.stage(
        "dense-pair",
        format!(
            "|V1|={} |V2|={} density {:.3} regular {} ({}), {} removed",
            pair.v1.len(),
            pair.v2.len(),
            pair.density,
            pair.regular,
            if pair.exhaustive { "exhaustive" } else { "sampled" },
            pair.removed
        ),
    );
    if !pair.regular {
        out.best_effort = true;
    }
    let e1: std::collections::BTreeSet<(Vertex, Vertex)> = bisep.e1.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let rest = h.filter_edges(|u, v| !e1.contains(&(u.min(v), u.max(v))));
    let mut taken = vec![false; g.n()];
    let mut image = vec![usize::MAX; h.n()];
    let parts = [&pair.v1, &pair.v2];
    for comp in rest.components(&vec![true; h.n()]) {
        let (piece, map) = rest.induced(&comp.iter().copied().collect());
        let colour = piece.two_coloring().expect("pieces are bipartite");
        let flipped: Vec<u8> = colour.iter().map(|c| 1 - c).collect();
        if !embed_piece(g, &piece, &map, &colour, parts, &mut taken, &mut image)
            && !embed_piece(g, &piece, &map, &flipped, parts, &mut taken, &mut image)
        {
            out.stage("dense-embed", format!("piece of {} vertices does not fit", comp.len()));
            return Ok(out);
        }
    }
    let mut in_pair = vec![false; g.n()];
    pair.v1.iter().chain(pair.v2.iter()).for_each(|v| in_pair[v] = true);
    let mut blocked: Vec<bool> = (0..g.n()).map(|v| !in_pair[v] || taken[v]).collect();
    let mut paths = Vec::with_capacity(h.edge_count());
    for (u, v) in h.edges() {
        let (a, b) = (image[u], image[v]);
        if !e1.contains(&(u, v)) {
            paths.push(Path(vec![a, b]));
            continue;
        }
        let mut target = vec![false; g.n()];
        target[b] = true;
        blocked[b] = false;
        let p = shortest_path(g, &[a], &target, &blocked, JOIN_LEN);
        blocked[b] = true;
        let Some(p) = p else {
            out.stage("dense-join", format!("no short path for removed edge ({u},{v})"));
            return Ok(out);
        };
        p.interior().iter().for_each(|&w| blocked[w] = true);
        paths.push(p);
    }
    out.stage("dense-join", format!("{} removed edges joined", e1.len()));
    out.seal(g, h, mode, &image, paths);
    Ok(out)
}
