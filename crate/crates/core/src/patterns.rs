//! Pattern generators and structure: standard families, block models, Cartesian powers,
//! degeneracy and biseparations.

use std::collections::BTreeSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{self, HostGraph, Vertex};
use crate::rng;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Clique(usize),
    CompleteBipartite(usize, usize),
    RandomBipartite(usize, usize, f64, u64),
    Gnp(usize, f64, u64),
    Grid(usize, usize),
    Hypercube(usize),
    Cycle(usize),
    Path(usize),
    Star(usize),
}

fn check_prob(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        invalid(format!("probability {p} outside [0, 1]"))
    }
}

/// Standard fixture families. Bipartite families carry their two-colouring.
pub fn gen_standard(family: &Family) -> Result<HostGraph> {
    let mut edges = Vec::new();
    let (n, sides): (usize, Option<Vec<u8>>) = match *family {
        Family::Clique(k) => {
            for u in 0..k {
                for v in u + 1..k {
                    edges.push((u, v));
                }
            }
            (k, None)
        }
        Family::CompleteBipartite(a, b) | Family::RandomBipartite(a, b, _, _) => {
            let (p, seed) = match *family {
                Family::RandomBipartite(_, _, p, s) => (p, s),
                _ => (1.0, 0),
            };
            check_prob(p)?;
            let mut r = rng::stream(seed, "random-bipartite");
            for u in 0..a {
                for v in 0..b {
                    if p >= 1.0 || r.gen_bool(p) {
                        edges.push((u, a + v));
                    }
                }
            }
            (a + b, Some((0..a + b).map(|v| u8::from(v >= a)).collect()))
        }
        Family::Gnp(n, p, seed) => {
            check_prob(p)?;
            let mut r = rng::stream(seed, "gnp");
            for u in 0..n {
                for v in u + 1..n {
                    if r.gen_bool(p) {
                        edges.push((u, v));
                    }
                }
            }
            (n, None)
        }
        Family::Grid(a, b) => {
            for i in 0..a {
                for j in 0..b {
                    let v = i * b + j;
                    if j + 1 < b {
                        edges.push((v, v + 1));
                    }
                    if i + 1 < a {
                        edges.push((v, v + b));
                    }
                }
            }
            (a * b, Some((0..a * b).map(|v| ((v / b + v % b) % 2) as u8).collect()))
        }
        Family::Hypercube(d) => {
            if d > 20 {
                return invalid("hypercube dimension limited to 20");
            }
            let n = 1usize << d;
            for v in 0..n {
                for i in 0..d {
                    let w = v ^ (1 << i);
                    if w > v {
                        edges.push((v, w));
                    }
                }
            }
            (n, Some((0..n).map(|v| (v.count_ones() % 2) as u8).collect()))
        }
        Family::Cycle(n) => {
            if n < 3 {
                return invalid("a cycle needs at least 3 vertices");
            }
            for i in 0..n {
                let j = (i + 1) % n;
                edges.push((i.min(j), i.max(j)));
            }
            (n, (n % 2 == 0).then(|| (0..n).map(|v| (v % 2) as u8).collect()))
        }
        Family::Path(n) => {
            for i in 1..n {
                edges.push((i - 1, i));
            }
            (n, Some((0..n).map(|v| (v % 2) as u8).collect()))
        }
        Family::Star(leaves) => {
            for i in 1..=leaves {
                edges.push((0, i));
            }
            (leaves + 1, Some((0..=leaves).map(|v| u8::from(v > 0)).collect()))
        }
    };
    if n == 0 {
        return invalid("families need at least one vertex");
    }
    let g = HostGraph::from_edges(n, &edges)?;
    match sides {
        Some(s) => g.with_bipartition(s),
        None => Ok(g),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SbmParams {
    pub n: usize,
    pub t: usize,
    pub k_blocks: usize,
    /// Probability for each pair in different blocks.
    pub p: f64,
    /// Probability for each cross pair inside a block.
    pub q: f64,
    pub seed: u64,
}

/// Block `i` occupies `2ti..2t(i+1)`; its first `t` vertices form one side of the in-block
/// bipartite graph. Between blocks every pair appears independently with probability `p`.
pub fn gen_sbm(s: &SbmParams) -> Result<HostGraph> {
    if s.n != 2 * s.k_blocks * s.t || s.n == 0 {
        return invalid(format!("n={} must equal 2*k*t = {}", s.n, 2 * s.k_blocks * s.t));
    }
    check_prob(s.p)?;
    check_prob(s.q)?;
    let mut r = rng::stream(s.seed, "sbm");
    let bs = 2 * s.t;
    let mut edges = Vec::new();
    for u in 0..s.n {
        for v in u + 1..s.n {
            let (bu, bv) = (u / bs, v / bs);
            let prob = if bu == bv {
                if (u % bs < s.t) != (v % bs < s.t) {
                    s.q
                } else {
                    continue;
                }
            } else {
                s.p
            };
            if prob > 0.0 && r.gen_bool(prob) {
                edges.push((u, v));
            }
        }
    }
    Ok(HostGraph::from_edges(s.n, &edges)?.with_detected_bipartition())
}

pub const CARTESIAN_CAP: usize = 1 << 20;

/// `F^{□r}`. Vertex `(x_0, .., x_{r-1})` has index `sum x_i f^i`.
pub fn cartesian_power(f: &HostGraph, r: usize) -> Result<HostGraph> {
    if r == 0 {
        return invalid("r must be at least 1");
    }
    let fn_ = f.n();
    let n = (0..r).try_fold(1usize, |acc, _| acc.checked_mul(fn_).filter(|&x| x <= CARTESIAN_CAP));
    let Some(n) = n else {
        return invalid(format!("|V(F)|^r exceeds the cap of {CARTESIAN_CAP} vertices"));
    };
    let mut edges = Vec::new();
    for v in 0..n {
        let mut scale = 1;
        for _ in 0..r {
            let xi = (v / scale) % fn_;
            for &y in f.neighbors(xi) {
                if y > xi {
                    edges.push((v, v + (y - xi) * scale));
                }
            }
            scale *= fn_;
        }
    }
    let g = HostGraph::from_edges(n, &edges)?;
    let fs = f.sides().map(<[u8]>::to_vec).or_else(|| f.two_coloring());
    Ok(match fs {
        Some(fs) => {
            let sides = (0..n)
                .map(|v| {
                    let mut s = 0u8;
                    let mut x = v;
                    for _ in 0..r {
                        s ^= fs[x % fn_];
                        x /= fn_;
                    }
                    s
                })
                .collect();
            g.with_bipartition(sides)?
        }
        None => g,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyResult {
    pub degeneracy: usize,
    /// Elimination order: each vertex has at most `degeneracy` neighbours later in it.
    pub order: Vec<Vertex>,
}

/// Minimum-degree peeling, lowest id first among ties.
pub fn degeneracy(g: &HostGraph) -> DegeneracyResult {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut heap: BTreeSet<(usize, Vertex)> = (0..n).map(|v| (deg[v], v)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut k = 0;
    while let Some((d, v)) = heap.pop_first() {
        k = k.max(d);
        removed[v] = true;
        order.push(v);
        for &w in g.neighbors(v) {
            if !removed[w] {
                heap.remove(&(deg[w], w));
                deg[w] -= 1;
                heap.insert((deg[w], w));
            }
        }
    }
    DegeneracyResult { degeneracy: k, order }
}

/// Re-scans an elimination order: the largest number of later neighbours of any vertex.
pub fn order_width(g: &HostGraph, order: &[Vertex]) -> usize {
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    (0..g.n()).map(|v| g.neighbors(v).iter().filter(|&&w| pos[w] > pos[v]).count()).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Biseparation {
    pub e1: Vec<(Vertex, Vertex)>,
    pub component_cap: usize,
    pub components: Vec<Vec<Vertex>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum BisepVerdict {
    Accept,
    NotAnEdge(Vertex, Vertex),
    TooManyEdges { got: usize, cap: usize },
    OddCycle,
    ComponentTooLarge { size: usize, cap: usize },
}

fn norm(e: (Vertex, Vertex)) -> (Vertex, Vertex) {
    (e.0.min(e.1), e.0.max(e.1))
}

fn remove_edges(h: &HostGraph, e1: &[(Vertex, Vertex)]) -> HostGraph {
    let cut: BTreeSet<(Vertex, Vertex)> = e1.iter().copied().map(norm).collect();
    h.filter_edges(|u, v| !cut.contains(&(u, v)))
}

pub fn verify_biseparable(h: &HostGraph, e1: &[(Vertex, Vertex)], s_cap: usize, k_cap: usize) -> BisepVerdict {
    if let Some(&(u, v)) = e1.iter().find(|&&(u, v)| !h.has_edge(u, v)) {
        return BisepVerdict::NotAnEdge(u, v);
    }
    let distinct: BTreeSet<_> = e1.iter().copied().map(norm).collect();
    if distinct.len() > s_cap {
        return BisepVerdict::TooManyEdges { got: distinct.len(), cap: s_cap };
    }
    let rest = HostGraph::from_edges(h.n(), &h.edges().filter(|e| !distinct.contains(e)).collect::<Vec<_>>())
        .expect("subgraph of a simple graph");
    if rest.two_coloring().is_none() {
        return BisepVerdict::OddCycle;
    }
    if let Some(c) = rest.components(&vec![true; h.n()]).into_iter().find(|c| c.len() > k_cap) {
        return BisepVerdict::ComponentTooLarge { size: c.len(), cap: k_cap };
    }
    BisepVerdict::Accept
}

const EXACT_SPLIT_MAX: usize = 16;
const EXACT_CUT_MAX: usize = 20;

/// Edges of `h` inside `part` (local ids) as a small graph.
fn local(h: &HostGraph, part: &[Vertex]) -> (HostGraph, Vec<Vertex>) {
    h.induced(&part.iter().copied().collect())
}

fn cut_size(g: &HostGraph, mask: u32) -> usize {
    g.edges().filter(|&(u, v)| (mask >> u & 1) != (mask >> v & 1)).count()
}

/// Splits a component larger than `k`. Exact for at most 16 vertices: among sizes `a` that
/// do not increase the number of `k`-pieces needed, pick the subset with fewest cut edges.
fn split(g: &HostGraph, k: usize) -> Vec<bool> {
    let c = g.n();
    let pieces = c.div_ceil(k);
    if c <= EXACT_SPLIT_MAX {
        let mut best: Option<(usize, u32)> = None;
        for mask in 1u32..(1 << c) - 1 {
            if mask & 1 == 0 {
                continue;
            }
            let a = mask.count_ones() as usize;
            if a.div_ceil(k) + (c - a).div_ceil(k) != pieces {
                continue;
            }
            let cut = cut_size(g, mask);
            if best.is_none_or(|(b, _)| cut < b) {
                best = Some((cut, mask));
            }
        }
        if let Some((_, mask)) = best {
            return (0..c).map(|v| mask >> v & 1 == 1).collect();
        }
    }
    // BFS prefix from a minimum-degree vertex, sized to a multiple of k.
    let a = (k * (pieces / 2)).clamp(1, c - 1);
    let start = (0..c).min_by_key(|&v| (g.degree(v), v)).unwrap_or(0);
    let mut order = Vec::with_capacity(c);
    let mut seen = vec![false; c];
    for s in std::iter::once(start).chain(0..c) {
        if seen[s] {
            continue;
        }
        let dist = g.distances(&[s], &seen);
        let mut layer: Vec<Vertex> = (0..c).filter(|&v| !seen[v] && dist[v] != graph::UNREACHED).collect();
        layer.sort_by_key(|&v| (dist[v], v));
        for v in layer {
            seen[v] = true;
            order.push(v);
        }
    }
    let mut side = vec![false; c];
    for &v in &order[..a] {
        side[v] = true;
    }
    side
}

/// Exact maximum cut by enumeration; returns the non-cut edges (local ids).
fn odd_edges_exact(g: &HostGraph) -> Vec<(Vertex, Vertex)> {
    let c = g.n();
    let mut best = (0usize, 0u32);
    for mask in 0u32..1 << (c - 1) {
        let cut = cut_size(g, mask);
        if cut > best.0 {
            best = (cut, mask);
        }
    }
    g.edges().filter(|&(u, v)| (best.1 >> u & 1) == (best.1 >> v & 1)).collect()
}

/// Finds `E1` leaving a bipartite graph with components of at most `k_target` vertices.
/// The result is always checked with [`verify_biseparable`].
pub fn biseparate(h: &HostGraph, k_target: usize) -> Result<Option<Biseparation>> {
    if k_target == 0 {
        return invalid("k_target must be at least 1");
    }
    let mut e1: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut work = h.components(&vec![true; h.n()]);
    while let Some(comp) = work.pop() {
        let (g, map) = local(h, &comp);
        if comp.len() > k_target {
            let side = split(&g, k_target);
            for (u, v) in g.edges() {
                if side[u] != side[v] {
                    e1.insert(norm((map[u], map[v])));
                }
            }
            let rest = g.filter_edges(|u, v| side[u] == side[v]);
            for c in rest.components(&vec![true; g.n()]) {
                work.push(c.into_iter().map(|v| map[v]).collect());
            }
        } else if g.two_coloring().is_none() {
            if comp.len() <= EXACT_CUT_MAX {
                for (u, v) in odd_edges_exact(&g) {
                    e1.insert(norm((map[u], map[v])));
                }
            } else {
                let side = split(&g, comp.len().div_ceil(2));
                for (u, v) in g.edges() {
                    if side[u] != side[v] {
                        e1.insert(norm((map[u], map[v])));
                    }
                }
                let rest = g.filter_edges(|u, v| side[u] == side[v]);
                for c in rest.components(&vec![true; g.n()]) {
                    work.push(c.into_iter().map(|v| map[v]).collect());
                }
            }
        }
    }
    let e1: Vec<_> = e1.into_iter().collect();
    if verify_biseparable(h, &e1, usize::MAX, k_target) != BisepVerdict::Accept {
        return Ok(None);
    }
    let components = remove_edges(h, &e1).components(&vec![true; h.n()]);
    Ok(Some(Biseparation { e1, component_cap: k_target, components }))
}

/// Lifts a biseparation of `F` to `F^{□r}`: an edge of the power is removed when the
/// coordinate it changes moves along a removed edge of `F`.
pub fn lift_biseparation(f: &HostGraph, b: &Biseparation, r: usize) -> Result<Biseparation> {
    if verify_biseparable(f, &b.e1, usize::MAX, b.component_cap) != BisepVerdict::Accept {
        return invalid("input is not a valid biseparation of F");
    }
    let power = cartesian_power(f, r)?;
    let cut: BTreeSet<(Vertex, Vertex)> = b.e1.iter().copied().map(norm).collect();
    let fn_ = f.n();
    let mut e2 = Vec::new();
    for (u, v) in power.edges() {
        let (mut x, mut y) = (u, v);
        for _ in 0..r {
            let (a, c) = (x % fn_, y % fn_);
            if a != c {
                if cut.contains(&norm((a, c))) {
                    e2.push((u, v));
                }
                break;
            }
            x /= fn_;
            y /= fn_;
        }
    }
    let expected = r * fn_.pow(r as u32 - 1) * cut.len();
    if e2.len() != expected {
        return invalid(format!("lifted edge count {} differs from r f^(r-1) |E1| = {expected}", e2.len()));
    }
    let cap = b.component_cap.checked_pow(r as u32).unwrap_or(usize::MAX);
    let verdict = verify_biseparable(&power, &e2, usize::MAX, cap);
    if verdict != BisepVerdict::Accept {
        return invalid(format!("lifted separation failed verification: {verdict:?}"));
    }
    let components = remove_edges(&power, &e2).components(&vec![true; power.n()]);
    Ok(Biseparation { e1: e2, component_cap: cap, components })
}
