//! Paths avoiding forbidden sets: shortest connections, consecutive shortest paths, robust
//! balls and exact-length search.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::audit;
use crate::error::{invalid, Result};
use crate::expander::{rho, ExpanderParams};
use crate::graph::{HostGraph, Vertex, VertexSet, UNREACHED};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<Vertex>);

impl Path {
    pub fn len(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn start(&self) -> Vertex {
        self.0[0]
    }

    pub fn end(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn interior(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }

    /// Concatenates `other`, which must start where `self` ends.
    pub fn join(&self, other: &Path) -> Path {
        debug_assert_eq!(self.end(), other.start());
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0[1..]);
        Path(v)
    }

    /// Checks adjacency of consecutive vertices and simplicity.
    pub fn validate(&self, g: &HostGraph) -> std::result::Result<(), String> {
        if self.0.is_empty() {
            return Err("empty path".into());
        }
        if let Some(&v) = self.0.iter().find(|&&v| v >= g.n()) {
            return Err(format!("vertex {v} out of range"));
        }
        if let Some(w) = self.0.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
            return Err(format!("{} and {} are not adjacent", w[0], w[1]));
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(&v) = self.0.iter().find(|&&v| !seen.insert(v)) {
            return Err(format!("vertex {v} repeated"));
        }
        Ok(())
    }
}

/// Paths with pairwise disjoint interiors; no interior vertex lies on another path.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    paths: Vec<Path>,
}

impl PathSystem {
    pub fn new() -> Self {
        PathSystem::default()
    }

    pub fn paths(&self) -> &[Path] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// All vertices of all paths.
    pub fn vertex_set(&self) -> VertexSet {
        self.paths.iter().flat_map(|p| p.0.iter().copied()).collect()
    }

    pub fn interior_set(&self) -> VertexSet {
        self.paths.iter().flat_map(|p| p.interior().iter().copied()).collect()
    }

    pub fn push(&mut self, p: Path) -> Result<()> {
        let all = self.vertex_set();
        let ints = self.interior_set();
        if p.interior().iter().any(|&v| all.contains(v)) || p.0.iter().any(|&v| ints.contains(v)) {
            return invalid("path meets the interior of the system");
        }
        self.paths.push(p);
        Ok(())
    }
}

/// Multi-source BFS in `G - blocked` from `sources` to the first vertex with `target[v]`,
/// neighbours scanned in ascending id order. Sources are never blocked.
pub fn shortest_path(g: &HostGraph, sources: &[Vertex], target: &[bool], blocked: &[bool], maxlen: usize) -> Option<Path> {
    let n = g.n();
    let mut parent = vec![UNREACHED; n];
    let mut dist = vec![UNREACHED; n];
    let mut queue = VecDeque::new();
    let mut srcs = sources.to_vec();
    srcs.sort_unstable();
    for &s in &srcs {
        if dist[s] == UNREACHED {
            dist[s] = 0;
            if target[s] {
                return Some(Path(vec![s]));
            }
            queue.push_back(s);
        }
    }
    while let Some(u) = queue.pop_front() {
        if dist[u] >= maxlen {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] != UNREACHED || blocked[w] {
                continue;
            }
            dist[w] = dist[u] + 1;
            parent[w] = u;
            if target[w] {
                let mut path = vec![w];
                let mut x = w;
                while parent[x] != UNREACHED {
                    x = parent[x];
                    path.push(x);
                }
                path.reverse();
                audit::record_path(g, &path);
                return Some(Path(path));
            }
            queue.push_back(w);
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Connection {
    pub path: Option<Path>,
    /// Connecting-lemma length bound `(2/eps1) log^3(15n/k)`, when parameters were given.
    pub length_bound: Option<f64>,
    /// Whether the connecting lemma's size hypotheses held.
    pub hypotheses_hold: Option<bool>,
    /// No path was found although the hypotheses held (possible only if `G` is not an expander).
    pub theory_violation: bool,
}

/// Shortest `X1`-`X2` path in `G - W` of length at most `maxlen`.
pub fn connect_avoiding(
    g: &HostGraph,
    x1: &VertexSet,
    x2: &VertexSet,
    w: &VertexSet,
    maxlen: usize,
    params: Option<&ExpanderParams>,
) -> Result<Connection> {
    for s in [x1, x2, w] {
        s.check_range(g.n())?;
    }
    if !x1.is_disjoint(x2) || !x1.is_disjoint(w) || !x2.is_disjoint(w) {
        return invalid("X1, X2 and W must be pairwise disjoint");
    }
    let path = shortest_path(g, x1.as_slice(), &x2.to_mask(g.n()), &w.to_mask(g.n()), maxlen);
    let (length_bound, hypotheses_hold) = match params {
        Some(p) => {
            let n = g.n() as f64;
            let l = p.log_base.log(15.0 * n / p.k);
            let x = x1.len().min(x2.len()) as f64;
            let hold = x >= p.k && (w.len() as f64) <= rho(x, p)? * x / 4.0;
            (Some(2.0 / p.eps1 * l.powi(3)), Some(hold))
        }
        None => (None, None),
    };
    let theory_violation = path.is_none()
        && hypotheses_hold == Some(true)
        && length_bound.is_some_and(|b| (maxlen as f64) >= b);
    if theory_violation {
        log::warn!("connecting lemma hypotheses held but no path was found");
    }
    Ok(Connection { path, length_bound, hypotheses_hold, theory_violation })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConsecutivePaths {
    pub v: Vertex,
    pub domain: VertexSet,
    /// One entry per requested target; `None` marks an unreachable target.
    pub paths: Vec<Option<Path>>,
}

impl ConsecutivePaths {
    /// Residual domain for the `i`-th path: the domain minus every vertex of earlier paths,
    /// with `v` put back.
    pub fn residual(&self, i: usize) -> VertexSet {
        let used: VertexSet = self.paths[..i].iter().flatten().flat_map(|p| p.0.iter().copied()).collect();
        self.domain.iter().filter(|&u| u == self.v || !used.contains(u)).collect()
    }

    pub fn system(&self) -> PathSystem {
        PathSystem { paths: self.paths.iter().flatten().cloned().collect() }
    }
}

/// Consecutive shortest paths from `v` inside `domain`.
pub fn consecutive_shortest_paths(g: &HostGraph, v: Vertex, domain: &VertexSet, targets: &[Vertex]) -> Result<ConsecutivePaths> {
    domain.check_range(g.n())?;
    if !domain.contains(v) {
        return invalid("v must lie in the domain");
    }
    if let Some(t) = targets.iter().find(|&&t| !domain.contains(t)) {
        return invalid(format!("target {t} outside the domain"));
    }
    let n = g.n();
    let mut out = ConsecutivePaths { v, domain: domain.clone(), paths: Vec::with_capacity(targets.len()) };
    let mut blocked: Vec<bool> = (0..n).map(|u| !domain.contains(u)).collect();
    for &t in targets {
        let path = if blocked[t] || t == v {
            None
        } else {
            let mut tm = vec![false; n];
            tm[t] = true;
            shortest_path(g, &[v], &tm, &blocked, usize::MAX)
        };
        if let Some(p) = &path {
            for &u in p.vertices() {
                if u != v {
                    blocked[u] = true;
                }
            }
        } else {
            log::debug!("consecutive paths: target {t} unreachable from {v}");
        }
        out.paths.push(path);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RobustBall {
    pub size: usize,
    pub bound: usize,
    pub pass: bool,
}

/// `|B^m(v)|` in `G - (U - {v})` where `U` is every vertex of the system.
pub fn robust_ball_check(g: &HostGraph, v: Vertex, system: &PathSystem, m: usize, bound: usize) -> Result<RobustBall> {
    if v >= g.n() {
        return invalid("vertex out of range");
    }
    let mut blocked = system.vertex_set().to_mask(g.n());
    blocked[v] = false;
    let dist = g.distances(&[v], &blocked);
    let size = dist.iter().filter(|&&d| d != UNREACHED && d <= m).count();
    Ok(RobustBall { size, bound, pass: size >= bound })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LengthSearch {
    Found(Path),
    /// The search space was exhausted: no such path exists.
    Exhausted,
    BudgetExceeded,
}

impl LengthSearch {
    pub fn path(self) -> Option<Path> {
        match self {
            LengthSearch::Found(p) => Some(p),
            _ => None,
        }
    }
}

/// Simple `u,v`-path with exactly `ell` edges in `G - avoid`, by depth-first search pruned
/// with distances to `v` and, when `parity_ok` and the host is two-coloured, side parity.
pub fn path_of_length(
    g: &HostGraph,
    u: Vertex,
    v: Vertex,
    ell: usize,
    avoid: &VertexSet,
    parity_ok: bool,
    budget: u64,
) -> Result<LengthSearch> {
    if u >= g.n() || v >= g.n() {
        return invalid("vertex out of range");
    }
    if avoid.contains(u) || avoid.contains(v) {
        return invalid("endpoints must not be avoided");
    }
    let blocked = avoid.to_mask(g.n());
    Ok(path_of_length_masked(g, u, v, ell, &blocked, parity_ok, budget))
}

pub(crate) fn path_of_length_masked(g: &HostGraph, u: Vertex, v: Vertex, ell: usize, blocked: &[bool], parity_ok: bool, budget: u64) -> LengthSearch {
    if u == v {
        return if ell == 0 { LengthSearch::Found(Path(vec![u])) } else { LengthSearch::Exhausted };
    }
    let sides = if parity_ok { g.sides() } else { None };
    if let Some(s) = sides {
        if (s[u] == s[v]) != ell.is_multiple_of(2) {
            return LengthSearch::Exhausted;
        }
    }
    let dist = g.distances(&[v], blocked);
    if dist[u] == UNREACHED || dist[u] > ell {
        return LengthSearch::Exhausted;
    }
    let n = g.n();
    let mut on_path = vec![false; n];
    let mut path = vec![u];
    on_path[u] = true;
    let mut cursor = vec![0usize];
    let mut spent: u64 = 0;
    while let Some(&x) = path.last() {
        let depth = path.len() - 1;
        let i = cursor[depth];
        let nbrs = g.neighbors(x);
        if i >= nbrs.len() {
            on_path[x] = false;
            path.pop();
            cursor.pop();
            continue;
        }
        cursor[depth] += 1;
        let w = nbrs[i];
        let remaining = ell - depth - 1;
        if on_path[w] || blocked[w] || dist[w] == UNREACHED || dist[w] > remaining {
            continue;
        }
        if w == v {
            if remaining == 0 {
                path.push(w);
                audit::record_path(g, &path);
                return LengthSearch::Found(Path(path));
            }
            continue;
        }
        if remaining == 0 {
            continue;
        }
        spent += 1;
        if spent > budget {
            return LengthSearch::BudgetExceeded;
        }
        path.push(w);
        on_path[w] = true;
        cursor.push(0);
    }
    LengthSearch::Exhausted
}

/// Simple path with exactly `ell` edges from `start` to any vertex with `target[v]` (other
/// than `start`) in `G - blocked`. Distances to the target set prune the search; in a
/// two-coloured host, side parity prunes as well.
pub fn path_to_set_of_length(g: &HostGraph, start: Vertex, target: &[bool], ell: usize, blocked: &[bool], budget: u64) -> LengthSearch {
    let n = g.n();
    let tlist: Vec<Vertex> = (0..n).filter(|&v| target[v] && !blocked[v] && v != start).collect();
    if tlist.is_empty() || blocked[start] {
        return LengthSearch::Exhausted;
    }
    if ell == 0 {
        return LengthSearch::Exhausted;
    }
    let side_ok: Option<[bool; 2]> = g.sides().map(|s| {
        let mut ok = [false; 2];
        for &t in &tlist {
            ok[s[t] as usize] = true;
        }
        ok
    });
    let parity_fits = |x: Vertex, r: usize| match (side_ok, g.sides()) {
        (Some(ok), Some(s)) => ok[((s[x] as usize) + r) % 2],
        _ => true,
    };
    if !parity_fits(start, ell) {
        return LengthSearch::Exhausted;
    }
    let mut blk = blocked.to_vec();
    blk[start] = true;
    let dist = g.distances(&tlist, &blk);
    let mut on_path = vec![false; n];
    on_path[start] = true;
    let mut path = vec![start];
    let mut cursor = vec![0usize];
    let mut spent: u64 = 0;
    while let Some(&x) = path.last() {
        let depth = path.len() - 1;
        let i = cursor[depth];
        let nbrs = g.neighbors(x);
        if i >= nbrs.len() {
            on_path[x] = false;
            path.pop();
            cursor.pop();
            continue;
        }
        cursor[depth] += 1;
        let w = nbrs[i];
        let remaining = ell - depth - 1;
        if on_path[w] || blocked[w] || dist[w] == UNREACHED || dist[w] > remaining || !parity_fits(w, remaining) {
            continue;
        }
        if remaining == 0 {
            if target[w] {
                path.push(w);
                audit::record_path(g, &path);
                return LengthSearch::Found(Path(path));
            }
            continue;
        }
        spent += 1;
        if spent > budget {
            return LengthSearch::BudgetExceeded;
        }
        path.push(w);
        on_path[w] = true;
        cursor.push(0);
    }
    LengthSearch::Exhausted
}
