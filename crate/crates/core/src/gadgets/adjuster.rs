use serde::Serialize;

use super::{check_adjuster, check_octopus, Adjuster, Expansion, Octopus};
use crate::error::Result;
use crate::graph::{max_cut_bipartite, HostGraph, Vertex, VertexSet, UNREACHED};
use crate::routing::{path_of_length_masked, shortest_path, LengthSearch, Path};

/// Node budget for each exact-length search made while building adjusters.
pub const SEARCH_BUDGET: u64 = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum AdjusterFailure {
    #[error("no cycle outside the avoided set")]
    NoCycle,
    #[error("no even cycle of length at most {max}")]
    NoShortEvenCycle { max: usize },
    #[error("no cycle position leaves room for two disjoint expansions of size {size}")]
    ExpansionStarved { size: usize },
    #[error("built {achieved} of {need} disjoint simple adjusters")]
    PoolShortfall { achieved: usize, need: usize },
    #[error("could not connect adjuster {index} within length {maxlen}")]
    LinkMissed { index: usize, maxlen: usize },
    #[error("centre set of size {size} exceeds 10mk = {bound}")]
    TooManyCentres { size: usize, bound: usize },
    #[error("no complete length ladder found within the search budget")]
    LadderMissing,
}

/// First `size` vertices of a breadth-first search from `center` in `G - blocked`,
/// or `None` when fewer are reachable or the last one lies beyond `max_radius`.
pub fn grow_expansion(g: &HostGraph, center: Vertex, size: usize, blocked: &[bool], max_radius: usize) -> Option<Expansion> {
    if size == 0 || blocked[center] {
        return None;
    }
    let dist = g.distances(&[center], blocked);
    let mut order: Vec<Vertex> = (0..g.n()).filter(|&v| dist[v] != UNREACHED).collect();
    order.sort_by_key(|&v| (dist[v], v));
    if order.len() < size {
        return None;
    }
    order.truncate(size);
    let radius = dist[*order.last().expect("size > 0")];
    (radius <= max_radius).then(|| Expansion { center, vertices: order.into_iter().collect(), radius })
}

/// Smallest `ell` whose whole ladder `ell, ell + 2, .., ell + 2k` is realised inside
/// `G[A + v1 + v2]`, with one witness per rung. `Err(())` if the budget ran out first.
pub fn adjuster_length(g: &HostGraph, v1: Vertex, v2: Vertex, centers: &VertexSet, k: usize) -> std::result::Result<Option<(usize, Vec<Path>)>, ()> {
    let blocked: Vec<bool> = (0..g.n()).map(|v| !(centers.contains(v) || v == v1 || v == v2)).collect();
    let d = g.distances(&[v1], &blocked)[v2];
    if d == UNREACHED {
        return Ok(None);
    }
    let top = centers.len() + 1;
    'ell: for ell in d..=top {
        let mut witnesses = Vec::with_capacity(k + 1);
        for i in 0..=k {
            if ell + 2 * i > top {
                break 'ell;
            }
            match path_of_length_masked(g, v1, v2, ell + 2 * i, &blocked, true, SEARCH_BUDGET) {
                LengthSearch::Found(p) => witnesses.push(p),
                LengthSearch::Exhausted => continue 'ell,
                LengthSearch::BudgetExceeded => return Err(()),
            }
        }
        return Ok(Some((ell, witnesses)));
    }
    Ok(None)
}

/// Shortest cycle through `root` in `G - blocked`, as a closed vertex sequence starting at `root`.
fn shortest_cycle_through(g: &HostGraph, root: Vertex, blocked: &[bool]) -> Option<Vec<Vertex>> {
    let n = g.n();
    let mut dist = vec![UNREACHED; n];
    let mut parent = vec![UNREACHED; n];
    let mut branch = vec![UNREACHED; n];
    dist[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    let mut best: Option<(usize, Vertex, Vertex)> = None;
    while let Some(u) = queue.pop_front() {
        if best.is_some_and(|(len, _, _)| 2 * dist[u] + 1 >= len) {
            break;
        }
        for &w in g.neighbors(u) {
            if blocked[w] {
                continue;
            }
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                branch[w] = if u == root { w } else { branch[u] };
                queue.push_back(w);
            } else if w != parent[u] && u != root && w != root && branch[w] != branch[u] {
                let len = dist[u] + dist[w] + 1;
                if best.is_none_or(|(l, _, _)| len < l) {
                    best = Some((len, u, w));
                }
            } else if w == root && parent[u] != root && u != root {
                let len = dist[u] + 1;
                if best.is_none_or(|(l, _, _)| len < l) {
                    best = Some((len, u, root));
                }
            }
        }
    }
    let (_, a, b) = best?;
    let climb = |mut x: Vertex| {
        let mut out = vec![x];
        while x != root {
            x = parent[x];
            out.push(x);
        }
        out
    };
    let mut cycle: Vec<Vertex> = climb(a);
    cycle.reverse();
    if b != root {
        cycle.extend(climb(b).into_iter().take_while(|&x| x != root));
    }
    Some(cycle)
}

fn simple_on_cycle(g: &HostGraph, cycle: &[Vertex], blocked: &[bool], d: usize, m: usize) -> Option<Adjuster> {
    let len = cycle.len();
    let r = len / 2;
    for j in 0..len {
        let v1 = cycle[j];
        let v2 = cycle[(j + r - 1) % len];
        let centers: VertexSet = cycle.iter().copied().filter(|&v| v != v1 && v != v2).collect();
        let mut block = blocked.to_vec();
        for &v in cycle {
            block[v] = true;
        }
        for (a, b) in [(v1, v2), (v2, v1)] {
            block[a] = false;
            let Some(fa) = grow_expansion(g, a, d, &block, m) else {
                block[a] = true;
                continue;
            };
            let mut block2 = block.clone();
            for v in fa.vertices.iter() {
                block2[v] = true;
            }
            block2[b] = false;
            block[a] = true;
            let Some(fb) = grow_expansion(g, b, d, &block2, m) else { continue };
            let (f1, f2) = if a == v1 { (fa, fb) } else { (fb, fa) };
            let Ok(Some((ell, witnesses))) = adjuster_length(g, v1, v2, &centers, 1) else { continue };
            return Some(Adjuster { v1, f1, v2, f2, centers, k: 1, m, ell, witnesses });
        }
    }
    None
}

/// Simple `(D,m,1)`-adjuster in `G - avoid` from a shortest even cycle `C` of length `2r`:
/// two vertices at distance `r - 1` along `C` with breadth-first expansions of size `D` and
/// radius at most `m`, the rest of `C` as centre set. A non-bipartite host is first cut
/// down to a bipartite spanning subgraph.
pub fn build_simple_adjuster(g: &HostGraph, avoid: &VertexSet, d: usize, m: usize) -> Result<std::result::Result<Adjuster, AdjusterFailure>> {
    avoid.check_range(g.n())?;
    let host = max_cut_bipartite(g);
    let blocked = avoid.to_mask(g.n());
    let mut cycles: Vec<Vec<Vertex>> = (0..g.n())
        .filter(|&v| !blocked[v])
        .filter_map(|v| shortest_cycle_through(&host, v, &blocked))
        .collect();
    if cycles.is_empty() {
        return Ok(Err(AdjusterFailure::NoCycle));
    }
    cycles.sort_by_key(|c| (c.len(), c[0]));
    let max = 10 * m + 2;
    let mut any_short = false;
    for c in cycles.iter().filter(|c| c.len() <= max) {
        any_short = true;
        if let Some(a) = simple_on_cycle(g, c, &blocked, d, m) {
            debug_assert!(check_adjuster(g, &a).is_ok(), "{:?}", check_adjuster(g, &a));
            return Ok(Ok(a));
        }
    }
    Ok(Err(if any_short { AdjusterFailure::ExpansionStarved { size: d } } else { AdjusterFailure::NoShortEvenCycle { max } }))
}

fn disjoint_simple_pool(g: &HostGraph, avoid: &VertexSet, d: usize, m: usize, want: usize) -> Result<Vec<Adjuster>> {
    let mut taken = avoid.clone();
    let mut pool = Vec::new();
    while pool.len() < want {
        match build_simple_adjuster(g, &taken, d, m)? {
            Ok(a) => {
                taken = taken.union(&a.vertices());
                pool.push(a);
            }
            Err(_) => break,
        }
    }
    Ok(pool)
}

/// Shortest path joining the ends of `a` to the ends of `b` outside `blocked`, extended
/// inside the touched expansions to their centres. Returns the path oriented from an
/// end of `a` together with which ends (1 or 2) it reached.
fn link_ends(g: &HostGraph, a: &Adjuster, b: &Adjuster, blocked: &[bool], maxlen: usize) -> Option<(Path, usize, usize)> {
    let n = g.n();
    let sources: Vec<Vertex> = a.f1.vertices.iter().chain(a.f2.vertices.iter()).collect();
    let mut target = vec![false; n];
    for v in b.f1.vertices.iter().chain(b.f2.vertices.iter()) {
        target[v] = true;
    }
    let bridge = shortest_path(g, &sources, &target, blocked, maxlen)?;
    let ea = if a.f1.vertices.contains(bridge.start()) { 1 } else { 2 };
    let eb = if b.f1.vertices.contains(bridge.end()) { 1 } else { 2 };
    let inside = |f: &Expansion, from: Vertex| {
        let mut block = vec![true; n];
        for v in f.vertices.iter() {
            block[v] = false;
        }
        let mut t = vec![false; n];
        t[f.center] = true;
        shortest_path(g, &[from], &t, &block, usize::MAX).expect("expansions are connected")
    };
    let head = inside(a.end(ea), bridge.start()).reversed();
    let tail = inside(b.end(eb), bridge.end());
    Some((head.join(&bridge).join(&tail), ea, eb))
}

/// Oriented copy with the linked end first: `v1` becomes the end `e`.
fn oriented(a: &Adjuster, e: usize) -> Adjuster {
    if e == 1 {
        return a.clone();
    }
    Adjuster {
        v1: a.v2,
        f1: a.f2.clone(),
        v2: a.v1,
        f2: a.f1.clone(),
        centers: a.centers.clone(),
        k: a.k,
        m: a.m,
        ell: a.ell,
        witnesses: a.witnesses.iter().map(Path::reversed).collect(),
    }
}

/// `(D,m,r)`-adjuster chained from `r` disjoint simple adjusters. Consecutive adjusters
/// are joined through their expansions by a path `P`; the joined ends are absorbed into the
/// centre set and the ladders add, with `ell = ell1 + ell2 + |P|` as the composed witness.
/// The stored `ell` is then lowered to the true minimum when the search budget allows.
pub fn chain_adjusters(g: &HostGraph, avoid: &VertexSet, d: usize, m: usize, r: usize) -> Result<std::result::Result<Adjuster, AdjusterFailure>> {
    avoid.check_range(g.n())?;
    if r <= 1 {
        return build_simple_adjuster(g, avoid, d, m);
    }
    let pool = disjoint_simple_pool(g, avoid, d, m, r)?;
    if pool.len() < r {
        return Ok(Err(AdjusterFailure::PoolShortfall { achieved: pool.len(), need: r }));
    }
    let n = g.n();
    let maxlen = 3 * m.max(1);
    let mut cur = pool[0].clone();
    for (index, next) in pool.iter().enumerate().skip(1) {
        let mut blocked = avoid.to_mask(n);
        for a in std::iter::once(&cur).chain(&pool[index..]) {
            for v in a.centers.iter() {
                blocked[v] = true;
            }
        }
        for a in &pool[index + 1..] {
            for v in a.vertices().iter() {
                blocked[v] = true;
            }
        }
        let Some((p, ea, eb)) = link_ends(g, &cur, next, &blocked, maxlen) else {
            return Ok(Err(AdjusterFailure::LinkMissed { index, maxlen }));
        };
        let a = oriented(&cur, 3 - ea);
        let b = oriented(next, eb);
        // a runs v1 -> v2 with v2 on P; b runs v1 -> v2 with v1 on P.
        if p.vertices().iter().any(|&v| a.f1.vertices.contains(v) || b.f2.vertices.contains(v)) {
            return Ok(Err(AdjusterFailure::LinkMissed { index, maxlen }));
        }
        let centers: VertexSet = a.centers.union(&b.centers).union(&p.vertices().iter().copied().collect());
        let k = a.k + b.k;
        let witnesses = (0..=k)
            .map(|i| {
                let ia = i.min(a.k);
                let ib = i - ia;
                a.witnesses[ia].join(&p).join(&b.witnesses[ib])
            })
            .collect();
        cur = Adjuster {
            v1: a.v1,
            f1: a.f1,
            v2: b.v2,
            f2: b.f2,
            centers,
            k,
            m,
            ell: a.ell + b.ell + p.len(),
            witnesses,
        };
    }
    let bound = 10 * m * r;
    if cur.centers.len() > bound {
        return Ok(Err(AdjusterFailure::TooManyCentres { size: cur.centers.len(), bound }));
    }
    match adjuster_length(g, cur.v1, cur.v2, &cur.centers, cur.k) {
        Ok(Some((ell, witnesses))) => {
            cur.ell = ell;
            cur.witnesses = witnesses;
        }
        Ok(None) => return Ok(Err(AdjusterFailure::LadderMissing)),
        Err(()) => log::debug!("ladder minimisation over budget; keeping composed length {}", cur.ell),
    }
    Ok(Ok(cur))
}

/// Octopus around a simple core adjuster: `r3` further disjoint simple adjusters, each
/// joined from one end `R` of the core by a path of length at most `r4` that avoids every
/// centre set and the interiors of the other paths.
pub fn build_octopus(g: &HostGraph, avoid: &VertexSet, r1: usize, r2: usize, r3: usize, r4: usize) -> Result<std::result::Result<Octopus, AdjusterFailure>> {
    avoid.check_range(g.n())?;
    let core = match build_simple_adjuster(g, avoid, r1, r2)? {
        Ok(a) => a,
        Err(e) => return Ok(Err(e)),
    };
    if r3 == 0 {
        return Ok(Ok(Octopus { core, end: 1, family: Vec::new(), paths: Vec::new(), r4 }));
    }
    let n = g.n();
    let pool = disjoint_simple_pool(g, &avoid.union(&core.vertices()), r1, r2, 2 * r3)?;
    let mut best = 0;
    for end in [1, 2] {
        let r_set = core.end(end).vertices.clone();
        let mut blocked = avoid.to_mask(n);
        for a in std::iter::once(&core).chain(&pool) {
            for v in a.centers.iter() {
                blocked[v] = true;
            }
        }
        for v in core.end(3 - end).vertices.iter() {
            blocked[v] = true;
        }
        let mut family = Vec::new();
        let mut paths: Vec<Path> = Vec::new();
        for (i, a) in pool.iter().enumerate() {
            if family.len() == r3 {
                break;
            }
            let mut block = blocked.clone();
            for (j, other) in pool.iter().enumerate() {
                if j != i {
                    for v in other.vertices().iter() {
                        block[v] = true;
                    }
                }
            }
            let mut target = vec![false; n];
            for v in a.f1.vertices.iter().chain(a.f2.vertices.iter()) {
                target[v] = true;
            }
            let Some(p) = shortest_path(g, r_set.as_slice(), &target, &block, r4) else { continue };
            for &v in p.interior() {
                blocked[v] = true;
            }
            family.push(a.clone());
            paths.push(p);
        }
        best = best.max(family.len());
        if family.len() == r3 {
            let o = Octopus { core, end, family, paths, r4 };
            debug_assert!(check_octopus(g, &o).is_ok(), "{:?}", check_octopus(g, &o));
            return Ok(Ok(o));
        }
    }
    Ok(Err(AdjusterFailure::PoolShortfall { achieved: best, need: r3 }))
}
