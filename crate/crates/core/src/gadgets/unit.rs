use serde::Serialize;

use super::{check_unit, check_web, Star, Unit, Web};
use crate::error::Result;
use crate::graph::{HostGraph, Vertex, VertexSet, UNREACHED};
use crate::routing::{shortest_path, Path};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum BuildFailure {
    #[error("parameters need {need} vertices but only {available} are available")]
    Infeasible { need: usize, available: usize },
    #[error("no admissible core vertex")]
    NoCore,
    #[error("star harvest starved: {stars} of {need} stars")]
    StarHarvestStarved { stars: usize, need: usize },
    #[error("linking starved: {linked} of {need} branches")]
    LinkStarved { linked: usize, need: usize },
    #[error("unit pool starved: {units} of {need} units")]
    UnitPoolStarved { units: usize, need: usize },
}

/// Core candidates tried before giving up.
const CORE_ATTEMPTS: usize = 8;

/// Vertices of `G - blocked` on `side` (when given), by descending free degree then id.
fn core_candidates(g: &HostGraph, blocked: &[bool], side: Option<u8>) -> Vec<Vertex> {
    let free_deg = |v: Vertex| g.neighbors(v).iter().filter(|&&w| !blocked[w]).count();
    let mut c: Vec<Vertex> = (0..g.n())
        .filter(|&v| !blocked[v] && side.is_none_or(|s| g.side(v) == Some(s)))
        .collect();
    c.sort_by_key(|&v| (std::cmp::Reverse(free_deg(v)), v));
    c
}

/// A unit before its stars are trimmed to `h2` leaves; stars may carry spare leaves.
#[derive(Clone, Debug)]
struct RawUnit {
    core: Vertex,
    branches: Vec<Path>,
    stars: Vec<Star>,
}

impl RawUnit {
    fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(self.core)
            .chain(self.branches.iter().flat_map(|p| p.vertices().iter().copied()))
            .chain(self.stars.iter().flat_map(|s| std::iter::once(s.center).chain(s.leaves.iter().copied())))
    }

    fn trim(self, h2: usize, h3: usize) -> Unit {
        let stars = self
            .stars
            .into_iter()
            .map(|s| Star { center: s.center, leaves: s.leaves[..h2].to_vec() })
            .collect();
        Unit { core: self.core, branches: self.branches, stars, h2, h3 }
    }
}

/// Stars with at least `h2` and up to `2 h2` leaves, centred in the radius-`h3` ball
/// around `core`, taking the largest free degree first.
fn harvest_stars(g: &HostGraph, blocked: &[bool], core: Vertex, h2: usize, h3: usize, want: usize) -> Vec<Star> {
    let n = g.n();
    let dist = g.distances(&[core], blocked);
    let mut taken = blocked.to_vec();
    taken[core] = true;
    let mut stars = Vec::new();
    while stars.len() < want {
        let free = |v: Vertex, taken: &[bool]| g.neighbors(v).iter().filter(|&&w| !taken[w]).count();
        let best = (0..n)
            .filter(|&v| !taken[v] && dist[v] != UNREACHED && dist[v] <= h3)
            .map(|v| (free(v, &taken), v))
            .filter(|&(f, _)| f >= h2.max(1))
            .max_by_key(|&(f, v)| (f, std::cmp::Reverse(v)));
        let Some((_, x)) = best else { break };
        let leaves: Vec<Vertex> = g.neighbors(x).iter().copied().filter(|&w| !taken[w]).take(2 * h2).collect();
        taken[x] = true;
        for &l in &leaves {
            taken[l] = true;
        }
        stars.push(Star { center: x, leaves });
    }
    stars
}

/// Links `core` to pool star centres one at a time by shortest paths of length at most `h3`.
/// Paths avoid earlier branches and linked stars but may run through leaves of pool stars;
/// a star left with fewer than `h2` unused leaves is overused and discarded.
fn link_stars(g: &HostGraph, blocked: &[bool], core: Vertex, mut pool: Vec<Star>, h1: usize, h2: usize, h3: usize) -> std::result::Result<RawUnit, usize> {
    let n = g.n();
    let mut used = blocked.to_vec();
    used[core] = true;
    let mut branches = Vec::new();
    let mut linked: Vec<Star> = Vec::new();
    while linked.len() < h1 {
        pool.retain(|s| s.leaves.iter().filter(|&&l| !used[l]).count() >= h2);
        for s in &mut pool {
            s.leaves.retain(|&l| !used[l]);
        }
        if pool.is_empty() {
            return Err(linked.len());
        }
        let mut target = vec![false; n];
        let mut block = used.clone();
        block[core] = false;
        for s in &pool {
            target[s.center] = true;
        }
        let Some(p) = shortest_path(g, &[core], &target, &block, h3) else {
            return Err(linked.len());
        };
        let idx = pool.iter().position(|s| s.center == p.end()).expect("target is a pool centre");
        let mut star = pool.remove(idx);
        star.leaves.retain(|l| !p.vertices().contains(l));
        if star.leaves.len() < h2 {
            continue;
        }
        for &v in p.vertices() {
            used[v] = true;
        }
        for &l in &star.leaves {
            used[l] = true;
        }
        branches.push(p);
        linked.push(star);
    }
    Ok(RawUnit { core, branches, stars: linked })
}

fn try_unit(g: &HostGraph, blocked: &[bool], core: Vertex, h1: usize, h2: usize, h3: usize) -> std::result::Result<RawUnit, BuildFailure> {
    let pool = harvest_stars(g, blocked, core, h2, h3, 2 * h1);
    if pool.len() < h1 {
        return Err(BuildFailure::StarHarvestStarved { stars: pool.len(), need: h1 });
    }
    link_stars(g, blocked, core, pool, h1, h2, h3).map_err(|linked| BuildFailure::LinkStarved { linked, need: h1 })
}

fn build_unit_raw(g: &HostGraph, blocked: &[bool], h1: usize, h2: usize, h3: usize, side: Option<u8>) -> std::result::Result<RawUnit, BuildFailure> {
    let available = blocked.iter().filter(|&&b| !b).count();
    let need = 1 + h1 * (h2 + 1);
    if need > available {
        return Err(BuildFailure::Infeasible { need, available });
    }
    let mut last = BuildFailure::NoCore;
    for core in core_candidates(g, blocked, side).into_iter().take(CORE_ATTEMPTS) {
        match try_unit(g, blocked, core, h1, h2, h3) {
            Ok(u) => return Ok(u),
            Err(e) => {
                log::trace!("unit at core {core}: {e}");
                last = e;
            }
        }
    }
    Err(last)
}

/// Greedy `(h1,h2,h3)`-unit in `G - avoid`, with its core on `side` when one is given.
/// The result passes the unit validator; `Ok(Err(_))` names the stage that starved.
pub fn build_unit(
    g: &HostGraph,
    avoid: &VertexSet,
    h1: usize,
    h2: usize,
    h3: usize,
    side: Option<u8>,
) -> Result<std::result::Result<Unit, BuildFailure>> {
    avoid.check_range(g.n())?;
    let blocked = avoid.to_mask(g.n());
    Ok(build_unit_raw(g, &blocked, h1, h2, h3, side).map(|raw| {
        let u = raw.trim(h2, h3);
        debug_assert!(check_unit(g, &u, None).is_ok(), "{:?}", check_unit(g, &u, None));
        u
    }))
}

/// Greedy `(h0,h1,h2,h3)`-web in `G - avoid`. Units are built into a pool of `h0 + ceil(h0/2)`,
/// then linked to the core by shortest paths avoiding unit interiors; units whose spare
/// leaves are consumed below `h2` by a branch are dropped.
pub fn build_web(
    g: &HostGraph,
    avoid: &VertexSet,
    h0: usize,
    h1: usize,
    h2: usize,
    h3: usize,
    side: Option<u8>,
) -> Result<std::result::Result<Web, BuildFailure>> {
    avoid.check_range(g.n())?;
    let n = g.n();
    let blocked = avoid.to_mask(n);
    let available = blocked.iter().filter(|&&b| !b).count();
    let need = 1 + h0 * (1 + h1 * (h2 + 1));
    if need > available {
        return Ok(Err(BuildFailure::Infeasible { need, available }));
    }
    let mut last = BuildFailure::NoCore;
    for core in core_candidates(g, &blocked, side).into_iter().take(CORE_ATTEMPTS) {
        if h0 == 0 {
            return Ok(Ok(Web { core, branches: Vec::new(), units: Vec::new(), h1, h2, h3 }));
        }
        match try_web(g, &blocked, core, h0, h1, h2, h3) {
            Ok(w) => {
                debug_assert!(check_web(g, &w).is_ok(), "{:?}", check_web(g, &w));
                return Ok(Ok(w));
            }
            Err(e) => {
                log::trace!("web at core {core}: {e}");
                last = e;
            }
        }
    }
    Ok(Err(last))
}

fn try_web(g: &HostGraph, blocked: &[bool], core: Vertex, h0: usize, h1: usize, h2: usize, h3: usize) -> std::result::Result<Web, BuildFailure> {
    let n = g.n();
    let mut taken = blocked.to_vec();
    taken[core] = true;
    let want = h0 + h0.div_ceil(2);
    let mut pool: Vec<RawUnit> = Vec::new();
    while pool.len() < want {
        let Ok(u) = build_unit_raw(g, &taken, h1, h2, h3, None) else { break };
        for v in u.vertices() {
            taken[v] = true;
        }
        pool.push(u);
    }
    if pool.len() < h0 {
        return Err(BuildFailure::UnitPoolStarved { units: pool.len(), need: h0 });
    }
    let mut used = blocked.to_vec();
    used[core] = true;
    let mut branches = Vec::new();
    let mut linked: Vec<RawUnit> = Vec::new();
    while linked.len() < h0 {
        pool.retain(|u| u.stars.iter().all(|s| s.leaves.iter().filter(|&&l| !used[l]).count() >= h2));
        for u in &mut pool {
            for s in &mut u.stars {
                s.leaves.retain(|&l| !used[l]);
            }
        }
        let mut target = vec![false; n];
        let mut block = used.clone();
        block[core] = false;
        for u in &pool {
            target[u.core] = true;
            let leaves: std::collections::HashSet<Vertex> = u.stars.iter().flat_map(|s| s.leaves.iter().copied()).collect();
            for v in u.vertices().filter(|v| *v != u.core && !leaves.contains(v)) {
                block[v] = true;
            }
        }
        for u in &linked {
            for v in u.vertices() {
                block[v] = true;
            }
        }
        let Some(q) = (!pool.is_empty()).then(|| shortest_path(g, &[core], &target, &block, h3)).flatten() else {
            return Err(BuildFailure::LinkStarved { linked: linked.len(), need: h0 });
        };
        let idx = pool.iter().position(|u| u.core == q.end()).expect("target is a unit core");
        let mut unit = pool.remove(idx);
        for s in &mut unit.stars {
            s.leaves.retain(|l| !q.vertices().contains(l));
        }
        if unit.stars.iter().any(|s| s.leaves.len() < h2) {
            continue;
        }
        for &v in q.vertices() {
            used[v] = true;
        }
        for v in unit.vertices() {
            used[v] = true;
        }
        branches.push(q);
        linked.push(unit);
    }
    let units = linked.into_iter().map(|u| u.trim(h2, h3)).collect();
    Ok(Web { core, branches, units, h1, h2, h3 })
}
