//! Gadget pipeline: split pattern vertices by degree, give every vertex a host object, then
//! route the pattern edges in two rounds.
//!
//! Round one places low-degree vertices on spare webs one at a time and connects them to
//! every placed neighbour, demoting spares whose interior gets crossed too heavily. Round
//! two connects the remaining edges among high- and middle-degree vertices.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::link::Linker;
use crate::certify::Mode;
use crate::config::RunConfig;
use crate::error::{invalid, precondition, Result};
use crate::gadgets::{build_unit, build_web, Unit, Web};
use crate::graph::{average_degree, ratio_f64, HostGraph, Vertex, VertexSet};
use crate::routing::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SplitRule {
    /// `L: d >= large`, `S: d <= small`.
    Balanced,
    /// `L: d > large`, `S: d < small`.
    Sparse,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeClassSplit {
    pub large: Vec<Vertex>,
    pub middle: Vec<Vertex>,
    pub small: Vec<Vertex>,
    pub large_threshold: f64,
    pub small_threshold: f64,
    pub rule: SplitRule,
}

/// Splits pattern vertices into large, middle and small degree classes. A vertex meeting
/// both the large and the small condition counts as large.
pub fn degree_split(h: &HostGraph, rule: SplitRule, large_threshold: f64, small_threshold: f64) -> DegreeClassSplit {
    let mut s = DegreeClassSplit { large: Vec::new(), middle: Vec::new(), small: Vec::new(), large_threshold, small_threshold, rule };
    for v in 0..h.n() {
        let d = h.degree(v) as f64;
        let (is_large, is_small) = match rule {
            SplitRule::Balanced => (d >= large_threshold, d <= small_threshold),
            SplitRule::Sparse => (d > large_threshold, d < small_threshold),
        };
        if is_large {
            s.large.push(v);
        } else if is_small {
            s.small.push(v);
        } else {
            s.middle.push(v);
        }
    }
    s
}

/// Default split thresholds: `d/m^10` for large and `m^4` (balanced) or `m^2` (sparse) for
/// small, each replaceable from the configuration.
pub(crate) fn split_thresholds(cfg: &RunConfig, rule: SplitRule, d: f64, m: usize) -> (f64, f64) {
    let m = m as f64;
    let large = cfg.split_large.map_or(d / m.powi(10), |t| t as f64);
    let small = cfg.split_small.map_or(
        match rule {
            SplitRule::Balanced => m.powi(4),
            SplitRule::Sparse => m * m,
        },
        |t| t as f64,
    );
    (large, small)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ObjectKind {
    Web,
    Unit,
}

/// A unit or web seen as a core with a list of routes to its exterior.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RouteObject {
    pub kind: ObjectKind,
    pub core: Vertex,
    pub int: VertexSet,
    pub ctr: VertexSet,
    pub ext: VertexSet,
    /// Core-to-exterior paths through the branches, one per leaf.
    pub routes: Vec<Path>,
}

fn unit_routes(u: &Unit) -> Vec<Path> {
    let mut out = Vec::new();
    for (p, s) in u.branches.iter().zip(&u.stars) {
        for &leaf in &s.leaves {
            out.push(p.join(&Path(vec![s.center, leaf])));
        }
    }
    out
}

impl RouteObject {
    pub fn from_unit(u: &Unit) -> Self {
        RouteObject { kind: ObjectKind::Unit, core: u.core, int: u.int(), ctr: VertexSet::singleton(u.core), ext: u.ext(), routes: unit_routes(u) }
    }

    pub fn from_web(w: &Web) -> Self {
        let mut routes = Vec::new();
        for (q, u) in w.branches.iter().zip(&w.units) {
            for r in unit_routes(u) {
                routes.push(q.join(&r));
            }
        }
        if w.units.is_empty() {
            routes.push(Path(vec![w.core]));
        }
        RouteObject { kind: ObjectKind::Web, core: w.core, int: w.int(), ctr: w.ctr(), ext: w.ext(), routes }
    }

    /// Routes none of whose vertices past the core are in `used`.
    pub fn available(&self, used: &[bool]) -> Vec<Path> {
        self.routes.iter().filter(|p| p.vertices()[1..].iter().all(|&v| !used[v])).cloned().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GadgetAssignment {
    pub objects: Vec<RouteObject>,
    /// Object of each large or middle pattern vertex.
    pub owner: Vec<Option<usize>>,
    /// Spare webs for the small class, in pool order.
    pub spares: Vec<usize>,
    pub split: DegreeClassSplit,
    /// Host vertices no object or path may use.
    pub reserved: VertexSet,
}

/// Builds webs for the middle class, `2|S|` spare webs, then units for the large class,
/// all vertex-disjoint, away from `reserved` and with cores on `side` when given.
/// `Ok(Err(_))` names the object that could not be built.
pub fn build_assignment(
    g: &HostGraph,
    h: &HostGraph,
    split: &DegreeClassSplit,
    reserved: &VertexSet,
    side: Option<u8>,
    cfg: &RunConfig,
) -> Result<std::result::Result<GadgetAssignment, String>> {
    reserved.check_range(g.n())?;
    let mut taken = reserved.clone();
    let mut objects = Vec::new();
    let mut owner = vec![None; h.n()];
    let (h2, h3) = (cfg.star_leaves, cfg.branch_len);
    for &v in &split.middle {
        match build_web(g, &taken, h.degree(v) + 1, cfg.unit_branches, h2, h3, side)? {
            Ok(w) => {
                taken = taken.union(&w.vertices());
                owner[v] = Some(objects.len());
                objects.push(RouteObject::from_web(&w));
            }
            Err(e) => return Ok(Err(format!("web for pattern vertex {v}: {e}"))),
        }
    }
    let spare_h0 = split.small.iter().map(|&v| h.degree(v)).max().unwrap_or(0) + 1;
    let mut spares = Vec::new();
    for i in 0..2 * split.small.len() {
        match build_web(g, &taken, spare_h0, cfg.unit_branches, h2, h3, side)? {
            Ok(w) => {
                taken = taken.union(&w.vertices());
                spares.push(objects.len());
                objects.push(RouteObject::from_web(&w));
            }
            Err(e) => return Ok(Err(format!("spare web {i}: {e}"))),
        }
    }
    for &v in &split.large {
        match build_unit(g, &taken, h.degree(v) + 1, h2, h3, side)? {
            Ok(u) => {
                taken = taken.union(&u.vertices());
                owner[v] = Some(objects.len());
                objects.push(RouteObject::from_unit(&u));
            }
            Err(e) => return Ok(Err(format!("unit for pattern vertex {v}: {e}"))),
        }
    }
    Ok(Ok(GadgetAssignment { objects, owner, spares, split: split.clone(), reserved: reserved.clone() }))
}

fn key(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

/// Round-one state: embedded small vertices, spares in use and demoted, and the paths so far.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathSystemState {
    /// Embedded small vertices, in embedding order.
    pub embedded: Vec<Vertex>,
    pub in_use: Vec<usize>,
    pub demoted: Vec<usize>,
    /// Spare object of each embedded small vertex.
    pub image: BTreeMap<Vertex, usize>,
    /// One path per routed pattern edge `(a, b)`, `a < b`, from the core of `a` to that of `b`.
    pub paths: BTreeMap<(Vertex, Vertex), Path>,
    /// The part of each path outside its two end objects' routes.
    pub middles: BTreeMap<(Vertex, Vertex), Path>,
    pub mode: Mode,
    pub steps: usize,
    pub audits: usize,
    pub exhausted: bool,
    pub diagnosis: Vec<String>,
}

impl PathSystemState {
    pub fn is_complete(&self, asg: &GadgetAssignment) -> bool {
        self.embedded.len() == asg.split.small.len()
    }

    pub fn object_of(&self, asg: &GadgetAssignment, v: Vertex) -> Option<usize> {
        asg.owner[v].or_else(|| self.image.get(&v).copied())
    }
}

struct Router<'a> {
    g: &'a HostGraph,
    asg: &'a GadgetAssignment,
    linker: Linker<'a>,
    mode: Mode,
    /// Reserved vertices, interiors of owned objects and centres of spares.
    base: Vec<bool>,
}

impl<'a> Router<'a> {
    fn new(g: &'a HostGraph, asg: &'a GadgetAssignment, mode: Mode, cfg: &'a RunConfig) -> Self {
        let n = g.n();
        let mut base = asg.reserved.to_mask(n);
        for (i, o) in asg.objects.iter().enumerate() {
            let set = if asg.spares.contains(&i) { &o.ctr } else { &o.int };
            for v in set.iter() {
                base[v] = true;
            }
        }
        let m = cfg.m(n, ratio_f64(average_degree(g)));
        let linker = Linker { g, cfg, m, use_adjusters: matches!(mode, Mode::Balanced(_)) };
        Router { g, asg, linker, mode, base }
    }

    fn used(&self, paths: &BTreeMap<(Vertex, Vertex), Path>) -> Vec<bool> {
        let mut used = vec![false; self.g.n()];
        for p in paths.values() {
            for &v in p.vertices() {
                used[v] = true;
            }
        }
        used
    }

    /// Path from the core of object `oa` to that of `ob`, plus its middle segment.
    fn connect(&self, oa: usize, ob: usize, paths: &BTreeMap<(Vertex, Vertex), Path>) -> Option<(Path, Path)> {
        let used = self.used(paths);
        let (a, b) = (&self.asg.objects[oa], &self.asg.objects[ob]);
        let mut route_used = used.clone();
        for v in a.int.iter().chain(b.int.iter()) {
            route_used[v] = false;
        }
        let ra = a.available(&used);
        let rb = b.available(&used);
        let mut blocked: Vec<bool> = self.base.iter().zip(&used).map(|(&x, &y)| x || y).collect();
        for v in a.int.iter().chain(b.int.iter()) {
            blocked[v] = true;
        }
        let path = match self.mode {
            Mode::Balanced(ell) => self.linker.exact(&ra, &rb, ell + 1, &blocked).map(|(p, _)| p),
            Mode::Bounded(ell) => self.linker.bounded(&ra, &rb, ell + 1, &blocked),
        }?;
        let vs = path.vertices();
        let start = vs.iter().rposition(|&v| a.int.contains(v)).unwrap_or(0);
        let end = vs.iter().position(|&v| b.int.contains(v)).unwrap_or(vs.len() - 1);
        let middle = if start < end { Path(vs[start + 1..end].to_vec()) } else { Path(Vec::new()) };
        Some((path, middle))
    }

    fn interior_hits(&self, obj: usize, middles: &BTreeMap<(Vertex, Vertex), Path>) -> usize {
        let int = &self.asg.objects[obj].int;
        middles.values().flat_map(|p| p.vertices().iter()).filter(|&&v| int.contains(v)).count()
    }
}

/// Runs round one: embeds the small class onto spare webs in ascending id order, routing
/// each new vertex to its placed neighbours. A spare is good while routed middles cross at
/// most `overuse_frac` of its interior; spares that stop being good are demoted and their
/// vertex is re-embedded later. Stops when the small class is embedded or the pool runs out.
pub fn round1_good_path_system(g: &HostGraph, h: &HostGraph, asg: &GadgetAssignment, mode: Mode, cfg: &RunConfig) -> Result<PathSystemState> {
    let router = Router::new(g, asg, mode, cfg);
    let mut st = PathSystemState {
        embedded: Vec::new(),
        in_use: Vec::new(),
        demoted: Vec::new(),
        image: BTreeMap::new(),
        paths: BTreeMap::new(),
        middles: BTreeMap::new(),
        mode,
        steps: 0,
        audits: 0,
        exhausted: false,
        diagnosis: Vec::new(),
    };
    let good = |st: &PathSystemState, i: usize| {
        let size = asg.objects[i].int.len() as f64;
        router.interior_hits(i, &st.middles) as f64 <= cfg.overuse_frac * size
    };
    let mut order = asg.split.small.clone();
    order.sort_unstable();
    audit(h, asg, &router, &st)?;
    st.audits += 1;
    loop {
        let Some(&x) = order.iter().find(|v| !st.image.contains_key(v)) else {
            break;
        };
        let mut pick = None;
        for &t in &asg.spares {
            if st.in_use.contains(&t) || st.demoted.contains(&t) {
                continue;
            }
            if good(&st, t) {
                pick = Some(t);
                break;
            }
            st.demoted.push(t);
        }
        let Some(t) = pick else {
            st.exhausted = true;
            st.diagnosis.push(format!("spare pool exhausted with {} of {} small vertices embedded", st.embedded.len(), order.len()));
            break;
        };
        st.steps += 1;
        st.image.insert(x, t);
        st.in_use.push(t);
        st.embedded.push(x);
        let mut added = Vec::new();
        let mut failed = None;
        for &y in h.neighbors(x) {
            let Some(oy) = st.object_of(asg, y).filter(|_| y != x) else {
                continue;
            };
            let (oa, ob) = if x < y { (t, oy) } else { (oy, t) };
            match router.connect(oa, ob, &st.paths) {
                Some((p, mid)) => {
                    st.paths.insert(key(x, y), p);
                    st.middles.insert(key(x, y), mid);
                    added.push(key(x, y));
                }
                None => {
                    failed = Some(y);
                    break;
                }
            }
        }
        if let Some(y) = failed {
            for k in added {
                st.paths.remove(&k);
                st.middles.remove(&k);
            }
            st.image.remove(&x);
            st.in_use.retain(|&i| i != t);
            st.embedded.retain(|&v| v != x);
            st.demoted.push(t);
            st.diagnosis.push(format!("step {}: {x} could not reach {y} from spare {t}", st.steps));
        }
        let overused: Vec<usize> = st.in_use.iter().copied().filter(|&i| !good(&st, i)).collect();
        for i in overused {
            let Some((&z, _)) = st.image.iter().find(|(_, &o)| o == i) else { continue };
            st.image.remove(&z);
            st.embedded.retain(|&v| v != z);
            st.in_use.retain(|&o| o != i);
            st.demoted.push(i);
            st.paths.retain(|&(a, b), _| a != z && b != z);
            st.middles.retain(|&(a, b), _| a != z && b != z);
            st.diagnosis.push(format!("step {}: spare {i} overused, {z} unembedded", st.steps));
        }
        audit(h, asg, &router, &st)?;
        st.audits += 1;
    }
    Ok(st)
}

/// Checks the round-one invariants: the embedding is an injection into the spares in use,
/// every edge among placed vertices touching the small class has a path of the right
/// length between the right cores, paths are internally disjoint and leave their end
/// objects only through unreserved vertices, and every spare in use is good.
fn audit(h: &HostGraph, asg: &GadgetAssignment, router: &Router, st: &PathSystemState) -> Result<()> {
    let images: BTreeSet<usize> = st.image.values().copied().collect();
    let in_use: BTreeSet<usize> = st.in_use.iter().copied().collect();
    let embedded: BTreeSet<Vertex> = st.embedded.iter().copied().collect();
    if images.len() != st.image.len() || images != in_use || embedded != st.image.keys().copied().collect() {
        return invalid("round-one audit: embedding is not an injection onto the spares in use");
    }
    if st.in_use.iter().any(|i| st.demoted.contains(i) || !asg.spares.contains(i)) {
        return invalid("round-one audit: a spare is both in use and demoted");
    }
    let placed = |v: Vertex| asg.owner[v].is_some() || embedded.contains(&v);
    let mut cores = vec![false; router.g.n()];
    for v in (0..h.n()).filter(|&v| placed(v)) {
        cores[asg.objects[st.object_of(asg, v).expect("placed")].core] = true;
    }
    let mut seen = vec![false; router.g.n()];
    for (a, b) in h.edges() {
        let needed = placed(a) && placed(b) && (embedded.contains(&a) || embedded.contains(&b));
        let Some(p) = st.paths.get(&(a, b)) else {
            if needed {
                return invalid(format!("round-one audit: edge ({a},{b}) has no path"));
            }
            continue;
        };
        if !needed {
            return invalid(format!("round-one audit: stale path for edge ({a},{b})"));
        }
        let (oa, ob) = (st.object_of(asg, a).expect("placed"), st.object_of(asg, b).expect("placed"));
        let (za, zb) = (&asg.objects[oa], &asg.objects[ob]);
        if p.start() != za.core || p.end() != zb.core || !st.mode.admits(p.len()) || p.validate(router.g).is_err() {
            return invalid(format!("round-one audit: path for ({a},{b}) has the wrong ends or length"));
        }
        for &v in p.interior() {
            if seen[v] || cores[v] {
                return invalid(format!("round-one audit: paths meet at {v}"));
            }
            seen[v] = true;
            if router.base[v] && !za.int.contains(v) && !zb.int.contains(v) {
                return invalid(format!("round-one audit: path for ({a},{b}) enters reserved vertex {v}"));
            }
        }
    }
    for &i in &st.in_use {
        let size = asg.objects[i].int.len() as f64;
        if router.interior_hits(i, &st.middles) as f64 > router.linker.cfg.overuse_frac * size {
            return invalid(format!("round-one audit: spare {i} in use is overused"));
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Round2 {
    pub paths: BTreeMap<(Vertex, Vertex), Path>,
    /// Edges among large and middle vertices that could not be routed.
    pub missing: Vec<(Vertex, Vertex)>,
    pub diagnosis: Vec<String>,
}

/// Routes the edges among large and middle vertices, in ascending order, avoiding every
/// round-one path. Edges that cannot be routed are listed as missing.
pub fn round2_paths(g: &HostGraph, h: &HostGraph, asg: &GadgetAssignment, state: &PathSystemState, cfg: &RunConfig) -> Result<Round2> {
    if !state.is_complete(asg) {
        return precondition("round two needs every small vertex embedded");
    }
    let router = Router::new(g, asg, state.mode, cfg);
    let mut all = state.paths.clone();
    let mut out = Round2 { paths: BTreeMap::new(), missing: Vec::new(), diagnosis: Vec::new() };
    for (a, b) in h.edges() {
        let (Some(oa), Some(ob)) = (asg.owner[a], asg.owner[b]) else {
            continue;
        };
        match router.connect(oa, ob, &all) {
            Some((p, _)) => {
                all.insert((a, b), p.clone());
                out.paths.insert((a, b), p);
            }
            None => {
                out.missing.push((a, b));
                out.diagnosis.push(format!("no path for ({a},{b})"));
            }
        }
    }
    Ok(out)
}
