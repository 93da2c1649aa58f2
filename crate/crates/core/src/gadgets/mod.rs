//! Anchoring and length-control gadgets: expansions, units, webs, adjusters and octopuses,
//! with builders and a clause-by-clause validator.

mod adjuster;
mod connect;
mod unit;

use serde::{Deserialize, Serialize};

use crate::graph::{HostGraph, Vertex, VertexSet};
use crate::routing::{self, LengthSearch, Path};

pub use adjuster::SEARCH_BUDGET;

pub use adjuster::{adjuster_length, build_octopus, build_simple_adjuster, chain_adjusters, grow_expansion, AdjusterFailure};
pub use connect::{adjust_connect, Linked, LinkFailure};
pub use unit::{build_unit, build_web, BuildFailure};

/// `D` vertices, all within distance `radius` of `center` inside the induced subgraph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expansion {
    pub center: Vertex,
    pub vertices: VertexSet,
    pub radius: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Star {
    pub center: Vertex,
    pub leaves: Vec<Vertex>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Unit {
    pub core: Vertex,
    /// `branches[i]` runs from the core to `stars[i].center`.
    pub branches: Vec<Path>,
    pub stars: Vec<Star>,
    pub h2: usize,
    pub h3: usize,
}

impl Unit {
    pub fn ext(&self) -> VertexSet {
        self.stars.iter().flat_map(|s| s.leaves.iter().copied()).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        self.branches
            .iter()
            .flat_map(|p| p.vertices().iter().copied())
            .chain(self.stars.iter().flat_map(|s| std::iter::once(s.center).chain(s.leaves.iter().copied())))
            .chain(std::iter::once(self.core))
            .collect()
    }

    pub fn int(&self) -> VertexSet {
        self.vertices().difference(&self.ext())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Web {
    pub core: Vertex,
    /// `branches[i]` runs from the core to `units[i].core`.
    pub branches: Vec<Path>,
    pub units: Vec<Unit>,
    pub h1: usize,
    pub h2: usize,
    pub h3: usize,
}

impl Web {
    pub fn ctr(&self) -> VertexSet {
        self.branches.iter().flat_map(|p| p.vertices().iter().copied()).chain(std::iter::once(self.core)).collect()
    }

    pub fn ext(&self) -> VertexSet {
        self.units.iter().flat_map(|u| u.ext().iter().collect::<Vec<_>>()).collect()
    }

    pub fn vertices(&self) -> VertexSet {
        self.units.iter().fold(self.ctr(), |acc, u| acc.union(&u.vertices()))
    }

    pub fn int(&self) -> VertexSet {
        self.vertices().difference(&self.ext())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Adjuster {
    pub v1: Vertex,
    pub f1: Expansion,
    pub v2: Vertex,
    pub f2: Expansion,
    pub centers: VertexSet,
    /// Length range: paths of length `ell + 2i` for `i` in `0..=k`.
    pub k: usize,
    pub m: usize,
    pub ell: usize,
    /// `witnesses[i]` is a `v1,v2`-path of length `ell + 2i` inside `G[A + v1 + v2]`.
    pub witnesses: Vec<Path>,
}

impl Adjuster {
    pub fn vertices(&self) -> VertexSet {
        self.f1.vertices.union(&self.f2.vertices).union(&self.centers)
    }

    pub fn end(&self, which: usize) -> &Expansion {
        if which == 1 {
            &self.f1
        } else {
            &self.f2
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Octopus {
    pub core: Adjuster,
    /// Which end of the core (1 or 2) the family hangs from.
    pub end: usize,
    pub family: Vec<Adjuster>,
    pub paths: Vec<Path>,
    pub r4: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GadgetRecord {
    Expansion { size: usize, expansion: Expansion },
    Unit(Unit),
    Web(Web),
    Adjuster(Adjuster),
    Octopus(Octopus),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum GadgetVerdict {
    Valid,
    Invalid { clause: String, detail: String },
}

impl GadgetVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, GadgetVerdict::Valid)
    }
}

type Check = std::result::Result<(), (String, String)>;

fn fail(clause: &str, detail: impl Into<String>) -> Check {
    Err((clause.to_string(), detail.into()))
}

/// Node budget for the exhaustive length searches run by the validator.
pub const VALIDATOR_BUDGET: u64 = 20_000_000;

pub fn validate_gadget(g: &HostGraph, rec: &GadgetRecord) -> GadgetVerdict {
    let r = match rec {
        GadgetRecord::Expansion { size, expansion } => check_expansion(g, expansion, *size, "expansion"),
        GadgetRecord::Unit(u) => check_unit(g, u, None),
        GadgetRecord::Web(w) => check_web(g, w),
        GadgetRecord::Adjuster(a) => check_adjuster(g, a),
        GadgetRecord::Octopus(o) => check_octopus(g, o),
    };
    match r {
        Ok(()) => GadgetVerdict::Valid,
        Err((clause, detail)) => GadgetVerdict::Invalid { clause, detail },
    }
}

fn check_path(g: &HostGraph, p: &Path, from: Vertex, to: Vertex, max: usize, clause: &str) -> Check {
    if let Err(e) = p.validate(g) {
        return fail(clause, e);
    }
    if p.start() != from || p.end() != to {
        return fail(clause, format!("path {:?} does not join {from} and {to}", p.vertices()));
    }
    if p.len() > max {
        return fail(clause, format!("path of length {} exceeds {max}", p.len()));
    }
    Ok(())
}

/// Paths sharing a common start must meet only there.
fn check_fan(paths: &[Path], clause: &str) -> Check {
    let mut seen = std::collections::HashMap::new();
    for (i, p) in paths.iter().enumerate() {
        for &v in &p.vertices()[1..] {
            if let Some(j) = seen.insert(v, i) {
                return fail(clause, format!("branches {j} and {i} share vertex {v}"));
            }
        }
    }
    Ok(())
}

pub(crate) fn check_expansion(g: &HostGraph, e: &Expansion, size: usize, clause: &str) -> Check {
    if e.vertices.check_range(g.n()).is_err() {
        return fail(clause, "vertex out of range");
    }
    if e.vertices.len() != size {
        return fail(clause, format!("|F| = {} but D = {size}", e.vertices.len()));
    }
    if !e.vertices.contains(e.center) {
        return fail(clause, "centre not in F");
    }
    let blocked: Vec<bool> = (0..g.n()).map(|v| !e.vertices.contains(v)).collect();
    let dist = g.distances(&[e.center], &blocked);
    if let Some(v) = e.vertices.iter().find(|&v| dist[v] > e.radius) {
        return fail(clause, format!("vertex {v} farther than {} from the centre inside F", e.radius));
    }
    Ok(())
}

fn check_unit(g: &HostGraph, u: &Unit, expect_h1: Option<usize>) -> Check {
    let h1 = u.branches.len();
    if u.stars.len() != h1 || expect_h1.is_some_and(|e| e != h1) {
        return fail("unit: h1", format!("{} branches, {} stars", h1, u.stars.len()));
    }
    let mut distinct: Vec<Vertex> = u.stars.iter().map(|s| s.center).collect();
    distinct.push(u.core);
    let before = distinct.len();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != before {
        return fail("unit: distinct core and centres", "core and star centres must be distinct");
    }
    for (p, s) in u.branches.iter().zip(&u.stars) {
        check_path(g, p, u.core, s.center, u.h3, "unit: branch")?;
    }
    check_fan(&u.branches, "unit: branches internally disjoint")?;
    let mut star_vertices = std::collections::HashSet::new();
    for s in &u.stars {
        if s.leaves.len() != u.h2 {
            return fail("unit: h2-star", format!("star at {} has {} leaves, want {}", s.center, s.leaves.len(), u.h2));
        }
        for &l in std::iter::once(&s.center).chain(&s.leaves) {
            if !star_vertices.insert(l) {
                return fail("unit: stars vertex-disjoint", format!("vertex {l} in two stars"));
            }
        }
        if let Some(&l) = s.leaves.iter().find(|&&l| !g.has_edge(s.center, l)) {
            return fail("unit: h2-star", format!("leaf {l} not adjacent to centre {}", s.center));
        }
    }
    let on_paths: VertexSet = u.branches.iter().flat_map(|p| p.vertices().iter().copied()).collect();
    if let Some(l) = u.ext().iter().find(|&l| on_paths.contains(l)) {
        return fail("unit: leaves avoid branches", format!("leaf {l} lies on a branch"));
    }
    Ok(())
}

fn check_web(g: &HostGraph, w: &Web) -> Check {
    if w.units.len() != w.branches.len() {
        return fail("web: h0", "branch and unit counts differ");
    }
    for (q, u) in w.branches.iter().zip(&w.units) {
        check_path(g, q, w.core, u.core, w.h3, "web: branch")?;
        if u.h2 != w.h2 || u.h3 != w.h3 {
            return fail("web: unit parameters", format!("unit at {} has different (h2,h3)", u.core));
        }
        check_unit(g, u, Some(w.h1))?;
    }
    check_fan(&w.branches, "web: branches internally disjoint")?;
    let mut cores: Vec<Vertex> = w.units.iter().map(|u| u.core).collect();
    cores.push(w.core);
    let before = cores.len();
    cores.sort_unstable();
    cores.dedup();
    if cores.len() != before {
        return fail("web: distinct cores", "core vertices repeat");
    }
    let mut owner = std::collections::HashMap::new();
    for (i, u) in w.units.iter().enumerate() {
        for v in u.vertices().iter() {
            if let Some(j) = owner.insert(v, i) {
                return fail("web: units vertex-disjoint", format!("units {j} and {i} share {v}"));
            }
        }
    }
    let ctr = w.ctr();
    for u in &w.units {
        if let Some(v) = u.vertices().iter().find(|&v| v != u.core && ctr.contains(v)) {
            return fail("web: units avoid branches", format!("vertex {v} of unit at {} lies on a branch", u.core));
        }
    }
    Ok(())
}

/// Whether `G[A + v1 + v2]` has `v1,v2`-paths of every length `ell + 2i`, `i <= k`.
/// `None` when the search budget ran out.
fn ladder_holds(g: &HostGraph, a: &Adjuster, ell: usize, budget: u64) -> Option<bool> {
    let blocked: Vec<bool> = (0..g.n()).map(|v| !(a.centers.contains(v) || v == a.v1 || v == a.v2)).collect();
    for i in 0..=a.k {
        match routing::path_of_length_masked(g, a.v1, a.v2, ell + 2 * i, &blocked, true, budget) {
            LengthSearch::Found(_) => {}
            LengthSearch::Exhausted => return Some(false),
            LengthSearch::BudgetExceeded => return None,
        }
    }
    Some(true)
}

fn check_adjuster(g: &HostGraph, a: &Adjuster) -> Check {
    if a.centers.check_range(g.n()).is_err() {
        return fail("A1", "centre vertex out of range");
    }
    if !a.centers.is_disjoint(&a.f1.vertices) || !a.centers.is_disjoint(&a.f2.vertices) || !a.f1.vertices.is_disjoint(&a.f2.vertices) {
        return fail("A1", "A, V(F1), V(F2) are not pairwise disjoint");
    }
    if a.f1.center != a.v1 || a.f2.center != a.v2 {
        return fail("A2", "expansions are not centred at the core vertices");
    }
    let d = a.f1.vertices.len();
    check_expansion(g, &a.f1, d, "A2")?;
    check_expansion(g, &a.f2, d, "A2")?;
    if a.f1.radius > a.m || a.f2.radius > a.m {
        return fail("A2", format!("expansion radius exceeds m = {}", a.m));
    }
    if a.centers.len() > 10 * a.m * a.k {
        return fail("A3", format!("|A| = {} > 10mk = {}", a.centers.len(), 10 * a.m * a.k));
    }
    if a.witnesses.len() != a.k + 1 {
        return fail("A4", format!("{} witnesses for k = {}", a.witnesses.len(), a.k));
    }
    for (i, w) in a.witnesses.iter().enumerate() {
        check_path(g, w, a.v1, a.v2, usize::MAX, "A4")?;
        if w.len() != a.ell + 2 * i {
            return fail("A4", format!("witness {i} has length {}, want {}", w.len(), a.ell + 2 * i));
        }
        if let Some(&v) = w.interior().iter().find(|&&v| !a.centers.contains(v)) {
            return fail("A4", format!("witness {i} leaves A at {v}"));
        }
    }
    match ladder_holds(g, a, a.ell, VALIDATOR_BUDGET) {
        Some(true) => {}
        Some(false) => return fail("A4", format!("no complete ladder from {}", a.ell)),
        None => return fail("A4", "search budget exhausted"),
    }
    for shorter in 0..a.ell {
        match ladder_holds(g, a, shorter, VALIDATOR_BUDGET) {
            Some(false) => {}
            Some(true) => return fail("ell minimal", format!("a complete ladder already starts at {shorter}")),
            None => return fail("ell minimal", "search budget exhausted"),
        }
    }
    Ok(())
}

fn check_octopus(g: &HostGraph, o: &Octopus) -> Check {
    if o.end != 1 && o.end != 2 {
        return fail("octopus: end", "end must be 1 or 2");
    }
    if o.core.k != 1 {
        return fail("octopus: core", "core adjuster must be simple");
    }
    check_adjuster(g, &o.core).map_err(|(c, d)| (format!("octopus core {c}"), d))?;
    let core_v = o.core.vertices();
    let mut seen = core_v.clone();
    for (i, a) in o.family.iter().enumerate() {
        if a.k != 1 {
            return fail("octopus: family", format!("adjuster {i} is not simple"));
        }
        check_adjuster(g, a).map_err(|(c, d)| (format!("octopus family {i} {c}"), d))?;
        let av = a.vertices();
        if !av.is_disjoint(&seen) {
            return fail("octopus: family disjoint", format!("adjuster {i} meets the core or another member"));
        }
        seen = seen.union(&av);
    }
    if o.paths.len() > o.family.len() {
        return fail("octopus: paths", "more paths than family members");
    }
    let centers: VertexSet = std::iter::once(&o.core).chain(&o.family).flat_map(|a| a.centers.iter().collect::<Vec<_>>()).collect();
    let mut interiors = std::collections::HashSet::new();
    for (i, p) in o.paths.iter().enumerate() {
        if let Err(e) = p.validate(g) {
            return fail("octopus: paths", e);
        }
        if p.len() > o.r4 {
            return fail("octopus: paths", format!("path {i} longer than {}", o.r4));
        }
        if let Some(&v) = p.vertices().iter().find(|&&v| centers.contains(v)) {
            return fail("octopus: paths avoid centres", format!("path {i} uses centre vertex {v}"));
        }
        for &v in p.interior() {
            if !interiors.insert(v) {
                return fail("octopus: paths internally disjoint", format!("interior vertex {v} repeated"));
            }
        }
    }
    for (i, p) in o.paths.iter().enumerate() {
        if let Some(&v) = p.vertices().iter().find(|&&v| interiors.contains(&v) && !p.interior().contains(&v)) {
            return fail("octopus: paths internally disjoint", format!("path {i} endpoint {v} is interior elsewhere"));
        }
    }
    let r = &o.core.end(o.end).vertices;
    for (i, a) in o.family.iter().enumerate() {
        let linked = o.paths.iter().any(|p| {
            let vs = p.vertices();
            vs.iter().any(|&v| r.contains(v)) && vs.iter().any(|&v| a.f1.vertices.contains(v) || a.f2.vertices.contains(v))
        });
        if !linked {
            return fail("octopus: family linked", format!("adjuster {i} has no end joined to R"));
        }
    }
    Ok(())
}

