//! Core-to-core connections through route objects: exact-length links (adjuster first,
//! then exact-length search) and bounded links.

use crate::config::RunConfig;
use crate::gadgets::{adjust_connect, chain_adjusters};
use crate::graph::{HostGraph, Vertex, VertexSet};
use crate::routing::{path_to_set_of_length, shortest_path, LengthSearch, Path};

/// Start vertices tried per exact-length link before giving up.
const START_TRIES: usize = 24;

pub(crate) struct Linker<'a> {
    pub g: &'a HostGraph,
    pub cfg: &'a RunConfig,
    pub m: usize,
    pub use_adjusters: bool,
}

/// How an exact link was found.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum LinkVia {
    Adjuster,
    Search,
}

/// Shortest available route to each distinct exterior vertex.
fn by_end(routes: &[Path]) -> Vec<&Path> {
    let mut v: Vec<&Path> = routes.iter().collect();
    v.sort_by_key(|p| (p.end(), p.len()));
    v.dedup_by_key(|p| p.end());
    v.sort_by_key(|p| (p.len(), p.end()));
    v
}

fn splice(parts: &[Path]) -> Path {
    let mut out = parts[0].clone();
    for p in &parts[1..] {
        out = out.join(p);
    }
    out
}

impl Linker<'_> {
    /// A path of exactly `len` edges from the core of `rx` to the core of `ry`. Each route
    /// runs from its object's core to an exterior vertex; `blocked` marks everything the
    /// middle segment must avoid, including both objects' interiors.
    pub fn exact(&self, rx: &[Path], ry: &[Path], len: usize, blocked: &[bool]) -> Option<(Path, LinkVia)> {
        let xs = by_end(rx);
        let ys = by_end(ry);
        if xs.is_empty() || ys.is_empty() {
            return None;
        }
        if self.use_adjusters {
            if let Some(p) = self.via_adjuster(&xs, &ys, len, blocked) {
                return Some((p, LinkVia::Adjuster));
            }
        }
        self.via_search(&xs, &ys, len, blocked).map(|p| (p, LinkVia::Search))
    }

    fn via_search(&self, xs: &[&Path], ys: &[&Path], len: usize, blocked: &[bool]) -> Option<Path> {
        let n = self.g.n();
        let mut classes: Vec<usize> = ys.iter().map(|p| p.len()).collect();
        classes.dedup();
        for rx in xs.iter().take(START_TRIES) {
            for &b in &classes {
                let Some(mid) = len.checked_sub(rx.len() + b) else {
                    continue;
                };
                if mid == 0 {
                    if let Some(ry) = ys.iter().find(|p| p.len() == b && p.end() == rx.end()) {
                        let full = rx.join(&ry.reversed());
                        if full.validate(self.g).is_ok() {
                            return Some(full);
                        }
                    }
                    continue;
                }
                let mut target = vec![false; n];
                for ry in ys.iter().filter(|p| p.len() == b && p.end() != rx.end()) {
                    target[ry.end()] = true;
                }
                let mut blk = blocked.to_vec();
                for &v in rx.vertices() {
                    blk[v] = true;
                }
                blk[rx.end()] = false;
                if let LengthSearch::Found(m) = path_to_set_of_length(self.g, rx.end(), &target, mid, &blk, self.cfg.path_budget) {
                    let ry = ys.iter().find(|p| p.len() == b && p.end() == m.end())?;
                    let full = splice(&[(*rx).clone(), m, ry.reversed()]);
                    if full.validate(self.g).is_ok() {
                        return Some(full);
                    }
                }
            }
        }
        None
    }

    fn via_adjuster(&self, xs: &[&Path], ys: &[&Path], len: usize, blocked: &[bool]) -> Option<Path> {
        let mut avoid_mask = blocked.to_vec();
        for p in xs.iter().chain(ys) {
            for &v in p.vertices() {
                avoid_mask[v] = true;
            }
        }
        let avoid = VertexSet::from_mask(&avoid_mask);
        let a = chain_adjusters(self.g, &avoid, self.cfg.adjuster_size, self.m, self.cfg.adjuster_range).ok()?.ok()?;
        let lo = xs.iter().map(|p| p.len()).min()? + ys.iter().map(|p| p.len()).min()?;
        let window = len.checked_sub(lo + a.ell + 2 * a.k).filter(|&w| w >= 2)?;
        let z1: VertexSet = xs.iter().map(|p| p.end()).collect();
        let z2: VertexSet = ys.iter().map(|p| p.end()).filter(|&v| !z1.contains(v)).collect();
        if z2.is_empty() {
            return None;
        }
        // Route interiors stay blocked; their ends become the link's endpoint sets.
        let mut inner = blocked.to_vec();
        for p in xs.iter().chain(ys) {
            for &v in &p.vertices()[..p.len()] {
                inner[v] = true;
            }
        }
        for v in a.vertices().iter().chain(z1.iter()).chain(z2.iter()) {
            inner[v] = false;
        }
        for v in a.centers.iter() {
            inner[v] = true;
        }
        let inner = VertexSet::from_mask(&inner);
        let linked = adjust_connect(self.g, &inner, &z1, &z2, &a.f1, &a.f2, window, self.m).ok()?.ok()?;
        let rx = xs.iter().find(|p| p.end() == linked.p.start())?;
        let ry = ys.iter().find(|p| p.end() == linked.q.start())?;
        let rung = len.checked_sub(rx.len() + linked.p.len() + a.ell + linked.q.len() + ry.len())?;
        if rung % 2 == 1 || rung / 2 > a.k {
            return None;
        }
        let full = splice(&[(*rx).clone(), linked.p.clone(), a.witnesses[rung / 2].clone(), linked.q.reversed(), ry.reversed()]);
        if full.len() == len && full.validate(self.g).is_ok() {
            Some(full)
        } else {
            None
        }
    }

    /// A shortest core-to-core path of at most `maxlen` edges whose middle avoids `blocked`.
    pub fn bounded(&self, rx: &[Path], ry: &[Path], maxlen: usize, blocked: &[bool]) -> Option<Path> {
        let xs = by_end(rx);
        let ys = by_end(ry);
        let n = self.g.n();
        let mut best: Option<Path> = None;
        let mut x_lens: Vec<usize> = xs.iter().map(|p| p.len()).collect();
        x_lens.dedup();
        for a in x_lens {
            let sources: Vec<Vertex> = xs.iter().filter(|p| p.len() == a).map(|p| p.end()).collect();
            let mut target = vec![false; n];
            for p in &ys {
                target[p.end()] = true;
            }
            let mut blk = blocked.to_vec();
            for p in &xs {
                for &v in p.vertices() {
                    blk[v] = true;
                }
            }
            let Some(cap) = maxlen.checked_sub(a + ys.first().map_or(0, |p| p.len())) else {
                continue;
            };
            let Some(mid) = shortest_path(self.g, &sources, &target, &blk, cap) else {
                continue;
            };
            let (Some(rx), Some(ry)) = (xs.iter().find(|p| p.end() == mid.start()), ys.iter().find(|p| p.end() == mid.end())) else {
                continue;
            };
            let full = splice(&[(*rx).clone(), mid, ry.reversed()]);
            if full.len() <= maxlen && full.validate(self.g).is_ok() && best.as_ref().is_none_or(|b| full.len() < b.len()) {
                best = Some(full);
            }
        }
        best
    }
}
