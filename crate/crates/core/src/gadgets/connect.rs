use serde::Serialize;

use super::adjuster::SEARCH_BUDGET;
use super::Expansion;
use crate::error::{invalid, Result};
use crate::graph::{HostGraph, Vertex, VertexSet, UNREACHED};
use crate::routing::{path_of_length_masked, shortest_path, LengthSearch, Path};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Linked {
    /// From a vertex of `Z1` to the centre of `I1`.
    pub p: Path,
    /// From a vertex of `Z2` to the centre of `I2`.
    pub q: Path,
    pub total: usize,
    pub window: (usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, thiserror::Error)]
#[serde(tag = "stage", rename_all = "snake_case")]
pub enum LinkFailure {
    #[error("no path from Z1 into I1")]
    NoFirstPath,
    #[error("no completion in window [{lo}, {hi}]; closest total reached was {best:?}")]
    WindowMiss { lo: usize, hi: usize, best: Option<usize> },
}

/// Path from `from` to the centre of `f` inside `G[V(f)]`.
fn into_center(g: &HostGraph, f: &Expansion, from: Vertex) -> Path {
    let n = g.n();
    let block: Vec<bool> = (0..n).map(|v| !f.vertices.contains(v)).collect();
    let mut t = vec![false; n];
    t[f.center] = true;
    shortest_path(g, &[from], &t, &block, usize::MAX).expect("expansions are connected")
}

/// Vertex-disjoint paths `P` (from `Z1` to the centre of `I1`) and `Q` (from `Z2` to the
/// centre of `I2`) in `G - avoid` with `ell <= |P| + |Q| <= ell + 18m`.
///
/// `P` is first a shortest path into `I1` extended inside it; `Q` is then searched by
/// exact length inside the window. If that misses, `P` itself is lengthened one step at
/// a time by exact-length search before `Q` is retried.
#[allow(clippy::too_many_arguments)]
pub fn adjust_connect(
    g: &HostGraph,
    avoid: &VertexSet,
    z1: &VertexSet,
    z2: &VertexSet,
    i1: &Expansion,
    i2: &Expansion,
    ell: usize,
    m: usize,
) -> Result<std::result::Result<Linked, LinkFailure>> {
    let n = g.n();
    let sets = [avoid, z1, z2, &i1.vertices, &i2.vertices];
    for s in sets {
        s.check_range(n)?;
    }
    for a in 0..sets.len() {
        for b in a + 1..sets.len() {
            if !sets[a].is_disjoint(sets[b]) {
                return invalid("avoid, Z1, Z2, I1 and I2 must be pairwise disjoint");
            }
        }
    }
    if z1.is_empty() || z2.is_empty() {
        return invalid("Z1 and Z2 must be nonempty");
    }
    let (lo, hi) = (ell, ell + 18 * m);
    let mut p_block = avoid.to_mask(n);
    for v in z2.iter().chain(i2.vertices.iter()) {
        p_block[v] = true;
    }
    let first = shortest_path(g, z1.as_slice(), &i1.vertices.to_mask(n), &p_block, usize::MAX).map(|bridge| {
        let tail = into_center(g, i1, bridge.end());
        bridge.join(&tail)
    });
    let Some(first) = first else { return Ok(Err(LinkFailure::NoFirstPath)) };

    let mut best: Option<usize> = None;
    let mut note = |total: usize| {
        let gap = |t: usize| if t < lo { lo - t } else { t.saturating_sub(hi) };
        if best.is_none_or(|b| gap(total) < gap(b)) {
            best = Some(total);
        }
    };
    let mut candidates = vec![first.clone()];
    // Longer P candidates, from each start in Z1, by exact length.
    let longer = |len: usize| -> Vec<Path> {
        let mut out = Vec::new();
        for s in z1.iter() {
            let mut block = p_block.clone();
            for z in z1.iter().filter(|&z| z != s) {
                block[z] = true;
            }
            if let LengthSearch::Found(p) = path_of_length_masked(g, s, i1.center, len, &block, true, SEARCH_BUDGET) {
                out.push(p);
                break;
            }
        }
        out
    };
    let mut len = first.len();
    while len <= hi {
        for p in candidates.drain(..) {
            if p.len() > hi {
                continue;
            }
            let mut q_block = avoid.to_mask(n);
            for &v in p.vertices().iter().chain(z1.as_slice()).chain(i1.vertices.as_slice()) {
                q_block[v] = true;
            }
            let need_lo = lo.saturating_sub(p.len());
            let need_hi = hi - p.len();
            for z in z2.iter() {
                let d = g.distances(&[z], &q_block)[i2.center];
                if d == UNREACHED {
                    continue;
                }
                note(p.len() + d);
                for q_len in need_lo.max(d)..=need_hi {
                    if let LengthSearch::Found(q) = path_of_length_masked(g, z, i2.center, q_len, &q_block, true, SEARCH_BUDGET) {
                        let total = p.len() + q.len();
                        return Ok(Ok(Linked { p, q, total, window: (lo, hi) }));
                    }
                }
            }
        }
        len += 1;
        candidates = longer(len);
    }
    Ok(Err(LinkFailure::WindowMiss { lo, hi, best }))
}
