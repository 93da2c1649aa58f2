//! Undirected simple graphs, vertex sets, degree statistics and neighbourhood balls.

use std::collections::VecDeque;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub type Vertex = usize;

pub const UNREACHED: usize = usize::MAX;

/// Sorted, duplicate-free set of vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    pub fn from_mask(mask: &[bool]) -> Self {
        VertexSet(mask.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v).collect())
    }

    /// Checks that every id is below `n`.
    pub fn check_range(&self, n: usize) -> Result<()> {
        match self.0.last() {
            Some(&v) if v >= n => invalid(format!("vertex {v} out of range for n={n}")),
            _ => Ok(()),
        }
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.0 {
            mask[v] = true;
        }
        mask
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        self.iter().filter(|&v| !other.contains(v)).collect()
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl From<Vec<Vertex>> for VertexSet {
    fn from(v: Vec<Vertex>) -> Self {
        v.into_iter().collect()
    }
}

/// Immutable simple graph on `0..n` with an optional two-colouring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostGraph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
    sides: Option<Vec<u8>>,
}

impl HostGraph {
    /// Builds a graph, rejecting loops, duplicate edges and out-of-range ids.
    pub fn from_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return invalid(format!("edge ({u},{v}) out of range for n={n}"));
            }
            if u == v {
                return invalid(format!("loop at {u}"));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return invalid(format!("duplicate edge ({},{})", u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(HostGraph { adj, edge_count: edges.len(), sides: None })
    }

    pub fn empty(n: usize) -> Self {
        HostGraph { adj: vec![Vec::new(); n], edge_count: 0, sides: None }
    }

    /// Attaches a two-colouring; every edge must cross it.
    pub fn with_bipartition(mut self, sides: Vec<u8>) -> Result<Self> {
        if sides.len() != self.n() {
            return invalid("side assignment length differs from n");
        }
        if sides.iter().any(|&s| s > 1) {
            return invalid("sides must be 0 or 1");
        }
        if let Some((u, v)) = self.edges().find(|&(u, v)| sides[u] == sides[v]) {
            return invalid(format!("edge ({u},{v}) does not cross the bipartition"));
        }
        self.sides = Some(sides);
        Ok(self)
    }

    /// Attaches a two-colouring if the graph is bipartite.
    pub fn with_detected_bipartition(self) -> Self {
        match self.two_coloring() {
            Some(c) => self.with_bipartition(c).expect("proper colouring"),
            None => self,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && v < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn sides(&self) -> Option<&[u8]> {
        self.sides.as_deref()
    }

    pub fn side(&self, v: Vertex) -> Option<u8> {
        self.sides.as_ref().map(|s| s[v])
    }

    pub fn is_bipartite(&self) -> bool {
        self.sides.is_some() || self.two_coloring().is_some()
    }

    /// BFS two-colouring, lowest id of each component on side 0.
    pub fn two_coloring(&self) -> Option<Vec<u8>> {
        let n = self.n();
        let mut color = vec![u8::MAX; n];
        let mut queue = VecDeque::new();
        for s in 0..n {
            if color[s] != u8::MAX {
                continue;
            }
            color[s] = 0;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[u];
                        queue.push_back(w);
                    } else if color[w] == color[u] {
                        return None;
                    }
                }
            }
        }
        Some(color)
    }

    /// Subgraph induced on `keep` (any order, deduplicated). Returns the graph and the
    /// map from new ids to old ids, which is sorted ascending.
    pub fn induced(&self, keep: &VertexSet) -> (HostGraph, Vec<Vertex>) {
        let map: Vec<Vertex> = keep.as_slice().to_vec();
        let mut index = vec![UNREACHED; self.n()];
        for (i, &v) in map.iter().enumerate() {
            index[v] = i;
        }
        let mut adj = vec![Vec::new(); map.len()];
        let mut edge_count = 0;
        for (i, &v) in map.iter().enumerate() {
            for &w in &self.adj[v] {
                if index[w] != UNREACHED {
                    adj[i].push(index[w]);
                    if index[w] > i {
                        edge_count += 1;
                    }
                }
            }
        }
        let sides = self.sides.as_ref().map(|s| map.iter().map(|&v| s[v]).collect());
        (HostGraph { adj, edge_count, sides }, map)
    }

    /// Spanning subgraph keeping the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(Vertex, Vertex) -> bool) -> HostGraph {
        let mut adj = vec![Vec::new(); self.n()];
        let mut edge_count = 0;
        for (u, v) in self.edges() {
            if keep(u, v) {
                adj[u].push(v);
                adj[v].push(u);
                edge_count += 1;
            }
        }
        for l in &mut adj {
            l.sort_unstable();
        }
        HostGraph { adj, edge_count, sides: self.sides.clone() }
    }

    /// BFS distances from `sources` in the graph minus `blocked`. Unreached vertices get
    /// [`UNREACHED`]. Sources are never treated as blocked.
    pub fn distances(&self, sources: &[Vertex], blocked: &[bool]) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s] == UNREACHED {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == UNREACHED && !blocked[w] {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Connected components of the subgraph induced by `within`, each sorted, ordered by
    /// smallest member.
    pub fn components(&self, within: &[bool]) -> Vec<Vec<Vertex>> {
        let mut seen = vec![false; self.n()];
        let mut out = Vec::new();
        for s in 0..self.n() {
            if !within[s] || seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if within[w] && !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// External neighbourhood `N(X)` of a vertex mask.
    pub fn boundary(&self, set: &[bool]) -> Vec<Vertex> {
        let mut mark = vec![false; self.n()];
        let mut out = Vec::new();
        for u in (0..self.n()).filter(|&u| set[u]) {
            for &w in &self.adj[u] {
                if !set[w] && !mark[w] {
                    mark[w] = true;
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

impl Serialize for HostGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("HostGraph", 3)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("edges", &self.edges().collect::<Vec<_>>())?;
        st.serialize_field("sides", &self.sides())?;
        st.end()
    }
}

/// Exact degree statistics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub avg: Ratio<u64>,
    pub min: usize,
    pub max: usize,
}

pub fn stats(g: &HostGraph) -> Result<DegreeStats> {
    if g.n() == 0 {
        return invalid("statistics of the empty graph are undefined");
    }
    let degs = (0..g.n()).map(|v| g.degree(v));
    Ok(DegreeStats {
        avg: average_degree(g),
        min: degs.clone().min().unwrap_or(0),
        max: degs.max().unwrap_or(0),
    })
}

/// `2e/n`, zero for the empty graph.
pub fn average_degree(g: &HostGraph) -> Ratio<u64> {
    if g.n() == 0 {
        Ratio::from_integer(0)
    } else {
        Ratio::new(2 * g.edge_count() as u64, g.n() as u64)
    }
}

pub fn ratio_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `e(A,B) / (|A||B|)` for disjoint nonempty sets.
pub fn pair_density(g: &HostGraph, a: &VertexSet, b: &VertexSet) -> Result<Ratio<u64>> {
    a.check_range(g.n())?;
    b.check_range(g.n())?;
    if a.is_empty() || b.is_empty() {
        return invalid("pair density needs nonempty sides");
    }
    if !a.is_disjoint(b) {
        return invalid("pair density needs disjoint sides");
    }
    let e: usize = a.iter().map(|u| g.neighbors(u).iter().filter(|&&w| b.contains(w)).count()).sum();
    Ok(Ratio::new(e as u64, (a.len() * b.len()) as u64))
}

pub fn codegree(g: &HostGraph, u: Vertex, v: Vertex) -> Result<usize> {
    if u >= g.n() || v >= g.n() {
        return invalid("vertex out of range");
    }
    if u == v {
        return invalid("codegree needs distinct vertices");
    }
    let (a, b) = (g.neighbors(u), g.neighbors(v));
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    Ok(c)
}

/// Distance layers `N^0(W), N^1(W), ...` up to radius `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub layers: Vec<Vec<Vertex>>,
}

impl Ball {
    pub fn vertices(&self) -> VertexSet {
        self.layers.iter().flatten().copied().collect()
    }

    pub fn size(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }
}

pub fn ball(g: &HostGraph, w: &VertexSet, r: usize) -> Result<Ball> {
    ball_avoiding(g, w, r, &vec![false; g.n()])
}

/// Ball of radius `r` around `w` in `G - blocked`.
pub fn ball_avoiding(g: &HostGraph, w: &VertexSet, r: usize, blocked: &[bool]) -> Result<Ball> {
    w.check_range(g.n())?;
    if w.is_empty() {
        return invalid("ball needs a nonempty centre set");
    }
    let dist = g.distances(w.as_slice(), blocked);
    let mut layers = vec![Vec::new(); r + 1];
    for (v, &d) in dist.iter().enumerate() {
        if d <= r {
            layers[d].push(v);
        }
    }
    while layers.len() > 1 && layers.last().is_some_and(Vec::is_empty) {
        layers.pop();
    }
    Ok(Ball { layers })
}

/// Spanning bipartite subgraph with at least half the edges, from a locally optimal cut.
/// A graph that is already bipartite is returned whole with its colouring.
pub fn max_cut_bipartite(g: &HostGraph) -> HostGraph {
    if let Some(sides) = g.sides().map(<[u8]>::to_vec).or_else(|| g.two_coloring()) {
        return g.clone().with_bipartition(sides).expect("proper colouring");
    }
    let side = local_max_cut(g);
    g.filter_edges(|u, v| side[u] != side[v])
        .with_bipartition(side)
        .expect("cut edges cross")
}

/// Local search from a BFS-parity start: flip any vertex with more same-side than
/// cross neighbours until none remains. Every vertex ends with at least half its edges cut.
pub fn local_max_cut(g: &HostGraph) -> Vec<u8> {
    let n = g.n();
    let dist = {
        let mut side = vec![0u8; n];
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let d = g.distances(&[s], &vec![false; n]);
            for v in 0..n {
                if d[v] != UNREACHED && !seen[v] {
                    seen[v] = true;
                    side[v] = (d[v] % 2) as u8;
                }
            }
        }
        side
    };
    let mut side = dist;
    loop {
        let mut changed = false;
        for v in 0..n {
            let same = g.neighbors(v).iter().filter(|&&w| side[w] == side[v]).count();
            if 2 * same > g.degree(v) {
                side[v] ^= 1;
                changed = true;
            }
        }
        if !changed {
            return side;
        }
    }
}
