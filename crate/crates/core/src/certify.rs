//! Subdivision certificates, their verifier, and an exhaustive search oracle for small hosts.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::graph::{HostGraph, Vertex};
use crate::routing::Path;

/// Length law of a certificate. `Balanced(l)`: every path has exactly `l` internal vertices.
/// `Bounded(l)`: every path has at most `l` internal vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "mode", content = "ell", rename_all = "snake_case")]
pub enum Mode {
    Balanced(usize),
    Bounded(usize),
}

impl Mode {
    pub fn ell(self) -> usize {
        match self {
            Mode::Balanced(l) | Mode::Bounded(l) => l,
        }
    }

    pub fn admits(self, path_len: usize) -> bool {
        match self {
            Mode::Balanced(l) => path_len == l + 1,
            Mode::Bounded(l) => path_len >= 1 && path_len <= l + 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgePath {
    pub edge: (Vertex, Vertex),
    pub vertices: Vec<Vertex>,
}

/// Branch-vertex injection plus one host path per pattern edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RawCertificate", try_from = "RawCertificate")]
pub struct SubdivisionCertificate {
    pub mode: Mode,
    /// `(h, g)` pairs: pattern vertex `h` sits at host vertex `g`.
    pub branch_map: Vec<(Vertex, Vertex)>,
    pub paths: Vec<EdgePath>,
}

#[derive(Serialize, Deserialize)]
struct RawCertificate {
    mode: String,
    ell: usize,
    branch_map: Vec<(Vertex, Vertex)>,
    paths: Vec<EdgePath>,
}

impl From<SubdivisionCertificate> for RawCertificate {
    fn from(c: SubdivisionCertificate) -> Self {
        let mode = match c.mode {
            Mode::Balanced(_) => "balanced",
            Mode::Bounded(_) => "bounded",
        };
        RawCertificate { mode: mode.into(), ell: c.mode.ell(), branch_map: c.branch_map, paths: c.paths }
    }
}

impl TryFrom<RawCertificate> for SubdivisionCertificate {
    type Error = String;

    fn try_from(r: RawCertificate) -> std::result::Result<Self, String> {
        let mode = match r.mode.as_str() {
            "balanced" => Mode::Balanced(r.ell),
            "bounded" => Mode::Bounded(r.ell),
            other => return Err(format!("unknown mode {other:?}")),
        };
        Ok(SubdivisionCertificate { mode, branch_map: r.branch_map, paths: r.paths })
    }
}

impl SubdivisionCertificate {
    pub fn from_parts(mode: Mode, branch: &[Vertex], h: &HostGraph, paths: Vec<Path>) -> Self {
        let edges: Vec<_> = h.edges().collect();
        debug_assert_eq!(edges.len(), paths.len());
        SubdivisionCertificate {
            mode,
            branch_map: branch.iter().copied().enumerate().collect(),
            paths: edges.into_iter().zip(paths).map(|(edge, p)| EdgePath { edge, vertices: p.0 }).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    /// Longest path length (in edges).
    pub fn max_path_len(&self) -> usize {
        self.paths.iter().map(|p| p.vertices.len().saturating_sub(1)).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    BranchMapSize { expected: usize, got: usize },
    BranchVertexUnknown(Vertex),
    BranchVertexRepeated(Vertex),
    BranchImageOutOfRange(Vertex),
    BranchNotInjective(Vertex),
    PathForNonEdge(Vertex, Vertex),
    DuplicatePath(Vertex, Vertex),
    MissingPath(Vertex, Vertex),
    WrongEndpoints(Vertex, Vertex),
    InvalidPath { edge: (Vertex, Vertex), reason: String },
    InteriorShared(Vertex),
    InteriorHitsBranch(Vertex),
    LengthLaw { edge: (Vertex, Vertex), len: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CertVerdict {
    Accept,
    Reject(Violation),
}

impl CertVerdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, CertVerdict::Accept)
    }
}

fn norm(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

/// Checks every clause of the certificate, returning the first violation.
pub fn verify_subdivision(g: &HostGraph, h: &HostGraph, cert: &SubdivisionCertificate) -> CertVerdict {
    match verify_inner(g, h, cert) {
        Ok(()) => CertVerdict::Accept,
        Err(v) => CertVerdict::Reject(v),
    }
}

fn verify_inner(g: &HostGraph, h: &HostGraph, cert: &SubdivisionCertificate) -> std::result::Result<(), Violation> {
    if cert.branch_map.len() != h.n() {
        return Err(Violation::BranchMapSize { expected: h.n(), got: cert.branch_map.len() });
    }
    let mut image = vec![usize::MAX; h.n()];
    let mut owner = vec![usize::MAX; g.n()];
    for &(x, y) in &cert.branch_map {
        if x >= h.n() {
            return Err(Violation::BranchVertexUnknown(x));
        }
        if image[x] != usize::MAX {
            return Err(Violation::BranchVertexRepeated(x));
        }
        if y >= g.n() {
            return Err(Violation::BranchImageOutOfRange(y));
        }
        if owner[y] != usize::MAX {
            return Err(Violation::BranchNotInjective(y));
        }
        image[x] = y;
        owner[y] = x;
    }
    let mut covered = std::collections::HashSet::new();
    // Occupancy: 0 free, 1 branch image, 2 interior.
    let mut occ = vec![0u8; g.n()];
    for &y in &image {
        occ[y] = 1;
    }
    for ep in &cert.paths {
        let (x, y) = ep.edge;
        if x >= h.n() || y >= h.n() || !h.has_edge(x, y) {
            return Err(Violation::PathForNonEdge(x, y));
        }
        if !covered.insert(norm(x, y)) {
            return Err(Violation::DuplicatePath(x, y));
        }
        let p = Path(ep.vertices.clone());
        if let Err(reason) = p.validate(g) {
            return Err(Violation::InvalidPath { edge: ep.edge, reason });
        }
        if p.start() != image[x] || p.end() != image[y] {
            return Err(Violation::WrongEndpoints(x, y));
        }
        for &v in p.interior() {
            match occ[v] {
                1 => return Err(Violation::InteriorHitsBranch(v)),
                2 => return Err(Violation::InteriorShared(v)),
                _ => occ[v] = 2,
            }
        }
        if !cert.mode.admits(p.len()) {
            return Err(Violation::LengthLaw { edge: ep.edge, len: p.len() });
        }
    }
    if let Some((x, y)) = h.edges().find(|e| !covered.contains(e)) {
        return Err(Violation::MissingPath(x, y));
    }
    Ok(())
}

pub const ORACLE_MAX_HOST: usize = 12;
pub const ORACLE_MAX_PATTERN: usize = 4;
pub const ORACLE_MAX_PATH: usize = 6;

/// Exhaustive search over branch injections and edge paths. `Ok(None)` is a proof of absence.
pub fn brute_force_subdivision(g: &HostGraph, h: &HostGraph, mode: Mode) -> Result<Option<SubdivisionCertificate>> {
    if g.n() > ORACLE_MAX_HOST || h.n() > ORACLE_MAX_PATTERN || mode.ell() + 1 > ORACLE_MAX_PATH {
        return invalid(format!(
            "oracle limited to |V(G)| <= {ORACLE_MAX_HOST}, |V(H)| <= {ORACLE_MAX_PATTERN}, path length <= {ORACLE_MAX_PATH}"
        ));
    }
    if h.n() > g.n() {
        return Ok(None);
    }
    let edges: Vec<(Vertex, Vertex)> = h.edges().collect();
    let mut s = Oracle { g, edges: &edges, mode, image: vec![usize::MAX; h.n()], occ: vec![false; g.n()], paths: Vec::new() };
    if s.assign(0, h.n()) {
        let branch = s.image.clone();
        Ok(Some(SubdivisionCertificate::from_parts(mode, &branch, h, s.paths.into_iter().map(Path).collect())))
    } else {
        Ok(None)
    }
}

struct Oracle<'a> {
    g: &'a HostGraph,
    edges: &'a [(Vertex, Vertex)],
    mode: Mode,
    image: Vec<Vertex>,
    occ: Vec<bool>,
    paths: Vec<Vec<Vertex>>,
}

impl Oracle<'_> {
    fn assign(&mut self, x: usize, hn: usize) -> bool {
        if x == hn {
            return self.route(0);
        }
        for y in 0..self.g.n() {
            if self.occ[y] {
                continue;
            }
            self.occ[y] = true;
            self.image[x] = y;
            if self.assign(x + 1, hn) {
                return true;
            }
            self.occ[y] = false;
        }
        self.image[x] = usize::MAX;
        false
    }

    fn route(&mut self, i: usize) -> bool {
        if i == self.edges.len() {
            return true;
        }
        let (a, b) = (self.image[self.edges[i].0], self.image[self.edges[i].1]);
        let max = self.mode.ell() + 1;
        let mut path = vec![a];
        self.extend(i, b, max, &mut path)
    }

    fn extend(&mut self, i: usize, target: Vertex, max: usize, path: &mut Vec<Vertex>) -> bool {
        let x = *path.last().unwrap();
        let len = path.len() - 1;
        for &w in self.g.neighbors(x) {
            if w == target {
                if self.mode.admits(len + 1) {
                    path.push(w);
                    self.paths.push(path.clone());
                    if self.route(i + 1) {
                        return true;
                    }
                    self.paths.pop();
                    path.pop();
                }
                continue;
            }
            if self.occ[w] || len + 2 > max {
                continue;
            }
            self.occ[w] = true;
            path.push(w);
            if self.extend(i, target, max, path) {
                return true;
            }
            path.pop();
            self.occ[w] = false;
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> HostGraph {
        let e: Vec<_> = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
        HostGraph::from_edges(n, &e).unwrap()
    }

    fn k33() -> HostGraph {
        HostGraph::from_edges(6, &[(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)]).unwrap()
    }

    fn petersen() -> HostGraph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((5 + i, 5 + (i + 2) % 5));
        }
        let e: Vec<_> = e.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        HostGraph::from_edges(10, &e).unwrap()
    }

    fn c9_k3_cert() -> SubdivisionCertificate {
        SubdivisionCertificate {
            mode: Mode::Balanced(2),
            branch_map: vec![(0, 0), (1, 3), (2, 6)],
            paths: vec![
                EdgePath { edge: (0, 1), vertices: vec![0, 1, 2, 3] },
                EdgePath { edge: (0, 2), vertices: vec![0, 8, 7, 6] },
                EdgePath { edge: (1, 2), vertices: vec![3, 4, 5, 6] },
            ],
        }
    }

    #[test]
    fn c9_is_balanced_k3() {
        assert_eq!(verify_subdivision(&cycle(9), &cycle(3), &c9_k3_cert()), CertVerdict::Accept);
    }

    #[test]
    fn detour_breaks_length_law() {
        // C9 plus a 4-edge detour 3-9-10-11-6.
        let g = HostGraph::from_edges(12, &cycle(9).edges().chain([(3, 9), (9, 10), (10, 11), (6, 11)]).collect::<Vec<_>>()).unwrap();
        let mut c = c9_k3_cert();
        c.paths[2].vertices = vec![3, 9, 10, 11, 6];
        assert!(matches!(verify_subdivision(&g, &cycle(3), &c), CertVerdict::Reject(Violation::LengthLaw { .. })));
    }

    #[test]
    fn shared_interior_rejected() {
        let g = HostGraph::from_edges(5, &[(0, 4), (1, 4), (2, 4)]).unwrap();
        let h = HostGraph::from_edges(3, &[(0, 1), (0, 2)]).unwrap();
        let c = SubdivisionCertificate {
            mode: Mode::Balanced(1),
            branch_map: vec![(0, 0), (1, 1), (2, 2)],
            paths: vec![EdgePath { edge: (0, 1), vertices: vec![0, 4, 1] }, EdgePath { edge: (0, 2), vertices: vec![0, 4, 2] }],
        };
        assert_eq!(verify_subdivision(&g, &h, &c), CertVerdict::Reject(Violation::InteriorShared(4)));
    }

    #[test]
    fn malformed_certificates_never_panic() {
        let g = cycle(9);
        let h = cycle(3);
        let mut c = c9_k3_cert();
        c.branch_map[0] = (0, 99);
        assert!(!verify_subdivision(&g, &h, &c).is_accept());
        let mut c = c9_k3_cert();
        c.branch_map[1] = (1, 0);
        assert!(!verify_subdivision(&g, &h, &c).is_accept());
        let mut c = c9_k3_cert();
        c.paths[0].vertices.clear();
        assert!(!verify_subdivision(&g, &h, &c).is_accept());
        let mut c = c9_k3_cert();
        c.paths.pop();
        assert_eq!(verify_subdivision(&g, &h, &c), CertVerdict::Reject(Violation::MissingPath(1, 2)));
        let mut c = c9_k3_cert();
        c.paths[0].edge = (7, 8);
        assert!(!verify_subdivision(&g, &h, &c).is_accept());
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let c = c9_k3_cert();
        let s = c.to_json();
        assert!(s.contains("\"mode\": \"balanced\"") && s.contains("\"ell\": 2"));
        let back = SubdivisionCertificate::from_json(&s).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), s);
        assert!(SubdivisionCertificate::from_json(&s.replace("balanced", "weird")).is_err());
    }

    #[test]
    fn oracle_examples() {
        let k3 = cycle(3);
        let c = brute_force_subdivision(&k33(), &k3, Mode::Balanced(1)).unwrap().unwrap();
        assert!(verify_subdivision(&k33(), &k3, &c).is_accept());
        assert_eq!(brute_force_subdivision(&k33(), &k3, Mode::Balanced(0)).unwrap(), None);
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        let c = brute_force_subdivision(&p, &k3, Mode::Balanced(1)).unwrap().unwrap();
        assert!(verify_subdivision(&p, &k3, &c).is_accept());
        // Girth 5: no triangle, and a 5-cycle is a bounded-1 K3.
        assert_eq!(brute_force_subdivision(&p, &k3, Mode::Balanced(0)).unwrap(), None);
        assert!(brute_force_subdivision(&cycle(13), &k3, Mode::Bounded(1)).is_err());
    }
}
