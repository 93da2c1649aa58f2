use subforge::certify::{verify_subdivision, Mode};
use subforge::embed::*;
use subforge::graph::{HostGraph, VertexSet};
use subforge::patterns::{biseparate, cartesian_power, gen_standard, Family};
use subforge::RunConfig;

fn graph(n: usize, edges: &[(usize, usize)]) -> HostGraph {
    HostGraph::from_edges(n, edges).unwrap()
}

fn clique(k: usize) -> HostGraph {
    gen_standard(&Family::Clique(k)).unwrap()
}

fn kab(a: usize, b: usize) -> HostGraph {
    gen_standard(&Family::CompleteBipartite(a, b)).unwrap()
}

fn assert_sound(g: &HostGraph, h: &HostGraph, out: &EmbeddingOutcome) {
    let cert = out.certificate.as_ref().expect("certificate");
    assert!(verify_subdivision(g, h, cert).is_accept());
    assert!(out.gate_rejection.is_none());
}

#[test]
fn drc_on_complete_bipartite_host() {
    let g = kab(120, 8000);
    let h = clique(4);
    let (out, choice) = drc_th3(&g, &h, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.mode, Some(Mode::Balanced(3)));
    assert!(out.certificate.unwrap().paths.iter().all(|p| p.vertices.len() == 5));
    let c = choice.unwrap();
    assert!(c.hypotheses_hold);
    assert!(!out.best_effort);
    assert_eq!(c.a.len(), 120);
}

#[test]
fn drc_single_edge() {
    let g = kab(20, 40);
    let h = graph(2, &[(0, 1)]);
    let (out, _) = drc_th3(&g, &h, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.certificate.unwrap().max_path_len(), 4);
}

#[test]
fn drc_flags_small_hosts() {
    let g = gen_standard(&Family::Cycle(8)).unwrap();
    let (out, _) = drc_th3(&g, &clique(4), &RunConfig::default()).unwrap();
    assert!(!out.is_certified());
    assert!(out.best_effort);
    assert!(!out.theory_violation);
}

#[test]
fn drc_rejects_odd_cycles() {
    assert!(drc_th3(&clique(5), &clique(3), &RunConfig::default()).is_err());
}

#[test]
fn dense_reduce_finds_no_witness_in_disjoint_cliques() {
    let cfg = RunConfig { m_override: Some(1), ..RunConfig::default() };
    let mut edges = Vec::new();
    for c in 0..3 {
        for i in 0..4 {
            for j in i + 1..4 {
                edges.push((4 * c + i, 4 * c + j));
            }
        }
    }
    let g = graph(12, &edges);
    match dense_reduce(&g, &clique(3), 0, &cfg).unwrap() {
        DenseReduction::Dense { exhaustive, .. } => assert!(exhaustive),
        other => panic!("expected a dense verdict, got {other:?}"),
    }
}

#[test]
fn dense_reduce_rescues_through_appendage() {
    // A small sparse core (a path on 6 vertices) joined to a dense bipartite appendage: the
    // appendage's small side is a witness whose removal leaves a sparse graph.
    let (a, b) = (12, 300);
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    let base = a + b;
    for i in 0..5 {
        edges.push((base + i, base + i + 1));
    }
    edges.push((0, base));
    let g = graph(base + 6, &edges);
    let cfg = RunConfig { m_override: Some(1), ..RunConfig::default() };
    let h = clique(3);
    match dense_reduce(&g, &h, 0, &cfg).unwrap() {
        DenseReduction::Embedded { outcome, witness } => {
            assert!(!witness.is_empty());
            assert_sound(&g, &h, &outcome);
            assert!(outcome.certificate.unwrap().max_path_len() <= 8);
        }
        other => panic!("expected a rescue, got {other:?}"),
    }
}

#[test]
fn large_degree_balanced_reports_parity() {
    let g = kab(40, 40);
    let h = clique(3);
    let cfg = RunConfig { large_degree_threshold: Some(30), m_override: Some(2), ..RunConfig::default() };
    let out = embed_large_degree(&g, &h, Mode::Balanced(5), &cfg).unwrap();
    assert_sound(&g, &h, &out);
    // Anchors share a side, so paths need an even length: ell 5 gives 6 edges as asked.
    assert_eq!(out.mode, Some(Mode::Balanced(5)));
    let out = embed_large_degree(&g, &h, Mode::Balanced(4), &cfg).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.mode, Some(Mode::Balanced(5)));
    assert!(out.stages.iter().any(|s| s.stage == "parity"));
}

#[test]
fn large_degree_bounded_matching() {
    let g = kab(40, 40);
    let h = graph(4, &[(0, 1), (2, 3)]);
    let cfg = RunConfig { large_degree_threshold: Some(30), m_override: Some(2), ..RunConfig::default() };
    let out = embed_large_degree(&g, &h, Mode::Bounded(3), &cfg).unwrap();
    assert_sound(&g, &h, &out);
}

#[test]
fn large_degree_needs_anchors() {
    let g = kab(10, 10);
    let err = embed_large_degree(&g, &clique(3), Mode::Bounded(3), &RunConfig::default());
    assert!(matches!(err, Err(subforge::Error::Precondition(_))));
}

fn p3() -> HostGraph {
    graph(3, &[(0, 1), (1, 2)])
}

fn small_cfg() -> RunConfig {
    RunConfig { unit_branches: 1, m_override: Some(2), ..RunConfig::default() }
}

#[test]
fn round1_with_empty_small_class() {
    let g = kab(30, 30);
    let h = graph(2, &[(0, 1)]);
    let split = degree_split(&h, SplitRule::Balanced, 1.0, 0.0);
    assert!(split.small.is_empty());
    let cfg = small_cfg();
    let asg = build_assignment(&g, &h, &split, &VertexSet::new(), Some(0), &cfg).unwrap().unwrap();
    let st = round1_good_path_system(&g, &h, &asg, Mode::Bounded(10), &cfg).unwrap();
    assert!(st.embedded.is_empty());
    assert_eq!(st.steps, 0);
    assert!(st.is_complete(&asg));
}

#[test]
fn round1_embeds_a_path_on_spare_webs() {
    let g = kab(60, 60);
    let h = p3();
    let split = degree_split(&h, SplitRule::Balanced, 10.0, 5.0);
    assert_eq!(split.small, vec![0, 1, 2]);
    let cfg = small_cfg();
    let asg = build_assignment(&g, &h, &split, &VertexSet::new(), Some(0), &cfg).unwrap().unwrap();
    assert_eq!(asg.spares.len(), 6);
    let st = round1_good_path_system(&g, &h, &asg, Mode::Bounded(20), &cfg).unwrap();
    assert!(st.is_complete(&asg), "{:?}", st.diagnosis);
    assert_eq!(st.paths.len(), 2);
    assert_eq!(st.audits, st.steps + 1);
    let r2 = round2_paths(&g, &h, &asg, &st, &cfg).unwrap();
    assert!(r2.paths.is_empty() && r2.missing.is_empty());
}

#[test]
fn round1_reports_pool_exhaustion() {
    // A star with three small leaves and a middle centre; only two spare webs fit.
    let g = kab(60, 60);
    let h = graph(4, &[(0, 1), (0, 2), (0, 3)]);
    let split = degree_split(&h, SplitRule::Balanced, 10.0, 1.0);
    assert_eq!(split.small, vec![1, 2, 3]);
    let cfg = small_cfg();
    let mut asg = build_assignment(&g, &h, &split, &VertexSet::new(), Some(0), &cfg).unwrap().unwrap();
    asg.spares.truncate(2);
    let st = round1_good_path_system(&g, &h, &asg, Mode::Bounded(20), &cfg).unwrap();
    assert!(st.exhausted);
    assert!(!st.is_complete(&asg));
    assert_eq!(st.embedded.len(), 2);
    assert!(st.diagnosis.iter().any(|d| d.contains("exhausted")));
    assert!(round2_paths(&g, &h, &asg, &st, &cfg).is_err());
}

#[test]
fn round2_routes_a_middle_edge() {
    let g = kab(60, 60);
    let h = graph(2, &[(0, 1)]);
    let split = degree_split(&h, SplitRule::Balanced, 5.0, 0.0);
    assert_eq!(split.middle, vec![0, 1]);
    let cfg = small_cfg();
    let asg = build_assignment(&g, &h, &split, &VertexSet::new(), Some(0), &cfg).unwrap().unwrap();
    let st = round1_good_path_system(&g, &h, &asg, Mode::Bounded(20), &cfg).unwrap();
    let r2 = round2_paths(&g, &h, &asg, &st, &cfg).unwrap();
    assert!(r2.missing.is_empty());
    let p = &r2.paths[&(0, 1)];
    assert_eq!(p.start(), asg.objects[asg.owner[0].unwrap()].core);
    assert_eq!(p.end(), asg.objects[asg.owner[1].unwrap()].core);
    for o in &asg.objects {
        for v in p.interior() {
            assert!(!o.int.contains(*v) || o.core == p.start() || o.core == p.end());
        }
    }
}

#[test]
fn round2_with_no_high_edges() {
    let g = kab(30, 30);
    let h = graph(2, &[(0, 1)]);
    let split = degree_split(&h, SplitRule::Balanced, 5.0, 1.0);
    let cfg = small_cfg();
    let asg = build_assignment(&g, &h, &split, &VertexSet::new(), Some(0), &cfg).unwrap().unwrap();
    let st = round1_good_path_system(&g, &h, &asg, Mode::Bounded(20), &cfg).unwrap();
    let r2 = round2_paths(&g, &h, &asg, &st, &cfg).unwrap();
    assert!(r2.paths.is_empty() && r2.missing.is_empty());
}

#[test]
fn balanced_triangle_in_complete_bipartite() {
    let g = kab(60, 60);
    let h = clique(3);
    let out = embed_balanced(&g, &h, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.mode, Some(Mode::Balanced(1)));
}

#[test]
fn balanced_k4_in_hypercube() {
    let g = gen_standard(&Family::Hypercube(10)).unwrap();
    let h = clique(4);
    let out = embed_balanced(&g, &h, &RunConfig::default()).unwrap();
    if let Some(c) = &out.certificate {
        assert!(verify_subdivision(&g, &h, c).is_accept());
        assert!(matches!(c.mode, Mode::Balanced(l) if l % 2 == 1));
    } else {
        assert!(!out.stages.is_empty());
    }
}

#[test]
fn balanced_rejects_isolated_pattern_vertex() {
    let h = graph(3, &[(0, 1)]);
    assert!(matches!(embed_balanced(&kab(5, 5), &h, &RunConfig::default()), Err(subforge::Error::Precondition(_))));
}

#[test]
fn sparse_c4_in_random_host() {
    let g = gen_standard(&Family::Gnp(500, 0.04, 5)).unwrap();
    let h = gen_standard(&Family::Cycle(4)).unwrap();
    let out = embed_sparse_th(&g, &h, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
    let c = out.certificate.unwrap();
    assert_eq!(c.mode, Mode::Bounded(c.max_path_len() - 1));
}

#[test]
fn sparse_star_through_anchors() {
    let g = kab(30, 30);
    let h = gen_standard(&Family::Star(3)).unwrap();
    let cfg = RunConfig { large_degree_threshold: Some(20), ..RunConfig::default() };
    let out = embed_sparse_th(&g, &h, &cfg).unwrap();
    assert_sound(&g, &h, &out);
    assert!(out.stages.iter().any(|s| s.stage == "anchors"));
}

#[test]
fn sparse_tiny_components() {
    let g = graph(9, &[(0, 1), (1, 2), (3, 4), (4, 5), (6, 7), (7, 8)]);
    let out = embed_sparse_th(&g, &clique(4), &RunConfig::default()).unwrap();
    assert!(!out.is_certified());
    assert!(!out.stages.is_empty());
}

#[test]
fn dense_short_two_triangles() {
    let g = gen_standard(&Family::Gnp(400, 0.5, 1)).unwrap();
    let h = graph(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]);
    let b = biseparate(&h, 3).unwrap().unwrap();
    let out = embed_dense_short(&g, &h, &b, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.mode, Some(Mode::Bounded(3)));
}

#[test]
fn dense_short_bipartite_pattern_needs_no_joins() {
    let g = gen_standard(&Family::Gnp(200, 0.5, 2)).unwrap();
    let h = gen_standard(&Family::Cycle(6)).unwrap();
    let b = biseparate(&h, 6).unwrap().unwrap();
    assert!(b.e1.is_empty());
    let out = embed_dense_short(&g, &h, &b, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.certificate.unwrap().max_path_len(), 1);
}

#[test]
fn dense_short_grid_power() {
    let g = gen_standard(&Family::Gnp(400, 0.5, 3)).unwrap();
    let f = gen_standard(&Family::Path(4)).unwrap();
    let h = cartesian_power(&f, 2).unwrap();
    let b = biseparate(&h, 4).unwrap().unwrap();
    let out = embed_dense_short(&g, &h, &b, &RunConfig::default()).unwrap();
    assert_sound(&g, &h, &out);
}

#[test]
fn dense_pair_is_balanced() {
    let g = gen_standard(&Family::Gnp(100, 0.5, 4)).unwrap();
    let p = find_dense_pair(&g, &RunConfig::default()).unwrap();
    assert!(p.v1.is_disjoint(&p.v2));
    assert!(p.density > 0.4 && p.density < 0.6);
}

#[test]
fn shortcut_on_dense_bipartite() {
    let g = kab(30, 30);
    let h = clique(5);
    let out = shortcut_th1(&g, &h).unwrap();
    assert_sound(&g, &h, &out);
    assert_eq!(out.mode, Some(Mode::Balanced(1)));
}

#[test]
fn large_degree_set_uses_override() {
    let g = gen_standard(&Family::Star(10)).unwrap();
    let cfg = RunConfig { large_degree_threshold: Some(5), ..RunConfig::default() };
    assert_eq!(large_degree_set(&g, &cfg).as_slice(), &[0]);
}

#[test]
fn empty_pattern_is_trivial() {
    let g = kab(3, 3);
    let h = HostGraph::empty(0);
    assert!(embed_balanced(&g, &h, &RunConfig::default()).unwrap().is_certified());
    assert!(embed_sparse_th(&g, &h, &RunConfig::default()).unwrap().is_certified());
}
