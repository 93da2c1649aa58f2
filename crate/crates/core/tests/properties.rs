use proptest::prelude::*;

use subforge::certify::{verify_subdivision, CertVerdict, SubdivisionCertificate};
use subforge::embed::embed_balanced;
use subforge::experiments::missing_edges;
use subforge::graph::{max_cut_bipartite, HostGraph};
use subforge::io::{format_edge_list, parse_edge_list};
use subforge::patterns::{cartesian_power, degeneracy, gen_standard, order_width, Family};
use subforge::routing::shortest_path;
use subforge::RunConfig;

fn graph() -> impl Strategy<Value = HostGraph> {
    (2usize..12).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        proptest::sample::subsequence(pairs.clone(), 0..=pairs.len()).prop_map(move |e| HostGraph::from_edges(n, &e).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn edge_list_round_trips(g in graph()) {
        let g = g.with_detected_bipartition();
        let back = parse_edge_list(&format_edge_list(&g)).unwrap();
        prop_assert_eq!(format_edge_list(&back), format_edge_list(&g));
        prop_assert_eq!(back.sides(), g.sides());
    }

    #[test]
    fn max_cut_keeps_half_the_edges(g in graph()) {
        let c = max_cut_bipartite(&g);
        prop_assert!(2 * c.edge_count() >= g.edge_count());
        prop_assert!(c.edges().all(|(u, v)| g.has_edge(u, v)));
        prop_assert!(c.two_coloring().is_some());
    }

    #[test]
    fn degeneracy_order_is_tight(g in graph()) {
        let d = degeneracy(&g);
        prop_assert_eq!(order_width(&g, &d.order), d.degeneracy);
        let mut seen = d.order.clone();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..g.n()).collect::<Vec<_>>());
    }

    #[test]
    fn square_counts(f in graph()) {
        let p = cartesian_power(&f, 2).unwrap();
        prop_assert_eq!(p.n(), f.n() * f.n());
        prop_assert_eq!(p.edge_count(), 2 * f.n() * f.edge_count());
    }

    #[test]
    fn shortest_paths_avoid_blocks(g in graph(), s in 0usize..12, t in 0usize..12, mask in any::<u16>()) {
        let n = g.n();
        let (s, t) = (s % n, t % n);
        let blocked: Vec<bool> = (0..n).map(|v| v != s && v != t && mask >> v & 1 == 1).collect();
        let mut target = vec![false; n];
        target[t] = true;
        if let Some(p) = shortest_path(&g, &[s], &target, &blocked, n) {
            let v = &p.0;
            prop_assert_eq!((v[0], v[v.len() - 1]), (s, t));
            prop_assert!(v.windows(2).all(|w| g.has_edge(w[0], w[1])));
            prop_assert!(v.iter().all(|&x| !blocked[x]));
            let d = g.distances(&[s], &blocked)[t];
            prop_assert_eq!(v.len() - 1, d);
        }
    }

    #[test]
    fn missing_edges_bounded_by_pattern(g in graph(), seed in any::<u64>()) {
        let h = gen_standard(&Family::Path(2)).unwrap();
        let f = [(seed % g.n() as u64) as usize, ((seed / 7 + 1) % g.n() as u64) as usize];
        prop_assume!(f[0] != f[1]);
        let (missing, _) = missing_edges(&g, &h, &f);
        prop_assert_eq!(missing, usize::from(!g.has_edge(f[0], f[1])));
    }
}

fn k33_certificate() -> (HostGraph, HostGraph, SubdivisionCertificate) {
    let g = gen_standard(&Family::CompleteBipartite(12, 12)).unwrap();
    let h = gen_standard(&Family::Clique(3)).unwrap();
    let c = embed_balanced(&g, &h, &RunConfig::default()).unwrap().certificate.unwrap();
    (g, h, c)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reusing_a_vertex_is_rejected(path in 0usize..3, pos in 0usize..8, pick in 0usize..64) {
        let (g, h, mut c) = k33_certificate();
        let used: Vec<usize> = c.paths.iter().flat_map(|p| p.vertices.iter().copied()).collect();
        let vs = &mut c.paths[path].vertices;
        let i = pos % vs.len();
        let to = used[pick % used.len()];
        prop_assume!(vs[i] != to);
        vs[i] = to;
        prop_assert_ne!(verify_subdivision(&g, &h, &c), CertVerdict::Accept);
    }

    #[test]
    fn certificate_json_round_trips(seed in 0u64..16) {
        let (g, h, c) = k33_certificate();
        let _ = seed;
        let back = SubdivisionCertificate::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(verify_subdivision(&g, &h, &back), CertVerdict::Accept);
    }
}
