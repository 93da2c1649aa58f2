use subforge::io::format_edge_list;
use subforge::patterns::{gen_standard, Family};
use subforge_web::{extract_demo, find_subdivision, rho_curve};

#[test]
fn rho_is_non_increasing_past_the_floor() {
    let s: serde_json::Value = serde_json::from_str(&rho_curve(1000.0, 10.0, 0.1, 20).unwrap()).unwrap();
    let v: Vec<f64> = s.as_array().unwrap().iter().map(|p| p["rho"].as_f64().unwrap()).collect();
    assert!(v.windows(2).skip(1).all(|w| w[1] <= w[0] + 1e-12));
}

#[test]
fn triangle_in_complete_bipartite_host() {
    let g = format_edge_list(&gen_standard(&Family::CompleteBipartite(30, 30)).unwrap());
    let s: serde_json::Value = serde_json::from_str(&find_subdivision(&g, "3 3\n0 1\n0 2\n1 2\n", "balanced", 0).unwrap()).unwrap();
    assert_eq!(s["certified"], true);
    assert_eq!(s["verdict"], "accept");
}

#[test]
fn extraction_reports_sizes() {
    let s: serde_json::Value = serde_json::from_str(&extract_demo("gnp", 80, 0, 0.2, 1).unwrap()).unwrap();
    assert!(s["n_out"].as_u64().unwrap() <= 80);
    assert!(s["m_out"].as_u64().unwrap() > 0);
}
