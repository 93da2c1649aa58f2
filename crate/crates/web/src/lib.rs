//! WebAssembly bindings for the browser demo. Every export takes plain strings or numbers
//! and returns a JSON string, so the page needs no bundler.

use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;
use wasm_bindgen::JsValue;

use subforge::certify::{verify_subdivision, CertVerdict};
use subforge::embed::{embed_balanced, embed_sparse_th};
use subforge::expander::{extract_expander, rho};
use subforge::graph::{average_degree, ratio_f64, HostGraph};
use subforge::io::{format_edge_list, parse_edge_list};
use subforge::patterns::{gen_standard, Family};
use subforge::RunConfig;

fn err(e: impl std::fmt::Display) -> JsValue {
    JsValue::from(e.to_string())
}

/// Samples of `rho(x)` for `x` spread log-uniformly over `[k/5, n]`.
#[wasm_bindgen]
pub fn rho_curve(n: f64, k: f64, eps1: f64, points: usize) -> Result<String, JsValue> {
    let cfg = RunConfig { eps1, ..RunConfig::default() };
    let p = cfg.expander_params(k);
    let lo = (k / 5.0).max(1.0);
    let steps = points.max(2);
    let mut out = Vec::with_capacity(steps);
    for i in 0..steps {
        let x = lo * (n / lo).powf(i as f64 / (steps - 1) as f64);
        out.push(json!({ "x": x, "rho": rho(x, &p).map_err(err)? }));
    }
    Ok(json!(out).to_string())
}

/// Generates a host from a family name and runs expander extraction on it.
///
/// `family` is one of `gnp`, `random-bipartite`, `grid`, `hypercube`; `a`, `b` and `p` are
/// read as that family needs them.
#[wasm_bindgen]
pub fn extract_demo(family: &str, a: usize, b: usize, p: f64, seed: u64) -> Result<String, JsValue> {
    let fam = match family {
        "gnp" => Family::Gnp(a, p, seed),
        "random-bipartite" => Family::RandomBipartite(a, b, p, seed),
        "grid" => Family::Grid(a, b),
        "hypercube" => Family::Hypercube(a),
        other => return Err(err(format!("unknown family {other}"))),
    };
    let g = gen_standard(&fam).map_err(err)?;
    let cfg = RunConfig { seed, ..RunConfig::default() };
    let d = ratio_f64(average_degree(&g));
    let x = extract_expander(&g, &cfg.expander_params(cfg.eps2 * d), true, &cfg).map_err(err)?;
    Ok(json!({
        "n_in": g.n(),
        "m_in": g.edge_count(),
        "n_out": x.graph.n(),
        "m_out": x.graph.edge_count(),
        "avg_in": ratio_f64(x.input_avg),
        "avg_out": ratio_f64(x.output_avg),
        "rounds": x.rounds,
        "verdict": x.report.verdict,
        "edge_list": format_edge_list(&x.graph),
    })
    .to_string())
}

fn parse(label: &str, text: &str) -> Result<HostGraph, JsValue> {
    parse_edge_list(text).map_err(|e| err(format!("{label}: {e}")))
}

/// Embeds the pattern into the host with the `balanced` or `bounded` engine and re-checks
/// the certificate.
#[wasm_bindgen]
pub fn find_subdivision(host: &str, pattern: &str, engine: &str, seed: u64) -> Result<String, JsValue> {
    let g = parse("host", host)?;
    let h = parse("pattern", pattern)?;
    let cfg = RunConfig { seed, ..RunConfig::default() };
    let out = match engine {
        "balanced" => embed_balanced(&g, &h, &cfg),
        "bounded" => embed_sparse_th(&g, &h, &cfg),
        other => return Err(err(format!("unknown engine {other}"))),
    }
    .map_err(err)?;
    let verdict = out.certificate.as_ref().map(|c| match verify_subdivision(&g, &h, c) {
        CertVerdict::Accept => "accept".to_string(),
        CertVerdict::Reject(v) => format!("reject: {v:?}"),
    });
    Ok(json!({
        "certified": out.is_certified(),
        "verdict": verdict,
        "outcome": out,
    })
    .to_string())
}

