//! Orchestrators: pick the applicable engine for a host and pattern and return one
//! verified certificate in the host's own ids.

use super::drc::{dense_reduce, DenseReduction};
use super::large::{embed_large_degree, large_degree_set, shortcut_th1};
use super::rounds::{build_assignment, degree_split, round1_good_path_system, round2_paths, split_thresholds, SplitRule};
use super::{require_no_isolated, trivial_outcome, EmbeddingOutcome};
use crate::certify::Mode;
use crate::config::RunConfig;
use crate::error::Result;
use crate::expander::extract_expander;
use crate::graph::{average_degree, max_cut_bipartite, ratio_f64, HostGraph, Vertex};
use crate::routing::Path;

/// A bipartite expanding subgraph of `g` and the map back to `g`'s ids. Falls back to the
/// whole max-cut subgraph when extraction fails.
fn prepare(g: &HostGraph, cfg: &RunConfig, out: &mut EmbeddingOutcome) -> (HostGraph, Vec<Vertex>) {
    let cut = max_cut_bipartite(g);
    out.stage("max-cut", format!("{} of {} edges kept", cut.edge_count(), g.edge_count()));
    let d = ratio_f64(average_degree(&cut));
    let p = cfg.expander_params(cfg.eps2 * d);
    match extract_expander(&cut, &p, true, cfg) {
        Ok(x) => {
            out.stage("extract", format!("n {} -> {}, d {} -> {}", g.n(), x.graph.n(), x.input_avg, x.output_avg));
            (x.graph, x.original_ids)
        }
        Err(e) => {
            out.stage("extract", format!("extraction failed ({e}); using the max-cut subgraph"));
            out.best_effort = true;
            (cut, (0..g.n()).collect())
        }
    }
}

/// Moves an engine's stages and certificate into `out`, mapping the certificate to the ids
/// of `g` and re-verifying it there. With `tighten`, a bounded certificate is restated at
/// its longest path.
fn adopt(out: &mut EmbeddingOutcome, inner: EmbeddingOutcome, g: &HostGraph, h: &HostGraph, ids: &[Vertex], tighten: bool) -> bool {
    out.stages.extend(inner.stages);
    out.best_effort |= inner.best_effort;
    out.theory_violation |= inner.theory_violation;
    if inner.gate_rejection.is_some() {
        out.gate_rejection = inner.gate_rejection;
    }
    let Some(cert) = inner.certificate else {
        return false;
    };
    let mut branch = vec![0; h.n()];
    for &(x, v) in &cert.branch_map {
        branch[x] = ids[v];
    }
    let paths: Vec<Path> = cert.paths.iter().map(|p| Path(p.vertices.iter().map(|&v| ids[v]).collect())).collect();
    let mode = match cert.mode {
        Mode::Bounded(_) if tighten => Mode::Bounded(cert.max_path_len().saturating_sub(1)),
        m => m,
    };
    out.seal(g, h, mode, &branch, paths)
}

/// Cores share a side in a two-coloured host, so balanced lengths must keep paths even.
fn balanced_lengths(gx: &HostGraph, cfg: &RunConfig) -> Vec<usize> {
    (1..=cfg.max_ell).filter(|ell| gx.sides().is_none() || (ell + 1) % 2 == 0).collect()
}

/// Builds objects for every pattern vertex and runs both routing rounds for each mode in
/// turn until one routes every edge.
fn gadget_pipeline(gx: &HostGraph, h: &HostGraph, rule: SplitRule, modes: &[Mode], cfg: &RunConfig, out: &mut EmbeddingOutcome) -> Result<Option<EmbeddingOutcome>> {
    let d = ratio_f64(average_degree(gx));
    let m = cfg.m(gx.n(), d);
    let (lt, st) = split_thresholds(cfg, rule, d, m);
    let split = degree_split(h, rule, lt, st);
    out.stage(
        "split",
        format!("L={:?} M={:?} S={:?} (thresholds {lt:.3}, {st:.3})", split.large, split.middle, split.small),
    );
    let reserved = large_degree_set(gx, cfg);
    let side = gx.sides().map(|s| {
        let ones = s.iter().filter(|&&x| x == 1).count();
        u8::from(2 * ones > s.len())
    });
    let asg = match build_assignment(gx, h, &split, &reserved, side, cfg)? {
        Ok(a) => a,
        Err(e) => {
            out.stage("objects", format!("could not build objects: {e}"));
            return Ok(None);
        }
    };
    out.stage("objects", format!("{} objects, {} spare webs", asg.objects.len(), asg.spares.len()));
    for &mode in modes {
        let st = round1_good_path_system(gx, h, &asg, mode, cfg)?;
        if !st.is_complete(&asg) {
            out.stage("round-1", format!("{mode:?}: {}", st.diagnosis.join("; ")));
            continue;
        }
        out.stage("round-1", format!("{mode:?}: {} steps, {} audits, {} paths", st.steps, st.audits, st.paths.len()));
        let r2 = round2_paths(gx, h, &asg, &st, cfg)?;
        if !r2.missing.is_empty() {
            out.stage("round-2", format!("{mode:?}: missing {:?}", r2.missing));
            continue;
        }
        let branch: Vec<Vertex> = (0..h.n()).map(|v| asg.objects[st.object_of(&asg, v).expect("all placed")].core).collect();
        let paths: Vec<Path> = h.edges().map(|e| st.paths.get(&e).or_else(|| r2.paths.get(&e)).expect("all routed").clone()).collect();
        let mut inner = EmbeddingOutcome::default();
        inner.seal(gx, h, mode, &branch, paths);
        return Ok(Some(inner));
    }
    Ok(None)
}

/// Balanced subdivision of `h` in `g`: the shortcut for very dense hosts, anchors at
/// large-degree vertices when there are enough, otherwise the gadget pipeline. Lengths are
/// tried in ascending order up to `max_ell`.
pub fn embed_balanced(g: &HostGraph, h: &HostGraph, cfg: &RunConfig) -> Result<EmbeddingOutcome> {
    require_no_isolated(h)?;
    if let Some(out) = trivial_outcome(g, h, Mode::Balanced(0)) {
        return Ok(out);
    }
    let mut out = EmbeddingOutcome::default();
    if g.edge_count() == 0 {
        out.stage("input", "host has no edges");
        out.best_effort = true;
        return Ok(out);
    }
    let (gx, ids) = prepare(g, cfg, &mut out);
    let n = gx.n();
    let d = ratio_f64(average_degree(&gx));
    let m = cfg.m(n, d);
    out.stage("parameters", format!("n={n} d={d:.2} m={m}, reference length m^3={}", (m as f64).powi(3)));
    if d > n as f64 / cfg.big_k {
        let inner = shortcut_th1(&gx, h)?;
        if adopt(&mut out, inner, g, h, &ids, false) {
            return Ok(out);
        }
    }
    if d < cfg.log_base.log(n.max(2) as f64).powi(cfg.s as i32) {
        out.stage("hypotheses", "average degree below log^s n; running with configured thresholds");
        out.best_effort = true;
    }
    let ells = balanced_lengths(&gx, cfg);
    let l_g = large_degree_set(&gx, cfg);
    if l_g.len() >= 4 * h.edge_count() {
        for &ell in &ells {
            let inner = embed_large_degree(&gx, h, Mode::Balanced(ell), cfg)?;
            if adopt(&mut out, inner, g, h, &ids, false) {
                return Ok(out);
            }
        }
    }
    let modes: Vec<Mode> = ells.iter().map(|&l| Mode::Balanced(l)).collect();
    if let Some(inner) = gadget_pipeline(&gx, h, SplitRule::Balanced, &modes, cfg, &mut out)? {
        if adopt(&mut out, inner, g, h, &ids, false) {
            return Ok(out);
        }
    }
    out.stage("balanced", format!("no balanced subdivision with ell <= {}", cfg.max_ell));
    Ok(out)
}

/// Subdivision with paths of length at most `13m`: the dense reduction, then anchors at
/// large-degree vertices, then the gadget pipeline. The certificate is stated at its
/// longest path.
pub fn embed_sparse_th(g: &HostGraph, h: &HostGraph, cfg: &RunConfig) -> Result<EmbeddingOutcome> {
    require_no_isolated(h)?;
    if let Some(out) = trivial_outcome(g, h, Mode::Bounded(0)) {
        return Ok(out);
    }
    let mut out = EmbeddingOutcome::default();
    if g.edge_count() == 0 {
        out.stage("input", "host has no edges");
        out.best_effort = true;
        return Ok(out);
    }
    let dh = ratio_f64(average_degree(h));
    if dh < cfg.big_k {
        out.stage("hypotheses", format!("pattern average degree {dh:.2} below K={}", cfg.big_k));
        out.best_effort = true;
    }
    let (gx, ids) = prepare(g, cfg, &mut out);
    let n = gx.n();
    let d = ratio_f64(average_degree(&gx));
    let m = cfg.m(n, d);
    out.stage("parameters", format!("n={n} d={d:.2} m={m}, length bound 13m={}", 13 * m));
    match dense_reduce(&gx, h, cfg.x, cfg)? {
        DenseReduction::Embedded { outcome, .. } => {
            if adopt(&mut out, outcome, g, h, &ids, true) {
                return Ok(out);
            }
        }
        DenseReduction::RescueStarved { witness, outcome } => {
            out.stages.extend(outcome.stages);
            out.stage("dense-reduce", format!("witness of size {} but no rescue", witness.len()));
        }
        DenseReduction::Dense { mode, exhaustive, .. } => {
            out.stage("dense-reduce", format!("no sparse witness ({mode:?}, exhaustive {exhaustive})"));
        }
        DenseReduction::Skipped { alpha, n } => {
            out.stage("dense-reduce", format!("skipped: alpha={alpha} reaches n={n}"));
        }
    }
    let l_g = large_degree_set(&gx, cfg);
    if l_g.len() >= h.n() {
        let inner = embed_large_degree(&gx, h, Mode::Bounded(2 * m.max(1) - 1), cfg)?;
        if adopt(&mut out, inner, g, h, &ids, true) {
            return Ok(out);
        }
    }
    let bound = Mode::Bounded(13 * m.max(1) - 1);
    if let Some(inner) = gadget_pipeline(&gx, h, SplitRule::Sparse, &[bound], cfg, &mut out)? {
        if adopt(&mut out, inner, g, h, &ids, true) {
            return Ok(out);
        }
    }
    out.stage("sparse", "no bounded subdivision found");
    Ok(out)
}
