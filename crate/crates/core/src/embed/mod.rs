//! Subdivision engines: short embeddings by dependent random choice, the large-degree
//! case, the two-round gadget pipeline, the dense regular-pair case and their orchestrators.
//!
//! Every certificate leaves this module through [`EmbeddingOutcome::seal`], which runs the
//! verifier; a rejected certificate is recorded and never emitted.

mod dense;
mod drc;
mod large;
mod link;
mod pipeline;
mod rounds;

use serde::Serialize;

use crate::certify::{verify_subdivision, CertVerdict, Mode, SubdivisionCertificate};
use crate::error::{precondition, Result};
use crate::graph::{HostGraph, Vertex};
use crate::routing::Path;

pub use dense::{embed_dense_short, find_dense_pair, DensePair};
pub use drc::{dense_reduce, drc_th3, DenseReduction, DrcChoice};
pub use large::{embed_large_degree, large_degree_set, shortcut_th1};
pub use pipeline::{embed_balanced, embed_sparse_th};
pub use rounds::{
    build_assignment, degree_split, round1_good_path_system, round2_paths, DegreeClassSplit, GadgetAssignment, ObjectKind,
    PathSystemState, RouteObject, Round2, SplitRule,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageRecord {
    pub stage: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct EmbeddingOutcome {
    pub certificate: Option<SubdivisionCertificate>,
    pub mode: Option<Mode>,
    pub stages: Vec<StageRecord>,
    /// The run's hypotheses failed and it continued best-effort.
    pub best_effort: bool,
    /// A construction failed although its hypotheses held.
    pub theory_violation: bool,
    /// A certificate built by an engine that the verifier rejected; it is not emitted.
    pub gate_rejection: Option<String>,
}

impl EmbeddingOutcome {
    pub fn is_certified(&self) -> bool {
        self.certificate.is_some()
    }

    pub(crate) fn stage(&mut self, stage: &str, detail: impl Into<String>) {
        let detail = detail.into();
        log::info!("[{stage}] {detail}");
        self.stages.push(StageRecord { stage: stage.to_string(), detail });
    }

    /// Verifies and stores a certificate built from `branch` and one path per edge of `h`
    /// in `h.edges()` order. Returns whether it was accepted.
    pub(crate) fn seal(&mut self, g: &HostGraph, h: &HostGraph, mode: Mode, branch: &[Vertex], paths: Vec<Path>) -> bool {
        let cert = SubdivisionCertificate::from_parts(mode, branch, h, paths);
        match verify_subdivision(g, h, &cert) {
            CertVerdict::Accept => {
                self.stage("verify", format!("certificate accepted, longest path {}", cert.max_path_len()));
                self.mode = Some(mode);
                self.certificate = Some(cert);
                true
            }
            CertVerdict::Reject(v) => {
                log::error!("engine produced a rejected certificate: {v:?}");
                self.gate_rejection = Some(format!("{v:?}"));
                self.stage("verify", format!("certificate rejected: {v:?}"));
                false
            }
        }
    }
}

/// The empty pattern needs no host structure.
pub(crate) fn trivial_outcome(g: &HostGraph, h: &HostGraph, mode: Mode) -> Option<EmbeddingOutcome> {
    if h.n() > 0 {
        return None;
    }
    let mut out = EmbeddingOutcome::default();
    out.stage("trivial", "empty pattern");
    out.seal(g, h, mode, &[], Vec::new());
    Some(out)
}

pub(crate) fn require_no_isolated(h: &HostGraph) -> Result<()> {
    match (0..h.n()).find(|&v| h.degree(v) == 0) {
        Some(v) => precondition(format!("pattern vertex {v} is isolated")),
        None => Ok(()),
    }
}
