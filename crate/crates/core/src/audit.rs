//! Process-wide parity audit. When enabled, every path produced by routing and gadget code
//! in a host with a known bipartition is checked: its length parity must equal the parity of
//! its endpoints' sides.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

use crate::graph::{HostGraph, Vertex};

static ENABLED: AtomicBool = AtomicBool::new(false);
static CHECKED: AtomicUsize = AtomicUsize::new(0);
static VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

pub fn enable() {
    ENABLED.store(true, Ordering::SeqCst);
}

pub fn disable() {
    ENABLED.store(false, Ordering::SeqCst);
}

pub fn reset() {
    CHECKED.store(0, Ordering::SeqCst);
    VIOLATIONS.store(0, Ordering::SeqCst);
}

/// `(paths checked, parity violations)` since the last reset.
pub fn snapshot() -> (usize, usize) {
    (CHECKED.load(Ordering::SeqCst), VIOLATIONS.load(Ordering::SeqCst))
}

pub fn record_path(g: &HostGraph, path: &[Vertex]) {
    if !ENABLED.load(Ordering::Relaxed) || path.is_empty() {
        return;
    }
    let Some(sides) = g.sides() else { return };
    CHECKED.fetch_add(1, Ordering::Relaxed);
    let (a, b) = (path[0], path[path.len() - 1]);
    let len = path.len() - 1;
    if (sides[a] == sides[b]) != len.is_multiple_of(2) {
        VIOLATIONS.fetch_add(1, Ordering::Relaxed);
        log::error!("parity violation: path {path:?} of length {len}");
    }
}
