//! Portable instrumentation: element touches per recursion level, key
//! comparison counts, and per-worker balance.
//!
//! A *touch* is one logical object processed by a sweep or distribution pass.
//! Each pass over a list counts every query and every segment once; the
//! duplicate copy a segment leaves in the slab of its second endpoint does
//! not count again at that level. Sorting never counts. This makes the
//! pass/scan arithmetic of the solvers exact: a single-level sequential
//! distribution sweep touches every object twice (distribute + base case),
//! the parallel pipeline four times.
//!
//! A *comparison* is one order evaluation performed by solver state: active
//! set key comparisons, `StabAnswer::max` merges, and slab-locate probes.
//! Sorting and event scheduling are excluded, mirroring the touch convention.
//!
//! Counting can be disabled globally; the touch path then costs one branch
//! per pass and the comparison path one relaxed load per comparison.

use std::cell::Cell;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};

static ENABLED: AtomicBool = AtomicBool::new(true);

/// Globally enables or disables all counting.
pub fn set_enabled(on: bool) {
    ENABLED.store(on, Ordering::Relaxed);
}

pub fn enabled() -> bool {
    ENABLED.load(Ordering::Relaxed)
}

thread_local! {
    static COMPARISONS: Cell<u64> = const { Cell::new(0) };
}

#[inline]
pub fn count_comparisons(k: u64) {
    if enabled() {
        COMPARISONS.with(|c| c.set(c.get() + k));
    }
}

/// Current thread's cumulative comparison count. Solvers snapshot this on
/// entry and report the delta; worker threads start fresh at zero.
pub fn comparisons_now() -> u64 {
    COMPARISONS.with(|c| c.get())
}

/// Element touches, total and broken down by recursion level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TouchCounter {
    total: u64,
    per_level: BTreeMap<u32, u64>,
}

impl TouchCounter {
    pub fn new() -> Self {
        TouchCounter::default()
    }

    /// Adds `count` touches at `level`. No-op while counting is disabled.
    pub fn record(&mut self, level: u32, count: u64) {
        if !enabled() {
            return;
        }
        self.total += count;
        *self.per_level.entry(level).or_insert(0) += count;
    }

    /// Merges another counter in; totals are order independent.
    pub fn merge(&mut self, other: &TouchCounter) {
        self.total += other.total;
        for (&level, &count) in &other.per_level {
            *self.per_level.entry(level).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn per_level(&self) -> Vec<(u32, u64)> {
        self.per_level.iter().map(|(&l, &c)| (l, c)).collect()
    }

    pub fn level_count(&self) -> usize {
        self.per_level.len()
    }

    pub fn reset(&mut self) {
        self.total = 0;
        self.per_level.clear();
    }
}

/// Wall-clock phase breakdown of the parallel pipeline. Zero elsewhere.
#[derive(Clone, Copy, Debug, Default)]
pub struct PhaseSeconds {
    pub worker_sweep: f64,
    pub prefix: f64,
    pub compact: f64,
    pub recurse: f64,
}

/// Everything a solver reports about one run.
#[derive(Clone, Debug, Default)]
pub struct Metrics {
    pub touches: TouchCounter,
    pub comparisons: u64,
    /// Touches attributed to each worker; a single entry for sequential runs.
    pub worker_touches: Vec<u64>,
    /// Peak size of the plane-sweep active set (max over base cases for the
    /// distribution sweeps).
    pub max_active_segments: usize,
    pub phases: PhaseSeconds,
}

impl Metrics {
    pub fn max_worker_touches(&self) -> u64 {
        self.worker_touches.iter().copied().max().unwrap_or(0)
    }
}
