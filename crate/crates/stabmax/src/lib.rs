//! Batched 1-D stabbing-max: given horizontal segments and query points,
//! report for each point the closest segment strictly below it.
//!
//! Four interchangeable solvers share one object model and instrumentation:
//!
//! * [`planesweep`] — the classical O(n log n) sweep line;
//! * [`seqsweep`] — sequential distribution sweeping with a max segment tree
//!   over the slabs, scan-efficient and work-efficient;
//! * [`parsweep`] — one P-way parallel distribution level (y-chunks times
//!   vertical slabs, segmented MAX-prefix reduction, combined
//!   propagate-and-compact), then per-slab sequential recursion;
//! * [`twoway`] — the 2-way divide-and-conquer baseline that rescans the
//!   data at every level.
//!
//! All four produce answers identical to the brute-force [`oracle`]. Inputs
//! must be sorted by y ([`sort_by_y`]) with segment ids assigned
//! ([`assign_ids`]) first.

mod active;

pub mod config;
pub mod generators;
pub mod metrics;
pub mod object;
pub mod oracle;
pub mod parsweep;
pub mod planesweep;
pub mod segtree;
pub mod seqsweep;
pub mod slab;
pub mod textio;
pub mod twoway;

pub use config::{KRule, PartitionMode, RunConfig, SpanStore};
pub use generators::{gen_instance, gen_queries, gen_segments, GenSpec, SegmentKind};
pub use metrics::Metrics;
pub use object::{assign_ids, sort_by_x, sort_by_y, ObjectKind, PlaneObject, StabAnswer};
pub use oracle::stab_oracle;
pub use parsweep::par_dist_sweep;
pub use planesweep::plane_sweep;
pub use seqsweep::seq_dist_sweep;
pub use twoway::two_way_sweep;

/// Answers plus instrumentation from one solver run. The answer list is
/// deterministic for a given input and configuration but not sorted; sort by
/// query id (as [`textio::write_results`] does) for canonical output.
#[derive(Clone, Debug)]
pub struct SolveResult {
    pub answers: Vec<(u32, StabAnswer)>,
    pub metrics: Metrics,
}

/// Sorts by y and assigns canonical segment ids: the standard preparation
/// step between parsing/generation and any solver.
pub fn prepare(objects: &mut Vec<PlaneObject>) {
    sort_by_y(objects);
    assign_ids(objects);
}
