//! 2-way divide-and-conquer baseline: midpoint splits, two directly
//! maintained per-slab maxima instead of a tree, and a full scan of the data
//! at every one of its Theta(log(n/threshold)) levels.

use std::thread;

use crate::metrics::{self, Metrics, TouchCounter};
use crate::object::{PlaneObject, StabAnswer};
use crate::planesweep::plane_sweep_base;
use crate::seqsweep::count_kinds;
use crate::SolveResult;

struct Outcome {
    answers: Vec<(u32, StabAnswer)>,
    touches: TouchCounter,
    comparisons: u64,
    max_active: usize,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            answers: Vec::new(),
            touches: TouchCounter::new(),
            comparisons: 0,
            max_active: 0,
        }
    }

    fn absorb(&mut self, other: Outcome) {
        self.answers.extend(other.answers);
        self.touches.merge(&other.touches);
        self.comparisons += other.comparisons;
        self.max_active = self.max_active.max(other.max_active);
    }
}

fn base_case(objs: &[PlaneObject], logical: u64, level: u32, out: &mut Outcome) {
    out.touches.record(level, logical);
    let peak = plane_sweep_base(objs, &mut out.answers);
    out.max_active = out.max_active.max(peak);
}

fn recurse(
    objs: &[PlaneObject],
    logical: u64,
    level: u32,
    threshold: usize,
    budget: usize,
    out: &mut Outcome,
) {
    if objs.is_empty() {
        return;
    }
    if objs.len() <= threshold {
        base_case(objs, logical, level, out);
        return;
    }
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    for obj in objs {
        xmin = xmin.min(obj.x1);
        xmax = xmax.max(obj.x2);
    }
    let mid = xmin + (xmax - xmin) / 2.0;
    if !(xmin < mid && mid < xmax) {
        // Extent too narrow to split.
        base_case(objs, logical, level, out);
        return;
    }

    out.touches.record(level, logical);
    let mut span_lo = StabAnswer::SENTINEL;
    let mut span_hi = StabAnswer::SENTINEL;
    let mut lo = Vec::with_capacity(objs.len() / 2 + objs.len() / 20);
    let mut hi = Vec::with_capacity(objs.len() / 2 + objs.len() / 20);
    let mut lo_logical = 0u64;
    let mut hi_logical = 0u64;

    for obj in objs {
        if obj.is_query() {
            metrics::count_comparisons(1);
            let mut copy = *obj;
            if copy.x1 < mid {
                copy.answer = copy.answer.max(span_lo);
                lo.push(copy);
                lo_logical += 1;
            } else {
                copy.answer = copy.answer.max(span_hi);
                hi.push(copy);
                hi_logical += 1;
            }
        } else {
            let value = StabAnswer::new(obj.y, obj.id);
            metrics::count_comparisons(2);
            if obj.x1 <= xmin && mid <= obj.x2 {
                span_lo = span_lo.max(value);
            }
            if obj.x1 <= mid && xmax <= obj.x2 {
                span_hi = span_hi.max(value);
            }
            metrics::count_comparisons(2);
            let first_hi = obj.x1 >= mid;
            if first_hi {
                hi.push(*obj);
                hi_logical += 1;
            } else {
                lo.push(*obj);
                lo_logical += 1;
            }
            if (obj.x2 >= mid) != first_hi {
                // Second endpoint falls in the other half; the copy does not
                // count again.
                hi.push(*obj);
            }
        }
    }

    // A child that reproduces its parent cannot shrink further.
    let lo_stuck = lo.len() >= objs.len();
    let hi_stuck = hi.len() >= objs.len();
    if budget >= 2 && !lo.is_empty() && !hi.is_empty() {
        let hi_budget = budget / 2;
        let lo_budget = budget - hi_budget;
        let (hi_out, ()) = thread::scope(|s| {
            let handle = s.spawn(|| {
                let mut hi_result = Outcome::new();
                if hi_stuck {
                    base_case(&hi, hi_logical, level + 1, &mut hi_result);
                } else {
                    recurse(&hi, hi_logical, level + 1, threshold, hi_budget, &mut hi_result);
                }
                hi_result.comparisons += metrics::comparisons_now();
                hi_result
            });
            if lo_stuck {
                base_case(&lo, lo_logical, level + 1, out);
            } else {
                recurse(&lo, lo_logical, level + 1, threshold, lo_budget, out);
            }
            (handle.join().unwrap(), ())
        });
        out.absorb(hi_out);
    } else {
        if lo_stuck {
            base_case(&lo, lo_logical, level + 1, out);
        } else {
            recurse(&lo, lo_logical, level + 1, threshold, budget, out);
        }
        drop(lo);
        if hi_stuck {
            base_case(&hi, hi_logical, level + 1, out);
        } else {
            recurse(&hi, hi_logical, level + 1, threshold, budget, out);
        }
    }
}

/// Recursive 2-way distribution sweep. Sibling slabs run concurrently up to
/// `p` live tasks; output is deterministic regardless of scheduling.
pub fn two_way_sweep(objects: &[PlaneObject], base_threshold: usize, p: usize) -> SolveResult {
    assert!(base_threshold >= 2, "base threshold must be at least 2");
    assert!(p >= 1);
    let cmp0 = metrics::comparisons_now();
    let (_, queries) = count_kinds(objects);
    let mut out = Outcome::new();
    out.answers.reserve(queries as usize);
    recurse(objects, objects.len() as u64, 0, base_threshold, p, &mut out);

    let comparisons = out.comparisons + metrics::comparisons_now() - cmp0;
    let mut m = Metrics {
        touches: out.touches,
        comparisons,
        max_active_segments: out.max_active,
        ..Metrics::default()
    };
    m.worker_touches = vec![m.touches.total()];
    SolveResult {
        answers: out.answers,
        metrics: m,
    }
}
