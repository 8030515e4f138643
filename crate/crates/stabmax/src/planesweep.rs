//! Classical sweep-line solver over sorted x-events; also the base case of
//! every distribution-sweeping recursion.

use crate::active::ActiveSet;
use crate::metrics::{self, Metrics};
use crate::object::{PlaneObject, StabAnswer};
use crate::SolveResult;

const EV_INSERT: u8 = 0;
const EV_QUERY: u8 = 1;
const EV_REMOVE: u8 = 2;

#[derive(Clone, Copy)]
pub(crate) struct Event {
    x: f64,
    id: u32,
    class: u8,
    idx: u32,
}

/// Sorted sweep schedule: segment inserts at x1, queries, segment removals
/// at x2. At equal x the order is inserts, queries, removals, which realizes
/// closed segments.
pub struct EventPlan {
    events: Vec<Event>,
}

pub fn plan_events(objects: &[PlaneObject]) -> EventPlan {
    let mut events = Vec::with_capacity(objects.len() * 2);
    for (idx, obj) in objects.iter().enumerate() {
        let idx = idx as u32;
        if obj.is_segment() {
            events.push(Event {
                x: obj.x1,
                id: obj.id,
                class: EV_INSERT,
                idx,
            });
            events.push(Event {
                x: obj.x2,
                id: obj.id,
                class: EV_REMOVE,
                idx,
            });
        } else {
            events.push(Event {
                x: obj.x1,
                id: obj.id,
                class: EV_QUERY,
                idx,
            });
        }
    }
    events.sort_unstable_by(|a, b| {
        a.x.total_cmp(&b.x)
            .then_with(|| a.class.cmp(&b.class))
            .then_with(|| a.id.cmp(&b.id))
    });
    EventPlan { events }
}

pub(crate) fn sweep_events(
    objects: &[PlaneObject],
    plan: &EventPlan,
    out: &mut Vec<(u32, StabAnswer)>,
) -> usize {
    let seg_count = objects.iter().filter(|o| o.is_segment()).count();
    let mut active = ActiveSet::with_capacity(seg_count);
    for ev in &plan.events {
        let obj = &objects[ev.idx as usize];
        match ev.class {
            EV_INSERT => active.insert(obj.y, obj.id),
            EV_QUERY => {
                let ans = obj.answer.max(active.max_below(obj.y));
                out.push((obj.id, ans));
            }
            _ => active.remove(obj.id),
        }
    }
    active.max_len()
}

/// Base-case entry for the recursive solvers: answers queries into `out`,
/// honoring any partial answers the objects carry. Returns the peak active
/// set size. Touch accounting is the caller's job.
pub(crate) fn plane_sweep_base(
    objects: &[PlaneObject],
    out: &mut Vec<(u32, StabAnswer)>,
) -> usize {
    let plan = plan_events(objects);
    sweep_events(objects, &plan, out)
}

/// Runs the sweep stand-alone, with the event sort included.
pub fn plane_sweep(objects: &[PlaneObject]) -> SolveResult {
    let plan = plan_events(objects);
    sweep_planned(objects, &plan)
}

/// Runs the sweep over a prebuilt [`EventPlan`], so callers can time the
/// event sort separately from the sweep itself.
pub fn sweep_planned(objects: &[PlaneObject], plan: &EventPlan) -> SolveResult {
    let cmp_before = metrics::comparisons_now();
    let mut answers = Vec::with_capacity(objects.len() - objects.len() / 2);
    let max_active = sweep_events(objects, plan, &mut answers);

    let mut m = Metrics::default();
    m.touches.record(0, objects.len() as u64);
    m.comparisons = metrics::comparisons_now() - cmp_before;
    m.worker_touches = vec![m.touches.total()];
    m.max_active_segments = max_active;
    SolveResult {
        answers,
        metrics: m,
    }
}
