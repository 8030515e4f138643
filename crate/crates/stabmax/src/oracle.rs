//! Quadratic brute-force reference: ground truth for every solver test.

use std::collections::BTreeMap;

use crate::object::{PlaneObject, StabAnswer};

/// Answers every query by scanning all segments. O(s*q); intended for
/// instances up to a few times 10^4 objects.
///
/// Segments are closed: `x(q) == x1` or `x2` counts as covered. "Below" is
/// strict, and ties among equally high segments go to the larger id, matching
/// the sweep solvers exactly.
pub fn stab_oracle(objects: &[PlaneObject]) -> BTreeMap<u32, StabAnswer> {
    let segments: Vec<&PlaneObject> = objects.iter().filter(|o| o.is_segment()).collect();
    let mut answers = BTreeMap::new();
    for q in objects.iter().filter(|o| o.is_query()) {
        let mut best = StabAnswer::SENTINEL;
        for s in &segments {
            if s.y < q.y && s.x1 <= q.x1 && q.x1 <= s.x2 {
                let cand = StabAnswer::new(s.y, s.id);
                if (cand.seg_y, cand.seg_id) > (best.seg_y, best.seg_id) {
                    best = cand;
                }
            }
        }
        answers.insert(q.id, best);
    }
    answers
}
