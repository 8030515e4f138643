//! Domain types shared by every solver: the unified segment/query record,
//! stabbing answers, orderings and identifier assignment.

use crate::metrics;

/// Discriminates the two roles a [`PlaneObject`] can play.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObjectKind {
    Segment,
    Query,
}

/// Result of a stabbing-max query: the highest segment strictly below the
/// query point, or the sentinel for the virtual line at negative infinity.
///
/// Answers are totally ordered by `(seg_y, seg_id)`; the sentinel is the
/// identity of [`StabAnswer::max`] because real segments always carry ids
/// starting at 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabAnswer {
    pub seg_y: f64,
    pub seg_id: u32,
}

impl StabAnswer {
    pub const SENTINEL: StabAnswer = StabAnswer {
        seg_y: f64::NEG_INFINITY,
        seg_id: 0,
    };

    pub fn new(seg_y: f64, seg_id: u32) -> Self {
        StabAnswer { seg_y, seg_id }
    }

    pub fn is_sentinel(&self) -> bool {
        self.seg_id == 0 && self.seg_y == f64::NEG_INFINITY
    }

    /// MAX reduction over `(seg_y, seg_id)`. Associative, commutative, with
    /// the sentinel as identity. Counts one comparison.
    #[inline]
    pub fn max(self, other: StabAnswer) -> StabAnswer {
        metrics::count_comparisons(1);
        if (other.seg_y, other.seg_id) > (self.seg_y, self.seg_id) {
            other
        } else {
            self
        }
    }
}

/// Unified fixed-width record for a horizontal segment or a query point.
///
/// Segments: `y` is the height, `[x1, x2]` the closed x-interval, `id` the
/// y-rank assigned by [`assign_ids`]. Queries: `x1 == x2` is the query x,
/// `id` a stable input index (disjoint id space from segments), and `answer`
/// carries the running result `r_q` through the sweeps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlaneObject {
    pub kind: ObjectKind,
    pub y: f64,
    pub x1: f64,
    pub x2: f64,
    pub id: u32,
    pub answer: StabAnswer,
}

impl PlaneObject {
    pub fn segment(id: u32, y: f64, x1: f64, x2: f64) -> Self {
        debug_assert!(x1 <= x2, "segment endpoints out of order");
        PlaneObject {
            kind: ObjectKind::Segment,
            y,
            x1,
            x2,
            id,
            answer: StabAnswer::SENTINEL,
        }
    }

    pub fn query(id: u32, x: f64, y: f64) -> Self {
        PlaneObject {
            kind: ObjectKind::Query,
            y,
            x1: x,
            x2: x,
            id,
            answer: StabAnswer::SENTINEL,
        }
    }

    pub fn is_segment(&self) -> bool {
        self.kind == ObjectKind::Segment
    }

    pub fn is_query(&self) -> bool {
        self.kind == ObjectKind::Query
    }
}

// Tie rank for the y-ordering: queries before segments at equal y, which
// enforces strict "below" (a segment at the query's own y is not yet in any
// sweep state when the query is processed).
fn y_kind_rank(kind: ObjectKind) -> u8 {
    match kind {
        ObjectKind::Query => 0,
        ObjectKind::Segment => 1,
    }
}

// Tie rank for the x-ordering: segment inserts before queries at equal x, so
// a segment starting exactly at a query's x is visible to it (closed ends).
fn x_kind_rank(kind: ObjectKind) -> u8 {
    match kind {
        ObjectKind::Segment => 0,
        ObjectKind::Query => 1,
    }
}

/// Sorts by non-decreasing y; ties broken by (query before segment, then id).
pub fn sort_by_y(objects: &mut [PlaneObject]) {
    objects.sort_by(|a, b| {
        a.y.total_cmp(&b.y)
            .then_with(|| y_kind_rank(a.kind).cmp(&y_kind_rank(b.kind)))
            .then_with(|| a.id.cmp(&b.id))
    });
}

/// Sorts by sweep-event x (`x1` for segments, the point x for queries); ties
/// broken by (segment before query, then id).
pub fn sort_by_x(objects: &mut [PlaneObject]) {
    objects.sort_by(|a, b| {
        a.x1.total_cmp(&b.x1)
            .then_with(|| x_kind_rank(a.kind).cmp(&x_kind_rank(b.kind)))
            .then_with(|| a.id.cmp(&b.id))
    });
}

/// Assigns segment ids `1..=s` in encounter order over a y-sorted input, so
/// id order and y order agree. Queries keep their input ids. Returns the
/// number of segments.
pub fn assign_ids(objects_y_sorted: &mut [PlaneObject]) -> u32 {
    let mut next = 0u32;
    for obj in objects_y_sorted.iter_mut() {
        if obj.is_segment() {
            next += 1;
            obj.id = next;
        }
    }
    next
}
