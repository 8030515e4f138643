//! Vertical slab partitions for one recursion level.

use crate::config::PartitionMode;
use crate::metrics;
use crate::object::PlaneObject;

/// K+1 strictly increasing x boundaries. Slab i is `[b_i, b_{i+1})` except
/// the last, which is closed on the right so the partition covers the whole
/// extent.
#[derive(Clone, Debug)]
pub struct SlabPartition {
    boundaries: Vec<f64>,
}

impl SlabPartition {
    /// Derives a partition for `objects` (their full x-extent: query x and
    /// both segment endpoints). Returns `None` when no usable partition
    /// exists — zero extent, or boundary collapse leaving fewer than two
    /// slabs — and the caller falls through to the base case.
    pub fn compute(objects: &[PlaneObject], k: usize, mode: PartitionMode) -> Option<Self> {
        if objects.is_empty() || k == 0 {
            return None;
        }
        let mut xmin = f64::INFINITY;
        let mut xmax = f64::NEG_INFINITY;
        for obj in objects {
            xmin = xmin.min(obj.x1);
            xmax = xmax.max(obj.x2);
        }
        match mode {
            PartitionMode::UniformSpace => Self::uniform(xmin, xmax, k),
            PartitionMode::EqualCount => {
                let mut keys: Vec<f64> = objects.iter().map(|o| o.x1).collect();
                keys.sort_unstable_by(f64::total_cmp);
                Self::equal_count(&keys, xmax, k)
            }
        }
    }

    /// Evenly spaced boundaries over `[xmin, xmax]`.
    pub fn uniform(xmin: f64, xmax: f64, k: usize) -> Option<Self> {
        if k == 1 {
            // A single slab is legitimate only when explicitly requested
            // (one-worker parallel level); zero extent is fine there.
            return Some(SlabPartition {
                boundaries: vec![xmin, xmax],
            });
        }
        if xmin >= xmax {
            return None;
        }
        let width = (xmax - xmin) / k as f64;
        let mut boundaries = Vec::with_capacity(k + 1);
        boundaries.push(xmin);
        for i in 1..k {
            let b = xmin + width * i as f64;
            if b > *boundaries.last().unwrap() && b < xmax {
                boundaries.push(b);
            }
        }
        boundaries.push(xmax);
        if boundaries.len() < 3 {
            return None;
        }
        Some(SlabPartition { boundaries })
    }

    /// Boundaries at every ceil(n/k)-th x key of the x-sorted input, plus the
    /// extent maximum; duplicates collapse, possibly yielding fewer slabs.
    pub fn equal_count(keys_sorted: &[f64], xmax: f64, k: usize) -> Option<Self> {
        if keys_sorted.is_empty() || k == 0 {
            return None;
        }
        let stride = keys_sorted.len().div_ceil(k);
        let mut boundaries = Vec::with_capacity(k + 1);
        for i in (0..keys_sorted.len()).step_by(stride) {
            let b = keys_sorted[i];
            if boundaries.last().is_none_or(|&last| b > last) {
                boundaries.push(b);
            }
        }
        if xmax > *boundaries.last().unwrap() {
            boundaries.push(xmax);
        }
        if boundaries.len() < 3 {
            return None;
        }
        Some(SlabPartition { boundaries })
    }

    pub fn slab_count(&self) -> usize {
        self.boundaries.len() - 1
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    /// The slab containing `x`. Coordinates outside the extent clamp to the
    /// outer slabs. One counted comparison per probe.
    pub fn locate(&self, x: f64) -> usize {
        let pos = self.boundaries.partition_point(|b| {
            metrics::count_comparisons(1);
            *b <= x
        });
        pos.saturating_sub(1).min(self.slab_count() - 1)
    }

    /// Inclusive run of slabs fully spanned by `[x1, x2]` (slab i is spanned
    /// iff `x1 <= b_i` and `b_{i+1} <= x2`), or `None` if the segment spans
    /// no slab.
    pub fn spanned_run(&self, x1: f64, x2: f64) -> Option<(usize, usize)> {
        let lo = self.boundaries.partition_point(|b| {
            metrics::count_comparisons(1);
            *b < x1
        });
        let hi = self.boundaries.partition_point(|b| {
            metrics::count_comparisons(1);
            *b <= x2
        });
        if hi >= lo + 2 {
            Some((lo, hi - 2))
        } else {
            None
        }
    }
}
