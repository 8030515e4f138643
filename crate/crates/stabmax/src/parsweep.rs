//! Parallel distribution sweeping: one P-way parallel level (horizontal
//! y-chunks crossed with vertical slabs), a sequential segmented MAX-prefix
//! over the per-worker tree states, a combined propagate-and-compact pass,
//! then independent sequential recursion per slab.
//!
//! Phases fork-join with a barrier between them. Workers read disjoint input
//! ranges and write worker-private buffers during the sweep; during
//! compaction each worker writes disjoint output slabs. The pipeline is
//! deterministic regardless of scheduling, so results are identical for
//! every P.

use std::ops::Range;
use std::thread;
use std::time::Instant;

use crate::config::RunConfig;
use crate::metrics::{self, Metrics, TouchCounter};
use crate::object::{PlaneObject, StabAnswer};
use crate::segtree::{SpanState, TreeShape};
use crate::seqsweep::{self, count_kinds, distribute_level, SlabChunk, SweepCtx};
use crate::slab::SlabPartition;
use crate::SolveResult;

/// Splits `n` into `p` contiguous ranges whose sizes differ by at most one,
/// lower y values (earlier positions) to lower worker ids.
pub fn partition_chunks(n: usize, p: usize) -> Vec<Range<usize>> {
    assert!(p >= 1);
    let base = n / p;
    let rem = n % p;
    let mut ranges = Vec::with_capacity(p);
    let mut start = 0;
    for j in 0..p {
        let len = base + usize::from(j < rem);
        ranges.push(start..start + len);
        start += len;
    }
    ranges
}

/// P x (2K-1) grid of answers: row j holds worker j's final tree node values
/// before the prefix pass, and the exclusive running MAX of earlier rows
/// after it.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<StabAnswer>,
}

impl ReductionMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        ReductionMatrix {
            rows,
            cols,
            data: vec![StabAnswer::SENTINEL; rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<StabAnswer>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = ReductionMatrix::new(rows.len(), cols);
        for (j, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols);
            m.data[j * cols..(j + 1) * cols].copy_from_slice(row);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> StabAnswer {
        self.data[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: StabAnswer) {
        self.data[row * self.cols + col] = value;
    }

    pub fn row(&self, row: usize) -> &[StabAnswer] {
        &self.data[row * self.cols..(row + 1) * self.cols]
    }
}

/// Exclusive per-column MAX scan: out(j, v) = MAX over j' < j of in(j', v),
/// with row 0 all sentinel. Runs sequentially; the matrix is tiny next to
/// the data being swept.
pub fn segmented_prefix_max(input: &ReductionMatrix) -> ReductionMatrix {
    let mut out = ReductionMatrix::new(input.rows, input.cols);
    for col in 0..input.cols {
        let mut running = StabAnswer::SENTINEL;
        for row in 0..input.rows {
            out.set(row, col, running);
            running = running.max(input.get(row, col));
        }
    }
    out
}

/// One worker's share of the parallel level: a sequential distribution sweep
/// of its y-chunk against a worker-private tree, optionally seeded (two-sweep
/// mode). Returns the per-slab partial lists and the final tree node values.
pub(crate) fn worker_sweep(
    chunk: &[PlaneObject],
    partition: &SlabPartition,
    shape: &TreeShape,
    seed: Option<&[StabAnswer]>,
    collect: bool,
) -> (Vec<SlabChunk>, Vec<StabAnswer>) {
    let mut state = SpanState::tree(shape);
    if let Some(values) = seed {
        if let SpanState::Tree(tree) = &mut state {
            tree.seed(values);
        }
    }
    let chunks = distribute_level(chunk, partition, &mut state, collect);
    let nodes = state.tree_nodes().expect("worker state is a tree").to_vec();
    (chunks, nodes)
}

/// MAX over the prefix-matrix entries on the root-to-leaf path of `slab` in
/// worker `row`'s tree: the best spanning answer any earlier worker saw.
fn pathmax(prefix: &ReductionMatrix, shape: &TreeShape, row: usize, slab: usize) -> StabAnswer {
    let mut best = StabAnswer::SENTINEL;
    shape.walk_path(slab, |v| best = best.max(prefix.get(row, v)));
    best
}

/// Concatenates the per-worker partial chunks of one slab in worker order
/// (preserving y order) and, in the default mode, replaces each still-
/// sentinel query answer with the prefix path maximum of its source worker.
fn compact_slab(
    slab: usize,
    parts: Vec<SlabChunk>,
    prefix: &ReductionMatrix,
    shape: &TreeShape,
    apply_prefix: bool,
) -> SlabChunk {
    let total: usize = parts.iter().map(|c| c.objs.len()).sum();
    let mut merged = SlabChunk {
        objs: Vec::with_capacity(total),
        logical: 0,
        segments: 0,
        queries: 0,
    };
    for (worker, part) in parts.into_iter().enumerate() {
        let pm = if apply_prefix {
            pathmax(prefix, shape, worker, slab)
        } else {
            StabAnswer::SENTINEL
        };
        for mut obj in part.objs {
            if apply_prefix && obj.is_query() && obj.answer.is_sentinel() {
                obj.answer = pm;
            }
            merged.objs.push(obj);
        }
        merged.logical += part.logical;
        merged.segments += part.segments;
        merged.queries += part.queries;
    }
    merged
}

struct SlabOutcome {
    slab: usize,
    answers: Vec<(u32, StabAnswer)>,
    touches: TouchCounter,
    max_active: usize,
}

/// Full parallel pipeline. Input must be y-sorted with ids assigned and
/// carry no partial answers (this is always the first recursion level);
/// answers equal the brute-force oracle exactly, for every P.
pub fn par_dist_sweep(objects: &[PlaneObject], config: &RunConfig) -> SolveResult {
    config.validate().expect("invalid run config");
    let p = config.p;
    let n = objects.len();
    if n == 0 {
        return SolveResult {
            answers: Vec::new(),
            metrics: Metrics {
                worker_touches: vec![0; p],
                ..Metrics::default()
            },
        };
    }
    let k = config.parallel_k();
    let Some(partition) = SlabPartition::compute(objects, k, config.partition_mode) else {
        // Zero x-extent: nothing to distribute in parallel.
        return seqsweep::seq_dist_sweep(objects, config);
    };
    let slab_count = partition.slab_count();
    let shape = TreeShape::new(slab_count);
    let ranges = partition_chunks(n, p);

    let cmp0 = metrics::comparisons_now();
    let mut touches = TouchCounter::new();
    let mut worker_touches = vec![0u64; p];
    let mut comparisons = 0u64;

    // Phase 1: parallel worker sweeps over y-chunks.
    let collect_now = !config.two_sweep;
    let t = Instant::now();
    let mut outs: Vec<(Vec<SlabChunk>, Vec<StabAnswer>, u64)> = thread::scope(|s| {
        let handles: Vec<_> = ranges
            .iter()
            .map(|range| {
                let chunk = &objects[range.clone()];
                let (partition, shape) = (&partition, &shape);
                s.spawn(move || {
                    let (chunks, nodes) = worker_sweep(chunk, partition, shape, None, collect_now);
                    (chunks, nodes, metrics::comparisons_now())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut sweep_secs = t.elapsed().as_secs_f64();
    for (j, range) in ranges.iter().enumerate() {
        touches.record(0, range.len() as u64);
        worker_touches[j] += range.len() as u64;
        comparisons += outs[j].2;
    }

    // Sequential segmented prefix MAX over the P x (2K-1) tree states.
    let t = Instant::now();
    let matrix_rows: Vec<Vec<StabAnswer>> = outs.iter().map(|o| o.1.clone()).collect();
    let matrix = ReductionMatrix::from_rows(&matrix_rows);
    let prefix = segmented_prefix_max(&matrix);
    let prefix_secs = t.elapsed().as_secs_f64();

    let mut compact_level = 1;
    if config.two_sweep {
        // Cross-check mode: seed each worker's tree with the prefix state and
        // sweep its chunk again; compaction then has nothing to patch.
        let t = Instant::now();
        outs = thread::scope(|s| {
            let handles: Vec<_> = ranges
                .iter()
                .enumerate()
                .map(|(j, range)| {
                    let chunk = &objects[range.clone()];
                    let (partition, shape, prefix) = (&partition, &shape, &prefix);
                    s.spawn(move || {
                        let (chunks, nodes) =
                            worker_sweep(chunk, partition, shape, Some(prefix.row(j)), true);
                        (chunks, nodes, metrics::comparisons_now())
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        sweep_secs += t.elapsed().as_secs_f64();
        for (j, range) in ranges.iter().enumerate() {
            touches.record(1, range.len() as u64);
            worker_touches[j] += range.len() as u64;
            comparisons += outs[j].2;
        }
        compact_level = 2;
    }

    // Transpose worker-major chunks into slab-major groups.
    let mut per_slab: Vec<Vec<SlabChunk>> = (0..slab_count).map(|_| Vec::with_capacity(p)).collect();
    for (chunks, _, _) in outs {
        for (slab, chunk) in chunks.into_iter().enumerate() {
            per_slab[slab].push(chunk);
        }
    }

    // Phase 2: propagate prefix answers and compact each slab into one
    // contiguous y-sorted list. Worker j owns slabs j, j+P, ...
    let apply_prefix = !config.two_sweep;
    let mut owned: Vec<Vec<(usize, Vec<SlabChunk>)>> = (0..p).map(|_| Vec::new()).collect();
    for (slab, parts) in per_slab.into_iter().enumerate() {
        owned[slab % p].push((slab, parts));
    }
    let t = Instant::now();
    let compacted: Vec<Vec<(usize, SlabChunk)>> = thread::scope(|s| {
        let handles: Vec<_> = owned
            .into_iter()
            .map(|slabs| {
                let (prefix, shape) = (&prefix, &shape);
                s.spawn(move || {
                    let done: Vec<(usize, SlabChunk)> = slabs
                        .into_iter()
                        .map(|(slab, parts)| {
                            (slab, compact_slab(slab, parts, prefix, shape, apply_prefix))
                        })
                        .collect();
                    (done, metrics::comparisons_now())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (done, cmp) = h.join().unwrap();
                comparisons += cmp;
                done
            })
            .collect()
    });
    let compact_secs = t.elapsed().as_secs_f64();
    let mut slab_lists: Vec<(usize, SlabChunk)> = Vec::with_capacity(slab_count);
    for (j, group) in compacted.into_iter().enumerate() {
        for (slab, chunk) in group {
            touches.record(compact_level, chunk.logical);
            worker_touches[j] += chunk.logical;
            slab_lists.push((slab, chunk));
        }
    }

    // Phase 3: each slab recurses through the sequential solver on its own
    // worker.
    let recurse_base = compact_level + 1;
    let mut owned: Vec<Vec<(usize, SlabChunk)>> = (0..p).map(|_| Vec::new()).collect();
    for (slab, chunk) in slab_lists {
        owned[slab % p].push((slab, chunk));
    }
    let t = Instant::now();
    let outcomes: Vec<Vec<SlabOutcome>> = thread::scope(|s| {
        let handles: Vec<_> = owned
            .into_iter()
            .map(|slabs| {
                s.spawn(move || {
                    let results: Vec<SlabOutcome> = slabs
                        .into_iter()
                        .map(|(slab, chunk)| {
                            let mut ctx = SweepCtx::new(config, chunk.queries as usize);
                            seqsweep::recurse(
                                &chunk.objs,
                                chunk.logical,
                                chunk.segments,
                                chunk.queries,
                                recurse_base,
                                &mut ctx,
                            );
                            SlabOutcome {
                                slab,
                                answers: ctx.answers,
                                touches: ctx.touches,
                                max_active: ctx.max_active,
                            }
                        })
                        .collect();
                    (results, metrics::comparisons_now())
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (results, cmp) = h.join().unwrap();
                comparisons += cmp;
                results
            })
            .collect()
    });
    let recurse_secs = t.elapsed().as_secs_f64();

    let (_, queries) = count_kinds(objects);
    let mut answers = Vec::with_capacity(queries as usize);
    let mut max_active = 0;
    let mut flat: Vec<SlabOutcome> = Vec::with_capacity(slab_count);
    for (j, group) in outcomes.into_iter().enumerate() {
        for outcome in group {
            worker_touches[j] += outcome.touches.total();
            flat.push(outcome);
        }
    }
    flat.sort_unstable_by_key(|o| o.slab);
    for outcome in flat {
        touches.merge(&outcome.touches);
        max_active = max_active.max(outcome.max_active);
        answers.extend(outcome.answers);
    }

    comparisons += metrics::comparisons_now() - cmp0;
    let mut m = Metrics {
        touches,
        comparisons,
        worker_touches,
        max_active_segments: max_active,
        ..Metrics::default()
    };
    m.phases.worker_sweep = sweep_secs;
    m.phases.prefix = prefix_secs;
    m.phases.compact = compact_secs;
    m.phases.recurse = recurse_secs;
    SolveResult {
        answers,
        metrics: m,
    }
}
