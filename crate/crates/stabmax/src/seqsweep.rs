//! Sequential distribution sweeping with the work-optimal max segment tree.
//!
//! Each level sweeps its y-sorted input once: spanning segments feed the
//! per-slab tree, queries pick up the best spanning answer seen so far, and
//! every object is copied to the slab of each of its endpoints. Slabs then
//! recurse independently until they fit the base-case budget M and a plane
//! sweep finishes the job.

use crate::config::{RunConfig, SpanStore};
use crate::metrics::{self, Metrics, TouchCounter};
use crate::object::{PlaneObject, StabAnswer};
use crate::planesweep::plane_sweep_base;
use crate::segtree::{SpanState, TreeShape};
use crate::slab::SlabPartition;
use crate::SolveResult;

/// One child slab's input list plus its bookkeeping: physical segment and
/// query counts (for empty-slab pruning) and the logical object count (the
/// second copy of a split segment does not count).
pub(crate) struct SlabChunk {
    pub objs: Vec<PlaneObject>,
    pub logical: u64,
    pub segments: u64,
    pub queries: u64,
}

impl SlabChunk {
    fn with_capacity(capacity: usize) -> Self {
        SlabChunk {
            objs: Vec::with_capacity(capacity),
            logical: 0,
            segments: 0,
            queries: 0,
        }
    }
}

/// Sweeps `objects` (y-sorted) once, distributing copies into per-slab lists
/// and resolving each query against the spanning-segment state. Child lists
/// come out y-sorted. With `collect` unset only the spanning state is built,
/// which is all the two-sweep mode needs from its first pass.
pub(crate) fn distribute_level(
    objects: &[PlaneObject],
    partition: &SlabPartition,
    state: &mut SpanState<'_>,
    collect: bool,
) -> Vec<SlabChunk> {
    let k = partition.slab_count();
    let mut chunks = Vec::new();
    if collect {
        // 10% over the even share, growable beyond that.
        let share = objects.len() / k;
        let capacity = share + share / 10 + 4;
        chunks = (0..k).map(|_| SlabChunk::with_capacity(capacity)).collect();
    }

    for obj in objects {
        if obj.is_query() {
            if !collect {
                continue;
            }
            let slab = partition.locate(obj.x1);
            let mut copy = *obj;
            copy.answer = copy.answer.max(state.query(slab));
            let chunk = &mut chunks[slab];
            chunk.objs.push(copy);
            chunk.queries += 1;
            chunk.logical += 1;
        } else {
            if let Some((first, last)) = partition.spanned_run(obj.x1, obj.x2) {
                state.update_span(first, last, StabAnswer::new(obj.y, obj.id));
            }
            if !collect {
                continue;
            }
            let s1 = partition.locate(obj.x1);
            let chunk = &mut chunks[s1];
            chunk.objs.push(*obj);
            chunk.segments += 1;
            chunk.logical += 1;
            let s2 = partition.locate(obj.x2);
            if s2 != s1 {
                let chunk = &mut chunks[s2];
                chunk.objs.push(*obj);
                chunk.segments += 1;
            }
        }
    }
    chunks
}

/// Mutable state threaded through one recursive solve.
pub(crate) struct SweepCtx<'c> {
    pub config: &'c RunConfig,
    pub answers: Vec<(u32, StabAnswer)>,
    pub touches: TouchCounter,
    pub max_active: usize,
}

impl<'c> SweepCtx<'c> {
    pub fn new(config: &'c RunConfig, expected_queries: usize) -> Self {
        SweepCtx {
            config,
            answers: Vec::with_capacity(expected_queries),
            touches: TouchCounter::new(),
            max_active: 0,
        }
    }
}

fn base_case(objs: &[PlaneObject], logical: u64, level: u32, ctx: &mut SweepCtx) {
    ctx.touches.record(level, logical);
    let peak = plane_sweep_base(objs, &mut ctx.answers);
    ctx.max_active = ctx.max_active.max(peak);
}

pub(crate) fn recurse(
    objs: &[PlaneObject],
    logical: u64,
    segments: u64,
    queries: u64,
    level: u32,
    ctx: &mut SweepCtx,
) {
    if queries == 0 {
        return;
    }
    if segments == 0 {
        // Only the carried answers remain for these queries.
        ctx.touches.record(level, logical);
        for obj in objs {
            debug_assert!(obj.is_query());
            ctx.answers.push((obj.id, obj.answer));
        }
        return;
    }
    if objs.len() <= ctx.config.m {
        base_case(objs, logical, level, ctx);
        return;
    }
    let k = ctx.config.sequential_k(objs.len());
    let Some(partition) = SlabPartition::compute(objs, k, ctx.config.partition_mode) else {
        // Zero x-extent: no further subdivision is possible.
        base_case(objs, logical, level, ctx);
        return;
    };

    let shape_storage;
    let mut state = match ctx.config.span_store {
        SpanStore::Tree => {
            shape_storage = TreeShape::new(partition.slab_count());
            SpanState::tree(&shape_storage)
        }
        SpanStore::Array => SpanState::array(partition.slab_count()),
    };
    ctx.touches.record(level, logical);
    let chunks = distribute_level(objs, &partition, &mut state, true);
    drop(state);

    for chunk in chunks {
        if chunk.objs.len() >= objs.len() {
            // The child reproduces its parent; splitting again cannot make
            // progress, so sweep it as-is.
            base_case(&chunk.objs, chunk.logical, level + 1, ctx);
        } else {
            recurse(
                &chunk.objs,
                chunk.logical,
                chunk.segments,
                chunk.queries,
                level + 1,
                ctx,
            );
        }
    }
}

pub(crate) fn count_kinds(objects: &[PlaneObject]) -> (u64, u64) {
    let segments = objects.iter().filter(|o| o.is_segment()).count() as u64;
    (segments, objects.len() as u64 - segments)
}

/// Full sequential distribution sweep. Input must be y-sorted with ids
/// assigned; answers equal the brute-force oracle exactly.
pub fn seq_dist_sweep(objects: &[PlaneObject], config: &RunConfig) -> SolveResult {
    config.validate().expect("invalid run config");
    let cmp0 = metrics::comparisons_now();
    let (segments, queries) = count_kinds(objects);
    let mut ctx = SweepCtx::new(config, queries as usize);
    recurse(objects, objects.len() as u64, segments, queries, 0, &mut ctx);

    let mut m = Metrics {
        touches: ctx.touches,
        comparisons: metrics::comparisons_now() - cmp0,
        max_active_segments: ctx.max_active,
        ..Metrics::default()
    };
    m.worker_touches = vec![m.touches.total()];
    SolveResult {
        answers: ctx.answers,
        metrics: m,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{KRule, PartitionMode};
    use crate::oracle::stab_oracle;
    use crate::planesweep::plane_sweep;
    use crate::testutil::{answers_to_map, point_instance, random_instance, t1_instance};

    fn small_config(m: usize) -> RunConfig {
        RunConfig {
            m,
            b: 1,
            ..RunConfig::default()
        }
    }

    #[test]
    fn distribute_t1_matches_hand_trace() {
        let objects = t1_instance();
        let partition = SlabPartition::uniform(0.0, 100.0, 2).unwrap();
        let shape = TreeShape::new(2);
        let mut state = SpanState::tree(&shape);
        let chunks = distribute_level(&objects, &partition, &mut state, true);

        // s2 [0,40] lands in slab 0 only; s3 [60,100] in slab 1 only; s1
        // [0,100] is copied to both but counts once.
        assert_eq!(chunks[0].segments, 2);
        assert_eq!(chunks[1].segments, 2);
        assert_eq!(chunks[0].logical + chunks[1].logical, objects.len() as u64);

        // q2 at (80, 25) picked up the spanning segment s1 before recursion.
        let q2 = chunks[1]
            .objs
            .iter()
            .find(|o| o.is_query() && o.id == 102)
            .unwrap();
        assert_eq!(q2.answer, StabAnswer::new(10.0, 1));

        // Child lists stay y-sorted.
        for chunk in &chunks {
            assert!(chunk.objs.windows(2).all(|w| w[0].y <= w[1].y));
        }
    }

    #[test]
    fn distribute_everything_into_one_slab() {
        let mut objects: Vec<PlaneObject> = (0..20)
            .map(|i| PlaneObject::segment(0, i as f64, 0.0, 1.0))
            .collect();
        objects.push(PlaneObject::query(0, 100.0, 3.0));
        crate::object::sort_by_y(&mut objects);
        crate::object::assign_ids(&mut objects);

        let partition = SlabPartition::uniform(0.0, 100.0, 2).unwrap();
        let shape = TreeShape::new(2);
        let mut state = SpanState::tree(&shape);
        let chunks = distribute_level(&objects, &partition, &mut state, true);
        assert_eq!(chunks[0].objs.len(), 20);
        assert_eq!(chunks[1].objs.len(), 1);
    }

    #[test]
    fn children_stay_y_sorted_on_random_input() {
        let objects = random_instance(500, 500, 1000.0, 5);
        let partition = SlabPartition::compute(&objects, 8, PartitionMode::UniformSpace).unwrap();
        let shape = TreeShape::new(partition.slab_count());
        let mut state = SpanState::tree(&shape);
        let chunks = distribute_level(&objects, &partition, &mut state, true);
        let mut total_logical = 0;
        for chunk in &chunks {
            assert!(chunk.objs.windows(2).all(|w| w[0].y <= w[1].y));
            total_logical += chunk.logical;
        }
        assert_eq!(total_logical, objects.len() as u64);
    }

    #[test]
    fn base_case_only_equals_plane_sweep() {
        let objects = random_instance(200, 200, 1000.0, 1);
        let config = small_config(1024);
        let seq = seq_dist_sweep(&objects, &config);
        let ps = plane_sweep(&objects);
        assert_eq!(answers_to_map(seq.answers), answers_to_map(ps.answers));
        assert_eq!(seq.metrics.touches.per_level(), vec![(0, 400)]);
    }

    #[test]
    fn t1_with_tiny_m_matches_oracle() {
        let objects = t1_instance();
        let config = RunConfig {
            m: 2,
            b: 1,
            k_rule: KRule::Fixed(2),
            ..RunConfig::default()
        };
        let run = seq_dist_sweep(&objects, &config);
        assert_eq!(answers_to_map(run.answers), stab_oracle(&objects));
    }

    #[test]
    fn random_instances_match_oracle() {
        for seed in 0..6 {
            let objects = random_instance(1500, 1500, 1e5, seed);
            for mode in [PartitionMode::UniformSpace, PartitionMode::EqualCount] {
                for store in [SpanStore::Tree, SpanStore::Array] {
                    let config = RunConfig {
                        m: 128,
                        b: 2,
                        partition_mode: mode,
                        span_store: store,
                        ..RunConfig::default()
                    };
                    let run = seq_dist_sweep(&objects, &config);
                    assert_eq!(
                        answers_to_map(run.answers),
                        stab_oracle(&objects),
                        "seed {seed} mode {mode:?} store {store:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn duplicate_coordinates_match_oracle() {
        // Many shared x and y values stress the tie rules and EqualCount
        // boundary collapse.
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut objects = Vec::new();
        for i in 0..600 {
            let x1 = rng.random_range(0..20) as f64;
            let x2 = x1 + rng.random_range(0..5) as f64;
            objects.push(PlaneObject::segment(i, rng.random_range(0..10) as f64, x1, x2));
        }
        for i in 0..600 {
            objects.push(PlaneObject::query(
                i,
                rng.random_range(0..25) as f64,
                rng.random_range(0..10) as f64,
            ));
        }
        crate::object::sort_by_y(&mut objects);
        crate::object::assign_ids(&mut objects);
        for mode in [PartitionMode::UniformSpace, PartitionMode::EqualCount] {
            let config = RunConfig {
                m: 64,
                b: 2,
                partition_mode: mode,
                ..RunConfig::default()
            };
            let run = seq_dist_sweep(&objects, &config);
            assert_eq!(answers_to_map(run.answers), stab_oracle(&objects));
        }
    }

    #[test]
    fn identical_segments_terminate_via_progress_guard() {
        // Every segment spans the full extent; slab lists can stop shrinking.
        let mut objects = Vec::new();
        for i in 0..300 {
            objects.push(PlaneObject::segment(i, i as f64, 0.0, 100.0));
        }
        for i in 0..300 {
            objects.push(PlaneObject::query(i, 50.0, (i as f64) + 0.5));
        }
        crate::object::sort_by_y(&mut objects);
        crate::object::assign_ids(&mut objects);
        let config = small_config(16);
        let run = seq_dist_sweep(&objects, &config);
        assert_eq!(answers_to_map(run.answers), stab_oracle(&objects));
    }

    #[test]
    fn single_distribution_level_touches_exactly_2n() {
        let objects = point_instance(4096, 9);
        let config = RunConfig {
            m: 256,
            b: 2,
            partition_mode: PartitionMode::EqualCount,
            ..RunConfig::default()
        };
        let run = seq_dist_sweep(&objects, &config);
        assert_eq!(answers_to_map(run.answers), stab_oracle(&objects));
        assert_eq!(run.metrics.touches.per_level(), vec![(0, 4096), (1, 4096)]);
    }

    #[test]
    fn pruned_slabs_resolve_carried_answers() {
        // Queries far to the right of every segment: their slab has no
        // segments after the first split.
        let mut objects = Vec::new();
        for i in 0..64 {
            objects.push(PlaneObject::segment(i, i as f64, 0.0, 10.0));
        }
        for i in 0..64 {
            objects.push(PlaneObject::query(i, 1000.0, 0.5 + i as f64));
        }
        crate::object::sort_by_y(&mut objects);
        crate::object::assign_ids(&mut objects);
        let config = small_config(16);
        let run = seq_dist_sweep(&objects, &config);
        assert_eq!(answers_to_map(run.answers), stab_oracle(&objects));
    }
}
