//! Deterministic instance generators: four segment-length distributions plus
//! uniform query points inside a square grid.
//!
//! All draws come from one ChaCha8 stream seeded with the spec seed:
//! segments first, queries after. Each segment costs exactly three draws
//! (`y`, then either the two endpoints for `Random` or length and left
//! endpoint for the sized kinds), each query two (`x`, then `y`), so the
//! output is a pure function of the spec.

use std::error::Error;
use std::fmt;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::object::PlaneObject;

/// Segment length distributions. `Random` draws both endpoints uniformly;
/// the others draw a length uniformly from a kind-specific interval and
/// place the segment uniformly inside the grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentKind {
    /// Two independent uniform endpoints; expected length grid/3.
    Random,
    /// Length in [grid/n, 4 grid/n).
    Short,
    /// Length in [grid/sqrt(n), 4 grid/sqrt(n)).
    Medium,
    /// Length in [grid/4, 3 grid/4).
    Long,
}

impl SegmentKind {
    pub const ALL: [SegmentKind; 4] = [
        SegmentKind::Random,
        SegmentKind::Short,
        SegmentKind::Medium,
        SegmentKind::Long,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SegmentKind::Random => "random",
            SegmentKind::Short => "short",
            SegmentKind::Medium => "medium",
            SegmentKind::Long => "long",
        }
    }
}

impl std::str::FromStr for SegmentKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(SegmentKind::Random),
            "short" => Ok(SegmentKind::Short),
            "medium" => Ok(SegmentKind::Medium),
            "long" => Ok(SegmentKind::Long),
            other => Err(format!("unknown segment kind {other:?}")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct GenSpec {
    pub kind: SegmentKind,
    pub n_segments: usize,
    pub n_queries: usize,
    pub grid: f64,
    pub seed: u64,
}

#[derive(Debug)]
pub struct GenError(String);

impl fmt::Display for GenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot generate instance: {}", self.0)
    }
}

impl Error for GenError {}

fn length_interval(spec: &GenSpec) -> Result<Option<(f64, f64)>, GenError> {
    let n = spec.n_segments as f64;
    let g = spec.grid;
    let interval = match spec.kind {
        SegmentKind::Random => return Ok(None),
        SegmentKind::Short => (g / n, 4.0 * g / n),
        SegmentKind::Medium => (g / n.sqrt(), 4.0 * g / n.sqrt()),
        SegmentKind::Long => (g / 4.0, 3.0 * g / 4.0),
    };
    if interval.0 >= g {
        return Err(GenError(format!(
            "minimum {} length {} does not fit in grid {}",
            spec.kind.name(),
            interval.0,
            g
        )));
    }
    // Lengths can never exceed the grid; clip the upper end for tiny n.
    Ok(Some((interval.0, interval.1.min(g))))
}

fn validate(spec: &GenSpec) -> Result<(), GenError> {
    if !(spec.grid > 0.0) {
        return Err(GenError(format!("grid must be positive, got {}", spec.grid)));
    }
    if spec.n_segments > 0 {
        length_interval(spec)?;
    }
    Ok(())
}

fn draw_segments(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Result<Vec<PlaneObject>, GenError> {
    let interval = length_interval(spec)?;
    let g = spec.grid;
    let mut segments = Vec::with_capacity(spec.n_segments);
    for i in 0..spec.n_segments {
        let y = rng.random_range(0.0..g);
        let (x1, x2) = match interval {
            None => {
                let a = rng.random_range(0.0..g);
                let b = rng.random_range(0.0..g);
                (a.min(b), a.max(b))
            }
            Some((lo, hi)) => {
                let len = if lo < hi { rng.random_range(lo..hi) } else { lo };
                let x1 = if g - len > 0.0 {
                    rng.random_range(0.0..g - len)
                } else {
                    0.0
                };
                (x1, x1 + len)
            }
        };
        segments.push(PlaneObject::segment(i as u32, y, x1, x2));
    }
    Ok(segments)
}

fn draw_queries(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Vec<PlaneObject> {
    (0..spec.n_queries)
        .map(|i| {
            let x = rng.random_range(0.0..spec.grid);
            let y = rng.random_range(0.0..spec.grid);
            PlaneObject::query(i as u32, x, y)
        })
        .collect()
}

/// Generates segments followed by queries from the spec's single stream.
pub fn gen_instance(spec: &GenSpec) -> Result<Vec<PlaneObject>, GenError> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut objects = draw_segments(spec, &mut rng)?;
    objects.extend(draw_queries(spec, &mut rng));
    Ok(objects)
}

/// The segment prefix of [`gen_instance`].
pub fn gen_segments(spec: &GenSpec) -> Result<Vec<PlaneObject>, GenError> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    draw_segments(spec, &mut rng)
}

/// The query suffix of [`gen_instance`]: queries draw after segments, so the
/// segment stream is consumed first.
pub fn gen_queries(spec: &GenSpec) -> Result<Vec<PlaneObject>, GenError> {
    validate(spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    draw_segments(spec, &mut rng)?;
    Ok(draw_queries(spec, &mut rng))
}
