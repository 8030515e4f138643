//! Benchmark and verification front-end for the stabmax solvers.
//!
//! Subcommands: `generate` writes instances, `run` solves them, `verify`
//! checks results against the brute-force oracle, `bench` sweeps parameters
//! and emits CSV.

mod bench;
mod cache;

use std::error::Error;
use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use stabmax::generators::{gen_instance, GenSpec, SegmentKind};
use stabmax::planesweep::{plan_events, sweep_planned};
use stabmax::textio;
use stabmax::{
    metrics, par_dist_sweep, prepare, seq_dist_sweep, stab_oracle, two_way_sweep, PartitionMode,
    PlaneObject, RunConfig, SolveResult,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Algo {
    Planesweep,
    Seqsweep,
    Parsweep,
    Twoway,
}

impl Algo {
    pub fn name(&self) -> &'static str {
        match self {
            Algo::Planesweep => "planesweep",
            Algo::Seqsweep => "seqsweep",
            Algo::Parsweep => "parsweep",
            Algo::Twoway => "twoway",
        }
    }
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PartitionArg {
    Uniform,
    Equalcount,
}

impl From<PartitionArg> for PartitionMode {
    fn from(arg: PartitionArg) -> Self {
        match arg {
            PartitionArg::Uniform => PartitionMode::UniformSpace,
            PartitionArg::Equalcount => PartitionMode::EqualCount,
        }
    }
}

#[derive(Parser)]
#[command(name = "stabmax", version, about = "Batched 1-D stabbing-max benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Tuning {
    /// Number of parallel workers
    #[arg(long = "P", default_value_t = 1)]
    p: usize,

    /// Base-case size in objects (default: a fraction of the last-level
    /// cache, or 2^21 objects if detection fails)
    #[arg(long = "M")]
    m: Option<usize>,

    /// Fraction of the last-level cache used when deriving M
    #[arg(long = "M-fraction", default_value_t = 0.25)]
    m_fraction: f64,

    /// Block size in objects (enters the branching rule only)
    #[arg(long = "B", default_value_t = 2)]
    b: usize,

    /// Plane-sweep threshold for the 2-way solver
    #[arg(long, default_value_t = 1024)]
    base_threshold: usize,

    /// Slab boundary rule
    #[arg(long, value_enum, default_value_t = PartitionArg::Uniform)]
    partition_mode: PartitionArg,

    /// Parallel cross-check: repeat the worker sweep from prefix-seeded
    /// trees instead of patching answers during compaction
    #[arg(long = "two-sweep-mode")]
    two_sweep_mode: bool,

    /// Disable touch and comparison counting
    #[arg(long)]
    no_metrics: bool,
}

impl Tuning {
    fn resolve_m(&self) -> usize {
        self.m.unwrap_or_else(|| {
            cache::last_level_cache_bytes()
                .map(|bytes| {
                    let objects =
                        (bytes as f64 * self.m_fraction) as usize / std::mem::size_of::<PlaneObject>();
                    objects.max(4 * self.b)
                })
                .unwrap_or(1 << 21)
        })
    }

    fn config(&self, seed: u64) -> Result<RunConfig, Box<dyn Error>> {
        let config = RunConfig {
            m: self.resolve_m(),
            b: self.b,
            p: self.p,
            seed,
            partition_mode: self.partition_mode.into(),
            two_sweep: self.two_sweep_mode,
            ..RunConfig::default()
        };
        config.validate()?;
        Ok(config)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file
    Generate {
        /// Segment length distribution
        #[arg(long, default_value = "long")]
        kind: SegmentKindArg,
        #[arg(long, default_value_t = 1000)]
        n_segments: usize,
        #[arg(long, default_value_t = 1000)]
        n_queries: usize,
        /// Side length of the square grid
        #[arg(long, default_value_t = 1e6)]
        grid: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Output object file
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve an instance file with one algorithm
    Run {
        #[arg(long)]
        algo: Algo,
        /// Input object file
        #[arg(long = "in")]
        input: PathBuf,
        /// Output results file
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Check a results file against the brute-force oracle
    Verify {
        /// Input object file
        #[arg(long = "in")]
        input: PathBuf,
        /// Results file to check
        #[arg(long)]
        results: PathBuf,
        /// Largest instance the quadratic oracle will accept
        #[arg(long, default_value_t = 20_000)]
        oracle_cap: usize,
    },
    /// Sweep algorithms and parameters, appending rows to a CSV
    Bench {
        /// Algorithms to run
        #[arg(long, value_delimiter = ',', default_values_t = vec![Algo::Planesweep, Algo::Seqsweep, Algo::Parsweep, Algo::Twoway])]
        algo: Vec<Algo>,
        /// Segment kinds to generate
        #[arg(long, value_delimiter = ',', default_values_t = vec![SegmentKindArg::Long])]
        kind: Vec<SegmentKindArg>,
        /// Instance sizes (total objects; half segments, half queries)
        #[arg(long = "n", value_delimiter = ',', default_values_t = vec![100_000usize])]
        ns: Vec<usize>,
        /// Worker counts for the parallel solvers
        #[arg(long = "P", value_delimiter = ',', default_values_t = vec![1usize])]
        ps: Vec<usize>,
        /// Base-case sizes; default derives from the cache as in `run`
        #[arg(long = "M", value_delimiter = ',')]
        ms: Vec<usize>,
        #[arg(long = "M-fraction", default_value_t = 0.25)]
        m_fraction: f64,
        #[arg(long = "B", default_value_t = 2)]
        b: usize,
        #[arg(long, default_value_t = 1e6)]
        grid: f64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1024)]
        base_threshold: usize,
        #[arg(long, value_enum, default_value_t = PartitionArg::Uniform)]
        partition_mode: PartitionArg,
        #[arg(long = "two-sweep-mode")]
        two_sweep_mode: bool,
        #[arg(long)]
        no_metrics: bool,
        /// Repetitions per cell (derived columns use the median)
        #[arg(long, default_value_t = 3)]
        reps: usize,
        /// CSV output path (appends if the file exists)
        #[arg(long)]
        csv: PathBuf,
    },
}

// Thin ValueEnum wrapper so clap can parse kind names.
#[derive(Clone, Copy, Debug, ValueEnum)]
enum SegmentKindArg {
    Random,
    Short,
    Medium,
    Long,
}

impl From<SegmentKindArg> for SegmentKind {
    fn from(arg: SegmentKindArg) -> Self {
        match arg {
            SegmentKindArg::Random => SegmentKind::Random,
            SegmentKindArg::Short => SegmentKind::Short,
            SegmentKindArg::Medium => SegmentKind::Medium,
            SegmentKindArg::Long => SegmentKind::Long,
        }
    }
}

impl std::fmt::Display for SegmentKindArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(SegmentKind::from(*self).name())
    }
}

/// Runs one solver; returns the result, any extra sort time (the plane
/// sweep's event sort), and the solve time.
pub fn run_solver(
    algo: Algo,
    objects: &[PlaneObject],
    config: &RunConfig,
    base_threshold: usize,
) -> (SolveResult, f64, f64) {
    match algo {
        Algo::Planesweep => {
            let t = Instant::now();
            let plan = plan_events(objects);
            let sort_s = t.elapsed().as_secs_f64();
            let t = Instant::now();
            let result = sweep_planned(objects, &plan);
            (result, sort_s, t.elapsed().as_secs_f64())
        }
        Algo::Seqsweep => {
            let t = Instant::now();
            let result = seq_dist_sweep(objects, config);
            (result, 0.0, t.elapsed().as_secs_f64())
        }
        Algo::Parsweep => {
            let t = Instant::now();
            let result = par_dist_sweep(objects, config);
            (result, 0.0, t.elapsed().as_secs_f64())
        }
        Algo::Twoway => {
            let t = Instant::now();
            let result = two_way_sweep(objects, base_threshold, config.p);
            (result, 0.0, t.elapsed().as_secs_f64())
        }
    }
}

fn load_objects(path: &PathBuf) -> Result<Vec<PlaneObject>, Box<dyn Error>> {
    let file = File::open(path).map_err(|e| format!("cannot open {}: {e}", path.display()))?;
    Ok(textio::parse_objects(BufReader::new(file))?)
}

fn cmd_generate(
    kind: SegmentKind,
    n_segments: usize,
    n_queries: usize,
    grid: f64,
    seed: u64,
    out: &PathBuf,
) -> Result<(), Box<dyn Error>> {
    let spec = GenSpec {
        kind,
        n_segments,
        n_queries,
        grid,
        seed,
    };
    let mut objects = gen_instance(&spec)?;
    // Canonical ids in the file: y-rank order for segments.
    prepare(&mut objects);
    let file = File::create(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let mut writer = BufWriter::new(file);
    textio::write_objects(&mut writer, &objects)?;
    println!(
        "generated {} objects ({} segments, {} queries) -> {}",
        objects.len(),
        n_segments,
        n_queries,
        out.display()
    );
    Ok(())
}

fn cmd_run(
    algo: Algo,
    input: &PathBuf,
    out: &PathBuf,
    seed: u64,
    tuning: &Tuning,
) -> Result<(), Box<dyn Error>> {
    metrics::set_enabled(!tuning.no_metrics);
    let config = tuning.config(seed)?;

    let t = Instant::now();
    let mut objects = load_objects(input)?;
    let load_s = t.elapsed().as_secs_f64();

    let t = Instant::now();
    prepare(&mut objects);
    let mut sort_s = t.elapsed().as_secs_f64();

    let (result, extra_sort, solve_s) = run_solver(algo, &objects, &config, tuning.base_threshold);
    sort_s += extra_sort;

    let file = File::create(out).map_err(|e| format!("cannot create {}: {e}", out.display()))?;
    let mut writer = BufWriter::new(file);
    let mut answers = result.answers;
    textio::write_results(&mut writer, &mut answers)?;

    println!(
        "algo={} n={} P={} M={} B={} load_s={load_s:.6} sort_s={sort_s:.6} solve_s={solve_s:.6}",
        algo.name(),
        objects.len(),
        config.p,
        config.m,
        config.b,
    );
    if !tuning.no_metrics {
        let m = &result.metrics;
        let levels: Vec<String> = m
            .touches
            .per_level()
            .iter()
            .map(|(l, c)| format!("{l}:{c}"))
            .collect();
        println!(
            "touches={} per_level={} comparisons={} max_worker_touches={} max_active={}",
            m.touches.total(),
            levels.join(";"),
            m.comparisons,
            m.max_worker_touches(),
            m.max_active_segments,
        );
    }
    println!("results -> {}", out.display());
    Ok(())
}

fn cmd_verify(input: &PathBuf, results: &PathBuf, oracle_cap: usize) -> Result<(), Box<dyn Error>> {
    let mut objects = load_objects(input)?;
    if objects.len() > oracle_cap {
        return Err(format!(
            "instance has {} objects, above the oracle cap {oracle_cap}; \
             raise --oracle-cap to force the quadratic check",
            objects.len()
        )
        .into());
    }
    prepare(&mut objects);
    let expected = stab_oracle(&objects);

    let file =
        File::open(results).map_err(|e| format!("cannot open {}: {e}", results.display()))?;
    let got = textio::parse_results(BufReader::new(file))?;

    let mut got_sorted = got;
    got_sorted.sort_unstable_by_key(|&(id, _)| id);
    let mut mismatch: Option<String> = None;
    let mut got_iter = got_sorted.iter().peekable();
    for (&id, &want) in &expected {
        match got_iter.next() {
            Some(&(gid, ans)) if gid == id => {
                if ans != want {
                    mismatch = Some(format!(
                        "query {id}: expected ({} {}), got ({} {})",
                        want.seg_id, want.seg_y, ans.seg_id, ans.seg_y
                    ));
                    break;
                }
            }
            Some(&(gid, _)) => {
                mismatch = Some(format!(
                    "query id mismatch: expected {id}, results file has {gid}"
                ));
                break;
            }
            None => {
                mismatch = Some(format!("query {id} missing from results"));
                break;
            }
        }
    }
    if mismatch.is_none() {
        if let Some(&&(gid, _)) = got_iter.peek() {
            mismatch = Some(format!("unexpected extra query {gid} in results"));
        }
    }

    match mismatch {
        None => {
            println!("verify: PASS ({} queries)", expected.len());
            Ok(())
        }
        Some(reason) => Err(format!("verify: FAIL — {reason}").into()),
    }
}

fn real_main() -> Result<(), Box<dyn Error>> {
    let cli = Cli::parse();
    match cli.command {
        Command::Generate {
            kind,
            n_segments,
            n_queries,
            grid,
            seed,
            out,
        } => cmd_generate(kind.into(), n_segments, n_queries, grid, seed, &out),
        Command::Run {
            algo,
            input,
            out,
            seed,
            tuning,
        } => cmd_run(algo, &input, &out, seed, &tuning),
        Command::Verify {
            input,
            results,
            oracle_cap,
        } => cmd_verify(&input, &results, oracle_cap),
        Command::Bench {
            algo,
            kind,
            ns,
            ps,
            ms,
            m_fraction,
            b,
            grid,
            seed,
            base_threshold,
            partition_mode,
            two_sweep_mode,
            no_metrics,
            reps,
            csv,
        } => {
            metrics::set_enabled(!no_metrics);
            let ms = if ms.is_empty() {
                let probe = Tuning {
                    p: 1,
                    m: None,
                    m_fraction,
                    b,
                    base_threshold,
                    partition_mode,
                    two_sweep_mode,
                    no_metrics,
                };
                vec![probe.resolve_m()]
            } else {
                ms
            };
            let plan = bench::BenchPlan {
                algos: algo,
                kinds: kind.into_iter().map(SegmentKind::from).collect(),
                ns,
                ps,
                ms,
                b,
                reps,
                grid,
                seed,
                base_threshold,
                partition_mode: partition_mode.into(),
                two_sweep: two_sweep_mode,
                metrics_enabled: !no_metrics,
            };
            bench::run(&plan, &csv)
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
