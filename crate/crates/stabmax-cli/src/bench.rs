//! Parameter-sweep benchmark driver and CSV writer.

use std::error::Error;
use std::fs::OpenOptions;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use stabmax::generators::{gen_instance, GenSpec, SegmentKind};
use stabmax::{prepare, RunConfig, SolveResult};

use crate::{run_solver, Algo};

pub struct BenchPlan {
    pub algos: Vec<Algo>,
    pub kinds: Vec<SegmentKind>,
    pub ns: Vec<usize>,
    pub ps: Vec<usize>,
    pub ms: Vec<usize>,
    pub b: usize,
    pub reps: usize,
    pub grid: f64,
    pub seed: u64,
    pub base_threshold: usize,
    pub partition_mode: stabmax::PartitionMode,
    pub two_sweep: bool,
    pub metrics_enabled: bool,
}

struct Row {
    algo: Algo,
    kind: SegmentKind,
    n: usize,
    p: usize,
    m: usize,
    b: usize,
    rep: usize,
    load_s: f64,
    sort_s: f64,
    solve_s: f64,
    touches_total: u64,
    touches_per_level: String,
    comparisons: u64,
    max_worker_touches: u64,
}

// Cell identity for median and speedup joins.
fn cell_key(row: &Row) -> (Algo, &'static str, usize, usize, usize) {
    (row.algo, row.kind.name(), row.n, row.p, row.m)
}

fn median(values: &mut Vec<f64>) -> f64 {
    values.sort_by(f64::total_cmp);
    let len = values.len();
    if len == 0 {
        return f64::NAN;
    }
    if len % 2 == 1 {
        values[len / 2]
    } else {
        (values[len / 2 - 1] + values[len / 2]) / 2.0
    }
}

fn format_levels(levels: &[(u32, u64)]) -> String {
    let parts: Vec<String> = levels
        .iter()
        .map(|(level, count)| format!("{level}:{count}"))
        .collect();
    parts.join(";")
}

pub fn run(plan: &BenchPlan, csv_path: &Path) -> Result<(), Box<dyn Error>> {
    let mut rows: Vec<Row> = Vec::new();

    for &kind in &plan.kinds {
        for &n in &plan.ns {
            let spec = GenSpec {
                kind,
                n_segments: n / 2,
                n_queries: n - n / 2,
                grid: plan.grid,
                seed: plan.seed,
            };
            let t = Instant::now();
            let mut objects = gen_instance(&spec)?;
            let load_s = t.elapsed().as_secs_f64();
            let t = Instant::now();
            prepare(&mut objects);
            let prep_s = t.elapsed().as_secs_f64();
            eprintln!("bench: kind={} n={n} generated in {load_s:.3}s", kind.name());

            for &m in &plan.ms {
                for &algo in &plan.algos {
                    let ps: &[usize] = match algo {
                        Algo::Parsweep | Algo::Twoway => &plan.ps,
                        _ => &[1],
                    };
                    for &p in ps {
                        let config = RunConfig {
                            m,
                            b: plan.b,
                            p,
                            seed: plan.seed,
                            partition_mode: plan.partition_mode,
                            two_sweep: plan.two_sweep,
                            ..RunConfig::default()
                        };
                        config.validate()?;
                        for rep in 0..plan.reps {
                            let (result, extra_sort_s, solve_s) =
                                timed_solve(algo, &objects, &config, plan.base_threshold);
                            let metrics = &result.metrics;
                            rows.push(Row {
                                algo,
                                kind,
                                n,
                                p,
                                m,
                                b: plan.b,
                                rep,
                                load_s,
                                sort_s: prep_s + extra_sort_s,
                                solve_s,
                                touches_total: metrics.touches.total(),
                                touches_per_level: format_levels(&metrics.touches.per_level()),
                                comparisons: metrics.comparisons,
                                max_worker_touches: metrics.max_worker_touches(),
                            });
                            eprintln!(
                                "bench: algo={} kind={} n={n} P={p} M={m} rep={rep} solve={solve_s:.3}s",
                                algo.name(),
                                kind.name(),
                            );
                        }
                    }
                }
            }
        }
    }

    write_csv(plan, &rows, csv_path)?;
    eprintln!("bench: wrote {} rows to {}", rows.len(), csv_path.display());
    Ok(())
}

fn timed_solve(
    algo: Algo,
    objects: &[stabmax::PlaneObject],
    config: &RunConfig,
    base_threshold: usize,
) -> (SolveResult, f64, f64) {
    let (result, extra_sort_s, solve_s) = run_solver(algo, objects, config, base_threshold);
    (result, extra_sort_s, solve_s)
}

fn write_csv(plan: &BenchPlan, rows: &[Row], path: &Path) -> Result<(), Box<dyn Error>> {
    // Cell medians for the derived speedup columns.
    let mut cell_solve: std::collections::HashMap<(Algo, &'static str, usize, usize, usize), f64> =
        std::collections::HashMap::new();
    {
        let mut grouped: std::collections::HashMap<_, Vec<f64>> = std::collections::HashMap::new();
        for row in rows {
            grouped.entry(cell_key(row)).or_default().push(row.solve_s);
        }
        for (key, mut values) in grouped {
            cell_solve.insert(key, median(&mut values));
        }
    }
    let seq_baseline = |row: &Row| -> Option<f64> {
        cell_solve
            .get(&(Algo::Seqsweep, row.kind.name(), row.n, 1, row.m))
            .copied()
    };
    let plane_baseline = |row: &Row| -> Option<f64> {
        cell_solve
            .get(&(Algo::Planesweep, row.kind.name(), row.n, 1, row.m))
            .copied()
    };

    let write_header = !path.exists()
        || std::fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut out = BufWriter::new(file);
    if write_header {
        writeln!(
            out,
            "algorithm,kind,n,P,M,B,rep,load_s,sort_s,solve_s,touches_total,\
             touches_per_level,comparisons,max_worker_touches,speedup_vs_seq,\
             speedup_vs_planesweep"
        )?;
    }
    for row in rows {
        let own = cell_solve[&cell_key(row)];
        let speedup_vs_seq = seq_baseline(row)
            .map(|base| format!("{:.6}", base / own))
            .unwrap_or_default();
        let speedup_vs_plane = plane_baseline(row)
            .map(|base| format!("{:.6}", base / own))
            .unwrap_or_default();
        let (touches_total, per_level, comparisons, max_worker) = if plan.metrics_enabled {
            (
                row.touches_total.to_string(),
                row.touches_per_level.clone(),
                row.comparisons.to_string(),
                row.max_worker_touches.to_string(),
            )
        } else {
            (String::new(), String::new(), String::new(), String::new())
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{},{},{},{}",
            row.algo.name(),
            row.kind.name(),
            row.n,
            row.p,
            row.m,
            row.b,
            row.rep,
            row.load_s,
            row.sort_s,
            row.solve_s,
            touches_total,
            per_level,
            comparisons,
            max_worker,
            speedup_vs_seq,
            speedup_vs_plane,
        )?;
    }
    out.flush()?;
    Ok(())
}
