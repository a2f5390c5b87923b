//! Measurement harness: reruns engines many times over worker sweeps,
//! chunk-size sweeps, and sampling ratios, recording per-worker traversed
//! edges, waiting-set high-water marks, removal counts, and wall times with
//! repetition statistics (mean and 95% confidence half-width).
//!
//! Timing wraps the engine call only; graph loading, transpose construction,
//! and status cloning happen outside the measured region. Every run starts
//! from fresh per-run state, so traversal counters cannot leak across runs.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::ac3::{trim_ac3, Ac3Options};
use crate::ac4::{trim_ac4_par, Ac4Options, CounterInit};
use crate::ac6::{trim_ac6_par, Ac6Options};
use crate::error::Error;
use crate::graph::{sample_edges, sample_vertices, CsrGraph};
use crate::metrics::TrimResult;
use crate::state::StatusArray;

/// Engine selector. `Ac4Star` is the counter-from-offsets variant of `Ac4`;
/// the two differ only in counter initialization cost.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algo {
    Ac3,
    Ac4,
    Ac4Star,
    Ac6,
}

impl Algo {
    pub const ALL: [Algo; 4] = [Algo::Ac3, Algo::Ac4, Algo::Ac4Star, Algo::Ac6];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Ac3 => "ac3",
            Algo::Ac4 => "ac4",
            Algo::Ac4Star => "ac4star",
            Algo::Ac6 => "ac6",
        }
    }

    /// Whether the engine needs the transposed graph.
    pub fn needs_transpose(self) -> bool {
        matches!(self, Algo::Ac4 | Algo::Ac4Star)
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "ac3" => Ok(Algo::Ac3),
            "ac4" => Ok(Algo::Ac4),
            "ac4star" | "ac4*" => Ok(Algo::Ac4Star),
            "ac6" => Ok(Algo::Ac6),
            other => Err(Error::Config(format!("unknown algorithm {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingKind {
    Edges,
    Vertices,
}

impl fmt::Display for SamplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SamplingKind::Edges => f.write_str("edges"),
            SamplingKind::Vertices => f.write_str("vertices"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Sampling {
    pub kind: SamplingKind,
    pub ratios: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub algorithm: Algo,
    pub workers: Vec<usize>,
    pub chunk_size: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub sampling: Option<Sampling>,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            algorithm: Algo::Ac6,
            workers: vec![1, 2, 4, 8, 16],
            chunk_size: crate::chunk::DEFAULT_CHUNK_SIZE,
            repetitions: 50,
            seed: 42,
            sampling: None,
        }
    }
}

/// One engine run. Serialized field names match the CSV header.
#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    #[serde(rename = "P")]
    pub p: usize,
    pub rep: usize,
    pub max_edges_per_worker: u64,
    pub total_edges: u64,
    pub max_qp: usize,
    pub removed: usize,
    pub wall_ms: f64,
}

/// Aggregate over the repetitions of one `(algorithm, P)` cell.
#[derive(Clone, Debug, Serialize)]
pub struct BenchSummary {
    pub algorithm: String,
    #[serde(rename = "P")]
    pub p: usize,
    /// `"mean"` or `"ci95"` (the half-width `1.96 * s / sqrt(reps)`).
    pub rep: String,
    pub max_edges_per_worker: f64,
    pub total_edges: f64,
    pub max_qp: f64,
    pub removed: f64,
    pub wall_ms: f64,
}

/// Rows measured under one sampling setting (or the unsampled graph).
#[derive(Clone, Debug)]
pub struct BenchGroup {
    pub sampling: Option<(SamplingKind, f64)>,
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<BenchSummary>,
}

#[derive(Clone, Debug, Default)]
pub struct BenchReport {
    pub groups: Vec<BenchGroup>,
}

/// Dispatches one engine run. `transpose` is consulted only by the
/// counter-based engines and must reverse `g` when supplied.
pub fn run_engine(
    algo: Algo,
    g: &CsrGraph,
    transpose: Option<&CsrGraph>,
    init: StatusArray,
    workers: usize,
    chunk_size: usize,
) -> Result<TrimResult, Error> {
    match algo {
        Algo::Ac3 => trim_ac3(
            g,
            None,
            init,
            &Ac3Options {
                workers,
                chunk_size,
                max_repetitions: None,
                check_in_degree: false,
            },
        ),
        Algo::Ac4 | Algo::Ac4Star => {
            let gt = transpose.ok_or_else(|| {
                Error::Config("counter-based engines need the transposed graph".into())
            })?;
            let counter_init = if algo == Algo::Ac4 {
                CounterInit::Traverse
            } else {
                CounterInit::OffsetDiff
            };
            trim_ac4_par(
                g,
                gt,
                init,
                &Ac4Options {
                    workers,
                    chunk_size,
                    counter_init,
                },
            )
        }
        Algo::Ac6 => Ok(trim_ac6_par(
            g,
            init,
            &Ac6Options {
                workers,
                chunk_size,
            },
        )),
    }
}

/// Runs `repetitions` trims for every worker count (and every sampling ratio
/// when configured), on fresh state each time.
pub fn run_bench(g: &CsrGraph, cfg: &BenchConfig) -> Result<BenchReport, Error> {
    if cfg.repetitions < 1 {
        return Err(Error::Config("repetitions must be >= 1".into()));
    }
    if cfg.workers.is_empty() {
        return Err(Error::Config("at least one worker count is required".into()));
    }
    let mut report = BenchReport::default();
    match &cfg.sampling {
        None => {
            let init = StatusArray::new_live(g.vertex_count());
            report.groups.push(bench_group(g, cfg, None, init)?);
        }
        Some(sampling) => {
            for &ratio in &sampling.ratios {
                match sampling.kind {
                    SamplingKind::Edges => {
                        let sampled = sample_edges(g, ratio, cfg.seed)?;
                        let init = StatusArray::new_live(sampled.vertex_count());
                        report.groups.push(bench_group(
                            &sampled,
                            cfg,
                            Some((SamplingKind::Edges, ratio)),
                            init,
                        )?);
                    }
                    SamplingKind::Vertices => {
                        let init = sample_vertices(g.vertex_count(), ratio, cfg.seed)?;
                        report.groups.push(bench_group(
                            g,
                            cfg,
                            Some((SamplingKind::Vertices, ratio)),
                            init,
                        )?);
                    }
                }
            }
        }
    }
    Ok(report)
}

fn bench_group(
    g: &CsrGraph,
    cfg: &BenchConfig,
    sampling: Option<(SamplingKind, f64)>,
    base_init: StatusArray,
) -> Result<BenchGroup, Error> {
    let transpose = cfg.algorithm.needs_transpose().then(|| g.transpose());
    let initial_dead = base_init.dead_count();
    let mut rows = Vec::with_capacity(cfg.workers.len() * cfg.repetitions);
    for &p in &cfg.workers {
        for rep in 0..cfg.repetitions {
            let init = base_init.clone();
            let started = Instant::now();
            let result = run_engine(
                cfg.algorithm,
                g,
                transpose.as_ref(),
                init,
                p,
                cfg.chunk_size,
            )?;
            let wall = started.elapsed();
            debug_assert_eq!(
                result.metrics.removed + initial_dead + result.status.live_count(),
                g.vertex_count(),
                "removed plus surviving vertices must cover the graph"
            );
            rows.push(BenchRow {
                algorithm: cfg.algorithm.name().to_string(),
                p,
                rep,
                max_edges_per_worker: result.metrics.max_edges_per_worker(),
                total_edges: result.metrics.total_edges(),
                max_qp: result.metrics.max_qp,
                removed: result.metrics.removed,
                wall_ms: wall.as_secs_f64() * 1e3,
            });
        }
    }
    let summaries = summarize(&rows);
    Ok(BenchGroup {
        sampling,
        rows,
        summaries,
    })
}

/// One run per chunk size with everything else held fixed; used to probe the
/// scheduling-overhead versus load-imbalance tradeoff. The `rep` column of
/// the returned rows is the index into `chunk_sizes`.
pub fn chunk_sweep(
    g: &CsrGraph,
    algorithm: Algo,
    workers: usize,
    chunk_sizes: &[usize],
) -> Result<Vec<BenchRow>, Error> {
    if chunk_sizes.is_empty() {
        return Err(Error::Config("chunk_sizes must be nonempty".into()));
    }
    let transpose = algorithm.needs_transpose().then(|| g.transpose());
    let mut rows = Vec::with_capacity(chunk_sizes.len());
    for (rep, &chunk) in chunk_sizes.iter().enumerate() {
        let init = StatusArray::new_live(g.vertex_count());
        let started = Instant::now();
        let result = run_engine(algorithm, g, transpose.as_ref(), init, workers, chunk)?;
        let wall = started.elapsed();
        rows.push(BenchRow {
            algorithm: algorithm.name().to_string(),
            p: workers,
            rep,
            max_edges_per_worker: result.metrics.max_edges_per_worker(),
            total_edges: result.metrics.total_edges(),
            max_qp: result.metrics.max_qp,
            removed: result.metrics.removed,
            wall_ms: wall.as_secs_f64() * 1e3,
        });
    }
    Ok(rows)
}

fn summarize(rows: &[BenchRow]) -> Vec<BenchSummary> {
    let mut cells: Vec<(String, usize)> = Vec::new();
    for row in rows {
        let key = (row.algorithm.clone(), row.p);
        if !cells.contains(&key) {
            cells.push(key);
        }
    }
    let mut out = Vec::new();
    for (algorithm, p) in cells {
        let cell: Vec<&BenchRow> = rows
            .iter()
            .filter(|r| r.algorithm == algorithm && r.p == p)
            .collect();
        let columns: [fn(&BenchRow) -> f64; 5] = [
            |r| r.max_edges_per_worker as f64,
            |r| r.total_edges as f64,
            |r| r.max_qp as f64,
            |r| r.removed as f64,
            |r| r.wall_ms,
        ];
        let stats: Vec<(f64, f64)> = columns
            .iter()
            .map(|get| mean_ci(cell.iter().map(|r| get(r))))
            .collect();
        out.push(BenchSummary {
            algorithm: algorithm.clone(),
            p,
            rep: "mean".into(),
            max_edges_per_worker: stats[0].0,
            total_edges: stats[1].0,
            max_qp: stats[2].0,
            removed: stats[3].0,
            wall_ms: stats[4].0,
        });
        out.push(BenchSummary {
            algorithm,
            p,
            rep: "ci95".into(),
            max_edges_per_worker: stats[0].1,
            total_edges: stats[1].1,
            max_qp: stats[2].1,
            removed: stats[3].1,
            wall_ms: stats[4].1,
        });
    }
    out
}

/// Sample mean and 95% confidence half-width under the normal approximation,
/// `1.96 * s / sqrt(count)`.
pub fn mean_ci(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let values: Vec<f64> = values.collect();
    let count = values.len();
    if count == 0 {
        return (0.0, 0.0);
    }
    let mean = values.iter().sum::<f64>() / count as f64;
    if count == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (count as f64 - 1.0);
    (mean, 1.96 * var.sqrt() / (count as f64).sqrt())
}

pub const CSV_HEADER: &str =
    "algorithm,P,rep,max_edges_per_worker,total_edges,max_qp,removed,wall_ms";

/// Writes the report as CSV: the fixed header, one line per run, then the
/// aggregate lines (`rep` column holds `mean`/`ci95`). Sampling groups are
/// separated by a `#` comment naming the kind and ratio.
pub fn write_csv<W: Write>(report: &BenchReport, mut sink: W) -> Result<(), Error> {
    for group in &report.groups {
        if let Some((kind, ratio)) = group.sampling {
            writeln!(sink, "# sampling={kind} ratio={ratio}")?;
        }
        writeln!(sink, "{CSV_HEADER}")?;
        for r in &group.rows {
            writeln!(
                sink,
                "{},{},{},{},{},{},{},{:.3}",
                r.algorithm, r.p, r.rep, r.max_edges_per_worker, r.total_edges, r.max_qp,
                r.removed, r.wall_ms
            )?;
        }
        for s in &group.summaries {
            writeln!(
                sink,
                "{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3}",
                s.algorithm, s.p, s.rep, s.max_edges_per_worker, s.total_edges, s.max_qp,
                s.removed, s.wall_ms
            )?;
        }
    }
    Ok(())
}

/// Writes the report as JSON lines, one object per run and per aggregate,
/// mirroring the CSV columns. Sampling runs carry `sampling`/`ratio` fields.
pub fn write_jsonl<W: Write>(report: &BenchReport, mut sink: W) -> Result<(), Error> {
    for group in &report.groups {
        for r in &group.rows {
            let mut value = serde_json::to_value(r).expect("row serialization cannot fail");
            if let Some((kind, ratio)) = group.sampling {
                value["sampling"] = serde_json::json!(kind.to_string());
                value["ratio"] = serde_json::json!(ratio);
            }
            writeln!(sink, "{value}")?;
        }
        for s in &group.summaries {
            let value = serde_json::to_value(s).expect("summary serialization cannot fail");
            writeln!(sink, "{value}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_er, VertexId};

    fn chain(len: usize) -> CsrGraph {
        let edges: Vec<(VertexId, VertexId)> =
            (0..len as VertexId - 1).map(|v| (v, v + 1)).collect();
        CsrGraph::from_edges(len, &edges).unwrap()
    }

    #[test]
    fn ac3_chain_single_worker_matches_engine_example() {
        let g = chain(10);
        let r = run_engine(Algo::Ac3, &g, None, StatusArray::new_live(10), 1, 4096).unwrap();
        assert_eq!(r.metrics.sweeps_or_rounds, 11);
        assert_eq!(r.metrics.removed, 10);
    }

    #[test]
    fn repeated_runs_have_identical_removal_counts() {
        let g = gen_er(400, 1200, 9).unwrap();
        for algo in Algo::ALL {
            let cfg = BenchConfig {
                algorithm: algo,
                workers: vec![1, 4],
                repetitions: 12,
                ..BenchConfig::default()
            };
            let report = run_bench(&g, &cfg).unwrap();
            let rows = &report.groups[0].rows;
            assert_eq!(rows.len(), 24);
            assert!(
                rows.windows(2).all(|w| w[0].removed == w[1].removed),
                "dead-set size must not vary across runs for {algo}"
            );
        }
    }

    #[test]
    fn chunk_sweep_is_schedule_independent() {
        let g = gen_er(300, 900, 4).unwrap();
        let rows = chunk_sweep(&g, Algo::Ac6, 4, &[1, 7, 64, 4096]).unwrap();
        assert_eq!(rows.len(), 4);
        assert!(rows.windows(2).all(|w| w[0].removed == w[1].removed));

        let single = chunk_sweep(&g, Algo::Ac3, 2, &[16]).unwrap();
        assert_eq!(single.len(), 1);

        assert!(chunk_sweep(&g, Algo::Ac3, 2, &[]).is_err());
    }

    #[test]
    fn csv_has_exact_header_and_row_counts() {
        let g = gen_er(100, 300, 1).unwrap();
        let cfg = BenchConfig {
            algorithm: Algo::Ac4Star,
            workers: vec![2],
            repetitions: 3,
            ..BenchConfig::default()
        };
        let report = run_bench(&g, &cfg).unwrap();
        let mut buf = Vec::new();
        write_csv(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        // 3 runs plus mean plus ci95
        assert_eq!(lines.count(), 5);

        let mut buf = Vec::new();
        write_jsonl(&report, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        for line in text.lines() {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("P").is_some());
        }
    }

    #[test]
    fn vertex_and_edge_sampling_trends_are_monotone() {
        // Lower sampling ratios strand more vertices without live successors,
        // so the trimmed count grows as the ratio shrinks. One inversion is
        // tolerated to absorb randomness.
        let g = gen_er(20_000, 160_000, 21).unwrap();
        let base = BenchConfig {
            algorithm: Algo::Ac6,
            workers: vec![4],
            repetitions: 1,
            ..BenchConfig::default()
        };
        for kind in [SamplingKind::Vertices, SamplingKind::Edges] {
            let cfg = BenchConfig {
                sampling: Some(Sampling {
                    kind,
                    ratios: vec![1.0, 0.5, 0.1],
                }),
                ..base.clone()
            };
            let report = run_bench(&g, &cfg).unwrap();
            let removed: Vec<usize> = report.groups.iter().map(|g| g.rows[0].removed).collect();
            let inversions = removed.windows(2).filter(|w| w[1] < w[0]).count();
            assert!(
                inversions <= 1,
                "{kind} sampling trend violated: {removed:?}"
            );
        }
    }

    #[test]
    fn config_validation() {
        let g = chain(4);
        let bad = BenchConfig {
            repetitions: 0,
            ..BenchConfig::default()
        };
        assert!(run_bench(&g, &bad).is_err());
        let bad = BenchConfig {
            workers: vec![],
            ..BenchConfig::default()
        };
        assert!(run_bench(&g, &bad).is_err());
        assert!("bogus".parse::<Algo>().is_err());
        assert_eq!("ac4star".parse::<Algo>().unwrap(), Algo::Ac4Star);
    }

    #[test]
    fn mean_ci_matches_hand_computation() {
        let (mean, ci) = mean_ci([2.0, 4.0, 6.0].into_iter());
        assert!((mean - 4.0).abs() < 1e-12);
        // s = 2, half-width = 1.96 * 2 / sqrt(3)
        assert!((ci - 1.96 * 2.0 / 3f64.sqrt()).abs() < 1e-12);
        assert_eq!(mean_ci(std::iter::empty()), (0.0, 0.0));
        assert_eq!(mean_ci([5.0].into_iter()), (5.0, 0.0));
    }
}
