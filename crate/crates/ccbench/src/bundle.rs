// Copyright (c) 2026 The ccbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! The results bundle and its on-disk formats.
//!
//! A run writes one directory containing:
//!
//! * `manifest.json` — every scenario with all parameters explicit, so a
//!   pinned manifest fully determines a rerun.
//! * `run_meta.json` — tool version, config hash, and a timestamp (the
//!   only nondeterministic output; everything else is byte-reproducible).
//! * `traces.jsonl` — one line per cell with per-flow trace summaries and
//!   any cell error.
//! * `results.csv` — one row per score: measurement columns, the score,
//!   and the winner flag.
//! * `failures.csv` — one row per unscored (scenario, scheme, interval),
//!   so results and failures together account for every cell exactly once.
//! * `ranking.csv` — winning rates per score kind, best first.

use std::fs;
use std::io::BufWriter;
use std::io::Write;
use std::path::Path;

use anyhow::bail;
use anyhow::Context;
use anyhow::Result;
use ccbench_core::cc::SchemeId;
use ccbench_core::scenarios::Benchmark;
use ccbench_core::scenarios::Scenario;
use ccbench_core::scoring::Ranking;
use ccbench_core::scoring::ScoreKind;
use ccbench_core::scoring::INTERVALS;
use serde::Deserialize;
use serde::Serialize;

use crate::config::RunConfig;
use crate::runner::CellResult;
use crate::runner::TraceSummary;
use crate::runner::WinnerSets;

/// Scenario manifest file name.
pub const MANIFEST_FILE: &str = "manifest.json";
/// Run metadata file name (the only nondeterministic output).
pub const RUN_META_FILE: &str = "run_meta.json";
/// Per-cell trace summary file name.
pub const TRACES_FILE: &str = "traces.jsonl";
/// Score table file name.
pub const RESULTS_FILE: &str = "results.csv";
/// Unscored-cell table file name.
pub const FAILURES_FILE: &str = "failures.csv";
/// Ranking table file name.
pub const RANKING_FILE: &str = "ranking.csv";

/// Everything a benchmark run produced, ready to write or inspect.
#[derive(Debug, Clone)]
pub struct ResultsBundle {
    /// Tool version that produced the bundle.
    pub version: String,
    /// The configuration that ran.
    pub config: RunConfig,
    /// Hash identifying the configuration.
    pub config_hash: String,
    /// Every scenario that ran, with all parameters explicit.
    pub manifest: Vec<Scenario>,
    /// One result per (scenario, scheme) cell, in scenario-major order.
    pub cells: Vec<CellResult>,
    /// Winner set of every judged (scenario, interval, kind) cell.
    pub winner_sets: WinnerSets,
    /// One ranking per score kind the run defines.
    pub rankings: Vec<(ScoreKind, Ranking)>,
}

/// One row of `results.csv`: a scored (scenario, scheme, interval, kind)
/// with the measurements behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    /// Scenario the score was measured in.
    pub scenario_id: String,
    /// The scenario's benchmark family.
    pub benchmark: Benchmark,
    /// Scheme under test.
    pub scheme: SchemeId,
    /// Which quarter of the measurement window (0..4).
    pub interval: u32,
    /// Delivery rate over the interval, Mbps.
    pub r_mbps: f64,
    /// Mean round-trip delay over the interval, milliseconds.
    pub d_ms: f64,
    /// Expected fair share, Mbps; empty outside coexistence scenarios.
    pub f_mbps: Option<f64>,
    /// What the score measures.
    pub score_kind: ScoreKind,
    /// The score value.
    pub score: f64,
    /// Whether the scheme came within the 10% margin of the cell's best.
    pub is_winner: bool,
}

/// Why a (scenario, scheme, interval) produced no score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The simulation (or scoring) of the whole cell failed.
    Error,
    /// The flow under test was silenced by the stall detector.
    Stall,
    /// No acknowledgements arrived during the interval.
    NoData,
}

/// One row of `failures.csv`: an unscored (scenario, scheme, interval).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRow {
    /// Scenario of the unscored cell.
    pub scenario_id: String,
    /// The scenario's benchmark family.
    pub benchmark: Benchmark,
    /// Scheme under test.
    pub scheme: SchemeId,
    /// Which quarter of the measurement window (0..4).
    pub interval: u32,
    /// Why the interval went unscored.
    pub kind: FailureKind,
    /// Human-readable diagnosis.
    pub detail: String,
}

/// One row of `ranking.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingRow {
    /// Which score the ranking judges.
    pub score_kind: ScoreKind,
    /// The ranked scheme.
    pub scheme: SchemeId,
    /// Percentage of judged cells the scheme won.
    pub winning_rate: f64,
    /// 1-based position; ties in rate are ordered alphabetically.
    pub rank: u32,
}

#[derive(Serialize)]
struct RunMeta<'a> {
    version: &'a str,
    config_hash: &'a str,
    benchmark: &'a str,
    schemes: &'a [SchemeId],
    alpha: f64,
    parallel: usize,
    scenario_count: usize,
    cell_count: usize,
    /// Wall-clock write time; excluded from reproducibility comparisons.
    generated_unix_secs: u64,
}

#[derive(Serialize)]
struct TraceLine<'a> {
    scenario_id: &'a str,
    benchmark: Benchmark,
    scheme: SchemeId,
    error: Option<&'a str>,
    traces: &'a [TraceSummary],
}

impl ResultsBundle {
    /// Flattens the scored cells into `results.csv` rows, resolving each
    /// record's winner flag.
    pub fn result_rows(&self) -> Result<Vec<ResultRow>> {
        let mut rows = Vec::new();
        for cell in &self.cells {
            for record in &cell.records {
                let m = cell
                    .measurements
                    .iter()
                    .find(|m| m.interval_index == record.interval_index)
                    .with_context(|| {
                        format!(
                            "cell ({}, {}) scored interval {} without measuring it",
                            cell.scenario_id, cell.scheme, record.interval_index
                        )
                    })?;
                let d_secs = m.d_secs.with_context(|| {
                    format!(
                        "cell ({}, {}) scored a no-data interval",
                        cell.scenario_id, cell.scheme
                    )
                })?;
                let key = (
                    record.scenario_id.clone(),
                    record.interval_index,
                    record.kind,
                );
                let winners = self
                    .winner_sets
                    .get(&key)
                    .with_context(|| format!("cell ({}, {}, {}) was never judged", key.0, key.1, key.2))?;
                rows.push(ResultRow {
                    scenario_id: record.scenario_id.clone(),
                    benchmark: cell.benchmark,
                    scheme: record.scheme,
                    interval: record.interval_index,
                    r_mbps: m.r_bps / 1e6,
                    d_ms: d_secs * 1e3,
                    f_mbps: m.f_bps.map(|f| f / 1e6),
                    score_kind: record.kind,
                    score: record.value,
                    is_winner: winners.contains(&record.scheme),
                });
            }
        }
        Ok(rows)
    }

    /// Derives the `failures.csv` rows: one per (scenario, scheme,
    /// interval) that produced no score.
    pub fn failure_rows(&self) -> Vec<FailureRow> {
        let mut rows = Vec::new();
        for cell in &self.cells {
            if let Some(error) = &cell.error {
                for interval in 0..INTERVALS {
                    rows.push(FailureRow {
                        scenario_id: cell.scenario_id.clone(),
                        benchmark: cell.benchmark,
                        scheme: cell.scheme,
                        interval,
                        kind: FailureKind::Error,
                        detail: error.clone(),
                    });
                }
                continue;
            }
            let stalled_at = cell.under_test_trace().and_then(|t| t.stalled_at);
            for m in &cell.measurements {
                if m.d_secs.is_some() {
                    continue;
                }
                let (kind, detail) = match stalled_at {
                    Some(at) => (
                        FailureKind::Stall,
                        format!("flow under test stalled at {:.3} s", at.as_secs_f64()),
                    ),
                    None => (FailureKind::NoData, "no acks in interval".to_string()),
                };
                rows.push(FailureRow {
                    scenario_id: cell.scenario_id.clone(),
                    benchmark: cell.benchmark,
                    scheme: cell.scheme,
                    interval: m.interval_index,
                    kind,
                    detail,
                });
            }
        }
        rows
    }

    /// Flattens the rankings into `ranking.csv` rows.
    pub fn ranking_rows(&self) -> Vec<RankingRow> {
        let mut rows = Vec::new();
        for (kind, ranking) in &self.rankings {
            for (i, (scheme, rate)) in ranking.iter().enumerate() {
                rows.push(RankingRow {
                    score_kind: *kind,
                    scheme: *scheme,
                    winning_rate: *rate,
                    rank: i as u32 + 1,
                });
            }
        }
        rows
    }

    /// Writes the whole bundle into `dir`, creating it if needed.
    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;

        write_manifest(&self.manifest, &dir.join(MANIFEST_FILE))?;
        self.write_run_meta(&dir.join(RUN_META_FILE))?;
        self.write_traces(&dir.join(TRACES_FILE))?;
        write_csv(&dir.join(RESULTS_FILE), &self.result_rows()?)?;
        write_csv(&dir.join(FAILURES_FILE), &self.failure_rows())?;
        write_csv(&dir.join(RANKING_FILE), &self.ranking_rows())?;
        Ok(())
    }

    /// Whether any cell failed outright or left intervals unscored.
    pub fn has_failures(&self) -> bool {
        self.cells.iter().any(|c| {
            c.error.is_some() || c.measurements.iter().any(|m| m.d_secs.is_none())
        })
    }

    fn write_run_meta(&self, path: &Path) -> Result<()> {
        let generated_unix_secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let meta = RunMeta {
            version: &self.version,
            config_hash: &self.config_hash,
            benchmark: self.config.benchmark.as_str(),
            schemes: &self.config.schemes,
            alpha: self.config.alpha,
            parallel: self.config.parallel,
            scenario_count: self.manifest.len(),
            cell_count: self.cells.len(),
            generated_unix_secs,
        };
        write_json(path, &meta)
    }

    fn write_traces(&self, path: &Path) -> Result<()> {
        let file = fs::File::create(path)
            .with_context(|| format!("creating {}", path.display()))?;
        let mut out = BufWriter::new(file);
        for cell in &self.cells {
            let line = TraceLine {
                scenario_id: &cell.scenario_id,
                benchmark: cell.benchmark,
                scheme: cell.scheme,
                error: cell.error.as_deref(),
                traces: &cell.traces,
            };
            serde_json::to_writer(&mut out, &line)
                .with_context(|| format!("writing {}", path.display()))?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Writes a scenario manifest as pretty JSON.
pub fn write_manifest(scenarios: &[Scenario], path: &Path) -> Result<()> {
    write_json(path, &scenarios)
}

/// Loads a scenario manifest and validates every entry.
pub fn load_manifest(path: &Path) -> Result<Vec<Scenario>> {
    let data = fs::read_to_string(path)
        .with_context(|| format!("reading manifest {}", path.display()))?;
    let scenarios: Vec<Scenario> = serde_json::from_str(&data)
        .with_context(|| format!("parsing manifest {}", path.display()))?;
    if scenarios.is_empty() {
        bail!("manifest {} lists no scenarios", path.display());
    }
    for scenario in &scenarios {
        scenario
            .validate()
            .with_context(|| format!("manifest scenario {}", scenario.id))?;
    }
    Ok(scenarios)
}

/// Loads the score table from a bundle directory.
pub fn load_results(dir: &Path) -> Result<Vec<ResultRow>> {
    read_csv(&dir.join(RESULTS_FILE))
}

/// Loads the unscored-cell table from a bundle directory.
pub fn load_failures(dir: &Path) -> Result<Vec<FailureRow>> {
    read_csv(&dir.join(FAILURES_FILE))
}

/// Loads the ranking table from a bundle directory.
pub fn load_ranking(dir: &Path) -> Result<Vec<RankingRow>> {
    read_csv(&dir.join(RANKING_FILE))
}

/// Writes a score table into a bundle directory.
pub fn write_results(rows: &[ResultRow], dir: &Path) -> Result<()> {
    write_csv(&dir.join(RESULTS_FILE), rows)
}

/// Writes an unscored-cell table into a bundle directory.
pub fn write_failures(rows: &[FailureRow], dir: &Path) -> Result<()> {
    write_csv(&dir.join(FAILURES_FILE), rows)
}

/// Writes a ranking table into a bundle directory.
pub fn write_ranking(rows: &[RankingRow], dir: &Path) -> Result<()> {
    write_csv(&dir.join(RANKING_FILE), rows)
}

/// Writes any row type as a headered CSV file.
pub fn write_csv_file<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    write_csv(path, rows)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, value)
        .with_context(|| format!("writing {}", path.display()))?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let file = fs::File::create(path)
        .with_context(|| format!("creating {}", path.display()))?;
    let mut writer = csv::Writer::from_writer(BufWriter::new(file));
    for row in rows {
        writer
            .serialize(row)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    writer
        .flush()
        .with_context(|| format!("flushing {}", path.display()))?;
    Ok(())
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for row in reader.deserialize() {
        rows.push(row.with_context(|| format!("parsing {}", path.display()))?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BenchmarkSelector;
    use crate::runner;
    use ccbench_core::scoring::IntervalMeasurement;
    use ccbench_core::units::Nanos;
    use std::collections::BTreeSet;

    fn tiny_bundle() -> ResultsBundle {
        let mut cfg = RunConfig::new(
            BenchmarkSelector::Ccbench2,
            vec![SchemeId::Cubic, SchemeId::Vegas],
        );
        cfg.grid.bandwidths_mbps = Some(vec![12]);
        cfg.grid.min_rtts_ms = Some(vec![20]);
        cfg.grid.queue_bdp_multiples = Some(vec![2.0]);
        runner::run(&cfg).unwrap()
    }

    #[test]
    fn bundle_writes_all_files_and_reads_back() {
        let bundle = tiny_bundle();
        let dir = tempfile::tempdir().unwrap();
        bundle.write(dir.path()).unwrap();

        for name in [
            MANIFEST_FILE,
            RUN_META_FILE,
            TRACES_FILE,
            RESULTS_FILE,
            FAILURES_FILE,
            RANKING_FILE,
        ] {
            assert!(dir.path().join(name).exists(), "{name} missing");
        }

        let manifest = load_manifest(&dir.path().join(MANIFEST_FILE)).unwrap();
        assert_eq!(manifest, bundle.manifest);

        let rows = load_results(dir.path()).unwrap();
        assert_eq!(rows.len(), bundle.result_rows().unwrap().len());
        assert_eq!(rows, bundle.result_rows().unwrap());

        let ranking = load_ranking(dir.path()).unwrap();
        assert_eq!(ranking, bundle.ranking_rows());
    }

    #[test]
    fn every_cell_interval_is_accounted_exactly_once() {
        let bundle = tiny_bundle();
        let results = bundle.result_rows().unwrap();
        let failures = bundle.failure_rows();
        for cell in &bundle.cells {
            for interval in 0..INTERVALS {
                let scored = results
                    .iter()
                    .filter(|r| {
                        r.scenario_id == cell.scenario_id
                            && r.scheme == cell.scheme
                            && r.interval == interval
                    })
                    .count();
                let failed = failures
                    .iter()
                    .filter(|f| {
                        f.scenario_id == cell.scenario_id
                            && f.scheme == cell.scheme
                            && f.interval == interval
                    })
                    .count();
                // Scored intervals carry one row per score kind (two in
                // coexistence runs); unscored ones exactly one failure.
                assert!(
                    (scored > 0 && failed == 0) || (scored == 0 && failed == 1),
                    "cell ({}, {}, {interval}): {scored} results, {failed} failures",
                    cell.scenario_id,
                    cell.scheme,
                );
            }
        }
    }

    #[test]
    fn identical_runs_write_identical_deterministic_files() {
        let a = tiny_bundle();
        let b = tiny_bundle();
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        a.write(dir_a.path()).unwrap();
        b.write(dir_b.path()).unwrap();
        for name in [MANIFEST_FILE, TRACES_FILE, RESULTS_FILE, FAILURES_FILE, RANKING_FILE] {
            let bytes_a = fs::read(dir_a.path().join(name)).unwrap();
            let bytes_b = fs::read(dir_b.path().join(name)).unwrap();
            assert_eq!(bytes_a, bytes_b, "{name} differs between identical runs");
        }
    }

    #[test]
    fn failure_rows_classify_errors_stalls_and_gaps() {
        let mut bundle = tiny_bundle();
        let template = bundle.cells[0].clone();

        let errored = CellResult {
            error: Some("boom".to_string()),
            ..template.clone()
        };
        let no_data_measurement = IntervalMeasurement {
            flow_id: 1,
            interval_index: 3,
            r_bps: 0.0,
            d_secs: None,
            f_bps: None,
        };
        let mut stalled = template.clone();
        stalled.measurements[3] = no_data_measurement;
        stalled.records.clear();
        stalled.traces[stalled.under_test_flow as usize].stalled_at =
            Some(Nanos::from_secs(42));
        let mut gap = template.clone();
        gap.measurements[2] = IntervalMeasurement {
            interval_index: 2,
            ..no_data_measurement
        };

        bundle.cells = vec![errored, stalled, gap];
        let rows = bundle.failure_rows();
        let kinds: Vec<FailureKind> = rows.iter().map(|r| r.kind).collect();
        assert_eq!(
            kinds,
            vec![
                FailureKind::Error,
                FailureKind::Error,
                FailureKind::Error,
                FailureKind::Error,
                FailureKind::Stall,
                FailureKind::NoData,
            ]
        );
        assert!(rows[4].detail.contains("42.000 s"));
    }

    #[test]
    fn winner_flags_match_winner_sets() {
        let bundle = tiny_bundle();
        let rows = bundle.result_rows().unwrap();
        assert!(!rows.is_empty());
        for row in &rows {
            let key = (row.scenario_id.clone(), row.interval, row.score_kind);
            let set: &BTreeSet<SchemeId> = bundle.winner_sets.get(&key).unwrap();
            assert_eq!(row.is_winner, set.contains(&row.scheme));
        }
    }
}
