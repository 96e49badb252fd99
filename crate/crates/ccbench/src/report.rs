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

//! Reporting over stored bundles: re-deriving rankings, re-scoring with a
//! different power exponent, and plot-ready parameter sweeps.
//!
//! Everything here works from the files a run wrote, so reports are
//! reproducible long after the simulations ran; recomputing a ranking
//! from a stored bundle yields the ranking the run wrote.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::bail;
use anyhow::Context;
use anyhow::Result;
use ccbench_core::cc::SchemeId;
use ccbench_core::netsim::BandwidthTrace;
use ccbench_core::netsim::LinkConfig;
use ccbench_core::scenarios;
use ccbench_core::scenarios::Benchmark;
use ccbench_core::scenarios::FlowScheme;
use ccbench_core::scenarios::Scenario;
use ccbench_core::scenarios::ScenarioFlow;
use ccbench_core::scoring;
use ccbench_core::scoring::ScoreKind;
use ccbench_core::scoring::ScoreRecord;
use ccbench_core::scoring::INTERVALS;
use ccbench_core::units::Nanos;
use serde::Deserialize;
use serde::Serialize;

use crate::bundle;
use crate::bundle::RankingRow;
use crate::bundle::ResultRow;
use crate::runner;

/// Sweep table file name.
pub const SWEEP_FILE: &str = "sweep.csv";

/// A parameter sweep at a fixed operating point, in the shape used for
/// score-versus-parameter comparison plots.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    /// Sweep the bottleneck buffer size at fixed bandwidth and delay.
    Buffer {
        /// Bottleneck bandwidth, Mbps.
        bw_mbps: u64,
        /// Two-way propagation delay, milliseconds.
        min_rtt_ms: u64,
        /// Buffer sizes to sweep, kilobytes (1 kB = 1024 bytes).
        buffers_kb: Vec<u64>,
    },
    /// Sweep the propagation delay at fixed bandwidth and a queue sized
    /// relative to each point's BDP.
    MinRtt {
        /// Bottleneck bandwidth, Mbps.
        bw_mbps: u64,
        /// Queue size, multiples of the BDP.
        queue_bdp_multiple: f64,
        /// Delays to sweep, milliseconds.
        min_rtts_ms: Vec<u64>,
    },
}

/// One row of `sweep.csv`: a scheme's aggregate power score at one sweep
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Which parameter was swept (`buffer_kb` or `min_rtt_ms`).
    pub sweep: String,
    /// Scenario the point ran.
    pub scenario_id: String,
    /// The measured scheme.
    pub scheme: SchemeId,
    /// The swept parameter's value at this point.
    pub x: f64,
    /// Mean of the four per-interval power scores.
    pub power_score: f64,
}

/// Mean of the four per-interval power scores of one scored cell. Errors
/// if any interval went unscored, since the aggregate would silently
/// drop it.
pub fn mean_power(records: &[ScoreRecord]) -> Result<f64> {
    let values: Vec<f64> = records
        .iter()
        .filter(|r| r.kind == ScoreKind::Power)
        .map(|r| r.value)
        .collect();
    if values.len() != INTERVALS as usize {
        bail!(
            "expected {INTERVALS} scored intervals, found {}",
            values.len()
        );
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Builds the single-flow scenarios of a buffer-size sweep.
pub fn buffer_sweep_scenarios(
    bw_mbps: u64,
    min_rtt_ms: u64,
    buffers_kb: &[u64],
) -> Result<Vec<Scenario>> {
    let mut list = Vec::with_capacity(buffers_kb.len());
    for &kb in buffers_kb {
        let link = LinkConfig::new(
            BandwidthTrace::flat(bw_mbps * 1_000_000)?,
            Nanos::from_millis(min_rtt_ms),
            kb * 1024,
        )?;
        list.push(Scenario {
            id: format!("sweep-buffer-bw{bw_mbps}-rtt{min_rtt_ms}-kb{kb}"),
            benchmark: Benchmark::Ccbench1Flat,
            link,
            duration: scenarios::CCBENCH1_DURATION,
            flows: vec![ScenarioFlow {
                scheme: FlowScheme::UnderTest,
                start: Nanos::ZERO,
            }],
        });
    }
    Ok(list)
}

/// Builds the single-flow scenarios of a propagation-delay sweep; the
/// queue is resized to `queue_bdp_multiple × BDP` at every point.
pub fn min_rtt_sweep_scenarios(
    bw_mbps: u64,
    queue_bdp_multiple: f64,
    min_rtts_ms: &[u64],
) -> Result<Vec<Scenario>> {
    if queue_bdp_multiple.is_nan() || queue_bdp_multiple <= 0.0 {
        bail!("queue size multiple {queue_bdp_multiple} is not positive");
    }
    let mut list = Vec::with_capacity(min_rtts_ms.len());
    for &rtt_ms in min_rtts_ms {
        let bw_bps = bw_mbps * 1_000_000;
        let min_rtt = Nanos::from_millis(rtt_ms);
        let bdp = scenarios::bdp_bytes(bw_bps, min_rtt)?;
        let queue = ((queue_bdp_multiple * bdp) as u64).max(ccbench_core::MSS);
        let link = LinkConfig::new(BandwidthTrace::flat(bw_bps)?, min_rtt, queue)?;
        list.push(Scenario {
            id: format!(
                "sweep-minrtt-bw{bw_mbps}-q{queue_bdp_multiple}-rtt{rtt_ms}"
            ),
            benchmark: Benchmark::Ccbench1Flat,
            link,
            duration: scenarios::CCBENCH1_DURATION,
            flows: vec![ScenarioFlow {
                scheme: FlowScheme::UnderTest,
                start: Nanos::ZERO,
            }],
        });
    }
    Ok(list)
}

/// Runs a sweep for each scheme and returns one row per (point, scheme),
/// point-major. A point a scheme cannot complete (stall or simulation
/// failure) is an error: a comparison curve with holes is worse than a
/// loud failure.
pub fn run_sweep(spec: &SweepSpec, schemes: &[SchemeId], alpha: f64) -> Result<Vec<SweepRow>> {
    if schemes.is_empty() {
        bail!("no schemes to sweep (pass --schemes)");
    }
    let (label, scenarios, xs): (&str, Vec<Scenario>, Vec<f64>) = match spec {
        SweepSpec::Buffer {
            bw_mbps,
            min_rtt_ms,
            buffers_kb,
        } => (
            "buffer_kb",
            buffer_sweep_scenarios(*bw_mbps, *min_rtt_ms, buffers_kb)?,
            buffers_kb.iter().map(|&kb| kb as f64).collect(),
        ),
        SweepSpec::MinRtt {
            bw_mbps,
            queue_bdp_multiple,
            min_rtts_ms,
        } => (
            "min_rtt_ms",
            min_rtt_sweep_scenarios(*bw_mbps, *queue_bdp_multiple, min_rtts_ms)?,
            min_rtts_ms.iter().map(|&ms| ms as f64).collect(),
        ),
    };
    if scenarios.is_empty() {
        bail!("sweep has no points");
    }

    let mut rows = Vec::with_capacity(scenarios.len() * schemes.len());
    for (scenario, &x) in scenarios.iter().zip(&xs) {
        for &scheme in schemes {
            let cell = runner::run_cell(scenario, scheme, alpha);
            if let Some(error) = &cell.error {
                bail!("sweep point {} with {scheme}: {error}", scenario.id);
            }
            let power_score = mean_power(&cell.records).with_context(|| {
                format!("sweep point {} with {scheme}", scenario.id)
            })?;
            rows.push(SweepRow {
                sweep: label.to_string(),
                scenario_id: scenario.id.clone(),
                scheme,
                x,
                power_score,
            });
        }
    }
    Ok(rows)
}

/// Rebuilds score records from stored result rows, optionally replacing
/// every power score using a new exponent (`rescore_alpha`).
fn records_from_rows(rows: &[ResultRow], rescore_alpha: Option<f64>) -> Result<Vec<ScoreRecord>> {
    let mut records = Vec::with_capacity(rows.len());
    for row in rows {
        let value = match (row.score_kind, rescore_alpha) {
            (ScoreKind::Power, Some(alpha)) => scoring::power_score(row.r_mbps, row.d_ms, alpha)
                .with_context(|| {
                    format!(
                        "re-scoring ({}, {}, {})",
                        row.scenario_id, row.scheme, row.interval
                    )
                })?,
            _ => row.score,
        };
        records.push(ScoreRecord {
            scenario_id: row.scenario_id.clone(),
            scheme: row.scheme,
            interval_index: row.interval,
            kind: row.score_kind,
            value,
            direction: row.score_kind.direction(),
            fair_share_mbps: match row.score_kind {
                ScoreKind::Friendliness => row.f_mbps,
                ScoreKind::Power => None,
            },
        });
    }
    Ok(records)
}

/// The scheme roster of a stored bundle: every scheme that scored or
/// failed. (Results and failures together account for every cell, so the
/// union is exact.)
fn stored_schemes(dir: &Path) -> Result<Vec<SchemeId>> {
    let mut set = BTreeSet::new();
    for row in bundle::load_results(dir)? {
        set.insert(row.scheme);
    }
    for row in bundle::load_failures(dir)? {
        set.insert(row.scheme);
    }
    if set.is_empty() {
        bail!("bundle in {} holds no cells at all", dir.display());
    }
    Ok(set.into_iter().collect())
}

/// Recomputes the ranking of a stored bundle from its score table,
/// manifest, and failure log. Byte-for-byte reproduces the `ranking.csv`
/// the run wrote.
pub fn recompute_ranking(dir: &Path) -> Result<Vec<RankingRow>> {
    let manifest = bundle::load_manifest(&dir.join(bundle::MANIFEST_FILE))?;
    let results = bundle::load_results(dir)?;
    let schemes = stored_schemes(dir)?;
    let records = records_from_rows(&results, None)?;
    let winner_sets = runner::winner_sets_from_records(records.iter())?;
    let rankings = runner::compute_rankings(&schemes, &manifest, &winner_sets)?;
    Ok(ranking_rows(&rankings))
}

/// Re-scores a stored bundle with a new power exponent and writes the
/// derived bundle (manifest, results, failures, ranking) into `out`.
/// Friendliness scores do not depend on the exponent and are recomputed
/// unchanged; traces are simulation outputs and are not copied.
pub fn rescore(dir: &Path, alpha: f64, out: &Path) -> Result<()> {
    if alpha.is_nan() || alpha <= 0.0 {
        bail!("alpha must be positive, got {alpha}");
    }
    let manifest = bundle::load_manifest(&dir.join(bundle::MANIFEST_FILE))?;
    let mut rows = bundle::load_results(dir)?;
    let failures = bundle::load_failures(dir)?;
    let schemes = stored_schemes(dir)?;

    let records = records_from_rows(&rows, Some(alpha))?;
    let winner_sets = runner::winner_sets_from_records(records.iter())?;
    for (row, record) in rows.iter_mut().zip(&records) {
        row.score = record.value;
        let key = (row.scenario_id.clone(), row.interval, row.score_kind);
        let winners = winner_sets
            .get(&key)
            .with_context(|| format!("cell ({}, {}, {}) was never judged", key.0, key.1, key.2))?;
        row.is_winner = winners.contains(&row.scheme);
    }
    let rankings = runner::compute_rankings(&schemes, &manifest, &winner_sets)?;

    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    bundle::write_manifest(&manifest, &out.join(bundle::MANIFEST_FILE))?;
    bundle::write_results(&rows, out)?;
    bundle::write_failures(&failures, out)?;
    bundle::write_ranking(&ranking_rows(&rankings), out)?;
    Ok(())
}

/// Writes sweep rows as `sweep.csv` under `out`.
pub fn write_sweep(rows: &[SweepRow], out: &Path) -> Result<()> {
    std::fs::create_dir_all(out)
        .with_context(|| format!("creating output directory {}", out.display()))?;
    bundle::write_csv_file(&out.join(SWEEP_FILE), rows)
}

fn ranking_rows(rankings: &[(ScoreKind, scoring::Ranking)]) -> Vec<RankingRow> {
    let mut rows = Vec::new();
    for (kind, ranking) in rankings {
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BenchmarkSelector;
    use crate::config::RunConfig;

    fn stored_bundle(benchmark: BenchmarkSelector) -> (tempfile::TempDir, crate::ResultsBundle) {
        let mut cfg = RunConfig::new(benchmark, vec![SchemeId::Cubic, SchemeId::NewReno]);
        cfg.grid.bandwidths_mbps = Some(vec![12]);
        cfg.grid.min_rtts_ms = Some(vec![20]);
        cfg.grid.queue_bdp_multiples = Some(vec![2.0]);
        let bundle = runner::run(&cfg).unwrap();
        let dir = tempfile::tempdir().unwrap();
        bundle.write(dir.path()).unwrap();
        (dir, bundle)
    }

    #[test]
    fn recomputed_ranking_matches_the_stored_one() {
        let (dir, bundle) = stored_bundle(BenchmarkSelector::Ccbench2);
        let recomputed = recompute_ranking(dir.path()).unwrap();
        assert_eq!(recomputed, bundle.ranking_rows());
        assert_eq!(recomputed, bundle::load_ranking(dir.path()).unwrap());
    }

    #[test]
    fn rescoring_changes_power_scores_only() {
        let (dir, bundle) = stored_bundle(BenchmarkSelector::Ccbench2);

        let same = tempfile::tempdir().unwrap();
        rescore(dir.path(), bundle.config.alpha, same.path()).unwrap();
        assert_eq!(
            std::fs::read(dir.path().join(bundle::RESULTS_FILE)).unwrap(),
            std::fs::read(same.path().join(bundle::RESULTS_FILE)).unwrap(),
            "same exponent must reproduce the score table byte for byte"
        );

        let out = tempfile::tempdir().unwrap();
        rescore(dir.path(), 1.0, out.path()).unwrap();
        let before = bundle::load_results(dir.path()).unwrap();
        let after = bundle::load_results(out.path()).unwrap();
        assert_eq!(before.len(), after.len());
        for (b, a) in before.iter().zip(&after) {
            assert_eq!((b.r_mbps, b.d_ms), (a.r_mbps, a.d_ms));
            match b.score_kind {
                ScoreKind::Power => {
                    assert_eq!(a.score, scoring::power_score(b.r_mbps, b.d_ms, 1.0).unwrap());
                }
                ScoreKind::Friendliness => assert_eq!(a.score, b.score),
            }
        }
    }

    #[test]
    fn buffer_sweep_builds_the_requested_points() {
        let list = buffer_sweep_scenarios(48, 40, &[64, 1024]).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list[0].id, "sweep-buffer-bw48-rtt40-kb64");
        assert_eq!(list[0].link.queue_capacity, 64 * 1024);
        assert_eq!(list[1].link.queue_capacity, 1024 * 1024);
        for s in &list {
            s.validate().unwrap();
        }
    }

    #[test]
    fn min_rtt_sweep_resizes_the_queue_per_point() {
        let list = min_rtt_sweep_scenarios(48, 5.0, &[20, 120]).unwrap();
        assert_eq!(list.len(), 2);
        assert_eq!(list[0].id, "sweep-minrtt-bw48-q5-rtt20");
        // 5 × BDP(48 Mbps, 20 ms) = 5 × 120000 B.
        assert_eq!(list[0].link.queue_capacity, 600_000);
        assert_eq!(list[1].link.queue_capacity, 3_600_000);
        for s in &list {
            s.validate().unwrap();
        }
    }

    #[test]
    fn sweeps_produce_point_major_rows() {
        let spec = SweepSpec::Buffer {
            bw_mbps: 12,
            min_rtt_ms: 20,
            buffers_kb: vec![64, 128],
        };
        let rows = run_sweep(&spec, &[SchemeId::Cubic, SchemeId::NewReno], 2.0).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].x, 64.0);
        assert_eq!(rows[1].x, 64.0);
        assert_eq!(rows[2].x, 128.0);
        assert!(rows.iter().all(|r| r.power_score > 0.0));
        assert!(rows.iter().all(|r| r.sweep == "buffer_kb"));

        let out = tempfile::tempdir().unwrap();
        write_sweep(&rows, out.path()).unwrap();
        let read: Vec<SweepRow> =
            csv::Reader::from_path(out.path().join(SWEEP_FILE))
                .unwrap()
                .deserialize()
                .collect::<Result<_, _>>()
                .unwrap();
        assert_eq!(read, rows);
    }

    #[test]
    fn mean_power_requires_all_intervals() {
        let record = |interval_index| ScoreRecord {
            scenario_id: "s".to_string(),
            scheme: SchemeId::Cubic,
            interval_index,
            kind: ScoreKind::Power,
            value: 2.0,
            direction: ScoreKind::Power.direction(),
            fair_share_mbps: None,
        };
        let full: Vec<ScoreRecord> = (0..4).map(record).collect();
        assert_eq!(mean_power(&full).unwrap(), 2.0);
        assert!(mean_power(&full[..3]).is_err());
    }
}
