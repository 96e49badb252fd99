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

//! Cell execution: fans the scenario × scheme cross product out over a
//! bounded worker pool and folds the scores into winner sets and rankings.
//!
//! A *cell* is one (scenario, scheme) pair. Cells are independent, so they
//! are distributed over worker threads; the result vector keeps the input
//! order (scenario-major, scheme-minor), which makes runs with any worker
//! count byte-identical. A failing cell is recorded, never fatal.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use anyhow::bail;
use anyhow::Context;
use anyhow::Result;
use ccbench_core::cc::SchemeId;
use ccbench_core::netsim::simulate;
use ccbench_core::netsim::FlowTrace;
use ccbench_core::scenarios::Benchmark;
use ccbench_core::scenarios::FlowScheme;
use ccbench_core::scenarios::Scenario;
use ccbench_core::scoring;
use ccbench_core::scoring::IntervalMeasurement;
use ccbench_core::scoring::ScoreKind;
use ccbench_core::scoring::ScoreRecord;
use ccbench_core::scoring::INTERVALS;
use ccbench_core::units::Nanos;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::ResultsBundle;
use crate::config::RunConfig;

/// Identifies one judged (scenario, interval, kind) cell.
pub type WinnerKey = (String, u32, ScoreKind);

/// Winner set of every judged cell, in deterministic key order.
pub type WinnerSets = BTreeMap<WinnerKey, BTreeSet<SchemeId>>;

/// Compact per-flow outcome kept from each simulation. Full ack traces
/// are dropped after scoring: over a multi-thousand-cell run they would
/// dwarf memory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceSummary {
    /// Index of the flow in the scenario's flow list.
    pub flow_id: u32,
    /// The scheme that drove the flow (placeholder slots resolved).
    pub scheme: SchemeId,
    /// Total bytes handed to the link.
    pub bytes_sent: u64,
    /// Total bytes acknowledged.
    pub bytes_acked: u64,
    /// Packets discarded by the drop-tail queue.
    pub drop_count: u64,
    /// Bytes discarded by the drop-tail queue.
    pub dropped_bytes: u64,
    /// Dupack loss episodes signaled to the scheme.
    pub loss_episodes: u64,
    /// Retransmission timeouts signaled to the scheme.
    pub timeout_count: u64,
    /// Bytes still inside the network when the simulation drained.
    pub in_flight_at_end: u64,
    /// Number of acknowledgements received.
    pub ack_count: u64,
    /// Mean round-trip time over all acks, milliseconds.
    pub mean_rtt_ms: Option<f64>,
    /// Set if the stall detector silenced the flow, at the time it did.
    pub stalled_at: Option<Nanos>,
}

/// Everything one (scenario, scheme) cell produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    /// Scenario the cell ran.
    pub scenario_id: String,
    /// The scenario's benchmark family.
    pub benchmark: Benchmark,
    /// Scheme under test.
    pub scheme: SchemeId,
    /// Index of the flow under test in the scenario's flow list.
    pub under_test_flow: u32,
    /// Per-interval measurements of the flow under test (empty if the
    /// simulation failed).
    pub measurements: Vec<IntervalMeasurement>,
    /// Score records derived from the measurements; no-data intervals
    /// contribute none.
    pub records: Vec<ScoreRecord>,
    /// Summaries of every flow in the cell.
    pub traces: Vec<TraceSummary>,
    /// Why the cell produced no scores, if it failed outright.
    pub error: Option<String>,
}

impl CellResult {
    /// The flow-under-test summary, when the simulation ran.
    pub fn under_test_trace(&self) -> Option<&TraceSummary> {
        self.traces.get(self.under_test_flow as usize)
    }
}

/// Runs the full benchmark described by `config` and aggregates results
/// into a bundle ready to be written out.
pub fn run(config: &RunConfig) -> Result<ResultsBundle> {
    let scenarios = config.scenarios()?;
    run_scenarios(config, scenarios)
}

/// Runs `config`'s schemes over an explicit scenario list (a pinned
/// manifest or a generated grid).
pub fn run_scenarios(config: &RunConfig, scenarios: Vec<Scenario>) -> Result<ResultsBundle> {
    config.validate()?;
    if scenarios.is_empty() {
        bail!("no scenarios to run");
    }
    let mut ids = BTreeSet::new();
    for scenario in &scenarios {
        scenario
            .validate()
            .with_context(|| format!("scenario {}", scenario.id))?;
        if !ids.insert(scenario.id.as_str()) {
            bail!("duplicate scenario id {}", scenario.id);
        }
    }

    let cells: Vec<(usize, SchemeId)> = (0..scenarios.len())
        .flat_map(|i| config.schemes.iter().map(move |&s| (i, s)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallel)
        .build()
        .context("building the worker pool")?;
    let alpha = config.alpha;
    // `map` + `collect` keeps the input order, so the outcome does not
    // depend on scheduling.
    let results: Vec<CellResult> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(i, scheme)| run_cell(&scenarios[i], scheme, alpha))
            .collect()
    });

    let winner_sets = compute_winner_sets(&results)?;
    let rankings = compute_rankings(&config.schemes, &scenarios, &winner_sets)?;
    Ok(ResultsBundle {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        config_hash: config.hash(),
        manifest: scenarios,
        cells: results,
        winner_sets,
        rankings,
    })
}

/// Simulates one (scenario, scheme) cell and scores the flow under test.
/// Failures land in the cell's `error` field.
pub fn run_cell(scenario: &Scenario, scheme: SchemeId, alpha: f64) -> CellResult {
    let under_test_flow = scenario
        .flows
        .iter()
        .position(|f| f.scheme == FlowScheme::UnderTest)
        .unwrap_or(0) as u32;
    let base = CellResult {
        scenario_id: scenario.id.clone(),
        benchmark: scenario.benchmark,
        scheme,
        under_test_flow,
        measurements: Vec::new(),
        records: Vec::new(),
        traces: Vec::new(),
        error: None,
    };

    let traces = match simulate(&scenario.link, scenario.flows_for(scheme)) {
        Ok(traces) => traces,
        Err(e) => {
            return CellResult {
                error: Some(e.to_string()),
                ..base
            }
        }
    };
    let summaries: Vec<TraceSummary> = traces
        .iter()
        .map(|t| summarize(t, scenario, scheme))
        .collect();

    let measurements =
        scoring::interval_measurements(&traces[under_test_flow as usize], scenario);
    let mut records = Vec::new();
    for m in &measurements {
        match scoring::records_for_interval(&scenario.id, scheme, m, alpha) {
            Ok(list) => records.extend(list),
            Err(e) => {
                return CellResult {
                    measurements,
                    traces: summaries,
                    error: Some(e.to_string()),
                    ..base
                }
            }
        }
    }
    CellResult {
        measurements,
        records,
        traces: summaries,
        ..base
    }
}

fn summarize(trace: &FlowTrace, scenario: &Scenario, under_test: SchemeId) -> TraceSummary {
    let scheme = match scenario.flows[trace.flow_id as usize].scheme {
        FlowScheme::UnderTest => under_test,
        FlowScheme::Fixed(id) => id,
    };
    let ack_count = trace.ack_records.len() as u64;
    let mean_rtt_ms = (ack_count > 0).then(|| {
        let total: f64 = trace.ack_records.iter().map(|a| a.rtt.as_secs_f64()).sum();
        total / ack_count as f64 * 1e3
    });
    TraceSummary {
        flow_id: trace.flow_id,
        scheme,
        bytes_sent: trace.bytes_sent,
        bytes_acked: trace.bytes_acked,
        drop_count: trace.drop_count,
        dropped_bytes: trace.dropped_bytes,
        loss_episodes: trace.loss_episodes,
        timeout_count: trace.timeout_count,
        in_flight_at_end: trace.in_flight_at_end,
        ack_count,
        mean_rtt_ms,
        stalled_at: trace.stalled_at,
    }
}

/// Groups every score record by (scenario, interval, kind) and judges
/// each group under the 10% winner margin.
pub fn compute_winner_sets(cells: &[CellResult]) -> Result<WinnerSets> {
    winner_sets_from_records(cells.iter().flat_map(|c| c.records.iter()))
}

/// Judges an arbitrary record stream (used both on fresh runs and on
/// records reloaded from a stored score table).
pub fn winner_sets_from_records<'a>(
    records: impl Iterator<Item = &'a ScoreRecord>,
) -> Result<WinnerSets> {
    let mut grouped: BTreeMap<WinnerKey, Vec<ScoreRecord>> = BTreeMap::new();
    for record in records {
        grouped
            .entry((record.scenario_id.clone(), record.interval_index, record.kind))
            .or_default()
            .push(record.clone());
    }
    let mut sets = WinnerSets::new();
    for (key, records) in grouped {
        let set = scoring::winners(&records)
            .with_context(|| format!("judging cell ({}, {}, {})", key.0, key.1, key.2))?;
        sets.insert(key, set);
    }
    Ok(sets)
}

/// Computes one ranking per score kind defined by the scenario list.
///
/// Power is defined everywhere; friendliness only in coexistence
/// scenarios. A scheme's rate counts every judged (scenario, interval)
/// cell of the kind — a cell nobody scored (all failed) still counts in
/// the denominator, with an empty winner set.
pub fn compute_rankings(
    schemes: &[SchemeId],
    scenarios: &[Scenario],
    winner_sets: &WinnerSets,
) -> Result<Vec<(ScoreKind, scoring::Ranking)>> {
    let mut rankings = Vec::new();
    for kind in [ScoreKind::Power, ScoreKind::Friendliness] {
        let judged: Vec<BTreeSet<SchemeId>> = scenarios
            .iter()
            .filter(|s| kind == ScoreKind::Power || s.benchmark == Benchmark::Ccbench2)
            .flat_map(|s| {
                (0..INTERVALS).map(|i| {
                    winner_sets
                        .get(&(s.id.clone(), i, kind))
                        .cloned()
                        .unwrap_or_default()
                })
            })
            .collect();
        if judged.is_empty() {
            continue;
        }
        let mut rates = Vec::with_capacity(schemes.len());
        for &scheme in schemes {
            rates.push((scheme, scoring::winning_rate(&judged, scheme)?));
        }
        rankings.push((kind, scoring::rank(&rates)));
    }
    Ok(rankings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::BenchmarkSelector;

    /// A one-scenario flat config that simulates in well under a second.
    fn tiny_config() -> RunConfig {
        let mut cfg = RunConfig::new(
            BenchmarkSelector::Ccbench1Flat,
            vec![SchemeId::Cubic, SchemeId::NewReno],
        );
        cfg.grid.bandwidths_mbps = Some(vec![12]);
        cfg.grid.min_rtts_ms = Some(vec![20]);
        cfg.grid.queue_bdp_multiples = Some(vec![2.0]);
        cfg
    }

    #[test]
    fn run_produces_one_cell_per_scenario_scheme_pair() {
        let bundle = run(&tiny_config()).unwrap();
        assert_eq!(bundle.manifest.len(), 1);
        assert_eq!(bundle.cells.len(), 2);
        for cell in &bundle.cells {
            assert!(cell.error.is_none(), "{:?}", cell.error);
            assert_eq!(cell.measurements.len(), 4);
            // Flat scenarios score power only: one record per interval.
            assert_eq!(cell.records.len(), 4);
            assert_eq!(cell.traces.len(), 1);
            assert!(cell.under_test_trace().unwrap().bytes_acked > 0);
        }
        // One power winner set per interval, each judging both schemes.
        assert_eq!(bundle.winner_sets.len(), 4);
        assert_eq!(bundle.rankings.len(), 1);
        assert_eq!(bundle.rankings[0].0, ScoreKind::Power);
        assert_eq!(bundle.rankings[0].1.len(), 2);
    }

    #[test]
    fn coexistence_cells_score_friendliness_too() {
        let mut cfg = tiny_config();
        cfg.benchmark = BenchmarkSelector::Ccbench2;
        cfg.schemes = vec![SchemeId::Cubic];
        let bundle = run(&cfg).unwrap();
        let cell = &bundle.cells[0];
        assert!(cell.error.is_none(), "{:?}", cell.error);
        assert_eq!(cell.records.len(), 8, "power + friendliness per interval");
        assert_eq!(cell.traces.len(), 2);
        assert_eq!(cell.under_test_flow, 1);
        let kinds: Vec<ScoreKind> = bundle.rankings.iter().map(|(k, _)| *k).collect();
        assert_eq!(kinds, vec![ScoreKind::Power, ScoreKind::Friendliness]);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut serial = tiny_config();
        serial.parallel = 1;
        let mut parallel = tiny_config();
        parallel.parallel = 4;
        let a = run(&serial).unwrap();
        let b = run(&parallel).unwrap();
        assert_eq!(a.cells, b.cells);
        assert_eq!(a.winner_sets, b.winner_sets);
        assert_eq!(a.rankings, b.rankings);
    }

    #[test]
    fn duplicate_scenario_ids_are_rejected() {
        let cfg = tiny_config();
        let scenarios = cfg.scenarios().unwrap();
        let doubled = [scenarios.clone(), scenarios].concat();
        assert!(run_scenarios(&cfg, doubled).is_err());
    }

    #[test]
    fn every_record_is_judged_in_exactly_one_winner_set() {
        let bundle = run(&tiny_config()).unwrap();
        for cell in &bundle.cells {
            for record in &cell.records {
                let key = (record.scenario_id.clone(), record.interval_index, record.kind);
                let set = bundle.winner_sets.get(&key).expect("judged cell");
                // The best scorer is always a winner, so the set is
                // nonempty whenever any record exists.
                assert!(!set.is_empty());
            }
        }
    }
}
