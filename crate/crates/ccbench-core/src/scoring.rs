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

//! Score computation, winner selection, and ranking.
//!
//! Each simulated run is scored over four equal intervals of its
//! measurement window:
//!
//! - The **power score** `r^α / d` rewards high delivery rate `r` (Mbps)
//!   and low mean round-trip delay `d` (ms); higher is better. `α`
//!   (default 2) sets the relative weight of throughput against delay.
//! - The **friendliness score** `|f − r|` measures how far a flow's rate
//!   lands from its fair share `f` of the bottleneck; lower is better.
//!
//! Within one (scenario, interval, kind) cell, every scheme whose score is
//! within 10% of the best earns a *win*; a scheme's **winning rate** is
//! the percentage of cells it wins across a benchmark, and schemes rank by
//! winning rate. The 10% margin is ratio-based, so winner sets are
//! invariant under rescaling of a cell's scores.
//!
//! Intervals in which a flow delivered nothing are marked *no-data* and
//! excluded: a stalled flow never scores, and in particular can never win
//! a lower-is-better cell by not transmitting.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::string::ToString;
use alloc::vec::Vec;

use crate::cc::SchemeId;
use crate::netsim::FlowTrace;
use crate::scenarios::Benchmark;
use crate::scenarios::Scenario;
use crate::units::Nanos;
use crate::Error;
use crate::Result;

/// Default exponent weighting delivery rate against delay in the power
/// score.
pub const DEFAULT_ALPHA: f64 = 2.0;

/// Number of equal scoring intervals per run.
pub const INTERVALS: u32 = 4;

/// Winners must score within this fraction of the cell's best score.
pub const WIN_MARGIN: f64 = 0.10;

/// When the best lower-is-better score is 0, winners must come within
/// this fraction of the fair share instead (a 10% band around zero would
/// admit only exact zeros).
pub const ZERO_BEST_EPSILON: f64 = 0.01;

/// What a score measures, which also fixes its optimization direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ScoreKind {
    /// `r^α / d`: throughput-delay tradeoff; higher is better.
    Power,
    /// `|f − r|`: deviation from fair share; lower is better.
    Friendliness,
}

impl ScoreKind {
    /// Stable lowercase token used in output tables.
    pub fn as_str(self) -> &'static str {
        match self {
            ScoreKind::Power => "power",
            ScoreKind::Friendliness => "friendliness",
        }
    }

    /// The optimization direction this kind of score is judged under.
    pub fn direction(self) -> Direction {
        match self {
            ScoreKind::Power => Direction::HigherBetter,
            ScoreKind::Friendliness => Direction::LowerBetter,
        }
    }
}

impl core::fmt::Display for ScoreKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Whether larger or smaller score values are preferable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Direction {
    /// Larger values win (power).
    HigherBetter,
    /// Smaller values win (friendliness).
    LowerBetter,
}

/// What one flow achieved during one scoring interval.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalMeasurement {
    /// The measured flow.
    pub flow_id: u32,
    /// Which quarter of the measurement window this is (0..4).
    pub interval_index: u32,
    /// Delivery rate over the interval, bits/second.
    pub r_bps: f64,
    /// Mean round-trip delay over the interval, seconds. `None` marks a
    /// no-data interval (no acks arrived), which is never scored.
    pub d_secs: Option<f64>,
    /// Expected fair share, bits/second. Present only for coexistence
    /// benchmarks, where a fair split of capacity is defined.
    pub f_bps: Option<f64>,
}

/// One scored (scenario, scheme, interval) cell entry.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScoreRecord {
    /// Scenario the score was measured in.
    pub scenario_id: String,
    /// Scheme under test.
    pub scheme: SchemeId,
    /// Which quarter of the measurement window (0..4).
    pub interval_index: u32,
    /// What the value measures.
    pub kind: ScoreKind,
    /// The score itself (units fixed by `kind`).
    pub value: f64,
    /// Judgment direction (always `kind.direction()`).
    pub direction: Direction,
    /// Fair share in Mbps, for friendliness records; anchors the
    /// zero-best winner epsilon.
    pub fair_share_mbps: Option<f64>,
}

/// A benchmark ranking: schemes with their winning rates, best first.
pub type Ranking = Vec<(SchemeId, f64)>;

/// Power score `r^α / d` for a delivery rate of `r_mbps` Mbps and a mean
/// round-trip delay of `d_ms` milliseconds.
///
/// The score is unit-dependent for α ≠ 1, so the Mbps/ms convention here
/// is part of the contract; winner sets do not depend on it.
pub fn power_score(r_mbps: f64, d_ms: f64, alpha: f64) -> Result<f64> {
    if r_mbps.is_nan() || r_mbps < 0.0 {
        return Err(Error::InvalidScore(alloc::format!(
            "delivery rate {r_mbps} Mbps is negative"
        )));
    }
    if d_ms.is_nan() || d_ms <= 0.0 {
        return Err(Error::InvalidScore(alloc::format!(
            "mean delay {d_ms} ms is not positive"
        )));
    }
    // A plain square is correctly rounded, so keep the default exponent
    // off the transcendental path.
    let powered = if alpha == 2.0 {
        r_mbps * r_mbps
    } else {
        libm::pow(r_mbps, alpha)
    };
    Ok(powered / d_ms)
}

/// Friendliness score `|f − r|`: the absolute gap between a flow's
/// delivery rate `r_mbps` and its expected fair share `f_mbps`, in Mbps.
pub fn friendliness_score(f_mbps: f64, r_mbps: f64) -> Result<f64> {
    if f_mbps.is_nan() || f_mbps <= 0.0 {
        return Err(Error::InvalidScore(alloc::format!(
            "fair share {f_mbps} Mbps is not positive"
        )));
    }
    if r_mbps.is_nan() || r_mbps < 0.0 {
        return Err(Error::InvalidScore(alloc::format!(
            "delivery rate {r_mbps} Mbps is negative"
        )));
    }
    Ok((f_mbps - r_mbps).abs())
}

/// Splits the scenario's measurement window into four equal intervals and
/// summarizes `trace` in each: delivery rate, mean round-trip delay, and
/// (for coexistence runs) the fair share of capacity.
///
/// Acks are binned by arrival time; an ack landing exactly on the window
/// end belongs to the last interval. Intervals without acks are marked
/// no-data (`d_secs = None`).
pub fn interval_measurements(trace: &FlowTrace, scenario: &Scenario) -> Vec<IntervalMeasurement> {
    let (w0, w1) = scenario.measurement_window();
    let window = w1 - w0;
    let interval_secs = window.as_secs_f64() / f64::from(INTERVALS);

    let mut bytes = [0u64; INTERVALS as usize];
    let mut rtt_sum = [0.0f64; INTERVALS as usize];
    let mut acks = [0u64; INTERVALS as usize];
    for record in &trace.ack_records {
        if record.at < w0 || record.at > w1 {
            continue;
        }
        let offset = (record.at - w0).as_nanos() as u128;
        let idx = (offset * u128::from(INTERVALS) / window.as_nanos().max(1) as u128)
            .min(u128::from(INTERVALS - 1)) as usize;
        bytes[idx] += record.bytes;
        rtt_sum[idx] += record.rtt.as_secs_f64();
        acks[idx] += 1;
    }

    (0..INTERVALS)
        .map(|i| {
            let idx = i as usize;
            let f_bps = match scenario.benchmark {
                Benchmark::Ccbench2 => {
                    let iv_start = interval_start(w0, window, i);
                    let iv_end = interval_start(w0, window, i + 1);
                    let capacity = scenario.link.trace.mean_rate_bps(iv_start, iv_end);
                    let active = scenario
                        .flows
                        .iter()
                        .filter(|f| f.start < iv_end)
                        .count()
                        .max(1);
                    Some(capacity / active as f64)
                }
                Benchmark::Ccbench1Flat | Benchmark::Ccbench1Step => None,
            };
            IntervalMeasurement {
                flow_id: trace.flow_id,
                interval_index: i,
                r_bps: bytes[idx] as f64 * 8.0 / interval_secs,
                d_secs: (acks[idx] > 0).then(|| rtt_sum[idx] / acks[idx] as f64),
                f_bps,
            }
        })
        .collect()
}

/// Exact boundary of interval `i` (of `INTERVALS`) within the window.
fn interval_start(w0: Nanos, window: Nanos, i: u32) -> Nanos {
    let offset =
        u128::from(window.as_nanos()) * u128::from(i) / u128::from(INTERVALS);
    w0 + Nanos::from_nanos(offset as u64)
}

/// Converts one interval summary into score records for the scheme under
/// test: a power record always (when data exists), plus a friendliness
/// record when a fair share is defined. No-data intervals yield nothing.
pub fn records_for_interval(
    scenario_id: &str,
    scheme: SchemeId,
    m: &IntervalMeasurement,
    alpha: f64,
) -> Result<Vec<ScoreRecord>> {
    let Some(d_secs) = m.d_secs else {
        return Ok(Vec::new());
    };
    let r_mbps = m.r_bps / 1e6;
    let d_ms = d_secs * 1e3;

    let mut records = Vec::with_capacity(2);
    records.push(ScoreRecord {
        scenario_id: scenario_id.to_string(),
        scheme,
        interval_index: m.interval_index,
        kind: ScoreKind::Power,
        value: power_score(r_mbps, d_ms, alpha)?,
        direction: Direction::HigherBetter,
        fair_share_mbps: None,
    });
    if let Some(f_bps) = m.f_bps {
        let f_mbps = f_bps / 1e6;
        records.push(ScoreRecord {
            scenario_id: scenario_id.to_string(),
            scheme,
            interval_index: m.interval_index,
            kind: ScoreKind::Friendliness,
            value: friendliness_score(f_mbps, r_mbps)?,
            direction: Direction::LowerBetter,
            fair_share_mbps: Some(f_mbps),
        });
    }
    Ok(records)
}

/// Selects the winners of one (scenario, interval, kind) cell: every
/// scheme whose score comes within 10% of the best. For lower-is-better
/// cells whose best score is 0, the band degenerates, so winners must
/// instead come within 1% of the fair share of zero.
///
/// All records must belong to the same cell. An empty cell has no
/// winners.
pub fn winners(records: &[ScoreRecord]) -> Result<BTreeSet<SchemeId>> {
    let Some(first) = records.first() else {
        return Ok(BTreeSet::new());
    };
    for r in records {
        if r.scenario_id != first.scenario_id
            || r.interval_index != first.interval_index
            || r.kind != first.kind
        {
            return Err(Error::InvalidScore(alloc::format!(
                "winner cell mixes ({}, {}, {}) with ({}, {}, {})",
                first.scenario_id,
                first.interval_index,
                first.kind,
                r.scenario_id,
                r.interval_index,
                r.kind
            )));
        }
        if r.direction != r.kind.direction() {
            return Err(Error::InvalidScore(alloc::format!(
                "{} record scored with the wrong direction",
                r.kind
            )));
        }
        if r.value.is_nan() || r.value < 0.0 {
            return Err(Error::InvalidScore(alloc::format!(
                "{} score {} is negative",
                r.kind,
                r.value
            )));
        }
    }

    let set = match first.kind.direction() {
        Direction::HigherBetter => {
            let best = records.iter().fold(0.0f64, |acc, r| acc.max(r.value));
            let cut = (1.0 - WIN_MARGIN) * best;
            records
                .iter()
                .filter(|r| r.value >= cut)
                .map(|r| r.scheme)
                .collect()
        }
        Direction::LowerBetter => {
            let best = records
                .iter()
                .fold(f64::INFINITY, |acc, r| acc.min(r.value));
            records
                .iter()
                .filter(|r| {
                    if best > 0.0 {
                        r.value <= (1.0 + WIN_MARGIN) * best
                    } else {
                        // Relative margin collapses at zero; admit scores
                        // negligible against the fair share.
                        let fair = r.fair_share_mbps.unwrap_or(0.0);
                        r.value <= ZERO_BEST_EPSILON * fair
                    }
                })
                .map(|r| r.scheme)
                .collect()
        }
    };
    Ok(set)
}

/// Percentage of cells in which `scheme` was among the winners.
///
/// `cells` holds one winner set per judged (scenario, interval) cell;
/// judging zero cells is an error rather than a 0% rate.
pub fn winning_rate(cells: &[BTreeSet<SchemeId>], scheme: SchemeId) -> Result<f64> {
    if cells.is_empty() {
        return Err(Error::InvalidScore(
            "winning rate over zero cells".into(),
        ));
    }
    let won = cells.iter().filter(|c| c.contains(&scheme)).count();
    Ok(100.0 * won as f64 / cells.len() as f64)
}

/// Orders schemes by winning rate, best first; ties break alphabetically
/// by scheme token so rankings are deterministic.
pub fn rank(rates: &[(SchemeId, f64)]) -> Ranking {
    let mut ranking: Ranking = rates.to_vec();
    ranking.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then_with(|| a.0.as_str().cmp(b.0.as_str()))
    });
    ranking
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netsim::AckRecord;
    use crate::scenarios;
    use proptest::prelude::*;

    #[test]
    fn power_score_matches_direct_evaluation() {
        assert_eq!(power_score(48.0, 40.0, 2.0).unwrap(), 57.6);
        assert_eq!(power_score(0.0, 40.0, 2.0).unwrap(), 0.0);
        assert_eq!(power_score(12.0, 10.0, 1.0).unwrap(), 1.2);
    }

    #[test]
    fn power_score_rejects_nonpositive_delay() {
        assert!(power_score(48.0, 0.0, 2.0).is_err());
        assert!(power_score(48.0, -1.0, 2.0).is_err());
        assert!(power_score(-1.0, 40.0, 2.0).is_err());
    }

    #[test]
    fn friendliness_score_is_the_absolute_gap() {
        assert_eq!(friendliness_score(24.0, 30.0).unwrap(), 6.0);
        assert_eq!(friendliness_score(24.0, 24.0).unwrap(), 0.0);
        assert_eq!(friendliness_score(10.0, 4.0).unwrap(), 6.0);
        assert!(friendliness_score(0.0, 4.0).is_err());
    }

    fn record(scheme: SchemeId, kind: ScoreKind, value: f64) -> ScoreRecord {
        ScoreRecord {
            scenario_id: "cell".into(),
            scheme,
            interval_index: 0,
            kind,
            value,
            direction: kind.direction(),
            fair_share_mbps: (kind == ScoreKind::Friendliness).then_some(24.0),
        }
    }

    #[test]
    fn higher_better_winners_sit_within_ten_percent_of_best() {
        let cell = [
            record(SchemeId::NewReno, ScoreKind::Power, 100.0),
            record(SchemeId::Cubic, ScoreKind::Power, 91.0),
            record(SchemeId::Vegas, ScoreKind::Power, 89.0),
        ];
        let set = winners(&cell).unwrap();
        assert!(set.contains(&SchemeId::NewReno));
        assert!(set.contains(&SchemeId::Cubic));
        assert!(!set.contains(&SchemeId::Vegas));
        assert_eq!(set.len(), 2);
    }

    #[test]
    fn lower_better_winners_sit_within_ten_percent_of_best() {
        let cell = [
            record(SchemeId::NewReno, ScoreKind::Friendliness, 1.0),
            record(SchemeId::Cubic, ScoreKind::Friendliness, 1.09),
            record(SchemeId::Vegas, ScoreKind::Friendliness, 1.2),
        ];
        let set = winners(&cell).unwrap();
        assert!(set.contains(&SchemeId::NewReno));
        assert!(set.contains(&SchemeId::Cubic));
        assert!(!set.contains(&SchemeId::Vegas));
    }

    #[test]
    fn zero_best_lower_cell_admits_only_negligible_gaps() {
        // Best is exactly fair; the margin anchors to 1% of the 24 Mbps
        // fair share instead of 10% of zero.
        let cell = [
            record(SchemeId::NewReno, ScoreKind::Friendliness, 0.0),
            record(SchemeId::Cubic, ScoreKind::Friendliness, 0.2),
            record(SchemeId::Vegas, ScoreKind::Friendliness, 0.3),
        ];
        let set = winners(&cell).unwrap();
        assert!(set.contains(&SchemeId::NewReno));
        assert!(set.contains(&SchemeId::Cubic), "0.2 ≤ 0.24 fair-share band");
        assert!(!set.contains(&SchemeId::Vegas));
    }

    #[test]
    fn equal_scores_all_win() {
        let cell = [
            record(SchemeId::NewReno, ScoreKind::Power, 5.0),
            record(SchemeId::Cubic, ScoreKind::Power, 5.0),
        ];
        assert_eq!(winners(&cell).unwrap().len(), 2);
    }

    #[test]
    fn empty_cell_has_no_winners() {
        assert!(winners(&[]).unwrap().is_empty());
    }

    #[test]
    fn mixed_cells_are_rejected() {
        let mut other = record(SchemeId::Cubic, ScoreKind::Power, 5.0);
        other.interval_index = 1;
        let cell = [record(SchemeId::NewReno, ScoreKind::Power, 5.0), other];
        assert!(winners(&cell).is_err());
    }

    #[test]
    fn winning_rate_is_the_won_cell_percentage() {
        let win: BTreeSet<_> = [SchemeId::Cubic].into_iter().collect();
        let lose = BTreeSet::new();
        let cells = [
            win.clone(),
            win.clone(),
            lose.clone(),
            lose.clone(),
            lose.clone(),
            lose.clone(),
            lose.clone(),
            lose,
        ];
        assert_eq!(winning_rate(&cells, SchemeId::Cubic).unwrap(), 25.0);
        assert_eq!(winning_rate(&cells, SchemeId::Vegas).unwrap(), 0.0);
        assert_eq!(
            winning_rate(&cells[..2], SchemeId::Cubic).unwrap(),
            100.0
        );
        assert!(winning_rate(&[], SchemeId::Cubic).is_err());
    }

    #[test]
    fn ranking_sorts_by_rate_then_token() {
        let ranking = rank(&[(SchemeId::Vegas, 25.0), (SchemeId::Cubic, 50.0)]);
        assert_eq!(ranking, alloc::vec![
            (SchemeId::Cubic, 50.0),
            (SchemeId::Vegas, 25.0),
        ]);

        let tie = rank(&[(SchemeId::Vegas, 30.0), (SchemeId::Cubic, 30.0)]);
        assert_eq!(tie[0].0, SchemeId::Cubic);
        assert_eq!(tie[1].0, SchemeId::Vegas);

        assert_eq!(rank(&[(SchemeId::Ledbat, 10.0)]).len(), 1);
    }

    fn ack(at_ms: u64, rtt_ms: u64) -> AckRecord {
        AckRecord {
            at: Nanos::from_millis(at_ms),
            bytes: crate::MSS,
            rtt: Nanos::from_millis(rtt_ms),
        }
    }

    fn trace_with(acks: Vec<AckRecord>) -> FlowTrace {
        let bytes: u64 = acks.iter().map(|a| a.bytes).sum();
        FlowTrace {
            flow_id: 0,
            start_time: Nanos::ZERO,
            stop_time: Nanos::from_secs(30),
            ack_records: acks,
            bytes_sent: bytes,
            bytes_acked: bytes,
            drop_count: 0,
            dropped_bytes: 0,
            loss_episodes: 0,
            timeout_count: 0,
            in_flight_at_end: 0,
            stalled_at: None,
        }
    }

    #[test]
    fn thirty_second_run_splits_at_seven_and_a_half_seconds() {
        let scenario = &scenarios::build_ccbench1_flat_grid(&[48], &[40], &[2.0]).unwrap()[0];
        // One ack per interval, with the 7.5 s boundary ack landing in the
        // second interval and the final-instant ack in the last.
        let trace = trace_with(alloc::vec![
            ack(0, 41),
            ack(7_499, 43),
            ack(7_500, 45),
            ack(22_499, 47),
            ack(30_000, 49),
        ]);
        let m = interval_measurements(&trace, scenario);
        assert_eq!(m.len(), 4);
        assert_eq!(m[0].interval_index, 0);

        let interval_secs = 7.5;
        let mean_41_43 = (Nanos::from_millis(41).as_secs_f64()
            + Nanos::from_millis(43).as_secs_f64())
            / 2.0;
        assert_eq!(m[0].r_bps, 2.0 * 1500.0 * 8.0 / interval_secs);
        assert_eq!(m[0].d_secs, Some(mean_41_43));
        assert_eq!(m[1].r_bps, 1500.0 * 8.0 / interval_secs);
        assert_eq!(m[1].d_secs, Some(0.045));
        assert_eq!(m[2].r_bps, 1500.0 * 8.0 / interval_secs);
        assert_eq!(m[3].r_bps, 1500.0 * 8.0 / interval_secs);
        assert_eq!(m[3].d_secs, Some(0.049));
        // Single-flow benchmark: no fair share defined.
        assert!(m.iter().all(|x| x.f_bps.is_none()));
    }

    #[test]
    fn empty_interval_is_no_data_not_zero() {
        let scenario = &scenarios::build_ccbench1_flat_grid(&[48], &[40], &[2.0]).unwrap()[0];
        let trace = trace_with(alloc::vec![ack(1_000, 41)]);
        let m = interval_measurements(&trace, scenario);
        assert!(m[0].d_secs.is_some());
        assert!(m[1].d_secs.is_none());
        assert_eq!(m[1].r_bps, 0.0);
        // No-data intervals produce no score records at all.
        let records =
            records_for_interval(&scenario.id, SchemeId::Cubic, &m[1], DEFAULT_ALPHA).unwrap();
        assert!(records.is_empty());
    }

    #[test]
    fn coexistence_window_starts_with_the_test_flow() {
        let scenario = &scenarios::build_ccbench2_grid(&[48], &[40], &[2.0]).unwrap()[0];
        // Acks from the resident flow's solo warm-up fall outside the
        // window; interval boundaries advance by 27.5 s from t = 10 s.
        let trace = trace_with(alloc::vec![
            ack(5_000, 41),   // before the window; ignored
            ack(10_000, 41),  // first instant of interval 0
            ack(37_499, 43),  // last instant of interval 0
            ack(37_500, 45),  // first instant of interval 1
            ack(120_000, 47), // window end clamps into interval 3
        ]);
        let m = interval_measurements(&trace, scenario);
        let interval_secs = 27.5;
        let mean_41_43 = (Nanos::from_millis(41).as_secs_f64()
            + Nanos::from_millis(43).as_secs_f64())
            / 2.0;
        assert_eq!(m[0].r_bps, 2.0 * 1500.0 * 8.0 / interval_secs);
        assert_eq!(m[0].d_secs, Some(mean_41_43));
        assert_eq!(m[1].r_bps, 1500.0 * 8.0 / interval_secs);
        assert_eq!(m[2].r_bps, 0.0);
        assert_eq!(m[3].r_bps, 1500.0 * 8.0 / interval_secs);
        // Two active flows over a flat 48 Mbps trace: fair share is half
        // the capacity in every interval.
        for x in &m {
            assert_eq!(x.f_bps, Some(24e6));
        }
    }

    #[test]
    fn interval_records_carry_both_kinds_when_fair_share_exists() {
        let m = IntervalMeasurement {
            flow_id: 1,
            interval_index: 2,
            r_bps: 30e6,
            d_secs: Some(0.040),
            f_bps: Some(24e6),
        };
        let records = records_for_interval("cell", SchemeId::Vegas, &m, 2.0).unwrap();
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].kind, ScoreKind::Power);
        assert_eq!(records[0].value, 30.0 * 30.0 / 40.0);
        assert_eq!(records[1].kind, ScoreKind::Friendliness);
        assert_eq!(records[1].value, 6.0);
        assert_eq!(records[1].fair_share_mbps, Some(24.0));
    }

    proptest! {
        /// The 10% winner margin is ratio-based: rescaling every score in
        /// a cell by the same positive factor never changes the winners.
        #[test]
        fn winner_sets_are_scale_covariant(
            values in proptest::collection::vec(0.0f64..1e6, 1..5),
            k in 1e-3f64..1e3,
        ) {
            let schemes = [
                SchemeId::BbrLite,
                SchemeId::Cubic,
                SchemeId::Ledbat,
                SchemeId::NewReno,
                SchemeId::Vegas,
            ];
            let cell: Vec<_> = values
                .iter()
                .zip(schemes)
                .map(|(&v, s)| record(s, ScoreKind::Power, v))
                .collect();
            let scaled: Vec<_> = cell
                .iter()
                .map(|r| ScoreRecord { value: r.value * k, ..r.clone() })
                .collect();
            prop_assert_eq!(winners(&cell).unwrap(), winners(&scaled).unwrap());
        }

        /// More throughput at equal delay always scores higher; more
        /// delay at equal throughput always scores lower.
        #[test]
        fn power_score_is_monotone(
            r in 0.1f64..1e3,
            d in 0.1f64..1e4,
            bump in 1.01f64..10.0,
        ) {
            let base = power_score(r, d, 2.0).unwrap();
            prop_assert!(power_score(r * bump, d, 2.0).unwrap() > base);
            prop_assert!(power_score(r, d * bump, 2.0).unwrap() < base);
        }

        /// Every judged cell keeps its best scorer among the winners.
        #[test]
        fn best_scorer_always_wins(
            values in proptest::collection::vec(0.0f64..1e6, 1..5),
            lower in proptest::bool::ANY,
        ) {
            let schemes = [
                SchemeId::BbrLite,
                SchemeId::Cubic,
                SchemeId::Ledbat,
                SchemeId::NewReno,
                SchemeId::Vegas,
            ];
            let kind = if lower { ScoreKind::Friendliness } else { ScoreKind::Power };
            let cell: Vec<_> = values
                .iter()
                .zip(schemes)
                .map(|(&v, s)| record(s, kind, v))
                .collect();
            let set = winners(&cell).unwrap();
            prop_assert!(!set.is_empty());
            let best = if lower {
                cell.iter().min_by(|a, b| a.value.total_cmp(&b.value)).unwrap()
            } else {
                cell.iter().max_by(|a, b| a.value.total_cmp(&b.value)).unwrap()
            };
            prop_assert!(set.contains(&best.scheme));
        }

        /// Overshooting and undershooting the fair share by the same
        /// amount are judged identically (up to rounding in forming the
        /// two rates).
        #[test]
        fn friendliness_is_symmetric(f in 0.1f64..1e3, frac in 0.0f64..1.0) {
            let x = f * frac;
            let over = friendliness_score(f, f + x).unwrap();
            let under = friendliness_score(f, f - x).unwrap();
            prop_assert!((over - under).abs() <= 1e-12 * (1.0 + over.abs()));
        }
    }
}
