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

//! Benchmark scenario grids.
//!
//! A [`Scenario`] is one benchmark cell: a bottleneck configuration, a run
//! duration, and a flow roster with start times. This module builds the two
//! stock grids:
//!
//! - **CC-Bench1** probes a scheme alone: a single flow for 30 s over
//!   either a flat bandwidth trace or a step trace that alternates between
//!   two rates every 7 s.
//! - **CC-Bench2** probes coexistence: a Cubic flow owns the bottleneck
//!   from t = 0 and the scheme under test joins at t = 10 s, both running
//!   until t = 120 s.
//!
//! Grid axes are geometric (each point doubles the last) because
//! congestion-control behavior varies multiplicatively with the
//! bandwidth-delay product. Every grid builder also accepts custom axes so
//! harness users can override the defaults.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::cc::SchemeId;
use crate::netsim::BandwidthTrace;
use crate::netsim::LinkConfig;
use crate::netsim::SimFlow;
use crate::units::Nanos;
use crate::Error;
use crate::Result;
use crate::MSS;

/// How long every CC-Bench1 scenario runs.
pub const CCBENCH1_DURATION: Nanos = Nanos::from_secs(30);

/// How long every CC-Bench2 scenario runs.
pub const CCBENCH2_DURATION: Nanos = Nanos::from_secs(120);

/// Step scenarios switch between their two rates at this cadence.
pub const STEP_PERIOD: Nanos = Nanos::from_secs(7);

/// When the scheme under test joins a CC-Bench2 scenario (the resident
/// Cubic flow starts at t = 0 and is long past slow start by then).
pub const CCBENCH2_TEST_FLOW_START: Nanos = Nanos::from_secs(10);

/// Default bandwidth axis, Mbps.
pub const DEFAULT_BANDWIDTHS_MBPS: [u64; 5] = [12, 24, 48, 96, 192];

/// Default two-way propagation delay axis, milliseconds.
pub const DEFAULT_MIN_RTTS_MS: [u64; 5] = [10, 20, 40, 80, 160];

/// Default queue-size axis for CC-Bench1, as multiples of the BDP.
pub const DEFAULT_QUEUE_BDP_MULTIPLES: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

/// Default queue-size axis for CC-Bench2. Coexistence runs never go below
/// one BDP of buffering.
pub const DEFAULT_QUEUE_BDP_MULTIPLES_CCBENCH2: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

/// Default base-bandwidth axis for step scenarios, Mbps.
pub const DEFAULT_STEP_BANDWIDTHS_MBPS: [u64; 4] = [12, 24, 48, 96];

/// Default step-rate multiples: the second rate is `m × BW1`.
pub const DEFAULT_STEP_RATE_MULTIPLES: [f64; 4] = [0.25, 0.5, 2.0, 4.0];

/// Which benchmark family a scenario belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Benchmark {
    /// Single flow over a constant-rate trace.
    Ccbench1Flat,
    /// Single flow over a two-rate alternating trace.
    Ccbench1Step,
    /// Cubic plus the scheme under test over a constant-rate trace.
    Ccbench2,
}

impl Benchmark {
    /// Stable lowercase token, used in scenario ids and output tables.
    pub fn as_str(self) -> &'static str {
        match self {
            Benchmark::Ccbench1Flat => "ccbench1_flat",
            Benchmark::Ccbench1Step => "ccbench1_step",
            Benchmark::Ccbench2 => "ccbench2",
        }
    }
}

impl core::fmt::Display for Benchmark {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The scheme slot of one scenario flow: either a concrete scheme or the
/// placeholder filled in at run time by the scheme under test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum FlowScheme {
    /// Replaced by the scheme under test when the scenario runs.
    #[cfg_attr(feature = "serde", serde(rename = "scheme-under-test"))]
    UnderTest,
    /// A fixed scheme that is part of the scenario itself.
    #[cfg_attr(feature = "serde", serde(untagged))]
    Fixed(SchemeId),
}

/// One flow in a scenario: who runs it and when it starts. Every flow
/// transmits until the scenario's duration elapses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScenarioFlow {
    /// The congestion-control scheme driving the flow.
    pub scheme: FlowScheme,
    /// When the flow starts transmitting.
    pub start: Nanos,
}

/// One benchmark cell: bottleneck, duration, and flow roster.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scenario {
    /// Reproducible name derived from the scenario parameters.
    pub id: String,
    /// The benchmark family this cell belongs to.
    pub benchmark: Benchmark,
    /// The bottleneck link shared by all flows.
    pub link: LinkConfig,
    /// Total simulated time.
    pub duration: Nanos,
    /// The flows, in start order; the flow under test carries the
    /// [`FlowScheme::UnderTest`] placeholder.
    pub flows: Vec<ScenarioFlow>,
}

impl Scenario {
    /// Checks the structural invariants: a valid link, a positive
    /// duration, and exactly one flow under test starting within the run.
    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() {
            return Err(Error::InvalidScenario("scenario id is empty".into()));
        }
        self.link.validate()?;
        if self.duration == Nanos::ZERO {
            return Err(Error::InvalidScenario(format!(
                "scenario {}: duration is zero",
                self.id
            )));
        }
        let under_test = self
            .flows
            .iter()
            .filter(|f| f.scheme == FlowScheme::UnderTest)
            .count();
        if under_test != 1 {
            return Err(Error::InvalidScenario(format!(
                "scenario {}: expected exactly one flow under test, found {under_test}",
                self.id
            )));
        }
        for (i, flow) in self.flows.iter().enumerate() {
            if flow.start >= self.duration {
                return Err(Error::InvalidScenario(format!(
                    "scenario {}: flow {i} starts at {} but the scenario ends at {}",
                    self.id, flow.start, self.duration
                )));
            }
        }
        Ok(())
    }

    /// The span scored for this scenario: from the moment the flow under
    /// test enters until the run ends. (CC-Bench1 flows start at zero, so
    /// their whole run is scored; CC-Bench2 skips the resident flow's solo
    /// warm-up.)
    pub fn measurement_window(&self) -> (Nanos, Nanos) {
        let start = self
            .flows
            .iter()
            .find(|f| f.scheme == FlowScheme::UnderTest)
            .map(|f| f.start)
            .unwrap_or(Nanos::ZERO);
        (start, self.duration)
    }

    /// Instantiates the flow roster with `under_test` filling the
    /// placeholder slot, ready to hand to the simulator.
    pub fn flows_for(&self, under_test: SchemeId) -> Vec<SimFlow> {
        self.flows
            .iter()
            .map(|f| {
                let scheme = match f.scheme {
                    FlowScheme::UnderTest => under_test,
                    FlowScheme::Fixed(id) => id,
                };
                SimFlow {
                    cc: scheme.build(),
                    start: f.start,
                    stop: self.duration,
                }
            })
            .collect()
    }
}

/// Bandwidth-delay product in bytes for a link of `bw` bits/second and a
/// two-way propagation delay of `min_rtt`.
///
/// Queue sizes across the grids are expressed as multiples of this value.
pub fn bdp_bytes(bw_bps: u64, min_rtt: Nanos) -> Result<f64> {
    if bw_bps == 0 {
        return Err(Error::InvalidScenario(
            "bandwidth-delay product of a zero-rate link".into(),
        ));
    }
    if min_rtt == Nanos::ZERO {
        return Err(Error::InvalidScenario(
            "bandwidth-delay product of a zero-delay link".into(),
        ));
    }
    Ok(bw_bps as f64 * min_rtt.as_secs_f64() / 8.0)
}

/// Queue capacity in bytes for `multiple × BDP`, floored at one packet so
/// the queue can always hold something.
fn queue_capacity(bw_bps: u64, min_rtt: Nanos, multiple: f64) -> Result<u64> {
    if multiple.is_nan() || multiple <= 0.0 {
        return Err(Error::InvalidScenario(format!(
            "queue size multiple {multiple} is not positive"
        )));
    }
    let bytes = multiple * bdp_bytes(bw_bps, min_rtt)?;
    Ok((bytes as u64).max(MSS))
}

/// Formats an f64 grid coordinate for a scenario id (`0.5` → "0.5",
/// `2.0` → "2").
fn fmt_axis(value: f64) -> String {
    format!("{value}")
}

/// Builds the default CC-Bench1 flat grid: every combination of the stock
/// bandwidth, delay, and queue-size axes (150 scenarios).
pub fn build_ccbench1_flat() -> Vec<Scenario> {
    build_ccbench1_flat_grid(
        &DEFAULT_BANDWIDTHS_MBPS,
        &DEFAULT_MIN_RTTS_MS,
        &DEFAULT_QUEUE_BDP_MULTIPLES,
    )
    .expect("default flat grid is valid")
}

/// Builds a CC-Bench1 flat grid over custom axes.
pub fn build_ccbench1_flat_grid(
    bandwidths_mbps: &[u64],
    min_rtts_ms: &[u64],
    queue_bdp_multiples: &[f64],
) -> Result<Vec<Scenario>> {
    let mut scenarios = Vec::new();
    for &bw in bandwidths_mbps {
        for &rtt_ms in min_rtts_ms {
            for &qs in queue_bdp_multiples {
                let min_rtt = Nanos::from_millis(rtt_ms);
                let bw_bps = bw * 1_000_000;
                let link = LinkConfig::new(
                    BandwidthTrace::flat(bw_bps)?,
                    min_rtt,
                    queue_capacity(bw_bps, min_rtt, qs)?,
                )?;
                scenarios.push(Scenario {
                    id: format!("ccbench1-flat-bw{bw}-rtt{rtt_ms}-q{}", fmt_axis(qs)),
                    benchmark: Benchmark::Ccbench1Flat,
                    link,
                    duration: CCBENCH1_DURATION,
                    flows: alloc::vec![ScenarioFlow {
                        scheme: FlowScheme::UnderTest,
                        start: Nanos::ZERO,
                    }],
                });
            }
        }
    }
    Ok(scenarios)
}

/// Builds the default CC-Bench1 step grid: base bandwidths crossed with
/// rate multiples (skipping products beyond the 200 Mbps trace ceiling),
/// delays, and queue sizes (450 scenarios).
pub fn build_ccbench1_step() -> Vec<Scenario> {
    build_ccbench1_step_grid(
        &DEFAULT_STEP_BANDWIDTHS_MBPS,
        &DEFAULT_STEP_RATE_MULTIPLES,
        &DEFAULT_MIN_RTTS_MS,
        &DEFAULT_QUEUE_BDP_MULTIPLES,
    )
    .expect("default step grid is valid")
}

/// Builds a CC-Bench1 step grid over custom axes. Pairs whose second rate
/// `m × BW1` exceeds the 200 Mbps trace ceiling are skipped.
///
/// Each trace starts at `BW1` and alternates with `m × BW1` every 7 s; the
/// queue size multiple applies to the BDP of `BW1`, the initial state.
pub fn build_ccbench1_step_grid(
    base_bandwidths_mbps: &[u64],
    rate_multiples: &[f64],
    min_rtts_ms: &[u64],
    queue_bdp_multiples: &[f64],
) -> Result<Vec<Scenario>> {
    let mut scenarios = Vec::new();
    for &bw in base_bandwidths_mbps {
        for &m in rate_multiples {
            let bw_bps = bw * 1_000_000;
            let second_bps = (m * bw_bps as f64) as u64;
            if second_bps > crate::netsim::MAX_RATE_BPS {
                continue;
            }
            for &rtt_ms in min_rtts_ms {
                for &qs in queue_bdp_multiples {
                    let min_rtt = Nanos::from_millis(rtt_ms);
                    let trace = BandwidthTrace::alternating(
                        bw_bps,
                        second_bps,
                        STEP_PERIOD,
                        CCBENCH1_DURATION,
                    )?;
                    let link = LinkConfig::new(
                        trace,
                        min_rtt,
                        queue_capacity(bw_bps, min_rtt, qs)?,
                    )?;
                    scenarios.push(Scenario {
                        id: format!(
                            "ccbench1-step-bw{bw}-m{}-rtt{rtt_ms}-q{}",
                            fmt_axis(m),
                            fmt_axis(qs)
                        ),
                        benchmark: Benchmark::Ccbench1Step,
                        link,
                        duration: CCBENCH1_DURATION,
                        flows: alloc::vec![ScenarioFlow {
                            scheme: FlowScheme::UnderTest,
                            start: Nanos::ZERO,
                        }],
                    });
                }
            }
        }
    }
    Ok(scenarios)
}

/// Builds the default CC-Bench2 grid: flat traces crossed with the
/// coexistence queue axis; every cell runs a resident Cubic flow from
/// t = 0 and the flow under test from t = 10 s (125 scenarios).
pub fn build_ccbench2() -> Vec<Scenario> {
    build_ccbench2_grid(
        &DEFAULT_BANDWIDTHS_MBPS,
        &DEFAULT_MIN_RTTS_MS,
        &DEFAULT_QUEUE_BDP_MULTIPLES_CCBENCH2,
    )
    .expect("default coexistence grid is valid")
}

/// Builds a CC-Bench2 grid over custom axes.
pub fn build_ccbench2_grid(
    bandwidths_mbps: &[u64],
    min_rtts_ms: &[u64],
    queue_bdp_multiples: &[f64],
) -> Result<Vec<Scenario>> {
    let mut scenarios = Vec::new();
    for &bw in bandwidths_mbps {
        for &rtt_ms in min_rtts_ms {
            for &qs in queue_bdp_multiples {
                let min_rtt = Nanos::from_millis(rtt_ms);
                let bw_bps = bw * 1_000_000;
                let link = LinkConfig::new(
                    BandwidthTrace::flat(bw_bps)?,
                    min_rtt,
                    queue_capacity(bw_bps, min_rtt, qs)?,
                )?;
                scenarios.push(Scenario {
                    id: format!("ccbench2-bw{bw}-rtt{rtt_ms}-q{}", fmt_axis(qs)),
                    benchmark: Benchmark::Ccbench2,
                    link,
                    duration: CCBENCH2_DURATION,
                    flows: alloc::vec![
                        ScenarioFlow {
                            scheme: FlowScheme::Fixed(SchemeId::Cubic),
                            start: Nanos::ZERO,
                        },
                        ScenarioFlow {
                            scheme: FlowScheme::UnderTest,
                            start: CCBENCH2_TEST_FLOW_START,
                        },
                    ],
                });
            }
        }
    }
    Ok(scenarios)
}
