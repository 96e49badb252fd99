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

//! BBR-lite: a reduced model-based scheme after BBR v1 (Cardwell et al.,
//! "BBR: Congestion-Based Congestion Control", ACM Queue 2016).
//!
//! The scheme maintains a two-parameter path model — maximum delivery rate
//! over a 10-round window and minimum RTT over a 10 s window — and walks
//! the classic four-phase machine:
//!
//! * **Startup**: pacing gain 2/ln2 ≈ 2.885 doubles the delivery rate each
//!   round until it plateaus for three rounds.
//! * **Drain**: inverse gain empties the queue built during startup.
//! * **ProbeBW**: cycles pacing gains `[1.25, 0.75, 1, 1, 1, 1, 1, 1]`,
//!   one min-RTT per step, with cwnd capped at 2×BDP.
//! * **ProbeRTT**: when the min-RTT estimate goes 10 s without a refresh,
//!   the window drops to 4 packets for max(200 ms, one RTT) to drain the
//!   queue and re-measure the floor.
//!
//! Simplifications relative to BBR v1:
//!
//! * Delivery rate is sampled from per-ack inter-arrival spacing instead of
//!   a delivered-bytes scoreboard.
//! * Drain exits after three min-RTTs rather than when in-flight data
//!   reaches the BDP estimate (the event interface carries no in-flight
//!   figure); ProbeRTT likewise starts its dwell immediately and ProbeBW
//!   re-enters at a fixed cycle offset rather than a random one.
//! * Packet loss is ignored, as in BBR v1's core model (no recovery caps).

use alloc::collections::VecDeque;

use crate::cc::CcDecision;
use crate::cc::CcEvent;
use crate::cc::CongestionControl;
use crate::cc::SchemeId;
use crate::cc::INITIAL_CWND;
use crate::MSS;

/// Startup/drain pacing gain, 2/ln2.
const STARTUP_GAIN: f64 = 2.885_390_081_777_926_8;

/// ProbeBW pacing-gain cycle; each step lasts one min-RTT.
const CYCLE_GAINS: [f64; 8] = [1.25, 0.75, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0];

/// Window gain over the estimated BDP outside startup/drain.
const CWND_GAIN: f64 = 2.0;

/// Rounds the max-bandwidth filter looks back over.
const BW_WINDOW_ROUNDS: u64 = 10;

/// Seconds the min-RTT estimate may age before a ProbeRTT is forced.
const MIN_RTT_WINDOW: f64 = 10.0;

/// Minimum ProbeRTT dwell in seconds.
const PROBE_RTT_DWELL: f64 = 0.200;

/// Window during ProbeRTT, and the floor everywhere else: 4 packets.
const MIN_PIPE_CWND: u64 = 4 * MSS;

/// Startup exits after this many rounds without 25% bandwidth growth.
const FULL_BW_ROUNDS: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Phase {
    Startup,
    Drain { until: f64 },
    ProbeBw { cycle_idx: usize, phase_start: f64 },
    ProbeRtt { done_at: f64, was_filled: bool },
}

/// BBR-lite state machine.
#[derive(Debug)]
pub struct BbrLite {
    phase: Phase,
    /// Max delivery-rate samples per round, newest last; the deque is kept
    /// monotone nonincreasing in rate so the front is the window max.
    bw_samples: VecDeque<(u64, f64)>,
    /// Current round-trip counter and the time the round began.
    round: u64,
    round_start: Option<f64>,
    /// Minimum RTT estimate (seconds) and when it was last refreshed.
    min_rtt: f64,
    min_rtt_stamp: f64,
    /// Minimum RTT observed during the current ProbeRTT dwell.
    probe_rtt_min: f64,
    /// Plateau detection for startup exit.
    full_bw: f64,
    full_bw_rounds: u32,
    full_bw_checked_round: u64,
    /// Whether the pipe was declared filled (startup finished).
    filled: bool,
    /// Time of the previous ack, for delivery-rate sampling.
    last_ack_at: Option<f64>,
}

impl BbrLite {
    /// Creates a BBR-lite instance with the default initial window.
    pub fn new() -> Self {
        BbrLite {
            phase: Phase::Startup,
            bw_samples: VecDeque::new(),
            round: 0,
            round_start: None,
            min_rtt: f64::INFINITY,
            min_rtt_stamp: 0.0,
            probe_rtt_min: f64::INFINITY,
            full_bw: 0.0,
            full_bw_rounds: 0,
            full_bw_checked_round: 0,
            filled: false,
            last_ack_at: None,
        }
    }

    /// Max of the bandwidth filter, bits/second.
    fn bw_estimate(&self) -> Option<f64> {
        self.bw_samples.front().map(|&(_, bw)| bw)
    }

    /// Estimated bandwidth-delay product in bytes.
    fn bdp_bytes(&self, gain: f64) -> Option<f64> {
        let bw = self.bw_estimate()?;
        if !self.min_rtt.is_finite() {
            return None;
        }
        Some(gain * bw * self.min_rtt / 8.0)
    }

    fn push_bw_sample(&mut self, bw: f64) {
        while matches!(self.bw_samples.back(), Some(&(_, b)) if b <= bw) {
            self.bw_samples.pop_back();
        }
        self.bw_samples.push_back((self.round, bw));
        let horizon = self.round.saturating_sub(BW_WINDOW_ROUNDS);
        while matches!(self.bw_samples.front(), Some(&(r, _)) if r < horizon) {
            self.bw_samples.pop_front();
        }
    }

    /// Advances time-driven state: ProbeRTT entry/exit, drain exit, and
    /// ProbeBW gain cycling. Called for every event.
    fn advance_clock(&mut self, now: f64) {
        match self.phase {
            Phase::ProbeRtt { done_at, was_filled } => {
                if now >= done_at {
                    if self.probe_rtt_min.is_finite() {
                        self.min_rtt = self.probe_rtt_min;
                    }
                    self.min_rtt_stamp = now;
                    self.phase = if was_filled {
                        Phase::ProbeBw {
                            cycle_idx: 2,
                            phase_start: now,
                        }
                    } else {
                        Phase::Startup
                    };
                }
                return;
            }
            Phase::Drain { until } => {
                if now >= until {
                    self.phase = Phase::ProbeBw {
                        cycle_idx: 2,
                        phase_start: now,
                    };
                }
            }
            Phase::ProbeBw {
                cycle_idx,
                phase_start,
            } => {
                if self.min_rtt.is_finite() && now - phase_start >= self.min_rtt {
                    self.phase = Phase::ProbeBw {
                        cycle_idx: (cycle_idx + 1) % CYCLE_GAINS.len(),
                        phase_start: now,
                    };
                }
            }
            Phase::Startup => {}
        }

        // Force a window collapse to re-measure the RTT floor once the
        // estimate has gone stale.
        if self.min_rtt.is_finite() && now - self.min_rtt_stamp > MIN_RTT_WINDOW {
            self.probe_rtt_min = f64::INFINITY;
            self.phase = Phase::ProbeRtt {
                done_at: now + PROBE_RTT_DWELL.max(self.min_rtt),
                was_filled: self.filled,
            };
        }
    }

    fn on_ack(&mut self, now: f64, bytes_acked: u64, rtt: f64) {
        // RTT floor tracking. Only a strictly lower sample refreshes the
        // stamp (as in BBR v1's filter), so merely touching the floor does
        // not postpone ProbeRTT — in steady state the probe recurs roughly
        // every 10 s even on a clean path, periodically paying a little
        // throughput to re-measure the floor.
        if rtt < self.min_rtt {
            self.min_rtt = rtt;
            self.min_rtt_stamp = now;
        }
        if matches!(self.phase, Phase::ProbeRtt { .. }) && rtt < self.probe_rtt_min {
            self.probe_rtt_min = rtt;
        }

        // Round accounting: a round ends one min-RTT after it started.
        let round_start = *self.round_start.get_or_insert(now);
        if self.min_rtt.is_finite() && now - round_start >= self.min_rtt {
            self.round += 1;
            self.round_start = Some(now);
        }

        // Delivery-rate sample from ack spacing.
        if let Some(prev) = self.last_ack_at {
            let dt = now - prev;
            if dt > 0.0 {
                self.push_bw_sample(bytes_acked as f64 * 8.0 / dt);
            }
        }
        self.last_ack_at = Some(now);

        // Startup plateau detection, evaluated once per round.
        if self.phase == Phase::Startup && self.round > self.full_bw_checked_round {
            self.full_bw_checked_round = self.round;
            if let Some(bw) = self.bw_estimate() {
                if bw >= self.full_bw * 1.25 {
                    self.full_bw = bw;
                    self.full_bw_rounds = 0;
                } else {
                    self.full_bw_rounds += 1;
                    if self.full_bw_rounds >= FULL_BW_ROUNDS {
                        // Pipe filled: drain the startup queue for a few
                        // round trips, then settle into ProbeBW.
                        self.filled = true;
                        let dwell = if self.min_rtt.is_finite() {
                            3.0 * self.min_rtt
                        } else {
                            PROBE_RTT_DWELL
                        };
                        self.phase = Phase::Drain { until: now + dwell };
                    }
                }
            }
        }
    }

    fn decision(&self) -> CcDecision {
        if let Phase::ProbeRtt { .. } = self.phase {
            return CcDecision {
                cwnd: MIN_PIPE_CWND,
                pacing_rate_bps: self.bw_estimate().map(|bw| bw as u64),
            };
        }
        let (pacing_gain, cwnd_gain) = match self.phase {
            Phase::Startup => (STARTUP_GAIN, STARTUP_GAIN),
            Phase::Drain { .. } => (1.0 / STARTUP_GAIN, STARTUP_GAIN),
            Phase::ProbeBw { cycle_idx, .. } => (CYCLE_GAINS[cycle_idx], CWND_GAIN),
            Phase::ProbeRtt { .. } => unreachable!(),
        };
        match (self.bw_estimate(), self.bdp_bytes(cwnd_gain)) {
            (Some(bw), Some(bdp)) => CcDecision {
                cwnd: (bdp as u64).max(MIN_PIPE_CWND),
                pacing_rate_bps: Some((pacing_gain * bw).max(1.0) as u64),
            },
            // No usable model yet: fall back to the initial window.
            _ => CcDecision {
                cwnd: INITIAL_CWND,
                pacing_rate_bps: None,
            },
        }
    }
}

impl Default for BbrLite {
    fn default() -> Self {
        Self::new()
    }
}

impl CongestionControl for BbrLite {
    fn scheme_id(&self) -> SchemeId {
        SchemeId::BbrLite
    }

    fn on_event(&mut self, event: &CcEvent) -> CcDecision {
        self.advance_clock(event.now().as_secs_f64());
        if let CcEvent::Ack {
            now,
            bytes_acked,
            rtt_sample,
        } = *event
        {
            self.on_ack(now.as_secs_f64(), bytes_acked, rtt_sample.as_secs_f64());
        }
        self.decision()
    }
}
