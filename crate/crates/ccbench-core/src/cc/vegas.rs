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

//! TCP Vegas: proactive delay-based congestion avoidance (Brakmo &
//! Peterson, "TCP Vegas: End to End Congestion Avoidance on a Global
//! Internet", 1995).
//!
//! Once per round trip Vegas compares the expected rate `cwnd/base_rtt`
//! with the actual rate `cwnd/rtt` and converts the difference into an
//! estimate of packets queued at the bottleneck:
//!
//! ```text
//! diff = (cwnd/base_rtt − cwnd/rtt) × base_rtt      [packets]
//! ```
//!
//! The window is nudged to keep `diff` inside the `[α, β)` band: below α
//! packets it grows by one MSS per RTT, at or above β it shrinks by one
//! MSS per RTT.
//!
//! Simplifications relative to the reference/kernel implementation:
//!
//! * Round trips are delimited by elapsed `base_rtt` time rather than by
//!   sequence-number epochs.
//! * The duplicate-ack loss response is plain window halving (Reno-style)
//!   without Vegas' finer retransmission timing checks.
//! * Modified slow start doubles every other RTT by growing on acks during
//!   the doubling round, gated on the queue estimate staying below γ.

use crate::cc::CcDecision;
use crate::cc::CcEvent;
use crate::cc::CongestionControl;
use crate::cc::SchemeId;
use crate::cc::INITIAL_CWND;
use crate::cc::MIN_CWND;
use crate::MSS;

/// Grow the window while fewer than this many packets sit in the queue.
const ALPHA_PKTS: f64 = 2.0;

/// Shrink the window once at least this many packets sit in the queue.
const BETA_PKTS: f64 = 4.0;

/// Leave slow start once more than this many packets sit in the queue.
const GAMMA_PKTS: f64 = 1.0;

/// TCP Vegas state machine.
#[derive(Debug)]
pub struct Vegas {
    /// Congestion window in bytes.
    cwnd: f64,
    /// Slow-start threshold in bytes.
    ssthresh: f64,
    /// Smallest RTT ever observed (the propagation-delay estimate),
    /// seconds.
    base_rtt: f64,
    /// Start of the current measurement round, seconds.
    round_start: Option<f64>,
    /// Smallest RTT observed during the current round, seconds.
    round_min_rtt: f64,
    /// Whether the current slow-start round is a doubling round (Vegas
    /// doubles every other RTT).
    ss_doubling: bool,
}

impl Vegas {
    /// Creates a Vegas instance with the default initial window.
    pub fn new() -> Self {
        Vegas {
            cwnd: INITIAL_CWND as f64,
            ssthresh: f64::INFINITY,
            base_rtt: f64::INFINITY,
            round_start: None,
            round_min_rtt: f64::INFINITY,
            ss_doubling: true,
        }
    }

    fn decision(&self) -> CcDecision {
        CcDecision {
            cwnd: self.cwnd as u64,
            pacing_rate_bps: None,
        }
    }

    /// Estimated packets queued at the bottleneck given an RTT sample.
    fn queued_packets(&self, rtt: f64) -> f64 {
        (self.cwnd / MSS as f64) * (rtt - self.base_rtt) / rtt
    }

    fn on_ack(&mut self, now: f64, bytes_acked: u64, rtt: f64) {
        if rtt < self.base_rtt {
            self.base_rtt = rtt;
        }

        // Close the measurement round once a base RTT has elapsed; the
        // closing ack itself opens the next round.
        let round_start = *self.round_start.get_or_insert(now);
        if now - round_start >= self.base_rtt {
            let diff = self.queued_packets(self.round_min_rtt.min(rtt));
            if self.cwnd < self.ssthresh {
                if diff > GAMMA_PKTS {
                    // Queue is building: leave slow start.
                    self.ssthresh = self.cwnd;
                }
            } else if diff >= BETA_PKTS {
                self.cwnd -= MSS as f64;
            } else if diff < ALPHA_PKTS {
                self.cwnd += MSS as f64;
            }
            self.cwnd = self.cwnd.max(MIN_CWND as f64);
            self.round_start = Some(now);
            self.round_min_rtt = f64::INFINITY;
            self.ss_doubling = !self.ss_doubling;
        } else if rtt < self.round_min_rtt {
            self.round_min_rtt = rtt;
        }

        // Slow start grows per ack through the doubling round, but only
        // while the path shows essentially no queueing.
        if self.cwnd < self.ssthresh
            && self.ss_doubling
            && self.queued_packets(rtt) <= GAMMA_PKTS
        {
            self.cwnd += bytes_acked as f64;
        }
    }

    fn on_dupack_loss(&mut self) {
        self.ssthresh = (self.cwnd / 2.0).max(MIN_CWND as f64);
        self.cwnd = self.ssthresh;
    }

    fn on_timeout_loss(&mut self) {
        self.ssthresh = (self.cwnd / 2.0).max(MIN_CWND as f64);
        self.cwnd = MIN_CWND as f64;
    }
}

impl Default for Vegas {
    fn default() -> Self {
        Self::new()
    }
}

impl CongestionControl for Vegas {
    fn scheme_id(&self) -> SchemeId {
        SchemeId::Vegas
    }

    fn on_event(&mut self, event: &CcEvent) -> CcDecision {
        match *event {
            CcEvent::Ack {
                now,
                bytes_acked,
                rtt_sample,
            } => self.on_ack(now.as_secs_f64(), bytes_acked, rtt_sample.as_secs_f64()),
            CcEvent::DupackLoss { .. } => self.on_dupack_loss(),
            CcEvent::TimeoutLoss { .. } => self.on_timeout_loss(),
            CcEvent::SendOpportunity { .. } | CcEvent::TimerTick { .. } => {}
        }
        self.decision()
    }
}
