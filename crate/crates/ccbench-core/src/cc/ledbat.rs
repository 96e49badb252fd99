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

//! LEDBAT: low-extra-delay background transport (RFC 6817).
//!
//! LEDBAT aims to keep the queueing delay it induces at a fixed `TARGET`
//! (100 ms). Each ack updates the window proportionally to how far the
//! measured queueing delay sits from the target:
//!
//! ```text
//! off_target = (TARGET − queueing_delay) / TARGET
//! cwnd      += GAIN × off_target × bytes_acked × MSS / cwnd
//! ```
//!
//! so the window grows at most one MSS per RTT when the queue is empty and
//! shrinks once the delay overshoots the target.
//!
//! Simplifications relative to RFC 6817:
//!
//! * Queueing delay is estimated from RTT samples against the minimum RTT
//!   seen (the simulated reverse path is ideal, so RTT variation equals
//!   one-way queueing delay).
//! * The base-delay history is the run-lifetime minimum instead of the
//!   RFC's ten-minute rolling history; benchmark runs are far shorter than
//!   the base-delay drift the history guards against.
//! * Slow start (which RFC 6817 leaves optional) doubles per RTT and exits
//!   once queueing delay reaches half the target or on the first loss.

use crate::cc::CcDecision;
use crate::cc::CcEvent;
use crate::cc::CongestionControl;
use crate::cc::SchemeId;
use crate::cc::INITIAL_CWND;
use crate::cc::MIN_CWND;
use crate::MSS;

/// Queueing-delay target in seconds (RFC 6817 §2.3, TARGET = 100 ms).
const TARGET: f64 = 0.100;

/// Window gain per off-target unit (RFC 6817 recommends GAIN = 1).
const GAIN: f64 = 1.0;

/// LEDBAT state machine.
#[derive(Debug)]
pub struct Ledbat {
    /// Congestion window in bytes.
    cwnd: f64,
    /// Run-lifetime minimum RTT, the propagation-delay estimate, seconds.
    base_rtt: f64,
    /// Whether the startup doubling phase is still active.
    in_slow_start: bool,
}

impl Ledbat {
    /// Creates a LEDBAT instance with the default initial window.
    pub fn new() -> Self {
        Ledbat {
            cwnd: INITIAL_CWND as f64,
            base_rtt: f64::INFINITY,
            in_slow_start: true,
        }
    }

    fn decision(&self) -> CcDecision {
        CcDecision {
            cwnd: self.cwnd as u64,
            pacing_rate_bps: None,
        }
    }

    fn on_ack(&mut self, bytes_acked: u64, rtt: f64) {
        if rtt < self.base_rtt {
            self.base_rtt = rtt;
        }
        let queueing_delay = rtt - self.base_rtt;

        if self.in_slow_start {
            if queueing_delay < TARGET / 2.0 {
                self.cwnd += bytes_acked as f64;
                return;
            }
            // The queue is a good way toward the target already; hand over
            // to the proportional controller.
            self.in_slow_start = false;
        }

        let off_target = (TARGET - queueing_delay) / TARGET;
        self.cwnd += GAIN * off_target * bytes_acked as f64 * MSS as f64 / self.cwnd;
        self.cwnd = self.cwnd.max(MIN_CWND as f64);
    }

    fn on_loss(&mut self) {
        // RFC 6817 §2.4.2: halve the window on loss, at most once per RTT
        // (the transport already coalesces loss signals per round trip).
        self.cwnd = (self.cwnd / 2.0).max(MIN_CWND as f64);
        self.in_slow_start = false;
    }
}

impl Default for Ledbat {
    fn default() -> Self {
        Self::new()
    }
}

impl CongestionControl for Ledbat {
    fn scheme_id(&self) -> SchemeId {
        SchemeId::Ledbat
    }

    fn on_event(&mut self, event: &CcEvent) -> CcDecision {
        match *event {
            CcEvent::Ack {
                bytes_acked,
                rtt_sample,
                ..
            } => self.on_ack(bytes_acked, rtt_sample.as_secs_f64()),
            CcEvent::DupackLoss { .. } | CcEvent::TimeoutLoss { .. } => self.on_loss(),
            CcEvent::SendOpportunity { .. } | CcEvent::TimerTick { .. } => {}
        }
        self.decision()
    }
}
