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

//! CUBIC congestion control (RFC 9438).
//!
//! The window in congestion avoidance follows the cubic curve
//! `W_cubic(t) = C×(t−K)³ + W_max`, concave up to the pre-loss level
//! `W_max` and convex beyond it, with the Reno-friendly region and fast
//! convergence from the RFC.
//!
//! Simplifications relative to a kernel implementation:
//!
//! * No HyStart/HyStart++: slow start runs until the first loss or until
//!   the window reaches ssthresh.
//! * Recovery detail is delegated to the transport's loss signals; there is
//!   no SACK scoreboard, and the congestion-avoidance epoch starts at the
//!   first ack after a loss rather than at recovery exit.
//! * ECN and the RFC's spare `W_est` decay parameters are omitted.

use libm::cbrt;

use crate::cc::CcDecision;
use crate::cc::CcEvent;
use crate::cc::CongestionControl;
use crate::cc::RttEstimate;
use crate::cc::SchemeId;
use crate::cc::INITIAL_CWND;
use crate::cc::MIN_CWND;
use crate::MSS;

/// CUBIC aggressiveness constant, in packets/second³ (RFC 9438 §5.1).
const C: f64 = 0.4;

/// Multiplicative decrease factor applied to the window on loss.
const BETA: f64 = 0.7;

/// Reno-friendly per-window growth factor: 3×(1−β)/(1+β) (RFC 9438 §4.3).
const ALPHA_AIMD: f64 = 3.0 * (1.0 - BETA) / (1.0 + BETA);

/// CUBIC state machine.
#[derive(Debug)]
pub struct Cubic {
    /// Congestion window in bytes.
    cwnd: f64,
    /// Slow-start threshold in bytes.
    ssthresh: f64,
    /// Window size just before the last reduction, in bytes.
    w_max: f64,
    /// Time from epoch start at which the cubic curve reaches `w_max`,
    /// in seconds.
    k: f64,
    /// Start of the current congestion-avoidance epoch, in seconds.
    epoch_start: Option<f64>,
    /// Reno-friendly window estimate in bytes (RFC 9438 §4.3).
    w_est: f64,
    /// Smoothed RTT for the one-RTT target lookahead.
    rtt: RttEstimate,
}

impl Cubic {
    /// Creates a CUBIC instance with the default initial window.
    pub fn new() -> Self {
        Cubic {
            cwnd: INITIAL_CWND as f64,
            ssthresh: f64::INFINITY,
            w_max: 0.0,
            k: 0.0,
            epoch_start: None,
            w_est: 0.0,
            rtt: RttEstimate::default(),
        }
    }

    fn decision(&self) -> CcDecision {
        CcDecision {
            cwnd: self.cwnd as u64,
            pacing_rate_bps: None,
        }
    }

    /// The cubic curve in bytes, `t` seconds into the epoch.
    fn w_cubic(&self, t: f64) -> f64 {
        let dt = t - self.k;
        C * dt * dt * dt * MSS as f64 + self.w_max
    }

    fn on_ack(&mut self, now: f64, bytes_acked: u64, rtt_sample: f64) {
        self.rtt.update(rtt_sample);

        if self.cwnd < self.ssthresh {
            self.cwnd += bytes_acked as f64;
            return;
        }

        let epoch_start = match self.epoch_start {
            Some(t) => t,
            None => {
                // First ack of a congestion-avoidance epoch: anchor the
                // curve. K is the time the curve needs to climb back from
                // the current window to w_max (RFC 9438 §4.2).
                if self.w_max < self.cwnd {
                    self.w_max = self.cwnd;
                }
                self.k = cbrt((self.w_max - self.cwnd) / MSS as f64 / C);
                self.w_est = self.cwnd;
                self.epoch_start = Some(now);
                now
            }
        };
        let t = now - epoch_start;

        // Reno-friendly estimate grows AIMD-style per acknowledged window.
        self.w_est += ALPHA_AIMD * MSS as f64 * bytes_acked as f64 / self.cwnd;

        if self.w_cubic(t) < self.w_est {
            // Reno-friendly region: the cubic curve is below what AIMD
            // would achieve; track the AIMD estimate instead.
            if self.w_est > self.cwnd {
                self.cwnd = self.w_est;
            }
        } else {
            // Concave/convex region: steer toward the curve one RTT ahead.
            let lookahead = self.rtt.smoothed().unwrap_or(0.0);
            let target = self
                .w_cubic(t + lookahead)
                .clamp(self.cwnd, 1.5 * self.cwnd);
            self.cwnd += (target - self.cwnd) * bytes_acked as f64 / self.cwnd;
        }
    }

    fn reduce(&mut self, now: f64) {
        let _ = now;
        // Fast convergence: if this loss comes below the previous peak the
        // flow is likely ceding bandwidth; remember a lowered peak.
        if self.cwnd < self.w_max {
            self.w_max = self.cwnd * (1.0 + BETA) / 2.0;
        } else {
            self.w_max = self.cwnd;
        }
        self.cwnd = (self.cwnd * BETA).max(MIN_CWND as f64);
        self.ssthresh = self.cwnd;
        self.epoch_start = None;
    }

    fn on_timeout(&mut self, now: f64) {
        self.reduce(now);
        self.cwnd = MIN_CWND as f64;
    }
}

impl Default for Cubic {
    fn default() -> Self {
        Self::new()
    }
}

impl CongestionControl for Cubic {
    fn scheme_id(&self) -> SchemeId {
        SchemeId::Cubic
    }

    fn on_event(&mut self, event: &CcEvent) -> CcDecision {
        match *event {
            CcEvent::Ack {
                now,
                bytes_acked,
                rtt_sample,
            } => self.on_ack(now.as_secs_f64(), bytes_acked, rtt_sample.as_secs_f64()),
            CcEvent::DupackLoss { now } => self.reduce(now.as_secs_f64()),
            CcEvent::TimeoutLoss { now } => self.on_timeout(now.as_secs_f64()),
            CcEvent::SendOpportunity { .. } | CcEvent::TimerTick { .. } => {}
        }
        self.decision()
    }
}
