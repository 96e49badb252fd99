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

//! TCP NewReno: classic AIMD congestion control (RFC 5681, RFC 6582).
//!
//! Simplifications relative to a kernel implementation:
//!
//! * No explicit fast-recovery window inflation/deflation; the transport
//!   reports at most one duplicate-ack loss per round trip, and the window
//!   is simply halved on that signal.
//! * Congestion-avoidance growth uses byte counting (RFC 3465): one MSS of
//!   window per congestion window of acknowledged bytes, which averages the
//!   textbook MSS×MSS/cwnd per ack.
//! * The restart window after a timeout is 2 packets rather than 1,
//!   matching the interface-wide window floor.

use crate::cc::CcDecision;
use crate::cc::CcEvent;
use crate::cc::CongestionControl;
use crate::cc::SchemeId;
use crate::cc::INITIAL_CWND;
use crate::cc::MIN_CWND;
use crate::MSS;

/// TCP NewReno state machine.
#[derive(Debug)]
pub struct NewReno {
    /// Congestion window in bytes.
    cwnd: u64,
    /// Slow-start threshold in bytes.
    ssthresh: u64,
    /// Bytes acknowledged since the window last grew (congestion
    /// avoidance accumulator, RFC 3465).
    acked_bytes: u64,
}

impl NewReno {
    /// Creates a NewReno instance with the default initial window.
    pub fn new() -> Self {
        NewReno {
            cwnd: INITIAL_CWND,
            ssthresh: u64::MAX,
            acked_bytes: 0,
        }
    }

    fn decision(&self) -> CcDecision {
        CcDecision {
            cwnd: self.cwnd,
            pacing_rate_bps: None,
        }
    }

    fn on_ack(&mut self, bytes_acked: u64) {
        if self.cwnd < self.ssthresh {
            // Slow start: one MSS per MSS acknowledged (doubling per RTT).
            self.cwnd += bytes_acked.min(MSS);
        } else {
            // Congestion avoidance: one MSS per window acknowledged.
            self.acked_bytes += bytes_acked;
            if self.acked_bytes >= self.cwnd {
                self.acked_bytes -= self.cwnd;
                self.cwnd += MSS;
            }
        }
    }

    fn on_dupack_loss(&mut self) {
        self.ssthresh = (self.cwnd / 2).max(MIN_CWND);
        self.cwnd = self.ssthresh;
        self.acked_bytes = 0;
    }

    fn on_timeout_loss(&mut self) {
        self.ssthresh = (self.cwnd / 2).max(MIN_CWND);
        self.cwnd = MIN_CWND;
        self.acked_bytes = 0;
    }
}

impl Default for NewReno {
    fn default() -> Self {
        Self::new()
    }
}

impl CongestionControl for NewReno {
    fn scheme_id(&self) -> SchemeId {
        SchemeId::NewReno
    }

    fn on_event(&mut self, event: &CcEvent) -> CcDecision {
        match *event {
            CcEvent::Ack { bytes_acked, .. } => self.on_ack(bytes_acked),
            CcEvent::DupackLoss { .. } => self.on_dupack_loss(),
            CcEvent::TimeoutLoss { .. } => self.on_timeout_loss(),
            CcEvent::SendOpportunity { .. } | CcEvent::TimerTick { .. } => {}
        }
        self.decision()
    }
}
