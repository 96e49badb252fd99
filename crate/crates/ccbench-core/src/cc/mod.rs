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

//! Congestion-control schemes behind a uniform event-driven interface.
//!
//! A scheme is a deterministic state machine: the transport feeds it
//! [`CcEvent`]s in nondecreasing time order and after each event the scheme
//! reports its current [`CcDecision`] (congestion window plus optional
//! pacing rate). Schemes never see the simulator itself, which keeps them
//! replayable: feeding a recorded event log into a fresh instance
//! reproduces the decision log exactly.
//!
//! The roster covers the classic loss-based family (`newreno`, `cubic`),
//! the delay-based family (`vegas`, `ledbat`) and a model-based scheme
//! (`bbr_lite`). Each implementation follows its published reference and
//! documents its simplifications in the module docs.

use alloc::boxed::Box;
use alloc::string::ToString;

use crate::units::Nanos;
use crate::Error;
use crate::Result;
use crate::MSS;

mod bbr_lite;
mod cubic;
mod ledbat;
mod newreno;
mod vegas;

pub use bbr_lite::BbrLite;
pub use cubic::Cubic;
pub use ledbat::Ledbat;
pub use newreno::NewReno;
pub use vegas::Vegas;

/// Initial congestion window for every scheme, in bytes (10 packets).
pub const INITIAL_CWND: u64 = 10 * MSS;

/// Floor on the congestion window, in bytes (2 packets). The only state
/// allowed below this is BBR-lite's probe-RTT, which pins cwnd to 4 packets
/// and therefore stays above it anyway.
pub const MIN_CWND: u64 = 2 * MSS;

/// A transport-level event delivered to a congestion-control scheme.
///
/// Events carry the simulated time `now`; the transport guarantees
/// nondecreasing `now` across successive events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcEvent {
    /// One or more bytes were newly acknowledged, with a fresh RTT sample.
    Ack {
        /// Current simulated time.
        now: Nanos,
        /// Bytes acknowledged by this event.
        bytes_acked: u64,
        /// Round-trip time measured on the acknowledged packet.
        rtt_sample: Nanos,
    },
    /// Loss inferred from duplicate acks (fast-retransmit signal); emitted
    /// at most once per round-trip of losses.
    DupackLoss {
        /// Current simulated time.
        now: Nanos,
    },
    /// Loss inferred from a retransmission timeout firing.
    TimeoutLoss {
        /// Current simulated time.
        now: Nanos,
    },
    /// The transport is about to consider sending new packets.
    SendOpportunity {
        /// Current simulated time.
        now: Nanos,
    },
    /// Periodic timer, delivered even when no acks arrive, so schemes with
    /// wall-clock state (e.g. BBR-lite's probe-RTT schedule) can advance.
    TimerTick {
        /// Current simulated time.
        now: Nanos,
    },
}

impl CcEvent {
    /// The simulated time the event was delivered at.
    pub fn now(&self) -> Nanos {
        match *self {
            CcEvent::Ack { now, .. }
            | CcEvent::DupackLoss { now }
            | CcEvent::TimeoutLoss { now }
            | CcEvent::SendOpportunity { now }
            | CcEvent::TimerTick { now } => now,
        }
    }
}

/// A scheme's control state after an event: how much data may be in flight
/// and how fast it may be clocked out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CcDecision {
    /// Congestion window in bytes.
    pub cwnd: u64,
    /// Pacing rate in bits/second; `None` means unlimited (pure
    /// window-based control).
    pub pacing_rate_bps: Option<u64>,
}

/// The uniform interface every congestion-control scheme implements.
pub trait CongestionControl: Send {
    /// Scheme identifier (one of the [`roster`] tokens).
    fn scheme_id(&self) -> SchemeId;

    /// Consumes one transport event and returns the updated control state.
    fn on_event(&mut self, event: &CcEvent) -> CcDecision;
}

/// Identifier of a congestion-control scheme in the roster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SchemeId {
    /// Simplified BBR: bandwidth/min-RTT model with pacing-gain cycling.
    BbrLite,
    /// CUBIC (RFC 9438): cubic window growth with fast convergence.
    Cubic,
    /// LEDBAT (RFC 6817): one-way-delay-target background transport.
    Ledbat,
    /// TCP NewReno (RFC 5681/6582): classic AIMD.
    NewReno,
    /// TCP Vegas: RTT-based congestion avoidance.
    Vegas,
}

/// All roster scheme ids, sorted by identifier token.
pub const ALL_SCHEMES: [SchemeId; 5] = [
    SchemeId::BbrLite,
    SchemeId::Cubic,
    SchemeId::Ledbat,
    SchemeId::NewReno,
    SchemeId::Vegas,
];

impl SchemeId {
    /// The lowercase identifier token used in manifests and CLI flags.
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::BbrLite => "bbr_lite",
            SchemeId::Cubic => "cubic",
            SchemeId::Ledbat => "ledbat",
            SchemeId::NewReno => "newreno",
            SchemeId::Vegas => "vegas",
        }
    }

    /// Constructs a fresh instance of this scheme.
    pub fn build(self) -> Box<dyn CongestionControl> {
        match self {
            SchemeId::BbrLite => Box::new(BbrLite::new()),
            SchemeId::Cubic => Box::new(Cubic::new()),
            SchemeId::Ledbat => Box::new(Ledbat::new()),
            SchemeId::NewReno => Box::new(NewReno::new()),
            SchemeId::Vegas => Box::new(Vegas::new()),
        }
    }
}

impl core::str::FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bbr_lite" => Ok(SchemeId::BbrLite),
            "cubic" => Ok(SchemeId::Cubic),
            "ledbat" => Ok(SchemeId::Ledbat),
            "newreno" => Ok(SchemeId::NewReno),
            "vegas" => Ok(SchemeId::Vegas),
            other => Err(Error::UnknownScheme(other.to_string())),
        }
    }
}

impl core::fmt::Display for SchemeId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for SchemeId {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> core::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for SchemeId {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> core::result::Result<Self, D::Error> {
        let s = <alloc::string::String as serde::Deserialize>::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The identifier tokens of every available scheme.
pub fn roster() -> &'static [&'static str] {
    &["bbr_lite", "cubic", "ledbat", "newreno", "vegas"]
}

/// Builds a scheme instance from its identifier token.
pub fn build(id: &str) -> Result<Box<dyn CongestionControl>> {
    id.parse::<SchemeId>().map(SchemeId::build)
}

/// Exponentially weighted RTT statistics (RFC 6298 smoothing), shared by
/// schemes that need a smoothed RTT.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct RttEstimate {
    srtt: Option<f64>,
    rttvar: f64,
}

impl RttEstimate {
    /// Feeds one RTT sample (seconds).
    pub(crate) fn update(&mut self, sample: f64) {
        match self.srtt {
            None => {
                self.srtt = Some(sample);
                self.rttvar = sample / 2.0;
            }
            Some(srtt) => {
                self.rttvar = 0.75 * self.rttvar + 0.25 * (srtt - sample).abs();
                self.srtt = Some(srtt / 8.0 * 7.0 + sample / 8.0);
            }
        }
    }

    /// Smoothed RTT in seconds, if any sample has been fed.
    pub(crate) fn smoothed(&self) -> Option<f64> {
        self.srtt
    }

    /// RTT variance in seconds.
    pub(crate) fn variance(&self) -> f64 {
        self.rttvar
    }
}
