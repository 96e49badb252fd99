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

//! Bottleneck-link description: capacity trace and link parameters.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::units::Nanos;
use crate::Error;
use crate::Result;
use crate::MSS;

/// Upper bound on link capacity accepted by the simulator, in bits/second.
///
/// All benchmark grids stay strictly below this rate; rejecting higher rates
/// catches unit mistakes (e.g. passing Mbps where bits/second is expected).
pub const MAX_RATE_BPS: u64 = 200_000_000;

/// One piece of a piecewise-constant capacity trace: from `start` (until the
/// next segment, or forever) the link drains at `rate_bps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceSegment {
    /// Time at which this segment takes effect.
    pub start: Nanos,
    /// Link capacity in bits/second while this segment is active.
    pub rate_bps: u64,
}

/// A piecewise-constant bottleneck capacity trace.
///
/// Segments are strictly ordered by start time, the first segment starts at
/// time zero, and every rate lies in `(0, MAX_RATE_BPS]`. The last segment
/// extends to the end of the simulation.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BandwidthTrace {
    segments: Vec<TraceSegment>,
}

impl BandwidthTrace {
    /// Builds a trace from raw segments, validating the structural
    /// invariants described on the type.
    pub fn new(segments: Vec<TraceSegment>) -> Result<Self> {
        let trace = BandwidthTrace { segments };
        trace.validate()?;
        Ok(trace)
    }

    /// A constant-rate trace.
    pub fn flat(rate_bps: u64) -> Result<Self> {
        Self::new(vec![TraceSegment {
            start: Nanos::ZERO,
            rate_bps,
        }])
    }

    /// A square-wave trace alternating between `rate_a` and `rate_b`,
    /// starting with `rate_a` at time zero and switching every `period`,
    /// with segments generated up to `horizon`.
    pub fn alternating(rate_a: u64, rate_b: u64, period: Nanos, horizon: Nanos) -> Result<Self> {
        if period == Nanos::ZERO {
            return Err(Error::InvalidTrace("alternation period must be > 0".into()));
        }
        let mut segments = Vec::new();
        let mut start = Nanos::ZERO;
        let mut high_phase = true;
        while start < horizon || segments.is_empty() {
            segments.push(TraceSegment {
                start,
                rate_bps: if high_phase { rate_a } else { rate_b },
            });
            high_phase = !high_phase;
            start = start + period;
        }
        Self::new(segments)
    }

    /// Checks the trace invariants; used both at construction time and by
    /// the simulator on externally supplied (e.g. deserialized) traces.
    pub fn validate(&self) -> Result<()> {
        if self.segments.is_empty() {
            return Err(Error::InvalidTrace("trace has no segments".into()));
        }
        if self.segments[0].start != Nanos::ZERO {
            return Err(Error::InvalidTrace(format!(
                "first segment starts at {}, expected 0",
                self.segments[0].start
            )));
        }
        for pair in self.segments.windows(2) {
            if pair[1].start <= pair[0].start {
                return Err(Error::InvalidTrace(format!(
                    "segment starts not strictly ascending at {}",
                    pair[1].start
                )));
            }
        }
        for seg in &self.segments {
            if seg.rate_bps == 0 {
                return Err(Error::InvalidTrace(format!(
                    "zero-capacity segment at {}",
                    seg.start
                )));
            }
            if seg.rate_bps > MAX_RATE_BPS {
                return Err(Error::InvalidTrace(format!(
                    "rate {} bps at {} exceeds the {} bps cap",
                    seg.rate_bps, seg.start, MAX_RATE_BPS
                )));
            }
        }
        Ok(())
    }

    /// The trace segments in effect order.
    pub fn segments(&self) -> &[TraceSegment] {
        &self.segments
    }

    /// Link capacity in effect at time `at`.
    pub fn rate_at(&self, at: Nanos) -> u64 {
        // Binary search for the last segment with start <= at.
        let idx = match self
            .segments
            .binary_search_by(|seg| seg.start.cmp(&at))
        {
            Ok(i) => i,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        self.segments[idx].rate_bps
    }

    /// Capacity integrated over `[from, to)`, in bits.
    ///
    /// Used for capacity-bound checks and fair-share computation; returns a
    /// float because scores are computed in floating point anyway.
    pub fn bits_between(&self, from: Nanos, to: Nanos) -> f64 {
        if to <= from {
            return 0.0;
        }
        let mut bits = 0.0;
        for (i, seg) in self.segments.iter().enumerate() {
            let seg_start = seg.start;
            let seg_end = self
                .segments
                .get(i + 1)
                .map(|next| next.start)
                .unwrap_or(Nanos::MAX);
            let lo = seg_start.max(from);
            let hi = seg_end.min(to);
            if hi > lo {
                bits += seg.rate_bps as f64 * (hi - lo).as_secs_f64();
            }
        }
        bits
    }

    /// Mean capacity over `[from, to)` in bits/second.
    pub fn mean_rate_bps(&self, from: Nanos, to: Nanos) -> f64 {
        if to <= from {
            return 0.0;
        }
        self.bits_between(from, to) / (to - from).as_secs_f64()
    }
}

/// Parameters of the single bottleneck link: capacity trace, two-way
/// propagation delay, and drop-tail queue capacity.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinkConfig {
    /// Bottleneck capacity over time.
    pub trace: BandwidthTrace,
    /// Fixed two-way propagation delay (the path RTT with an empty queue,
    /// excluding serialization).
    pub min_rtt: Nanos,
    /// Drop-tail queue capacity in bytes, excluding the packet in service.
    pub queue_capacity: u64,
}

impl LinkConfig {
    /// Builds a link configuration, validating all parameters.
    pub fn new(trace: BandwidthTrace, min_rtt: Nanos, queue_capacity: u64) -> Result<Self> {
        let link = LinkConfig {
            trace,
            min_rtt,
            queue_capacity,
        };
        link.validate()?;
        Ok(link)
    }

    /// Checks the link invariants (including the trace's).
    pub fn validate(&self) -> Result<()> {
        self.trace.validate()?;
        if self.min_rtt == Nanos::ZERO {
            return Err(Error::InvalidLink("min_rtt must be > 0".into()));
        }
        if self.queue_capacity < MSS {
            return Err(Error::InvalidLink(format!(
                "queue capacity {} is smaller than one {} B packet",
                self.queue_capacity, MSS
            )));
        }
        Ok(())
    }
}

/// Time to clock `size` bytes onto a link running at `rate_bps`, in seconds.
///
/// Errors on a zero rate.
pub fn serialization_time(size: u64, rate_bps: u64) -> Result<f64> {
    if rate_bps == 0 {
        return Err(Error::InvalidLink("serialization time undefined at zero rate".into()));
    }
    Ok(size as f64 * 8.0 / rate_bps as f64)
}

/// Integer-exact serialization time in nanoseconds (rounded to nearest),
/// as used inside the event loop.
pub(crate) fn serialization_nanos(size: u64, rate_bps: u64) -> Nanos {
    debug_assert!(rate_bps > 0);
    let bits = size as u128 * 8;
    let nanos = (bits * 1_000_000_000 + rate_bps as u128 / 2) / rate_bps as u128;
    Nanos::from_nanos(nanos as u64)
}
