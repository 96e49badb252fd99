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

//! Deterministic discrete-event simulation of sender flows sharing a
//! single bottleneck link.
//!
//! The model is the classic dumbbell reduced to its essentials: each flow's
//! packets enter a drop-tail FIFO queue in front of a link whose capacity
//! follows a piecewise-constant [`BandwidthTrace`]; after service they
//! incur a fixed propagation delay and are acknowledged per packet over an
//! ideal reverse path. Congestion control is supplied per flow through the
//! [`crate::cc::CongestionControl`] interface.
//!
//! Everything runs on integer nanoseconds with a totally ordered event
//! queue, so simulation output is a pure function of its inputs.

mod link;
mod sim;

pub use link::serialization_time;
pub use link::BandwidthTrace;
pub use link::LinkConfig;
pub use link::TraceSegment;
pub use link::MAX_RATE_BPS;
pub use sim::simulate;
pub use sim::AckRecord;
pub use sim::FlowTrace;
pub use sim::Packet;
pub use sim::SimFlow;

pub(crate) use link::serialization_nanos;
