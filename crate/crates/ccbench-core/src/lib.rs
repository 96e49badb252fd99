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

//! Core building blocks for benchmarking congestion-control schemes in a
//! deterministic, packet-level network simulator.
//!
//! The crate is organized around a small pipeline:
//!
//! * [`netsim`] — a single-bottleneck link simulator (drop-tail queue,
//!   piecewise-constant bandwidth trace, fixed propagation delay) that turns
//!   a link configuration plus a set of flows into per-flow ack traces.
//! * [`cc`] — pluggable congestion-control schemes (`newreno`, `cubic`,
//!   `vegas`, `ledbat`, `bbr_lite`) implemented as pure state machines that
//!   consume transport events and emit a congestion window and an optional
//!   pacing rate.
//! * [`scenarios`] — benchmark scenario grids: single-flow sweeps over
//!   bandwidth, RTT and buffer size (with flat and oscillating bandwidth),
//!   and two-flow fairness scenarios against a `cubic` competitor.
//! * [`scoring`] — per-interval throughput/delay measurements, power and
//!   friendliness scores, winner sets and winning-rate rankings.
//!
//! Everything in this crate is `no_std` (with `alloc`) and fully
//! deterministic: repeated runs of the same scenario produce bit-identical
//! results. File formats, parallelism and the command-line interface live in
//! the companion `ccbench` crate.

#![cfg_attr(not(test), no_std)]
#![deny(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

pub mod cc;
pub mod netsim;
pub mod scenarios;
pub mod scoring;
pub mod units;

mod error;

pub use crate::error::Error;

/// A convenient result type; all fallible operations in this crate use
/// [`enum@Error`].
pub type Result<T> = core::result::Result<T, Error>;

/// Fixed segment size in bytes. Every data packet in the simulator carries
/// exactly one MSS; acknowledgements are modeled with zero size.
pub const MSS: u64 = 1500;
