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

use alloc::string::String;

/// Errors reported by simulator, scenario and scoring operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A bandwidth trace violated a structural requirement (empty, first
    /// segment not at time zero, unsorted segments, or a zero/over-limit
    /// rate).
    InvalidTrace(String),

    /// A link parameter is out of range (zero RTT or zero queue capacity).
    InvalidLink(String),

    /// A flow set passed to the simulator is unusable (empty, or a flow
    /// stops before it starts).
    InvalidFlows(String),

    /// A scenario parameter is out of range (non-positive bandwidth, RTT,
    /// queue multiplier or duration).
    InvalidScenario(String),

    /// A scoring input is out of range (non-positive rate/delay/alpha) or
    /// an aggregate was requested over zero cells.
    InvalidScore(String),

    /// An unknown congestion-control scheme identifier.
    UnknownScheme(String),
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::InvalidTrace(msg) => write!(f, "invalid bandwidth trace: {msg}"),
            Error::InvalidLink(msg) => write!(f, "invalid link config: {msg}"),
            Error::InvalidFlows(msg) => write!(f, "invalid flow set: {msg}"),
            Error::InvalidScenario(msg) => write!(f, "invalid scenario: {msg}"),
            Error::InvalidScore(msg) => write!(f, "invalid scoring input: {msg}"),
            Error::UnknownScheme(name) => write!(f, "unknown congestion-control scheme: {name}"),
        }
    }
}

impl core::error::Error for Error {}
