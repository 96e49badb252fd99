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

//! Benchmark harness around [`ccbench_core`]: materializes scenario grids,
//! fans simulation cells out over a worker pool, persists results as a
//! reproducible on-disk bundle, and computes winner sets and rankings.
//!
//! The pipeline is `RunConfig` → scenarios × schemes → one [`runner::CellResult`]
//! per cell → [`bundle::ResultsBundle`] on disk:
//!
//! ```text
//! out/
//! ├── manifest.json   scenario list with all parameters explicit
//! ├── run_meta.json   wall-clock timestamp (the only nondeterministic file)
//! ├── traces.jsonl    per-flow simulation summaries, one JSON object per line
//! ├── results.csv     per (scenario, scheme, interval, kind) scores
//! ├── failures.csv    unscored intervals with the reason
//! └── ranking.csv     winning rates per score kind, best first
//! ```
//!
//! Every artifact except `run_meta.json` is a pure function of the
//! configuration, so identical configs produce byte-identical outputs.

#![deny(unsafe_code)]
#![warn(missing_docs)]

pub mod bundle;
pub mod config;
pub mod report;
pub mod runner;

pub use bundle::ResultsBundle;
pub use config::BenchmarkSelector;
pub use config::GridOverrides;
pub use config::RunConfig;
