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

//! Run configuration: benchmark selection, scheme roster, grid overrides,
//! and the config hash that identifies a run.

use anyhow::bail;
use anyhow::Context;
use anyhow::Result;
use ccbench_core::cc::SchemeId;
use ccbench_core::scenarios;
use ccbench_core::scenarios::Scenario;
use ccbench_core::scoring::DEFAULT_ALPHA;
use serde::Deserialize;
use serde::Serialize;
use sha2::Digest;
use sha2::Sha256;

/// Which scenario families a run covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BenchmarkSelector {
    /// Both CC-Bench1 families (flat and step), ranked together.
    Ccbench1,
    /// Only the flat-trace CC-Bench1 grid.
    Ccbench1Flat,
    /// Only the step-trace CC-Bench1 grid.
    Ccbench1Step,
    /// The CC-Bench2 coexistence grid.
    Ccbench2,
}

impl BenchmarkSelector {
    /// Stable lowercase token used on the command line and in metadata.
    pub fn as_str(self) -> &'static str {
        match self {
            BenchmarkSelector::Ccbench1 => "ccbench1",
            BenchmarkSelector::Ccbench1Flat => "ccbench1_flat",
            BenchmarkSelector::Ccbench1Step => "ccbench1_step",
            BenchmarkSelector::Ccbench2 => "ccbench2",
        }
    }
}

impl std::str::FromStr for BenchmarkSelector {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ccbench1" => Ok(BenchmarkSelector::Ccbench1),
            "ccbench1_flat" => Ok(BenchmarkSelector::Ccbench1Flat),
            "ccbench1_step" => Ok(BenchmarkSelector::Ccbench1Step),
            "ccbench2" => Ok(BenchmarkSelector::Ccbench2),
            other => bail!(
                "unknown benchmark {other:?} (expected ccbench1, ccbench1_flat, \
                 ccbench1_step, or ccbench2)"
            ),
        }
    }
}

impl std::fmt::Display for BenchmarkSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Optional replacements for the default grid axes. `None` keeps the
/// stock axis.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct GridOverrides {
    /// Bandwidth axis, Mbps (base bandwidths for step grids).
    pub bandwidths_mbps: Option<Vec<u64>>,
    /// Two-way propagation delay axis, milliseconds.
    pub min_rtts_ms: Option<Vec<u64>>,
    /// Queue-size axis, multiples of the BDP.
    pub queue_bdp_multiples: Option<Vec<f64>>,
}

impl GridOverrides {
    /// Whether any axis is overridden.
    pub fn is_empty(&self) -> bool {
        self.bandwidths_mbps.is_none()
            && self.min_rtts_ms.is_none()
            && self.queue_bdp_multiples.is_none()
    }

    fn bandwidths<'a>(&'a self, default: &'a [u64]) -> &'a [u64] {
        self.bandwidths_mbps.as_deref().unwrap_or(default)
    }

    fn min_rtts<'a>(&'a self, default: &'a [u64]) -> &'a [u64] {
        self.min_rtts_ms.as_deref().unwrap_or(default)
    }

    fn queue_multiples<'a>(&'a self, default: &'a [f64]) -> &'a [f64] {
        self.queue_bdp_multiples.as_deref().unwrap_or(default)
    }
}

/// Everything that determines a benchmark run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    /// Scenario families to run.
    pub benchmark: BenchmarkSelector,
    /// Schemes under test.
    pub schemes: Vec<SchemeId>,
    /// Power-score exponent.
    pub alpha: f64,
    /// Worker threads for the cell pool.
    pub parallel: usize,
    /// Grid-axis overrides.
    pub grid: GridOverrides,
}

impl RunConfig {
    /// A config for `benchmark` with the default grid, α, and a single
    /// worker.
    pub fn new(benchmark: BenchmarkSelector, schemes: Vec<SchemeId>) -> Self {
        RunConfig {
            benchmark,
            schemes,
            alpha: DEFAULT_ALPHA,
            parallel: 1,
            grid: GridOverrides::default(),
        }
    }

    /// Checks the configuration invariants.
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            bail!("no schemes under test (pass --schemes)");
        }
        let mut seen = std::collections::BTreeSet::new();
        for scheme in &self.schemes {
            if !seen.insert(*scheme) {
                bail!("scheme {scheme} listed more than once");
            }
        }
        if self.alpha.is_nan() || self.alpha <= 0.0 {
            bail!("alpha must be positive, got {}", self.alpha);
        }
        if self.parallel == 0 {
            bail!("parallelism must be at least 1");
        }
        if let Some(axis) = &self.grid.bandwidths_mbps {
            if axis.is_empty() {
                bail!("bandwidth override is empty");
            }
        }
        if let Some(axis) = &self.grid.min_rtts_ms {
            if axis.is_empty() {
                bail!("min-RTT override is empty");
            }
        }
        if let Some(axis) = &self.grid.queue_bdp_multiples {
            if axis.is_empty() {
                bail!("queue-size override is empty");
            }
        }
        Ok(())
    }

    /// Materializes the scenario list this configuration runs.
    pub fn scenarios(&self) -> Result<Vec<Scenario>> {
        let grid = &self.grid;
        let flat = || {
            scenarios::build_ccbench1_flat_grid(
                grid.bandwidths(&scenarios::DEFAULT_BANDWIDTHS_MBPS),
                grid.min_rtts(&scenarios::DEFAULT_MIN_RTTS_MS),
                grid.queue_multiples(&scenarios::DEFAULT_QUEUE_BDP_MULTIPLES),
            )
        };
        let step = || {
            scenarios::build_ccbench1_step_grid(
                grid.bandwidths(&scenarios::DEFAULT_STEP_BANDWIDTHS_MBPS),
                &scenarios::DEFAULT_STEP_RATE_MULTIPLES,
                grid.min_rtts(&scenarios::DEFAULT_MIN_RTTS_MS),
                grid.queue_multiples(&scenarios::DEFAULT_QUEUE_BDP_MULTIPLES),
            )
        };
        let list = match self.benchmark {
            BenchmarkSelector::Ccbench1 => {
                let mut list = flat()?;
                list.extend(step()?);
                list
            }
            BenchmarkSelector::Ccbench1Flat => flat()?,
            BenchmarkSelector::Ccbench1Step => step()?,
            BenchmarkSelector::Ccbench2 => scenarios::build_ccbench2_grid(
                grid.bandwidths(&scenarios::DEFAULT_BANDWIDTHS_MBPS),
                grid.min_rtts(&scenarios::DEFAULT_MIN_RTTS_MS),
                grid.queue_multiples(&scenarios::DEFAULT_QUEUE_BDP_MULTIPLES_CCBENCH2),
            )?,
        };
        for scenario in &list {
            scenario
                .validate()
                .with_context(|| format!("generated scenario {}", scenario.id))?;
        }
        Ok(list)
    }

    /// Hex SHA-256 over the fields that determine the run's outputs.
    ///
    /// The worker count only affects wall-clock time, never results, so
    /// it is deliberately left out: the same benchmark run has the same
    /// hash on a laptop and on a 64-core box.
    pub fn hash(&self) -> String {
        #[derive(Serialize)]
        struct Canonical<'a> {
            benchmark: BenchmarkSelector,
            schemes: &'a [SchemeId],
            alpha: f64,
            grid: &'a GridOverrides,
        }
        let view = Canonical {
            benchmark: self.benchmark,
            schemes: &self.schemes,
            alpha: self.alpha,
            grid: &self.grid,
        };
        let canonical = serde_json::to_string(&view).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(64);
        for byte in digest {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config() -> RunConfig {
        RunConfig::new(
            BenchmarkSelector::Ccbench1Flat,
            vec![SchemeId::Cubic, SchemeId::Vegas],
        )
    }

    #[test]
    fn default_grids_have_expected_sizes() {
        let mut cfg = config();
        assert_eq!(cfg.scenarios().unwrap().len(), 150);
        cfg.benchmark = BenchmarkSelector::Ccbench1Step;
        assert_eq!(cfg.scenarios().unwrap().len(), 450);
        cfg.benchmark = BenchmarkSelector::Ccbench1;
        assert_eq!(cfg.scenarios().unwrap().len(), 600);
        cfg.benchmark = BenchmarkSelector::Ccbench2;
        assert_eq!(cfg.scenarios().unwrap().len(), 125);
    }

    #[test]
    fn overrides_replace_single_axes() {
        let mut cfg = config();
        cfg.grid.bandwidths_mbps = Some(vec![48]);
        cfg.grid.min_rtts_ms = Some(vec![40]);
        let list = cfg.scenarios().unwrap();
        // One bandwidth × one delay × six stock queue multiples.
        assert_eq!(list.len(), 6);
        assert!(list.iter().all(|s| s.id.contains("bw48-rtt40")));
    }

    #[test]
    fn validation_rejects_bad_configs() {
        let mut cfg = config();
        cfg.schemes.clear();
        assert!(cfg.validate().is_err(), "empty scheme list");

        let mut cfg = config();
        cfg.schemes.push(SchemeId::Cubic);
        assert!(cfg.validate().is_err(), "duplicate scheme");

        let mut cfg = config();
        cfg.alpha = 0.0;
        assert!(cfg.validate().is_err(), "nonpositive alpha");

        let mut cfg = config();
        cfg.parallel = 0;
        assert!(cfg.validate().is_err(), "zero workers");

        let mut cfg = config();
        cfg.grid.bandwidths_mbps = Some(vec![]);
        assert!(cfg.validate().is_err(), "empty override axis");

        assert!(config().validate().is_ok());
    }

    #[test]
    fn hash_pins_the_scoring_inputs_but_not_the_worker_count() {
        let base = config();
        assert_eq!(base.hash(), config().hash());

        let mut other = config();
        other.parallel = 8;
        assert_eq!(base.hash(), other.hash());

        let mut other = config();
        other.alpha = 3.0;
        assert_ne!(base.hash(), other.hash());

        let mut other = config();
        other.grid.bandwidths_mbps = Some(vec![48]);
        assert_ne!(base.hash(), other.hash());
    }

    #[test]
    fn selector_tokens_round_trip() {
        for token in ["ccbench1", "ccbench1_flat", "ccbench1_step", "ccbench2"] {
            let parsed: BenchmarkSelector = token.parse().unwrap();
            assert_eq!(parsed.as_str(), token);
        }
        assert!("ccbench3".parse::<BenchmarkSelector>().is_err());
    }
}
