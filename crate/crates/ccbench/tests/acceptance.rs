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

//! Acceptance gate: the eight release criteria for the benchmark, one test
//! per criterion. Each test prints exactly one
//! `ACCEPTANCE <n> <name>: PASS|FAIL (<measurements>)` line before
//! asserting, so a full run reads as a checklist:
//!
//! ```text
//! cargo test -p ccbench --test acceptance -- --test-threads=1 --nocapture
//! ```
//!
//! Criteria 7 and 8 need the complete CC-Bench1 grid (600 scenarios × 5
//! schemes); they share a pair of in-process runs through a `OnceLock`, so
//! the suite pays for exactly two full-grid executions no matter which
//! tests run first.
//!
//! Known failure: criterion 6's final-interval fairness bound does not hold
//! at qs = 2×BDP. With 48 Mbps / 40 ms the propagation delay is an exact
//! multiple of the 0.25 ms serialization slot, so every ack arrival
//! coincides with a queue departure and the fixed event order (time, flow,
//! seq) resolves the tie the same way forever; at a pinned-full queue the
//! flow probing with one extra packet always loses exactly that packet, and
//! the bias compounds instead of averaging out. Swapping the flows' ids
//! reverses which flow wins, confirming the artifact. Every remedy
//! (timing jitter, delayed acks, a sender turnaround delay) gives up either
//! the simulator's strict determinism or its exact RTT accounting, which
//! the rest of the benchmark depends on; the test states the bound as
//! specified and fails honestly. See the cc-bench2 fairness discussion in
//! the README.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::Duration;
use std::time::Instant;

use ccbench::bundle;
use ccbench::report::run_sweep;
use ccbench::report::SweepRow;
use ccbench::report::SweepSpec;
use ccbench::runner;
use ccbench::BenchmarkSelector;
use ccbench::ResultsBundle;
use ccbench::RunConfig;
use ccbench_core::cc::SchemeId;
use ccbench_core::cc::ALL_SCHEMES;
use ccbench_core::netsim::serialization_time;
use ccbench_core::netsim::simulate;
use ccbench_core::netsim::BandwidthTrace;
use ccbench_core::netsim::FlowTrace;
use ccbench_core::netsim::LinkConfig;
use ccbench_core::netsim::SimFlow;
use ccbench_core::scenarios;
use ccbench_core::scenarios::FlowScheme;
use ccbench_core::scoring;
use ccbench_core::scoring::ScoreKind;
use ccbench_core::scoring::ScoreRecord;
use ccbench_core::units::Nanos;
use ccbench_core::MSS;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Prints the single checklist line for one criterion.
fn report(number: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "ACCEPTANCE {number} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
}

// ---------------------------------------------------------------------------
// Criterion 1 — scoring exactness.
// ---------------------------------------------------------------------------

/// The stated score examples must come out bit-exact: the power score of
/// 48 Mbps at 40 ms with α = 2 is 48²/40 = 57.6, the friendliness score of
/// a 30 Mbps flow against a 24 Mbps fair share is |24 − 30| = 6, and in a
/// cell scored {100, 91, 89} the 10% winner margin admits exactly the two
/// best schemes.
#[test]
fn criterion_1_scoring_exactness() {
    let started = Instant::now();

    let power = scoring::power_score(48.0, 40.0, 2.0).expect("power score");
    let friendliness = scoring::friendliness_score(24.0, 30.0).expect("friendliness score");

    let record = |scheme, value| ScoreRecord {
        scenario_id: "cell".to_string(),
        scheme,
        interval_index: 0,
        kind: ScoreKind::Power,
        value,
        direction: ScoreKind::Power.direction(),
        fair_share_mbps: None,
    };
    let winners = scoring::winners(&[
        record(SchemeId::Cubic, 100.0),
        record(SchemeId::Vegas, 91.0),
        record(SchemeId::Ledbat, 89.0),
    ])
    .expect("winner set");
    let expected: BTreeSet<SchemeId> = [SchemeId::Cubic, SchemeId::Vegas].into_iter().collect();

    let elapsed = started.elapsed();
    let pass = power == 57.6
        && friendliness == 6.0
        && winners == expected
        && elapsed < Duration::from_secs(1);
    let detail = format!(
        "power(48,40,2)={power}, friendliness(24,30)={friendliness}, \
         winners of {{100,91,89}}={winners:?}, {:.1} ms",
        elapsed.as_secs_f64() * 1e3
    );
    report(1, "scoring exactness", pass, &detail);
    assert!(pass, "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 2 — simulator invariants on randomized scenarios.
// ---------------------------------------------------------------------------

/// Scenario parameters drawn from a fixed-seed RNG, so "randomized" stays
/// reproducible run to run.
struct RandomScenario {
    bw_mbps: u64,
    rtt_ms: u64,
    queue_bytes: u64,
    duration: Nanos,
    /// Second rate and switch period of a square-wave trace; `None` keeps
    /// the trace flat.
    step: Option<(u64, Nanos)>,
    /// (scheme, start) per flow.
    flows: Vec<(SchemeId, Nanos)>,
}

impl RandomScenario {
    fn draw(rng: &mut ChaCha8Rng) -> Self {
        let bw_mbps = rng.gen_range(4..=192u64);
        let rtt_ms = rng.gen_range(5..=150u64);
        let duration_ms = rng.gen_range(3_000..=8_000u64);
        let qs: f64 = rng.gen_range(0.5..=8.0);
        let bdp = scenarios::bdp_bytes(bw_mbps * 1_000_000, Nanos::from_millis(rtt_ms))
            .expect("bdp of a drawn link");
        let step = rng.gen_bool(0.5).then(|| {
            (
                rng.gen_range(4..=192u64),
                Nanos::from_millis(rng.gen_range(500..=2_000u64)),
            )
        });
        let mut flows = vec![(Self::draw_scheme(rng), Nanos::ZERO)];
        if rng.gen_bool(0.5) {
            let start = Nanos::from_millis(rng.gen_range(0..=duration_ms / 2));
            flows.push((Self::draw_scheme(rng), start));
        }
        RandomScenario {
            bw_mbps,
            rtt_ms,
            queue_bytes: ((qs * bdp) as u64).max(MSS),
            duration: Nanos::from_millis(duration_ms),
            step,
            flows,
        }
    }

    fn draw_scheme(rng: &mut ChaCha8Rng) -> SchemeId {
        ALL_SCHEMES[rng.gen_range(0..ALL_SCHEMES.len())]
    }

    fn link(&self) -> LinkConfig {
        let trace = match self.step {
            None => BandwidthTrace::flat(self.bw_mbps * 1_000_000),
            Some((bw2_mbps, period)) => BandwidthTrace::alternating(
                self.bw_mbps * 1_000_000,
                bw2_mbps * 1_000_000,
                period,
                self.duration,
            ),
        };
        LinkConfig::new(
            trace.expect("drawn trace"),
            Nanos::from_millis(self.rtt_ms),
            self.queue_bytes,
        )
        .expect("drawn link")
    }

    /// Fresh flow instances; called twice for the determinism double-run.
    fn sim_flows(&self) -> Vec<SimFlow> {
        self.flows
            .iter()
            .map(|&(scheme, start)| SimFlow {
                cc: scheme.build(),
                start,
                stop: self.duration,
            })
            .collect()
    }

    fn label(&self, index: usize) -> String {
        format!(
            "scenario #{index} (bw={} Mbps, rtt={} ms, queue={} B, dur={}, step={:?}, flows={:?})",
            self.bw_mbps,
            self.rtt_ms,
            self.queue_bytes,
            self.duration,
            self.step,
            self.flows
        )
    }
}

/// Checks one simulated scenario against the structural invariants;
/// appends a message per violation.
fn check_invariants(
    scenario: &RandomScenario,
    link: &LinkConfig,
    traces: &[FlowTrace],
    label: &str,
    violations: &mut Vec<String>,
) {
    let min_rtt = link.min_rtt;

    // Conservation: every byte handed to the link is eventually acked,
    // dropped, or still inside the network when the run drains.
    for t in traces {
        let accounted = t.bytes_acked + t.dropped_bytes + t.in_flight_at_end;
        if t.bytes_sent != accounted {
            violations.push(format!(
                "{label}: flow {} sent {} B but accounts for {} B",
                t.flow_id, t.bytes_sent, accounted
            ));
        }
    }

    // Capacity bound: delivered bits never exceed what the trace could
    // serve up to the last departure, plus one packet of slack per trace
    // segment (service times are fixed at dequeue, so a packet straddling
    // a rate drop finishes on the faster schedule) and one for the packet
    // in service at the boundary.
    let last_depart = traces
        .iter()
        .flat_map(|t| t.ack_records.iter())
        .map(|r| r.at.saturating_sub(min_rtt))
        .max();
    if let Some(end) = last_depart {
        let delivered_bits: f64 = traces.iter().map(|t| t.bytes_acked as f64 * 8.0).sum();
        let slack_bits = ((link.trace.segments().len() as u64 + 1) * MSS * 8) as f64;
        let bound = link.trace.bits_between(Nanos::ZERO, end) + slack_bits;
        if delivered_bits > bound {
            violations.push(format!(
                "{label}: delivered {delivered_bits} bits > capacity bound {bound}"
            ));
        }
    }

    // RTT floor: no sample below propagation plus the fastest possible
    // serialization (integer floor, so rounding can never trip it).
    let max_rate = link
        .trace
        .segments()
        .iter()
        .map(|s| s.rate_bps)
        .max()
        .expect("nonempty trace");
    let ser_floor_ns = (u128::from(MSS) * 8 * 1_000_000_000 / u128::from(max_rate)) as u64;
    let rtt_floor_ns = min_rtt.as_nanos() + ser_floor_ns;
    for t in traces {
        if let Some(r) = t.ack_records.iter().find(|r| r.rtt.as_nanos() < rtt_floor_ns) {
            violations.push(format!(
                "{label}: flow {} rtt sample {} below the {} ns floor",
                t.flow_id,
                r.rtt,
                rtt_floor_ns
            ));
        }
    }

    // FIFO: within a flow, acks arrive in send order and never reorder.
    for t in traces {
        for pair in t.ack_records.windows(2) {
            let sent0 = pair[0].at.as_nanos() - pair[0].rtt.as_nanos();
            let sent1 = pair[1].at.as_nanos() - pair[1].rtt.as_nanos();
            if pair[1].at < pair[0].at || sent1 < sent0 {
                violations.push(format!(
                    "{label}: flow {} acks out of order around t={}",
                    t.flow_id, pair[1].at
                ));
                break;
            }
        }
    }

    let _ = scenario;
}

/// Conservation, capacity-bound, RTT-floor, FIFO, and determinism
/// invariants over ≥ 100 randomized scenarios (fixed seed, so the suite
/// is reproducible).
#[test]
fn criterion_2_simulator_invariants() {
    const SCENARIO_COUNT: usize = 110;
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2026);
    let mut violations = Vec::new();

    for index in 0..SCENARIO_COUNT {
        let scenario = RandomScenario::draw(&mut rng);
        let label = scenario.label(index);
        let link = scenario.link();

        let first = simulate(&link, scenario.sim_flows())
            .unwrap_or_else(|e| panic!("{label}: simulation failed: {e}"));
        let second = simulate(&link, scenario.sim_flows())
            .unwrap_or_else(|e| panic!("{label}: re-simulation failed: {e}"));
        if first != second {
            violations.push(format!("{label}: two identical runs diverged"));
        }

        check_invariants(&scenario, &link, &first, &label, &mut violations);
    }

    let elapsed = started.elapsed();
    let pass = violations.is_empty() && elapsed < Duration::from_secs(300);
    let detail = match violations.first() {
        None => format!(
            "{SCENARIO_COUNT} randomized scenarios, each simulated twice; conservation, \
             capacity bound, RTT floor, FIFO, determinism all hold; {:.1} s",
            elapsed.as_secs_f64()
        ),
        Some(first) => format!("{} violations, first: {first}", violations.len()),
    };
    report(2, "simulator invariants", pass, &detail);
    assert!(pass, "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 3 — utilization sanity.
// ---------------------------------------------------------------------------

/// A single Cubic flow on a flat 48 Mbps / 40 ms / 2×BDP link must deliver
/// at least 85% of capacity over 30 s, and Vegas on the same link must keep
/// its mean queueing delay under a quarter of what Cubic induces (Cubic
/// fills the buffer by design; Vegas backs off at a few packets of queue).
#[test]
fn criterion_3_utilization_sanity() {
    let started = Instant::now();
    let scenario = &scenarios::build_ccbench1_flat_grid(&[48], &[40], &[2.0])
        .expect("flat grid")[0];
    let run = |scheme: SchemeId| -> FlowTrace {
        simulate(&scenario.link, scenario.flows_for(scheme))
            .expect("simulation")
            .remove(0)
    };
    let cubic = run(SchemeId::Cubic);
    let vegas = run(SchemeId::Vegas);

    let capacity_bits = 48e6 * scenario.duration.as_secs_f64();
    let utilization = cubic.bytes_acked as f64 * 8.0 / capacity_bits;

    // Queueing delay = RTT sample minus the empty-queue RTT (propagation
    // plus one packet's serialization at the link rate).
    let base_secs = Nanos::from_millis(40).as_secs_f64()
        + serialization_time(MSS, 48_000_000).expect("serialization");
    let mean_queueing_ms = |t: &FlowTrace| -> f64 {
        let sum: f64 = t
            .ack_records
            .iter()
            .map(|r| r.rtt.as_secs_f64() - base_secs)
            .sum();
        sum / t.ack_records.len().max(1) as f64 * 1e3
    };
    let cubic_q = mean_queueing_ms(&cubic);
    let vegas_q = mean_queueing_ms(&vegas);

    let elapsed = started.elapsed();
    let pass = utilization >= 0.85 && vegas_q < 0.25 * cubic_q;
    let detail = format!(
        "cubic delivered {:.1}% of capacity (need ≥ 85%); mean queueing \
         vegas {vegas_q:.2} ms vs cubic {cubic_q:.2} ms, ratio {:.3} (need < 0.25); {:.1} s",
        utilization * 100.0,
        vegas_q / cubic_q,
        elapsed.as_secs_f64()
    );
    report(3, "utilization sanity", pass, &detail);
    assert!(pass, "{detail}");
}

// ---------------------------------------------------------------------------
// Criteria 4 and 5 — qualitative crossovers.
// ---------------------------------------------------------------------------

/// Aggregate power score of `scheme` at sweep point `x`.
fn sweep_score(rows: &[SweepRow], x: f64, scheme: SchemeId) -> f64 {
    rows.iter()
        .find(|r| r.x == x && r.scheme == scheme)
        .unwrap_or_else(|| panic!("no sweep row for {scheme} at {x}"))
        .power_score
}

/// Buffer-size crossover at 48 Mbps / 40 ms: Cubic outscores LEDBAT in
/// shallow buffers (64 kB), LEDBAT outscores Cubic in deep ones (1024 kB),
/// and the score difference changes sign exactly once in between.
#[test]
fn criterion_4_buffer_size_crossover() {
    let started = Instant::now();
    let buffers_kb = vec![64u64, 128, 256, 512, 1024];
    let spec = SweepSpec::Buffer {
        bw_mbps: 48,
        min_rtt_ms: 40,
        buffers_kb: buffers_kb.clone(),
    };
    let rows = run_sweep(&spec, &[SchemeId::Cubic, SchemeId::Ledbat], 2.0).expect("buffer sweep");

    let diffs: Vec<f64> = buffers_kb
        .iter()
        .map(|&kb| {
            sweep_score(&rows, kb as f64, SchemeId::Cubic)
                - sweep_score(&rows, kb as f64, SchemeId::Ledbat)
        })
        .collect();
    let flip = diffs
        .windows(2)
        .position(|w| w[0] > 0.0 && w[1] < 0.0)
        .map(|i| buffers_kb[i + 1]);

    let elapsed = started.elapsed();
    let pass = diffs[0] > 0.0
        && *diffs.last().unwrap() < 0.0
        && flip.is_some()
        && elapsed < Duration::from_secs(60);
    let detail = format!(
        "S_p(cubic)−S_p(ledbat) over {{64..1024}} kB = {:?}; cubic ahead at 64 kB, \
         ledbat ahead at 1024 kB, sign flips by {} kB; {:.1} s",
        diffs.iter().map(|d| (d * 100.0).round() / 100.0).collect::<Vec<_>>(),
        flip.map_or("<none>".to_string(), |kb| kb.to_string()),
        elapsed.as_secs_f64()
    );
    report(4, "buffer-size crossover", pass, &detail);
    assert!(pass, "{detail}");
}

/// Propagation-delay crossover at 48 Mbps / 5×BDP: Vegas outscores
/// BBR-lite at 20 ms (BBR-lite pays periodic ProbeRTT dwells that cost
/// relatively more when the BDP is small) and BBR-lite outscores Vegas at
/// 120 ms (Vegas's fixed packet thresholds leave a long pipe underfilled).
#[test]
fn criterion_5_min_rtt_crossover() {
    let started = Instant::now();
    let rtts_ms = vec![20u64, 40, 60, 80, 120];
    let spec = SweepSpec::MinRtt {
        bw_mbps: 48,
        queue_bdp_multiple: 5.0,
        min_rtts_ms: rtts_ms.clone(),
    };
    let rows = run_sweep(&spec, &[SchemeId::Vegas, SchemeId::BbrLite], 2.0).expect("rtt sweep");

    let vegas_low = sweep_score(&rows, 20.0, SchemeId::Vegas);
    let bbr_low = sweep_score(&rows, 20.0, SchemeId::BbrLite);
    let vegas_high = sweep_score(&rows, 120.0, SchemeId::Vegas);
    let bbr_high = sweep_score(&rows, 120.0, SchemeId::BbrLite);

    let elapsed = started.elapsed();
    let pass = vegas_low > bbr_low && bbr_high > vegas_high && elapsed < Duration::from_secs(60);
    let detail = format!(
        "at 20 ms vegas {vegas_low:.2} vs bbr_lite {bbr_low:.2}; \
         at 120 ms bbr_lite {bbr_high:.2} vs vegas {vegas_high:.2}; {:.1} s",
        elapsed.as_secs_f64()
    );
    report(5, "min-RTT crossover", pass, &detail);
    assert!(pass, "{detail}");
}

// ---------------------------------------------------------------------------
// Criterion 6 — self-fairness against an established flow.
// ---------------------------------------------------------------------------

/// Seconds after `entry` until the flow's cumulative delivery rate first
/// reaches `target_bps`, ignoring the first second (a cumulative rate over
/// a near-zero span is noise). `None` if it never does.
fn time_to_rate(trace: &FlowTrace, entry: Nanos, target_bps: f64) -> Option<f64> {
    let mut bytes = 0u64;
    for rec in &trace.ack_records {
        bytes += rec.bytes;
        let dt = rec.at.saturating_sub(entry).as_secs_f64();
        if dt > 1.0 && bytes as f64 * 8.0 / dt >= target_bps {
            return Some(dt);
        }
    }
    None
}

/// A Cubic flow joining an established Cubic flow (flat 48 Mbps / 40 ms,
/// queue ∈ {1,2,4}×BDP, 120 s) must end within 20% of its fair share in
/// the final scored interval, and take longer to converge the deeper the
/// queue.
///
/// KNOWN FAILURE at qs = 2: the deterministic event order turns the
/// resonant 48 Mbps / 40 ms timing into a persistent bias (see the module
/// comment); the two flows end near 32/16 Mbps instead of 24/24. The bound
/// is asserted as stated rather than widened to hide it.
#[test]
fn criterion_6_self_fairness() {
    let started = Instant::now();
    let multiples = [1.0, 2.0, 4.0];
    let mut finals_mbps = Vec::new();
    let mut bounds_mbps = Vec::new();
    let mut convergence_s = Vec::new();

    for &m in &multiples {
        let scenario = &scenarios::build_ccbench2_grid(&[48], &[40], &[m])
            .expect("coexistence grid")[0];
        let entrant_idx = scenario
            .flows
            .iter()
            .position(|f| f.scheme == FlowScheme::UnderTest)
            .expect("flow under test");
        let traces = simulate(&scenario.link, scenario.flows_for(SchemeId::Cubic))
            .expect("simulation");
        let entrant = &traces[entrant_idx];

        let measurements = scoring::interval_measurements(entrant, scenario);
        let last = measurements.last().expect("final interval");
        let fair_mbps = last.f_bps.expect("fair share") / 1e6;
        let s_fr = scoring::friendliness_score(fair_mbps, last.r_bps / 1e6)
            .expect("friendliness score");
        finals_mbps.push(s_fr);
        bounds_mbps.push(0.2 * fair_mbps);

        let entry = scenario.flows[entrant_idx].start;
        convergence_s.push(time_to_rate(entrant, entry, 0.8 * fair_mbps * 1e6));
    }

    let fair_enough = finals_mbps
        .iter()
        .zip(&bounds_mbps)
        .all(|(s, bound)| s <= bound);
    let ordered = convergence_s.iter().all(Option::is_some)
        && convergence_s.windows(2).all(|w| w[0].unwrap() < w[1].unwrap());

    let elapsed = started.elapsed();
    let pass = fair_enough && ordered && elapsed < Duration::from_secs(60);
    let fmt_conv = |c: &Option<f64>| c.map_or("never".to_string(), |s| format!("{s:.1}"));
    let detail = format!(
        "final-interval S_fr over qs {{1,2,4}}×BDP = [{:.3}, {:.3}, {:.3}] Mbps \
         (bound {:.1}); time to 80% of fair share = [{}, {}, {}] s (must increase); {:.1} s",
        finals_mbps[0],
        finals_mbps[1],
        finals_mbps[2],
        bounds_mbps[0],
        fmt_conv(&convergence_s[0]),
        fmt_conv(&convergence_s[1]),
        fmt_conv(&convergence_s[2]),
        elapsed.as_secs_f64()
    );
    report(6, "self-fairness", pass, &detail);
    assert!(pass, "{detail}");
}

// ---------------------------------------------------------------------------
// Criteria 7 and 8 — the full grid, twice.
// ---------------------------------------------------------------------------

struct FullRuns {
    first: ResultsBundle,
    first_secs: f64,
    second: ResultsBundle,
    second_secs: f64,
}

static FULL_RUNS: OnceLock<FullRuns> = OnceLock::new();

/// Two complete CC-Bench1 runs (flat + step, all five schemes) with the
/// same configuration; criterion 7 judges the first, criterion 8 compares
/// the two.
fn full_runs() -> &'static FullRuns {
    FULL_RUNS.get_or_init(|| {
        let mut config = RunConfig::new(BenchmarkSelector::Ccbench1, ALL_SCHEMES.to_vec());
        config.parallel = std::thread::available_parallelism().map_or(1, |n| n.get());

        let started = Instant::now();
        let first = runner::run(&config).expect("full grid run");
        let first_secs = started.elapsed().as_secs_f64();

        let started = Instant::now();
        let second = runner::run(&config).expect("full grid rerun");
        let second_secs = started.elapsed().as_secs_f64();

        FullRuns {
            first,
            first_secs,
            second,
            second_secs,
        }
    })
}

/// Over the full CC-Bench1 grid with the five-scheme roster, no scheme may
/// win every judged cell: each design trades something away somewhere in
/// the parameter space.
#[test]
fn criterion_7_no_perfect_scheme() {
    let runs = full_runs();
    let (_, power_ranking) = runs
        .first
        .rankings
        .iter()
        .find(|(kind, _)| *kind == ScoreKind::Power)
        .expect("power ranking");

    let cells = runs.first.cells.len();
    let all_below_100 = power_ranking.iter().all(|&(_, rate)| rate < 100.0);
    let full_roster = power_ranking.len() == ALL_SCHEMES.len();
    let pass = all_below_100 && full_roster && runs.first_secs < 1_800.0;

    let top = power_ranking
        .iter()
        .map(|(scheme, rate)| format!("{scheme} {rate:.2}%"))
        .collect::<Vec<_>>()
        .join(", ");
    let detail = format!(
        "power winning rates over {cells} cells: {top}; grid ran in {:.1} s \
         (need < 1800 s)",
        runs.first_secs
    );
    report(7, "no perfect scheme", pass, &detail);
    assert!(pass, "{detail}");
}

/// Two runs of the identical configuration must write byte-identical
/// artifacts; only `run_meta.json` (which records the wall-clock
/// timestamp) is excluded from the comparison.
#[test]
fn criterion_8_reproducibility() {
    let runs = full_runs();
    let dir_a = tempfile::tempdir().expect("tempdir");
    let dir_b = tempfile::tempdir().expect("tempdir");
    runs.first.write(dir_a.path()).expect("writing first bundle");
    runs.second.write(dir_b.path()).expect("writing second bundle");

    let compared = [
        bundle::MANIFEST_FILE,
        bundle::TRACES_FILE,
        bundle::RESULTS_FILE,
        bundle::FAILURES_FILE,
        bundle::RANKING_FILE,
    ];
    let mut mismatched = Vec::new();
    for name in compared {
        let a = std::fs::read(dir_a.path().join(name)).expect("reading first bundle");
        let b = std::fs::read(dir_b.path().join(name)).expect("reading second bundle");
        if a != b {
            mismatched.push(name);
        }
    }

    let pass = mismatched.is_empty();
    let detail = if pass {
        format!(
            "{} artifacts byte-identical across two full-grid runs \
             (run_meta.json timestamp excluded); second run {:.1} s",
            compared.len(),
            runs.second_secs
        )
    } else {
        format!("artifacts differ between identical runs: {mismatched:?}")
    };
    report(8, "reproducibility", pass, &detail);
    assert!(pass, "{detail}");
}
