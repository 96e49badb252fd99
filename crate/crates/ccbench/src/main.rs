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

//! Command-line front-end for the congestion-control benchmark.
//!
//! Exit codes: 0 on full success, 2 when individual cells failed but the
//! batch completed, 1 on configuration or I/O errors.

use std::path::PathBuf;

use anyhow::bail;
use anyhow::Context;
use anyhow::Result;
use ccbench::bundle;
use ccbench::report;
use ccbench::report::SweepSpec;
use ccbench::runner;
use ccbench::BenchmarkSelector;
use ccbench::GridOverrides;
use ccbench::RunConfig;
use ccbench_core::cc::SchemeId;
use clap::Args;
use clap::Parser;
use clap::Subcommand;
use clap::ValueEnum;

#[derive(Parser)]
#[command(
    name = "ccbench",
    version,
    about = "Deterministic congestion-control benchmark: simulate scenario grids, \
             score power and friendliness, and rank schemes by winning rate."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the scenarios a configuration would run; optionally pin them
    /// to a manifest file.
    ListScenarios(ListScenariosArgs),
    /// Run the benchmark and write a results bundle.
    Run(RunArgs),
    /// Re-score a stored bundle with a different power exponent.
    Score(ScoreArgs),
    /// Recompute a stored bundle's ranking from its score table.
    Rank(RankArgs),
    /// Sweep one link parameter and write a plot-ready score series.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct GridArgs {
    /// Override the bandwidth axis, Mbps (comma-separated).
    #[arg(long, value_delimiter = ',', value_name = "MBPS")]
    bw_mbps: Option<Vec<u64>>,
    /// Override the propagation-delay axis, milliseconds.
    #[arg(long, value_delimiter = ',', value_name = "MS")]
    min_rtt_ms: Option<Vec<u64>>,
    /// Override the queue-size axis, BDP multiples.
    #[arg(long, value_delimiter = ',', value_name = "MULTIPLE")]
    qs_bdp: Option<Vec<f64>>,
}

impl GridArgs {
    fn overrides(&self) -> GridOverrides {
        GridOverrides {
            bandwidths_mbps: self.bw_mbps.clone(),
            min_rtts_ms: self.min_rtt_ms.clone(),
            queue_bdp_multiples: self.qs_bdp.clone(),
        }
    }
}

#[derive(Args)]
struct ListScenariosArgs {
    /// Benchmark to enumerate.
    #[arg(long, value_parser = parse_benchmark)]
    benchmark: BenchmarkSelector,
    #[command(flatten)]
    grid: GridArgs,
    /// Write the scenario manifest (JSON) here instead of only listing.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    /// Benchmark to run.
    #[arg(long, value_parser = parse_benchmark)]
    benchmark: BenchmarkSelector,
    /// Schemes under test (comma-separated); defaults to the full roster.
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    schemes: Option<Vec<SchemeId>>,
    /// Power-score exponent.
    #[arg(long, default_value_t = ccbench_core::scoring::DEFAULT_ALPHA)]
    alpha: f64,
    /// Worker threads; results are identical for any value.
    #[arg(long, default_value_t = 1)]
    parallel: usize,
    /// Output directory for the results bundle.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Run a pinned scenario manifest instead of generating the grid.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
    #[command(flatten)]
    grid: GridArgs,
}

#[derive(Args)]
struct ScoreArgs {
    /// Stored results bundle to re-score.
    #[arg(long, value_name = "DIR")]
    bundle: PathBuf,
    /// New power-score exponent.
    #[arg(long)]
    alpha: f64,
    /// Where to write the re-scored bundle.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
}

#[derive(Args)]
struct RankArgs {
    /// Stored results bundle to rank.
    #[arg(long, value_name = "DIR")]
    bundle: PathBuf,
    /// Also write the recomputed ranking table here.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SweepKind {
    /// Buffer-size sweep at fixed bandwidth and delay.
    Buffer,
    /// Propagation-delay sweep at fixed bandwidth and relative queue.
    Minrtt,
}

#[derive(Args)]
struct SweepArgs {
    /// Which link parameter to sweep.
    #[arg(long, value_enum)]
    kind: SweepKind,
    /// Schemes to compare (comma-separated); defaults to the full roster.
    #[arg(long, value_delimiter = ',', value_parser = parse_scheme)]
    schemes: Option<Vec<SchemeId>>,
    /// Power-score exponent.
    #[arg(long, default_value_t = ccbench_core::scoring::DEFAULT_ALPHA)]
    alpha: f64,
    /// Output directory for sweep.csv.
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Bottleneck bandwidth, Mbps.
    #[arg(long, default_value_t = 48, value_name = "MBPS")]
    bw_mbps: u64,
    /// Fixed propagation delay for buffer sweeps, milliseconds.
    #[arg(long, default_value_t = 40, value_name = "MS")]
    min_rtt_ms: u64,
    /// Buffer sizes for buffer sweeps, kilobytes (comma-separated).
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "64,128,256,512,1024",
        value_name = "KB"
    )]
    buffers_kb: Vec<u64>,
    /// Delay points for delay sweeps, milliseconds (comma-separated).
    #[arg(
        long,
        value_delimiter = ',',
        default_value = "20,40,60,80,120",
        value_name = "MS"
    )]
    min_rtts_ms: Vec<u64>,
    /// Queue size for delay sweeps, BDP multiples.
    #[arg(long, default_value_t = 5.0, value_name = "MULTIPLE")]
    qs_bdp: f64,
}

fn parse_benchmark(s: &str) -> Result<BenchmarkSelector, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_scheme(s: &str) -> Result<SchemeId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn full_roster() -> Vec<SchemeId> {
    ccbench_core::cc::roster()
        .iter()
        .map(|token| token.parse().expect("roster tokens parse"))
        .collect()
}

enum Outcome {
    Success,
    PartialFailures,
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match execute(cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::PartialFailures) => 2,
        Err(e) => {
            eprintln!("error: {e:#}");
            1
        }
    };
    std::process::exit(code);
}

fn execute(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::ListScenarios(args) => list_scenarios(args),
        Command::Run(args) => run(args),
        Command::Score(args) => score(args),
        Command::Rank(args) => rank(args),
        Command::Sweep(args) => sweep(args),
    }
}

fn list_scenarios(args: ListScenariosArgs) -> Result<Outcome> {
    let mut config = RunConfig::new(args.benchmark, full_roster());
    config.grid = args.grid.overrides();
    config.validate()?;
    let scenarios = config.scenarios()?;
    for scenario in &scenarios {
        println!("{}", scenario.id);
    }
    eprintln!("{} scenarios", scenarios.len());
    if let Some(path) = args.manifest {
        bundle::write_manifest(&scenarios, &path)?;
        eprintln!("wrote manifest to {}", path.display());
    }
    Ok(Outcome::Success)
}

fn run(args: RunArgs) -> Result<Outcome> {
    let mut config = RunConfig::new(
        args.benchmark,
        args.schemes.unwrap_or_else(full_roster),
    );
    config.alpha = args.alpha;
    config.parallel = args.parallel;
    config.grid = args.grid.overrides();
    config.validate()?;

    let scenarios = match &args.manifest {
        Some(path) => {
            if !config.grid.is_empty() {
                bail!(
                    "--manifest pins the scenario list; drop the grid override \
                     flags or the manifest"
                );
            }
            bundle::load_manifest(path)?
        }
        None => config.scenarios()?,
    };

    eprintln!(
        "running {} scenarios x {} schemes on {} worker(s)...",
        scenarios.len(),
        config.schemes.len(),
        config.parallel
    );
    let results = runner::run_scenarios(&config, scenarios)?;
    results
        .write(&args.out)
        .with_context(|| format!("writing bundle to {}", args.out.display()))?;

    let failed_cells = results.cells.iter().filter(|c| c.error.is_some()).count();
    let unscored: usize = results
        .cells
        .iter()
        .filter(|c| c.error.is_none())
        .map(|c| c.measurements.iter().filter(|m| m.d_secs.is_none()).count())
        .sum();
    eprintln!(
        "ran {} cells ({} failed, {} unscored intervals); bundle in {}",
        results.cells.len(),
        failed_cells,
        unscored,
        args.out.display()
    );
    print_ranking(&results.ranking_rows());

    if results.has_failures() {
        Ok(Outcome::PartialFailures)
    } else {
        Ok(Outcome::Success)
    }
}

fn score(args: ScoreArgs) -> Result<Outcome> {
    report::rescore(&args.bundle, args.alpha, &args.out)?;
    eprintln!(
        "re-scored {} with alpha = {}; derived bundle in {}",
        args.bundle.display(),
        args.alpha,
        args.out.display()
    );
    print_ranking(&bundle::load_ranking(&args.out)?);
    Ok(Outcome::Success)
}

fn rank(args: RankArgs) -> Result<Outcome> {
    let rows = report::recompute_ranking(&args.bundle)?;
    print_ranking(&rows);
    if let Some(out) = args.out {
        std::fs::create_dir_all(&out)
            .with_context(|| format!("creating output directory {}", out.display()))?;
        bundle::write_ranking(&rows, &out)?;
        eprintln!("wrote ranking to {}", out.join(bundle::RANKING_FILE).display());
    }
    Ok(Outcome::Success)
}

fn sweep(args: SweepArgs) -> Result<Outcome> {
    let spec = match args.kind {
        SweepKind::Buffer => SweepSpec::Buffer {
            bw_mbps: args.bw_mbps,
            min_rtt_ms: args.min_rtt_ms,
            buffers_kb: args.buffers_kb,
        },
        SweepKind::Minrtt => SweepSpec::MinRtt {
            bw_mbps: args.bw_mbps,
            queue_bdp_multiple: args.qs_bdp,
            min_rtts_ms: args.min_rtts_ms,
        },
    };
    let schemes = args.schemes.unwrap_or_else(full_roster);
    let rows = report::run_sweep(&spec, &schemes, args.alpha)?;
    report::write_sweep(&rows, &args.out)?;
    for row in &rows {
        println!(
            "{} {} {} {}",
            row.sweep, row.x, row.scheme, row.power_score
        );
    }
    eprintln!(
        "wrote {} sweep points to {}",
        rows.len(),
        args.out.join(report::SWEEP_FILE).display()
    );
    Ok(Outcome::Success)
}

fn print_ranking(rows: &[bundle::RankingRow]) {
    for row in rows {
        println!(
            "{:<14} {:>2}. {:<10} {:>6.2}%",
            row.score_kind, row.rank, row.scheme, row.winning_rate
        );
    }
}
