//! `avcs`: generate topologies, dump coordinates, trace single routes and run
//! evaluations and sweeps from a `key = value` scenario file.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use avcs::coords::{bfs_hops, write_coords};
use avcs::harness::{distance_map, evaluate, metrics_csv, parse_config, sweep, sweep_csv, Scenario, SweepAxis};
use avcs::routing::{route, FailureCause, Outcome, Protocol, RouteResult};
use avcs::topology::{parse_topology, write_topology};
use avcs::NodeId;
use clap::{Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "avcs", version, about = "Greedy routing simulator over geographic and virtual coordinates")]
struct Cli {
    /// Scenario file (`key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write output here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for pair evaluation; never changes the output.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    /// Ordered pairs to sample (0 = all); overrides the `sample` key.
    #[arg(long, global = true, value_name = "PAIRS")]
    sample: Option<usize>,
    /// Route over this topology file (as written by `gen`) instead of
    /// generating one; deployment, range and void keys are then ignored.
    #[arg(long, global = true, value_name = "PATH")]
    topology: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write the evaluated topology.
    Gen,
    /// Write the anchor list and every node's (aligned) coordinates.
    Coords,
    /// Trace one packet: `<hop> <node> <mode> <distance-to-destination>` per line.
    Route { src: NodeId, dst: NodeId },
    /// Metrics row for the scenario.
    Eval,
    /// Metrics rows along one parameter axis.
    Sweep {
        /// radio_range, void_size, hole_count, align_depth, error_fraction or seed.
        #[arg(long)]
        axis: SweepAxis,
        /// Comma-separated axis values.
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        values: Vec<f64>,
    },
    /// Per-node distance to one destination, flagging local minima.
    Map { dst: NodeId },
}

/// Process exit status for a routed packet.
fn exit_status(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::DeliveredGreedy | Outcome::DeliveredMixed => 0,
        Outcome::Failed(FailureCause::LocalMinimum) => 2,
        Outcome::Failed(FailureCause::TtlExceeded) => 3,
        Outcome::Failed(FailureCause::PerimeterLoop) => 4,
        Outcome::Failed(FailureCause::BacktrackExhausted) => 5,
        Outcome::Failed(FailureCause::FloodMiss) => 6,
        Outcome::Failed(FailureCause::Unreachable) => 7,
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load(cli: &Cli) -> Result<Scenario, String> {
    let path = cli.config.as_deref().ok_or("--config <PATH> is required")?;
    let mut cfg = parse_config(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    if let Some(sample) = cli.sample {
        cfg.sample = sample;
    }
    let built = match &cli.topology {
        Some(tp) => {
            let t = parse_topology::<f64>(&read(tp)?).map_err(|e| format!("{}: {e}", tp.display()))?;
            Scenario::with_topology(&cfg, t)
        }
        None => Scenario::build(&cfg),
    };
    built.map_err(|e| e.to_string())
}

fn trace(sc: &Scenario, r: &RouteResult) -> String {
    let hop_distance;
    let metric = sc.progress_metric();
    let dist: Box<dyn Fn(NodeId) -> f64> = if sc.config.protocol == Protocol::ShortestPath {
        hop_distance = bfs_hops(&sc.topology, r.dst);
        Box::new(|u| hop_distance[u].map_or(f64::INFINITY, f64::from))
    } else {
        Box::new(|u| metric.distance(u, r.dst))
    };
    let mut out = String::new();
    for (i, &node) in r.path.iter().enumerate() {
        let mode = if i == 0 { "source" } else { r.modes[i - 1].name() };
        let _ = writeln!(out, "{i} {node} {mode} {:.6}", dist(node));
    }
    out
}

fn run(cli: &Cli) -> Result<(String, u8), String> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err("--workers must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    let sc = load(cli)?;
    let text = match &cli.command {
        Command::Gen => write_topology(&sc.topology),
        Command::Coords => write_coords(&sc.aligned, &sc.anchors),
        Command::Route { src, dst } => {
            let r = route(sc.config.protocol, *src, *dst, &sc.context()).map_err(|e| e.to_string())?;
            eprintln!("outcome {} hops {}", r.outcome, r.hops());
            return Ok((trace(&sc, &r), exit_status(r.outcome)));
        }
        Command::Eval => metrics_csv(&[evaluate(&sc).map_err(|e| e.to_string())?]),
        Command::Sweep { .. } if cli.topology.is_some() => {
            return Err("sweep regenerates the topology at every point; drop --topology".into())
        }
        Command::Sweep { axis, values } => {
            sweep_csv(&sweep(&sc.config, *axis, values).map_err(|e| e.to_string())?)
        }
        Command::Map { dst } => distance_map(&sc, *dst).map_err(|e| e.to_string())?.to_csv(),
    };
    Ok((text, 0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or_default().trim_start_matches("error: ").to_string();
            eprintln!("error: {first}");
            return ExitCode::from(1);
        }
    };
    let result = run(&cli).and_then(|(text, status)| {
        match &cli.out {
            Some(path) => fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(status)
    });
    match result {
        Ok(status) => ExitCode::from(status),
        Err(reason) => {
            eprintln!("error: {}", reason.replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
