//! Command-line front end for the exact electrical-network pipeline.
//!
//! Exit codes: 0 success, 1 validation failure (bad input or a failed
//! exactness check), 2 pipeline error (a computation rejected its input).

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use netinverse::json as wire;
use netinverse::verify::run_suites;
use netinverse_core::electrical::{
    forward_point, invert_point, invert_response, response_matrix, Network,
};
use netinverse_core::graph::{builtin_graph, DiskGraph};
use netinverse_core::grassmann::plucker;

#[derive(Parser)]
#[command(
    name = "netinverse",
    about = "Exact forward and inverse maps between planar electrical networks and \
             totally positive Grassmannian points.",
    version
)]
struct Cli {
    /// Render rationals in output as k-digit decimals (display only).
    #[arg(long, global = true, value_name = "K")]
    decimal: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a built-in well-connected graph with n boundary vertices (1-5).
    Graph {
        #[arg(long)]
        n: usize,
    },
    /// Compute the response matrix of a network.
    Respond {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        cond: PathBuf,
    },
    /// Compute the Plücker vector of the measured Grassmannian point.
    Forward {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        cond: PathBuf,
    },
    /// Recover conductances from a response matrix or a Grassmannian point.
    Invert {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        response: Option<PathBuf>,
        #[arg(long)]
        point: Option<PathBuf>,
    },
    /// Forward then invert; exit 0 iff the conductances round-trip exactly.
    Roundtrip {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        cond: PathBuf,
    },
    /// Run the invariant suites with seeded random conductances.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
}

fn invalid(e: anyhow::Error) -> Failure {
    Failure { code: 1, msg: format!("{e:#}") }
}

fn pipeline(e: netinverse_core::error::Error) -> Failure {
    Failure { code: 2, msg: format!("{e}") }
}

fn load_json(path: &PathBuf) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `--graph` accepts either `builtinN` or a path to a graph JSON file.
fn load_graph(spec: &str) -> Result<DiskGraph> {
    if let Some(rest) = spec.strip_prefix("builtin") {
        if let Ok(n) = rest.parse::<usize>() {
            return builtin_graph(n).map_err(|e| anyhow!("builtin graph {n}: {e}"));
        }
    }
    wire::graph_from_value(&load_json(&PathBuf::from(spec))?)
}

fn load_network(graph: &str, cond: &PathBuf) -> Result<Network> {
    let g = load_graph(graph)?;
    let c = wire::cond_from_value(&load_json(cond)?)?;
    Network::new(g, c).map_err(|e| anyhow!("{e}"))
}

fn print_value(mut v: Value, decimal: Option<usize>) {
    if let Some(k) = decimal {
        wire::decimalize(&mut v, k);
    }
    print!("{}", wire::emit(&v));
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Graph { n } => {
            let g = builtin_graph(n).map_err(pipeline)?;
            print_value(wire::graph_to_value(&g), cli.decimal);
            Ok(())
        }
        Cmd::Respond { graph, cond } => {
            let net = load_network(&graph, &cond).map_err(invalid)?;
            let l = response_matrix(&net).map_err(pipeline)?;
            print_value(wire::response_to_value(&l), cli.decimal);
            Ok(())
        }
        Cmd::Forward { graph, cond } => {
            let net = load_network(&graph, &cond).map_err(invalid)?;
            let x = forward_point(&net).map_err(pipeline)?;
            let p = plucker(&x).map_err(pipeline)?;
            print_value(wire::plucker_to_value(&p), cli.decimal);
            Ok(())
        }
        Cmd::Invert { graph, response, point } => {
            let g = load_graph(&graph).map_err(invalid)?;
            let rec = match (response, point) {
                (Some(path), None) => {
                    let l = wire::response_from_value(&load_json(&path).map_err(invalid)?)
                        .map_err(invalid)?;
                    invert_response(&l, &g).map_err(pipeline)?
                }
                (None, Some(path)) => {
                    let x = wire::point_from_value(&load_json(&path).map_err(invalid)?)
                        .map_err(invalid)?;
                    invert_point(&x, &g).map_err(pipeline)?
                }
                _ => {
                    return Err(invalid(anyhow!(
                        "pass exactly one of --response or --point"
                    )))
                }
            };
            print_value(wire::cond_to_value(&rec), cli.decimal);
            Ok(())
        }
        Cmd::Roundtrip { graph, cond } => {
            let net = load_network(&graph, &cond).map_err(invalid)?;
            let x = forward_point(&net).map_err(pipeline)?;
            let rec = invert_point(&x, &net.graph).map_err(pipeline)?;
            let exact = rec == net.cond;
            print_value(
                json!({"exact": exact, "recovered": wire::cond_to_value(&rec)}),
                cli.decimal,
            );
            if exact {
                Ok(())
            } else {
                Err(Failure { code: 1, msg: "round trip is not exact".into() })
            }
        }
        Cmd::Verify { graph, trials, seed } => {
            let g = load_graph(&graph).map_err(invalid)?;
            println!("seed: {seed}");
            println!("trials: {trials}");
            let reports = run_suites(&g, trials, seed);
            let mut all_ok = true;
            for r in &reports {
                let status = if r.passed { "pass" } else { "FAIL" };
                println!("{status}  {} ({})", r.name, r.detail);
                all_ok &= r.passed;
            }
            if all_ok {
                println!("all suites passed");
                Ok(())
            } else {
                Err(Failure { code: 1, msg: "a verification suite failed".into() })
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
