use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qudit_route::bounds::BoundOptions;
use qudit_route::circuit::{cnot_count, TrotterParams};
use qudit_route::cli::{
    cmd_bounds, cmd_decompose, cmd_route, cmd_sweep, cmd_synth, parse_placements, render_sweep, CliError,
    OutputFormat, RouteOptions, SweepConfig,
};
use qudit_route::codes::Encoding;
use qudit_route::operators::OperatorName;
use qudit_route::pauli::WEIGHT_TOL;
use qudit_route::router::DEFAULT_RESTARTS;
use qudit_route::topology::TopologyKind;

#[derive(Parser)]
#[command(name = "qudit-route", version, about = "Encode qudit operators, synthesize Trotter steps and route them")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Base seed; restart i draws from seed + i. Defaults to 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Schedules per placement. Defaults to 1000.
    #[arg(long, global = true)]
    restarts: Option<usize>,
    /// Drop Pauli weights at or below this modulus.
    #[arg(long, global = true, default_value_t = WEIGHT_TOL)]
    tol: f64,
    /// Let ladders and grids fall back to the embedded line schedule.
    #[arg(long, global = true)]
    embed_fallback: bool,
    /// Use d^2/2 - 3d/2 + 1 for the dense unary bound.
    #[arg(long, global = true)]
    dense_bound_corrected: bool,
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_parser = parse_format)]
    format: Option<OutputFormat>,
}

#[derive(Args)]
struct Instance {
    /// n, q, p, n2, q2, nn, qn, qq, hop, sx, sy, sz, sxsx, szsz, sxsz
    #[arg(long, value_parser = parse_operator)]
    operator: OperatorName,
    #[arg(long)]
    d: usize,
    /// unary, sb, gray, bu<g>-sb, bu<g>-gray
    #[arg(long, value_parser = parse_encoding)]
    encoding: Encoding,
}

#[derive(Subcommand)]
enum Command {
    /// Pauli decomposition with a string-length histogram.
    Decompose(Instance),
    /// Gate list for one Trotter step.
    Synth {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        #[arg(long, default_value_t = 1)]
        eta: u32,
    },
    /// Route one Trotter step and report gate counts.
    Route {
        #[command(flatten)]
        instance: Instance,
        #[arg(long, value_parser = parse_topology, default_value = "line")]
        topology: TopologyKind,
        /// identity, hsnake, vsnake, all, or a comma list
        #[arg(long, default_value = "identity")]
        placement: String,
        /// Also write the routed circuit to this file.
        #[arg(long)]
        circuit: Option<PathBuf>,
    },
    /// Closed-form SWAP bounds as JSON.
    Bounds(Instance),
    /// Run a sweep described by a config file.
    Sweep {
        config: PathBuf,
        /// Add the best compact result among padded truncations.
        #[arg(long)]
        best_compact_in_padding: bool,
    },
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    s.parse()
}

fn parse_operator(s: &str) -> Result<OperatorName, String> {
    s.parse().map_err(|e: qudit_route::operators::OperatorError| e.to_string())
}

fn parse_encoding(s: &str) -> Result<Encoding, String> {
    s.parse().map_err(|e: qudit_route::codes::CodeError| e.to_string())
}

fn parse_topology(s: &str) -> Result<TopologyKind, String> {
    s.parse().map_err(|e: qudit_route::topology::TopologyError| e.to_string())
}

fn emit(output: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, bytes)?,
        None => std::io::stdout().write_all(bytes)?,
    }
    Ok(())
}

fn json_line(v: &impl serde::Serialize) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(v)?;
    out.push(b'\n');
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let format = g.format.unwrap_or(OutputFormat::Json);
    match cli.command {
        Command::Decompose(i) => {
            let out = cmd_decompose(i.operator, i.d, i.encoding, g.tol)?;
            let bytes = match g.format {
                Some(OutputFormat::Json) => json_line(&out.to_json())?,
                _ => out.to_text().into_bytes(),
            };
            emit(&g.output, &bytes)
        }
        Command::Synth { instance: i, tau, eta } => {
            let params = TrotterParams::new(tau, eta)?;
            let c = cmd_synth(i.operator, i.d, i.encoding, params)?;
            let bytes = match g.format {
                Some(OutputFormat::Json) => json_line(&serde_json::json!({
                    "qubits": c.width(),
                    "gates": c.len(),
                    "cnot": cnot_count(&c),
                }))?,
                _ => c.to_text().into_bytes(),
            };
            emit(&g.output, &bytes)
        }
        Command::Route {
            instance: i,
            topology,
            placement,
            circuit,
        } => {
            let opts = RouteOptions {
                restarts: g.restarts.unwrap_or(DEFAULT_RESTARTS),
                seed: g.seed.unwrap_or(0),
                embed_fallback: g.embed_fallback,
            };
            let placements = parse_placements(&placement).map_err(CliError::Usage)?;
            let (record, routed) = cmd_route(i.operator, i.d, i.encoding, topology, &placements, opts)?;
            if let Some(path) = circuit {
                fs::write(path, routed.to_text())?;
            }
            let bytes = match format {
                OutputFormat::Json => json_line(&record)?,
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.serialize(&record)?;
                    w.into_inner().map_err(|e| e.into_error())?
                }
            };
            emit(&g.output, &bytes)
        }
        Command::Bounds(i) => {
            let opts = BoundOptions {
                dense_corrected: g.dense_bound_corrected,
            };
            emit(&g.output, &json_line(&cmd_bounds(i.operator, i.d, i.encoding, opts)?)?)
        }
        Command::Sweep {
            config,
            best_compact_in_padding,
        } => {
            let mut cfg: SweepConfig = fs::read_to_string(&config)?.parse()?;
            cfg.best_compact_in_padding |= best_compact_in_padding;
            cfg.embed_fallback |= g.embed_fallback;
            cfg.dense_bound_corrected |= g.dense_bound_corrected;
            if let Some(r) = g.restarts {
                cfg.restarts = r;
            }
            if let Some(s) = g.seed {
                cfg.seed = s;
            }
            if let Some(f) = g.format {
                cfg.format = f;
            }
            if g.output.is_some() {
                cfg.output = g.output.clone();
            }
            let rows = cmd_sweep(&cfg)?;
            emit(&cfg.output, &render_sweep(&rows, &cfg)?)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
