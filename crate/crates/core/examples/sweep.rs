//! A small sweep over operators, truncations and encodings on a line,
//! written as CSV to stdout.

use qudit_route::cli::{cmd_sweep, render_sweep, SweepConfig};

const CONFIG: &str = "
operators = n, q, n2, q2
d = 2..=8
encodings = sb, gray, unary, bu3-sb
topologies = line
placements = identity
restarts = 50
seed = 1
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg: SweepConfig = CONFIG.parse()?;
    let rows = cmd_sweep(&cfg)?;
    eprintln!("{} rows", rows.len());
    std::io::Write::write_all(&mut std::io::stdout(), &render_sweep(&rows, &cfg)?)?;
    Ok(())
}
