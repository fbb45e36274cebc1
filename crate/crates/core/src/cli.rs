//! Command implementations behind the `qudit-route` binary, and the sweep
//! runner.
//!
//! A sweep config is a flat `key = value` file; `#` starts a comment and
//! lists are comma separated. See `docs/sweep-config.md` for the grammar.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{bound_report, BoundError, BoundOptions, BoundReport};
use crate::circuit::{cnot_count, swap_count, synthesize, Circuit, CircuitError, TrotterParams};
use crate::codes::{ceil_log2, CodeError, Encoding, EncodingScheme};
use crate::operators::{OperatorError, OperatorName};
use crate::pauli::{encode_hamiltonian, length_histogram, PauliError, PauliSum};
use crate::router::{RouteError, RouteOrigin, RouteResult, Router, DEFAULT_RESTARTS};
use crate::topology::{PlacementKind, TopologyError, TopologyKind};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Route(#[from] RouteError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error("config line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error("invalid sweep: {0}")]
    Sweep(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

/// Shared routing knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteOptions {
    pub restarts: usize,
    pub seed: u64,
    pub embed_fallback: bool,
}

impl Default for RouteOptions {
    fn default() -> Self {
        RouteOptions {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            embed_fallback: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeOutput {
    pub operator: String,
    pub encoding: String,
    pub d: usize,
    pub qubits: usize,
    pub terms: usize,
    pub max_length: usize,
    pub histogram: BTreeMap<usize, usize>,
    #[serde(skip)]
    pub sum: PauliSum,
}

impl DecomposeOutput {
    /// Pauli lines followed by `#` statistics lines.
    pub fn to_text(&self) -> String {
        let mut out = self.sum.to_text();
        let _ = writeln!(out, "# terms {}", self.terms);
        for (p, n) in &self.histogram {
            let _ = writeln!(out, "# length {p}: {n}");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        let terms: Vec<serde_json::Value> = self
            .sum
            .terms()
            .iter()
            .map(|t| serde_json::json!({ "weight": t.weight.re, "axes": t.axes_string() }))
            .collect();
        v["pauli"] = terms.into();
        v
    }
}

fn scheme_for(d: usize, encoding: Encoding) -> Result<EncodingScheme, CliError> {
    Ok(EncodingScheme::new(encoding, d)?)
}

/// Pauli decomposition of a named operator; weights at or below `tol` are
/// dropped.
pub fn cmd_decompose(
    name: OperatorName,
    d: usize,
    encoding: Encoding,
    tol: f64,
) -> Result<DecomposeOutput, CliError> {
    let h = name.build(d)?;
    let scheme = scheme_for(d, encoding)?;
    let sum = encode_hamiltonian(&h, &scheme)?.simplify(tol);
    Ok(DecomposeOutput {
        operator: name.as_str().into(),
        encoding: encoding.token(),
        d,
        qubits: sum.width(),
        terms: sum.len(),
        max_length: sum.max_length(),
        histogram: length_histogram(&sum),
        sum,
    })
}

/// One Trotter step of a named operator.
pub fn cmd_synth(
    name: OperatorName,
    d: usize,
    encoding: Encoding,
    params: TrotterParams,
) -> Result<Circuit, CliError> {
    let h = name.build(d)?;
    let sum = encode_hamiltonian(&h, &scheme_for(d, encoding)?)?;
    Ok(synthesize(&sum, params)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RouteRecord {
    pub operator: String,
    pub d: usize,
    pub encoding: String,
    pub qubits: usize,
    pub topology: String,
    pub placement_used: String,
    pub cnot: usize,
    pub swap: usize,
    pub two_qubit_total: usize,
    pub seed: u64,
}

fn origin_label(origin: RouteOrigin, kinds: &[PlacementKind]) -> String {
    match origin {
        RouteOrigin::Placement(j) => kinds[j].as_str().into(),
        RouteOrigin::LineEmbedding => "line-embed".into(),
    }
}

/// Routes `c` on a topology of `kind` sized to the circuit.
pub fn route_circuit(
    c: &Circuit,
    kind: TopologyKind,
    placements: &[PlacementKind],
    opts: RouteOptions,
) -> Result<(RouteResult, String), CliError> {
    let t = kind.build(c.width().max(1));
    let router = Router::new(&t);
    let initial: Vec<_> = placements.iter().map(|p| p.build(&t)).collect();
    let result = if opts.embed_fallback {
        router.route_best_with_fallback(c, &initial, opts.restarts, opts.seed)?
    } else {
        router.route_best(c, &initial, opts.restarts, opts.seed)?
    };
    let label = origin_label(result.origin, placements);
    Ok((result, label))
}

/// Synthesizes and routes a named operator, returning the gate counts and
/// the routed circuit.
pub fn cmd_route(
    name: OperatorName,
    d: usize,
    encoding: Encoding,
    topology: TopologyKind,
    placements: &[PlacementKind],
    opts: RouteOptions,
) -> Result<(RouteRecord, Circuit), CliError> {
    let c = cmd_synth(name, d, encoding, TrotterParams::default())?;
    let (result, placement_used) = route_circuit(&c, topology, placements, opts)?;
    let cnot = cnot_count(&result.circuit);
    let swap = swap_count(&result.circuit);
    let record = RouteRecord {
        operator: name.as_str().into(),
        d,
        encoding: encoding.token(),
        qubits: c.width(),
        topology: topology.as_str().into(),
        placement_used,
        cnot,
        swap,
        two_qubit_total: cnot + swap,
        seed: result.seed,
    };
    Ok((record, result.circuit))
}

pub fn cmd_bounds(
    name: OperatorName,
    d: usize,
    encoding: Encoding,
    opts: BoundOptions,
) -> Result<BoundReport, CliError> {
    let h = name.build(d)?;
    Ok(bound_report(name, &h, &scheme_for(d, encoding)?, opts)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub operators: Vec<OperatorName>,
    pub ds: Vec<usize>,
    pub encodings: Vec<Encoding>,
    pub topologies: Vec<TopologyKind>,
    pub placements: Vec<PlacementKind>,
    pub restarts: usize,
    pub seed: u64,
    pub embed_fallback: bool,
    pub dense_bound_corrected: bool,
    pub best_compact_in_padding: bool,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            operators: Vec::new(),
            ds: Vec::new(),
            encodings: Vec::new(),
            topologies: vec![TopologyKind::Line],
            placements: vec![PlacementKind::Identity],
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            embed_fallback: false,
            dense_bound_corrected: false,
            best_compact_in_padding: false,
            output: None,
            format: OutputFormat::Csv,
        }
    }
}

/// `4`, `2..8` (half open), `2..=16`, or a comma list of those.
pub fn parse_d_list(s: &str) -> Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| format!("bad integer {x:?}"))
        };
        if let Some((lo, hi)) = part.split_once("..=") {
            out.extend(num(lo)?..=num(hi)?);
        } else if let Some((lo, hi)) = part.split_once("..") {
            out.extend(num(lo)?..num(hi)?);
        } else {
            out.push(num(part)?);
        }
    }
    Ok(out)
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        other => Err(format!("expected a boolean, got {other:?}")),
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T, String>) -> Result<Vec<T>, String> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(f)
        .collect()
}

/// Comma list of placement tokens, `all` included, without repeats.
pub fn parse_placements(s: &str) -> Result<Vec<PlacementKind>, String> {
    let lists = parse_list(s, |t| PlacementKind::parse_list(t).map_err(|e| e.to_string()))?;
    let mut flat: Vec<PlacementKind> = Vec::new();
    for k in lists.into_iter().flatten() {
        if !flat.contains(&k) {
            flat.push(k);
        }
    }
    Ok(flat)
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: &str| Err(CliError::Sweep(m.into()));
        if self.operators.is_empty() {
            return fail("no operators");
        }
        if self.ds.is_empty() {
            return fail("empty d range");
        }
        if let Some(d) = self.ds.iter().find(|&&d| d < 2) {
            return Err(CliError::Sweep(format!("d = {d} is below 2")));
        }
        if self.encodings.is_empty() {
            return fail("no encodings");
        }
        if self.topologies.is_empty() {
            return fail("no topologies");
        }
        if self.placements.is_empty() {
            return fail("no placements");
        }
        if self.restarts == 0 {
            return fail("restarts must be >= 1");
        }
        Ok(())
    }

    /// Number of rows the sweep emits.
    pub fn point_count(&self) -> usize {
        self.operators.len() * self.ds.len() * self.encodings.len() * self.topologies.len()
    }

    fn points(&self) -> Vec<SweepPoint> {
        let mut out = Vec::with_capacity(self.point_count());
        for &operator in &self.operators {
            for &d in &self.ds {
                for &encoding in &self.encodings {
                    for &topology in &self.topologies {
                        out.push(SweepPoint {
                            operator,
                            d,
                            encoding,
                            topology,
                        });
                    }
                }
            }
        }
        out
    }
}

impl FromStr for SweepConfig {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut cfg = SweepConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| CliError::Config { line: i + 1, msg };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            let res: Result<(), String> = (|| {
                match key {
                    "operators" => {
                        cfg.operators = parse_list(value, |s| s.parse().map_err(|e: OperatorError| e.to_string()))?
                    }
                    "d" => cfg.ds = parse_d_list(value)?,
                    "encodings" => {
                        cfg.encodings = parse_list(value, |s| s.parse().map_err(|e: CodeError| e.to_string()))?
                    }
                    "topologies" => {
                        cfg.topologies = parse_list(value, |s| s.parse().map_err(|e: TopologyError| e.to_string()))?
                    }
                    "placements" => cfg.placements = parse_placements(value)?,
                    "restarts" => cfg.restarts = value.parse().map_err(|_| format!("bad restarts {value:?}"))?,
                    "seed" => cfg.seed = value.parse().map_err(|_| format!("bad seed {value:?}"))?,
                    "embed_fallback" => cfg.embed_fallback = parse_bool(value)?,
                    "dense_bound_corrected" => cfg.dense_bound_corrected = parse_bool(value)?,
                    "best_compact_in_padding" => cfg.best_compact_in_padding = parse_bool(value)?,
                    "output" => cfg.output = Some(PathBuf::from(value)),
                    "format" => cfg.format = value.parse()?,
                    other => return Err(format!("unknown key {other:?}")),
                }
                Ok(())
            })();
            res.map_err(err)?;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct SweepPoint {
    operator: OperatorName,
    d: usize,
    encoding: Encoding,
    topology: TopologyKind,
}

#[derive(Debug, Clone, PartialEq)]
struct PointResult {
    qubits: usize,
    placement_used: String,
    cnot: usize,
    swap: usize,
}

/// Lowest two-qubit total among `d' in d..=2^K` for a compact code.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PaddedBest {
    pub d: usize,
    pub swap: usize,
    pub total_2q: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub operator: String,
    pub d: usize,
    pub encoding: String,
    pub qubits: usize,
    pub topology: String,
    pub placement_used: String,
    pub cnot: usize,
    pub swap: usize,
    pub total_2q: usize,
    pub bounds: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub padded_best: Option<PaddedBest>,
}

pub const CSV_HEADER: [&str; 10] = [
    "operator",
    "d",
    "encoding",
    "qubits",
    "topology",
    "placement_used",
    "cnot",
    "swap",
    "total_2q",
    "bounds",
];

pub const CSV_PADDED_HEADER: [&str; 3] = ["padded_best_d", "padded_best_swap", "padded_best_total_2q"];

fn run_point(p: &SweepPoint, cfg: &SweepConfig) -> Result<PointResult, CliError> {
    let c = cmd_synth(p.operator, p.d, p.encoding, TrotterParams::default())?;
    let opts = RouteOptions {
        restarts: cfg.restarts,
        seed: cfg.seed,
        embed_fallback: cfg.embed_fallback,
    };
    let (result, placement_used) = route_circuit(&c, p.topology, &cfg.placements, opts)?;
    Ok(PointResult {
        qubits: c.width(),
        placement_used,
        cnot: cnot_count(&result.circuit),
        swap: swap_count(&result.circuit),
    })
}

/// Runs every point of the sweep in parallel; rows come back in config
/// order: operator, then d, then encoding, then topology.
pub fn cmd_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>, CliError> {
    cfg.validate()?;
    let points = cfg.points();
    let mut needed = points.clone();
    if cfg.best_compact_in_padding {
        for p in &points {
            if p.encoding.is_compact() {
                let top = 1usize << ceil_log2(p.d);
                for d in p.d + 1..=top {
                    let extra = SweepPoint { d, ..*p };
                    if !needed.contains(&extra) {
                        needed.push(extra);
                    }
                }
            }
        }
    }
    let results: Vec<PointResult> = needed
        .par_iter()
        .map(|p| run_point(p, cfg))
        .collect::<Result<_, _>>()?;
    let by_point: HashMap<SweepPoint, &PointResult> = needed.iter().copied().zip(&results).collect();
    let bound_opts = BoundOptions {
        dense_corrected: cfg.dense_bound_corrected,
    };

    points
        .iter()
        .map(|p| {
            let r = by_point[p];
            let report = cmd_bounds(p.operator, p.d, p.encoding, bound_opts)?;
            let padded_best = (cfg.best_compact_in_padding && p.encoding.is_compact()).then(|| {
                let top = 1usize << ceil_log2(p.d);
                (p.d..=top)
                    .map(|d| {
                        let q = by_point[&SweepPoint { d, ..*p }];
                        PaddedBest {
                            d,
                            swap: q.swap,
                            total_2q: q.cnot + q.swap,
                        }
                    })
                    .min_by_key(|b| (b.total_2q, b.d))
                    .expect("range contains d")
            });
            Ok(SweepRow {
                operator: p.operator.as_str().into(),
                d: p.d,
                encoding: p.encoding.token(),
                qubits: r.qubits,
                topology: p.topology.as_str().into(),
                placement_used: r.placement_used.clone(),
                cnot: r.cnot,
                swap: r.swap,
                total_2q: r.cnot + r.swap,
                bounds: report.bounds,
                padded_best,
            })
        })
        .collect()
}

/// `name=value` pairs joined by `;`.
pub fn format_bounds(bounds: &BTreeMap<String, f64>) -> String {
    bounds
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn write_sweep_csv<W: std::io::Write>(
    rows: &[SweepRow],
    padded: bool,
    out: W,
) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = CSV_HEADER.to_vec();
    if padded {
        header.extend(CSV_PADDED_HEADER);
    }
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.operator.clone(),
            r.d.to_string(),
            r.encoding.clone(),
            r.qubits.to_string(),
            r.topology.clone(),
            r.placement_used.clone(),
            r.cnot.to_string(),
            r.swap.to_string(),
            r.total_2q.to_string(),
            format_bounds(&r.bounds),
        ];
        if padded {
            match &r.padded_best {
                Some(b) => rec.extend([b.d.to_string(), b.swap.to_string(), b.total_2q.to_string()]),
                None => rec.extend([String::new(), String::new(), String::new()]),
            }
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Renders sweep rows in the configured format.
pub fn render_sweep(rows: &[SweepRow], cfg: &SweepConfig) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    match cfg.format {
        OutputFormat::Csv => write_sweep_csv(rows, cfg.best_compact_in_padding, &mut buf)?,
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut buf, rows)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_examples() {
        let n = cmd_decompose(OperatorName::N, 4, Encoding::StdBinary, 1e-12).unwrap();
        assert_eq!(n.terms, 3);
        assert!(n.max_length <= 1);
        let q = cmd_decompose(OperatorName::Q, 2, Encoding::StdBinary, 1e-12).unwrap();
        assert_eq!(q.terms, 1);
        assert_eq!(q.sum.terms()[0].axes_string(), "X");
        let u = cmd_decompose(OperatorName::N, 2, Encoding::Unary, 1e-12).unwrap();
        let axes: Vec<String> = u.sum.terms().iter().map(|t| t.axes_string()).collect();
        assert_eq!(axes, ["II", "IZ"]);
        assert!(u.to_text().contains("# terms 2"));
    }

    #[test]
    fn route_examples() {
        let all = [PlacementKind::Identity];
        let opts = RouteOptions {
            restarts: 4,
            ..Default::default()
        };
        let (r, _) = cmd_route(OperatorName::Q, 6, Encoding::Unary, TopologyKind::Line, &all, opts).unwrap();
        assert_eq!(r.swap, 0);
        let (r, _) = cmd_route(OperatorName::N, 4, Encoding::StdBinary, TopologyKind::Line, &all, opts).unwrap();
        assert_eq!((r.swap, r.cnot), (0, 0));
        let (r, _) = cmd_route(OperatorName::Q2, 5, Encoding::Gray, TopologyKind::Full, &all, opts).unwrap();
        assert_eq!(r.swap, 0);
        assert_eq!(r.two_qubit_total, r.cnot);
    }

    #[test]
    fn bounds_examples() {
        let r = cmd_bounds(OperatorName::Q, 8, Encoding::Unary, BoundOptions::default()).unwrap();
        assert_eq!(r.bounds["UB_unary_inversion"], 0.0);
    }

    #[test]
    fn d_lists() {
        assert_eq!(parse_d_list("2..=4").unwrap(), [2, 3, 4]);
        assert_eq!(parse_d_list("2..4, 9").unwrap(), [2, 3, 9]);
        assert!(parse_d_list("5..2").unwrap().is_empty());
        assert!(parse_d_list("x").is_err());
    }

    #[test]
    fn config_parse() {
        let cfg: SweepConfig = "
            # figure-style sweep
            operators = n, q
            d = 2..=4
            encodings = sb, unary, bu2-gray
            topologies = line, ladder
            placements = all
            restarts = 8
            seed = 7
            embed_fallback = yes
        "
        .parse()
        .unwrap();
        assert_eq!(cfg.operators, [OperatorName::N, OperatorName::Q]);
        assert_eq!(cfg.ds, [2, 3, 4]);
        assert_eq!(cfg.placements.len(), 3);
        assert_eq!(cfg.point_count(), 2 * 3 * 3 * 2);
        assert!(cfg.embed_fallback);
        cfg.validate().unwrap();
    }

    #[test]
    fn config_errors() {
        let e = "operators = n\nbogus = 1".parse::<SweepConfig>().unwrap_err();
        assert!(matches!(e, CliError::Config { line: 2, .. }));
        assert!("d = 2..x".parse::<SweepConfig>().is_err());
        let cfg: SweepConfig = "operators = n\nd = 4..4\nencodings = sb".parse().unwrap();
        assert!(matches!(cfg.validate(), Err(CliError::Sweep(_))));
        assert!(cmd_sweep(&cfg).is_err());
    }

    #[test]
    fn small_sweep() {
        let cfg: SweepConfig = "operators = n, q\nd = 2..=4\nencodings = sb, unary\nrestarts = 4\nseed = 3"
            .parse()
            .unwrap();
        let rows = cmd_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), cfg.point_count());
        assert_eq!((rows[0].operator.as_str(), rows[0].d, rows[0].encoding.as_str()), ("n", 2, "sb"));
        let csv = render_sweep(&rows, &cfg).unwrap();
        assert_eq!(csv, render_sweep(&cmd_sweep(&cfg).unwrap(), &cfg).unwrap());
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("operator,d,encoding,qubits,topology,placement_used,cnot,swap,total_2q,bounds\n"));
        assert_eq!(text.lines().count(), rows.len() + 1);
    }

    #[test]
    fn padded_columns() {
        let cfg: SweepConfig =
            "operators = q2\nd = 5\nencodings = sb, unary\nrestarts = 2\nbest_compact_in_padding = true"
                .parse()
                .unwrap();
        let rows = cmd_sweep(&cfg).unwrap();
        let best = rows[0].padded_best.as_ref().unwrap();
        assert!((5..=8).contains(&best.d));
        assert!(best.total_2q <= rows[0].total_2q);
        assert!(rows[1].padded_best.is_none());
        let text = String::from_utf8(render_sweep(&rows, &cfg).unwrap()).unwrap();
        assert!(text.lines().next().unwrap().ends_with("padded_best_total_2q"));
    }
}
