//! Gate lists and single-step Trotter synthesis.
//!
//! Each Pauli string `w P` is exponentiated with a CNOT staircase: basis
//! changes onto the Z axis, a CNOT chain over the support in ascending qubit
//! order, `RZ(2 w t)` on the last support qubit, then the mirror image.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::pauli::{Pauli, PauliString, PauliSum, WEIGHT_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("term {axes} has complex weight {re} {im:+}i")]
    InvalidTerm { axes: String, re: f64, im: f64 },
    #[error("gate {gate} does not fit a {width}-qubit register")]
    BadOperand { gate: String, width: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("trotter step count must be >= 1")]
    InvalidSteps,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cnot(usize, usize),
    Swap(usize, usize),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cnot(a, b) | Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Swap(..))
    }

    /// The same gate with every operand passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::Rx(q, a) => Gate::Rx(f(q), a),
            Gate::Ry(q, a) => Gate::Ry(f(q), a),
            Gate::Rz(q, a) => Gate::Rz(f(q), a),
            Gate::Cnot(a, b) => Gate::Cnot(f(a), f(b)),
            Gate::Swap(a, b) => Gate::Swap(f(a), f(b)),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H q{q}"),
            Gate::Rx(q, a) => write!(f, "RX q{q} {a}"),
            Gate::Ry(q, a) => write!(f, "RY q{q} {a}"),
            Gate::Rz(q, a) => write!(f, "RZ q{q} {a}"),
            Gate::Cnot(a, b) => write!(f, "CNOT q{a} q{b}"),
            Gate::Swap(a, b) => write!(f, "SWAP q{a} q{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(width: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        let qs = gate.qubits();
        let bad = qs.iter().any(|&q| q >= self.width) || (qs.len() == 2 && qs[0] == qs[1]);
        if bad {
            return Err(CircuitError::BadOperand {
                gate: gate.to_string(),
                width: self.width,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        for &g in &other.gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Circuit text: a `qubits N` header then one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.width);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn parse_qubit(tok: Option<&str>, line: usize) -> Result<usize, CircuitError> {
    let tok = tok.ok_or_else(|| CircuitError::Parse {
        line,
        msg: "missing operand".into(),
    })?;
    tok.strip_prefix('q')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| CircuitError::Parse {
            line,
            msg: format!("bad qubit {tok:?}"),
        })
}

fn parse_angle(tok: Option<&str>, line: usize) -> Result<f64, CircuitError> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| CircuitError::Parse {
            line,
            msg: "missing or bad angle".into(),
        })
}

impl FromStr for Circuit {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines.next().ok_or(CircuitError::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let width = header
            .strip_prefix("qubits")
            .and_then(|w| w.trim().parse().ok())
            .ok_or(CircuitError::Parse {
                line: 1,
                msg: format!("bad header {header:?}"),
            })?;
        let mut circuit = Circuit::new(width);
        for (n, line) in lines {
            let mut toks = line.split_whitespace();
            let op = toks.next().unwrap_or_default();
            let gate = match op {
                "H" => Gate::H(parse_qubit(toks.next(), n)?),
                "RX" => Gate::Rx(parse_qubit(toks.next(), n)?, parse_angle(toks.next(), n)?),
                "RY" => Gate::Ry(parse_qubit(toks.next(), n)?, parse_angle(toks.next(), n)?),
                "RZ" => Gate::Rz(parse_qubit(toks.next(), n)?, parse_angle(toks.next(), n)?),
                "CNOT" => Gate::Cnot(parse_qubit(toks.next(), n)?, parse_qubit(toks.next(), n)?),
                "SWAP" => Gate::Swap(parse_qubit(toks.next(), n)?, parse_qubit(toks.next(), n)?),
                other => {
                    return Err(CircuitError::Parse {
                        line: n,
                        msg: format!("unknown gate {other:?}"),
                    })
                }
            };
            if toks.next().is_some() {
                return Err(CircuitError::Parse {
                    line: n,
                    msg: "trailing tokens".into(),
                });
            }
            circuit.push(gate).map_err(|e| CircuitError::Parse {
                line: n,
                msg: e.to_string(),
            })?;
        }
        Ok(circuit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterParams {
    pub tau: f64,
    pub eta: u32,
}

impl TrotterParams {
    pub fn new(tau: f64, eta: u32) -> Result<Self, CircuitError> {
        if eta == 0 {
            return Err(CircuitError::InvalidSteps);
        }
        Ok(TrotterParams { tau, eta })
    }

    pub fn step_angle(&self) -> f64 {
        self.tau / self.eta as f64
    }
}

impl Default for TrotterParams {
    fn default() -> Self {
        TrotterParams { tau: 1.0, eta: 1 }
    }
}

/// `exp(-i angle w P)` for a single weighted Pauli string.
pub fn exponentiate_string(s: &PauliString, angle: f64) -> Result<Circuit, CircuitError> {
    if s.weight.im.abs() > WEIGHT_TOL {
        return Err(CircuitError::InvalidTerm {
            axes: s.axes_string(),
            re: s.weight.re,
            im: s.weight.im,
        });
    }
    let mut c = Circuit::new(s.axes.len());
    let support = s.support();
    let Some(&last) = support.last() else {
        return Ok(c);
    };
    let mut gates = Vec::new();
    for &q in &support {
        match s.axes[q] {
            Pauli::X => gates.push(Gate::H(q)),
            Pauli::Y => gates.push(Gate::Rx(q, FRAC_PI_2)),
            _ => {}
        }
    }
    for w in support.windows(2) {
        gates.push(Gate::Cnot(w[0], w[1]));
    }
    gates.push(Gate::Rz(last, 2.0 * s.weight.re * angle));
    for w in support.windows(2).rev() {
        gates.push(Gate::Cnot(w[0], w[1]));
    }
    for &q in &support {
        match s.axes[q] {
            Pauli::X => gates.push(Gate::H(q)),
            Pauli::Y => gates.push(Gate::Rx(q, -FRAC_PI_2)),
            _ => {}
        }
    }
    for g in gates {
        c.push(g)?;
    }
    Ok(c)
}

/// Terms grouped by support, groups in lexicographic support order, terms
/// within a group in axes order. Identity strings are dropped.
pub fn ordered_terms(sum: &PauliSum) -> Vec<&PauliString> {
    let mut groups: BTreeMap<Vec<usize>, Vec<&PauliString>> = BTreeMap::new();
    for t in sum.terms() {
        let support = t.support();
        if !support.is_empty() {
            groups.entry(support).or_default().push(t);
        }
    }
    groups
        .into_values()
        .flat_map(|mut g| {
            g.sort_by(|a, b| a.axes.cmp(&b.axes));
            g
        })
        .collect()
}

/// One Trotter step, `prod_j exp(-i h_j tau / eta)`.
pub fn synthesize(sum: &PauliSum, params: TrotterParams) -> Result<Circuit, CircuitError> {
    let angle = params.step_angle();
    let mut c = Circuit::new(sum.width());
    for t in ordered_terms(sum) {
        c.append(&exponentiate_string(t, angle)?)?;
    }
    Ok(c)
}

pub fn cnot_count(c: &Circuit) -> usize {
    c.gates().iter().filter(|g| matches!(g, Gate::Cnot(..))).count()
}

pub fn swap_count(c: &Circuit) -> usize {
    c.gates().iter().filter(|g| matches!(g, Gate::Swap(..))).count()
}

/// CNOTs plus SWAPs, each SWAP counted once.
pub fn two_qubit_count(c: &Circuit) -> usize {
    c.gates().iter().filter(|g| g.is_two_qubit()).count()
}
