//! Pauli-string decomposition of encoded `d`-level operators.
//!
//! Every matrix element `|l><l'|` is mapped onto the qubits in
//! `C(l) ∪ C(l')` as a product of the single-qubit projectors and ladder
//! operators
//!
//! ```text
//! |0><1| = (X + iY)/2    |1><0| = (X - iY)/2
//! |0><0| = (I + Z)/2     |1><1| = (I - Z)/2
//! ```
//!
//! with identity everywhere else. Axes strings are written qubit 0 first.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::codes::{CodeError, EncodingScheme};
use crate::operators::{DLevelOperator, Hamiltonian, TwoParticleOperator};

/// Weights at or below this modulus are dropped by [`PauliSum::simplify`].
pub const WEIGHT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PauliError {
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("operator has d = {op} but encoding has d = {scheme}")]
    DimensionMismatch { op: usize, scheme: usize },
    #[error("register width mismatch: {0} vs {1}")]
    WidthMismatch(usize, usize),
    #[error("cannot parse Pauli term {0:?}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    pub weight: Complex64,
    pub axes: Vec<Pauli>,
}

impl PauliString {
    pub fn new(weight: Complex64, axes: Vec<Pauli>) -> Self {
        PauliString { weight, axes }
    }

    /// Number of non-identity factors.
    pub fn len_nontrivial(&self) -> usize {
        self.axes.iter().filter(|&&a| a != Pauli::I).count()
    }

    /// Qubits carrying a non-identity factor, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.axes
            .iter()
            .enumerate()
            .filter_map(|(i, &a)| (a != Pauli::I).then_some(i))
            .collect()
    }

    pub fn axes_string(&self) -> String {
        self.axes.iter().map(|a| a.as_char()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    width: usize,
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn empty(width: usize) -> Self {
        PauliSum {
            width,
            terms: Vec::new(),
        }
    }

    pub fn from_terms(width: usize, terms: Vec<PauliString>) -> Result<Self, PauliError> {
        if let Some(t) = terms.iter().find(|t| t.axes.len() != width) {
            return Err(PauliError::WidthMismatch(width, t.axes.len()));
        }
        Ok(PauliSum { width, terms })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges terms with equal axes, drops weights with modulus `<= tol`, and
    /// orders the result lexicographically by axes (`I < X < Y < Z`).
    pub fn simplify(&self, tol: f64) -> PauliSum {
        let mut acc: BTreeMap<Vec<Pauli>, Complex64> = BTreeMap::new();
        for t in &self.terms {
            *acc.entry(t.axes.clone()).or_default() += t.weight;
        }
        PauliSum::from_map(self.width, acc, tol)
    }

    fn from_map(width: usize, acc: BTreeMap<Vec<Pauli>, Complex64>, tol: f64) -> PauliSum {
        PauliSum {
            width,
            terms: acc
                .into_iter()
                .filter(|(_, w)| w.norm() > tol)
                .map(|(axes, weight)| PauliString { weight, axes })
                .collect(),
        }
    }

    pub fn scaled(&self, factor: Complex64) -> PauliSum {
        PauliSum {
            width: self.width,
            terms: self
                .terms
                .iter()
                .map(|t| PauliString::new(t.weight * factor, t.axes.clone()))
                .collect(),
        }
    }

    /// Concatenates the terms of two sums over the same register.
    pub fn plus(&self, other: &PauliSum) -> Result<PauliSum, PauliError> {
        if self.width != other.width {
            return Err(PauliError::WidthMismatch(self.width, other.width));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(PauliSum {
            width: self.width,
            terms,
        })
    }

    /// `self (x) other`, with `self` on the low qubits.
    pub fn tensor(&self, other: &PauliSum) -> PauliSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                let mut axes = a.axes.clone();
                axes.extend_from_slice(&b.axes);
                terms.push(PauliString::new(a.weight * b.weight, axes));
            }
        }
        PauliSum {
            width: self.width + other.width,
            terms,
        }
    }

    pub fn max_length(&self) -> usize {
        self.terms
            .iter()
            .map(PauliString::len_nontrivial)
            .max()
            .unwrap_or(0)
    }

    /// Largest imaginary part among the weights.
    pub fn max_imag(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.weight.im.abs())
            .fold(0.0, f64::max)
    }

    /// One `<real_weight> <axes>` line per term, in term order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for t in &self.terms {
            out.push_str(&format!("{} {}\n", t.weight.re, t.axes_string()));
        }
        out
    }

    /// Parses [`to_text`](Self::to_text) output. All weights are real.
    pub fn from_text(width: usize, text: &str) -> Result<PauliSum, PauliError> {
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (w, axes) = line
                .split_once(char::is_whitespace)
                .ok_or_else(|| PauliError::Parse(line.to_string()))?;
            let weight: f64 = w.parse().map_err(|_| PauliError::Parse(line.to_string()))?;
            let axes = axes
                .trim()
                .chars()
                .map(Pauli::from_char)
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| PauliError::Parse(line.to_string()))?;
            terms.push(PauliString::new(Complex64::new(weight, 0.0), axes));
        }
        PauliSum::from_terms(width, terms)
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sum = PauliSum::from_text(
            s.split_whitespace().nth(1).map(str::len).unwrap_or(0),
            s,
        )?;
        sum.terms
            .into_iter()
            .next()
            .ok_or_else(|| PauliError::Parse(s.to_string()))
    }
}

/// Expansion of `|x><x'|` on one qubit as `(coefficient, Pauli)` pairs.
fn projector_terms(x: bool, xp: bool) -> [(Complex64, Pauli); 2] {
    let h = Complex64::new(0.5, 0.0);
    let ih = Complex64::new(0.0, 0.5);
    match (x, xp) {
        (false, true) => [(h, Pauli::X), (ih, Pauli::Y)],
        (true, false) => [(h, Pauli::X), (-ih, Pauli::Y)],
        (false, false) => [(h, Pauli::I), (h, Pauli::Z)],
        (true, true) => [(h, Pauli::I), (-h, Pauli::Z)],
    }
}

/// Adds `weight * |l><l'|` to the accumulator.
fn accumulate_entry(
    scheme: &EncodingScheme,
    l: usize,
    lp: usize,
    weight: Complex64,
    acc: &mut BTreeMap<Vec<Pauli>, Complex64>,
) -> Result<(), PauliError> {
    let row = scheme.encode(l)?;
    let col = scheme.encode(lp)?;
    let mut qubits = scheme.bitmask_subset(l)?;
    qubits.extend(scheme.bitmask_subset(lp)?);

    let width = scheme.qubit_count();
    let mut partial: Vec<(Complex64, Vec<Pauli>)> = vec![(weight, vec![Pauli::I; width])];
    for &q in &qubits {
        let factors = projector_terms(row.bit(q), col.bit(q));
        partial = partial
            .into_iter()
            .flat_map(|(w, axes)| {
                factors.iter().map(move |&(c, p)| {
                    let mut axes = axes.clone();
                    axes[q] = p;
                    (w * c, axes)
                })
            })
            .collect();
    }
    for (w, axes) in partial {
        *acc.entry(axes).or_default() += w;
    }
    Ok(())
}

/// The Pauli expansion of a single matrix element `|l><l'|`.
pub fn map_entry(l: usize, lp: usize, scheme: &EncodingScheme) -> Result<PauliSum, PauliError> {
    let mut acc = BTreeMap::new();
    accumulate_entry(scheme, l, lp, Complex64::new(1.0, 0.0), &mut acc)?;
    Ok(PauliSum::from_map(scheme.qubit_count(), acc, WEIGHT_TOL))
}

pub fn encode_operator(
    op: &DLevelOperator,
    scheme: &EncodingScheme,
) -> Result<PauliSum, PauliError> {
    if op.d() != scheme.d() {
        return Err(PauliError::DimensionMismatch {
            op: op.d(),
            scheme: scheme.d(),
        });
    }
    let mut acc = BTreeMap::new();
    for ((l, lp), v) in op.entries() {
        accumulate_entry(scheme, l, lp, v, &mut acc)?;
    }
    Ok(PauliSum::from_map(scheme.qubit_count(), acc, WEIGHT_TOL))
}

/// Encodes `A (x) B` with particle A on qubits `0..N_q` and particle B on
/// `N_q..2 N_q`.
pub fn encode_two_particle(
    a: &DLevelOperator,
    b: &DLevelOperator,
    scheme: &EncodingScheme,
) -> Result<PauliSum, PauliError> {
    let ea = encode_operator(a, scheme)?;
    let eb = encode_operator(b, scheme)?;
    Ok(ea.tensor(&eb).simplify(WEIGHT_TOL))
}

pub fn encode_two_particle_sum(
    op: &TwoParticleOperator,
    scheme: &EncodingScheme,
) -> Result<PauliSum, PauliError> {
    let mut total = PauliSum::empty(2 * scheme.qubit_count());
    for (a, b) in &op.terms {
        let ea = encode_operator(a, scheme)?;
        let eb = encode_operator(b, scheme)?;
        total = total.plus(&ea.tensor(&eb))?;
    }
    Ok(total.simplify(WEIGHT_TOL))
}

pub fn encode_hamiltonian(h: &Hamiltonian, scheme: &EncodingScheme) -> Result<PauliSum, PauliError> {
    match h {
        Hamiltonian::One(op) => encode_operator(op, scheme),
        Hamiltonian::Two(op) => encode_two_particle_sum(op, scheme),
    }
}

/// Number of strings of each length `p`.
pub fn length_histogram(sum: &PauliSum) -> BTreeMap<usize, usize> {
    let mut hist = BTreeMap::new();
    for t in sum.terms() {
        *hist.entry(t.len_nontrivial()).or_insert(0) += 1;
    }
    hist
}

/// `|l><l'| + |l'><l|`, simplified.
pub fn paired_entry(l: usize, lp: usize, scheme: &EncodingScheme) -> Result<PauliSum, PauliError> {
    let mut acc = BTreeMap::new();
    let one = Complex64::new(1.0, 0.0);
    accumulate_entry(scheme, l, lp, one, &mut acc)?;
    accumulate_entry(scheme, lp, l, one, &mut acc)?;
    Ok(PauliSum::from_map(scheme.qubit_count(), acc, WEIGHT_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{number_op, position_op};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn axes(s: &str) -> Vec<Pauli> {
        s.chars().map(|ch| Pauli::from_char(ch).unwrap()).collect()
    }

    fn weight_of(sum: &PauliSum, a: &str) -> Complex64 {
        sum.terms()
            .iter()
            .find(|t| t.axes == axes(a))
            .map(|t| t.weight)
            .unwrap_or_default()
    }

    #[test]
    fn unary_off_diagonal_entry() {
        // |0><1| on unary d = 2 is (X0 - iY0)(X1 + iY1)/4
        let s = EncodingScheme::unary(2).unwrap();
        let sum = map_entry(0, 1, &s).unwrap();
        assert_eq!(sum.len(), 4);
        assert!((weight_of(&sum, "XX") - c(0.25, 0.0)).norm() < 1e-15);
        assert!((weight_of(&sum, "XY") - c(0.0, 0.25)).norm() < 1e-15);
        assert!((weight_of(&sum, "YX") - c(0.0, -0.25)).norm() < 1e-15);
        assert!((weight_of(&sum, "YY") - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn sb_projector() {
        let s = EncodingScheme::std_binary(2).unwrap();
        let sum = map_entry(0, 0, &s).unwrap();
        assert_eq!(sum.len(), 2);
        assert!((weight_of(&sum, "I") - c(0.5, 0.0)).norm() < 1e-15);
        assert!((weight_of(&sum, "Z") - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn unary_diagonal_support() {
        let s = EncodingScheme::unary(7).unwrap();
        for l in 0..7 {
            let sum = map_entry(l, l, &s).unwrap();
            for t in sum.terms() {
                assert!(t.support().iter().all(|&q| q == l));
            }
        }
    }

    #[test]
    fn position_two_levels_is_x() {
        let s = EncodingScheme::std_binary(2).unwrap();
        let sum = encode_operator(&position_op(2).unwrap(), &s).unwrap();
        assert_eq!(sum.len(), 1);
        assert_eq!(sum.terms()[0].axes, axes("X"));
        assert!((sum.terms()[0].weight - c(std::f64::consts::FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn number_sb_is_single_qubit_z() {
        let s = EncodingScheme::std_binary(4).unwrap();
        let sum = encode_operator(&number_op(4).unwrap(), &s).unwrap();
        // diag(0,1,2,3) = 1.5 I - 0.5 Z0 - Z1
        assert_eq!(sum.len(), 3);
        assert!(sum.max_length() <= 1);
        assert!((weight_of(&sum, "II") - c(1.5, 0.0)).norm() < 1e-12);
        assert!((weight_of(&sum, "ZI") - c(-0.5, 0.0)).norm() < 1e-12);
        assert!((weight_of(&sum, "IZ") - c(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn dimension_mismatch() {
        let s = EncodingScheme::std_binary(4).unwrap();
        assert!(matches!(
            encode_operator(&number_op(5).unwrap(), &s),
            Err(PauliError::DimensionMismatch { .. })
        ));
        assert!(map_entry(0, 4, &s).is_err());
    }

    #[test]
    fn simplify_merges_and_cancels() {
        let half = c(0.5, 0.0);
        let sum = PauliSum::from_terms(
            1,
            vec![
                PauliString::new(half, axes("X")),
                PauliString::new(half, axes("X")),
            ],
        )
        .unwrap()
        .simplify(WEIGHT_TOL);
        assert_eq!(sum.len(), 1);
        assert!((sum.terms()[0].weight - c(1.0, 0.0)).norm() < 1e-15);

        let cancelled = PauliSum::from_terms(
            1,
            vec![
                PauliString::new(half, axes("X")),
                PauliString::new(-half, axes("X")),
            ],
        )
        .unwrap()
        .simplify(WEIGHT_TOL);
        assert!(cancelled.is_empty());
    }

    #[test]
    fn simplify_orders_lexicographically() {
        let one = c(1.0, 0.0);
        let sum = PauliSum::from_terms(
            2,
            ["ZI", "XY", "IZ", "XX"]
                .iter()
                .map(|a| PauliString::new(one, axes(a)))
                .collect(),
        )
        .unwrap()
        .simplify(WEIGHT_TOL);
        let order: Vec<String> = sum.terms().iter().map(|t| t.axes_string()).collect();
        assert_eq!(order, ["IZ", "XX", "XY", "ZI"]);
    }

    #[test]
    fn sb_pair_histogram() {
        // |0><3| + h.c. on two SB qubits: h = 2, so XX and YY survive
        let s = EncodingScheme::std_binary(4).unwrap();
        let sum = paired_entry(0, 3, &s).unwrap();
        assert_eq!(length_histogram(&sum), BTreeMap::from([(2, 2)]));
        assert!(length_histogram(&PauliSum::empty(3)).is_empty());
    }

    #[test]
    fn two_particle_number_unary() {
        let s = EncodingScheme::unary(2).unwrap();
        let n = number_op(2).unwrap();
        let sum = encode_two_particle(&n, &n, &s).unwrap();
        // n = (I - Z1)/2 on the unary pair, so n (x) n = (I - Z1)(I - Z3)/4
        assert_eq!(sum.width(), 4);
        assert_eq!(sum.len(), 4);
        assert!((weight_of(&sum, "IZIZ") - c(0.25, 0.0)).norm() < 1e-15);
        assert!(sum.max_length() <= 2);
    }

    #[test]
    fn text_round_trip() {
        let s = EncodingScheme::gray(8).unwrap();
        let sum = encode_operator(&position_op(8).unwrap(), &s).unwrap();
        let text = sum.to_text();
        let back = PauliSum::from_text(sum.width(), &text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back, sum);
        assert!(PauliSum::from_text(2, "0.5 XQ").is_err());
        assert!(PauliSum::from_text(2, "0.5 XXX").is_err());
    }
}
