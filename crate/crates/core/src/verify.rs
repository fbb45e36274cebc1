//! Dense reference oracles: Pauli sums as matrices, circuits as unitaries,
//! code-space reconstruction and routed-circuit equivalence.
//!
//! Complex arithmetic is done with the small [`Cx`] type defined here, so the
//! checks share nothing with the arithmetic used to build what they check.
//! Basis index bit `i` is qubit `i`.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::codes::EncodingScheme;
use crate::operators::{DLevelOperator, Hamiltonian, TwoParticleOperator};
use crate::pauli::{Pauli, PauliSum};
use crate::router::RouteResult;
use crate::topology::Placement;

pub const MAX_MATRIX_QUBITS: usize = 12;
pub const MAX_UNITARY_QUBITS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{width} qubits exceeds the dense limit of {limit}")]
    TooWide { width: usize, limit: usize },
    #[error("register of {0} qubits does not fit a 128-bit pattern")]
    PatternOverflow(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl Cx {
    pub const ZERO: Cx = Cx { re: 0.0, im: 0.0 };
    pub const ONE: Cx = Cx { re: 1.0, im: 0.0 };
    pub const I: Cx = Cx { re: 0.0, im: 1.0 };

    pub const fn new(re: f64, im: f64) -> Cx {
        Cx { re, im }
    }

    pub fn conj(self) -> Cx {
        Cx::new(self.re, -self.im)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn scale(self, s: f64) -> Cx {
        Cx::new(self.re * s, self.im * s)
    }

    /// `e^{i theta}`
    pub fn expi(theta: f64) -> Cx {
        Cx::new(theta.cos(), theta.sin())
    }
}

impl Add for Cx {
    type Output = Cx;
    fn add(self, o: Cx) -> Cx {
        Cx::new(self.re + o.re, self.im + o.im)
    }
}

impl AddAssign for Cx {
    fn add_assign(&mut self, o: Cx) {
        self.re += o.re;
        self.im += o.im;
    }
}

impl Sub for Cx {
    type Output = Cx;
    fn sub(self, o: Cx) -> Cx {
        Cx::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Cx {
    type Output = Cx;
    fn mul(self, o: Cx) -> Cx {
        Cx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for Cx {
    type Output = Cx;
    fn neg(self) -> Cx {
        Cx::new(-self.re, -self.im)
    }
}

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Cx>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Cx::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Cx::ONE;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Cx {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: Cx) {
        self.data[row * self.dim + col] = v;
    }

    fn at(&mut self, row: usize, col: usize) -> &mut Cx {
        &mut self.data[row * self.dim + col]
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == Cx::ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn scaled(&self, s: Cx) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| a * s).collect(),
        }
    }

    pub fn adjoint(&self) -> DenseMatrix {
        let n = self.dim;
        let mut out = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim, "matrix dimensions differ");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    fn norm_1(&self) -> f64 {
        (0..self.dim)
            .map(|j| (0..self.dim).map(|i| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Matrix exponential by scaling and squaring around a Taylor series.
    pub fn expm(&self) -> DenseMatrix {
        let norm = self.norm_1();
        let squarings = if norm > 0.5 {
            (norm / 0.5).log2().ceil() as u32
        } else {
            0
        };
        let a = self.scaled(Cx::new(0.5f64.powi(squarings as i32), 0.0));
        let mut result = DenseMatrix::identity(self.dim);
        let mut term = DenseMatrix::identity(self.dim);
        for k in 1..=30 {
            term = term.mul(&a).scaled(Cx::new(1.0 / k as f64, 0.0));
            result = result.add(&term);
            if term.data.iter().all(|z| z.abs() < 1e-18) {
                break;
            }
        }
        for _ in 0..squarings {
            result = result.mul(&result);
        }
        result
    }

    pub fn pow(&self, k: u32) -> DenseMatrix {
        let mut out = DenseMatrix::identity(self.dim);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim)
                .map(|j| {
                    let z = self.get(i, j);
                    format!("{:+.4}{:+.4}i", z.re, z.im)
                })
                .collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Flip mask and phase of `P |x>` for a Pauli string: `P|x> = phase |x ^ mask>`.
fn pauli_action(axes: &[Pauli], x: u128) -> (u128, Cx) {
    let mut mask = 0u128;
    let mut phase = Cx::ONE;
    for (q, &a) in axes.iter().enumerate() {
        let bit = (x >> q) & 1 == 1;
        match a {
            Pauli::I => {}
            Pauli::X => mask |= 1 << q,
            Pauli::Y => {
                mask |= 1 << q;
                phase = phase * if bit { -Cx::I } else { Cx::I };
            }
            Pauli::Z => {
                if bit {
                    phase = -phase;
                }
            }
        }
    }
    (mask, phase)
}

/// `P |x>` for a basis pattern `x`.
pub fn apply_pauli(axes: &[Pauli], x: u128) -> (u128, Cx) {
    let (mask, phase) = pauli_action(axes, x);
    (x ^ mask, phase)
}

pub fn pauli_sum_to_matrix(sum: &PauliSum) -> Result<DenseMatrix, VerifyError> {
    let width = sum.width();
    if width > MAX_MATRIX_QUBITS {
        return Err(VerifyError::TooWide {
            width,
            limit: MAX_MATRIX_QUBITS,
        });
    }
    let dim = 1usize << width;
    let mut m = DenseMatrix::zeros(dim);
    for t in sum.terms() {
        let w = Cx::new(t.weight.re, t.weight.im);
        for col in 0..dim {
            let (row, phase) = apply_pauli(&t.axes, col as u128);
            *m.at(row as usize, col) += w * phase;
        }
    }
    Ok(m)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckReport {
    pub passed: bool,
    pub max_deviation: f64,
}

/// Compares `<row_word| M |col_word>` against `expected(row, col)` for every
/// pair of labelled codewords, without building `M`.
fn subspace_check(
    sum: &PauliSum,
    words: &[u128],
    expected: impl Fn(usize, usize) -> Cx,
    tol: f64,
) -> CheckReport {
    let index: HashMap<u128, usize> = words.iter().enumerate().map(|(i, &w)| (w, i)).collect();
    let n = words.len();
    let mut got = vec![Cx::ZERO; n * n];
    for t in sum.terms() {
        let w = Cx::new(t.weight.re, t.weight.im);
        for (col, &x) in words.iter().enumerate() {
            let (y, phase) = apply_pauli(&t.axes, x);
            if let Some(&row) = index.get(&y) {
                got[row * n + col] += w * phase;
            }
        }
    }
    let mut max_deviation: f64 = 0.0;
    for row in 0..n {
        for col in 0..n {
            max_deviation = max_deviation.max((got[row * n + col] - expected(row, col)).abs());
        }
    }
    CheckReport {
        passed: max_deviation < tol,
        max_deviation,
    }
}

fn codeword_patterns(scheme: &EncodingScheme) -> Result<Vec<u128>, VerifyError> {
    if scheme.qubit_count() > 128 {
        return Err(VerifyError::PatternOverflow(scheme.qubit_count()));
    }
    Ok(scheme.codewords().iter().map(|b| b.to_u128()).collect())
}

fn cx(z: num_complex::Complex64) -> Cx {
    Cx::new(z.re, z.im)
}

/// `<encode(l)| M |encode(l')> == op[l][l']` for all levels.
pub fn code_subspace_check(
    op: &DLevelOperator,
    scheme: &EncodingScheme,
    sum: &PauliSum,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    if op.d() != scheme.d() {
        return Err(VerifyError::Dimension(op.d(), scheme.d()));
    }
    if sum.width() != scheme.qubit_count() {
        return Err(VerifyError::Dimension(sum.width(), scheme.qubit_count()));
    }
    let words = codeword_patterns(scheme)?;
    Ok(subspace_check(sum, &words, |r, c| cx(op.entry(r, c)), tol))
}

/// Two-particle version; particle A sits on the low qubits.
pub fn code_subspace_check_two(
    op: &TwoParticleOperator,
    scheme: &EncodingScheme,
    sum: &PauliSum,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let nq = scheme.qubit_count();
    if 2 * nq > 128 {
        return Err(VerifyError::PatternOverflow(2 * nq));
    }
    if op.d() != scheme.d() {
        return Err(VerifyError::Dimension(op.d(), scheme.d()));
    }
    if sum.width() != 2 * nq {
        return Err(VerifyError::Dimension(sum.width(), 2 * nq));
    }
    let single = codeword_patterns(scheme)?;
    let d = single.len();
    let words: Vec<u128> = (0..d * d)
        .map(|i| single[i / d] | (single[i % d] << nq))
        .collect();
    Ok(subspace_check(
        sum,
        &words,
        |r, c| cx(op.entry((r / d, r % d), (c / d, c % d))),
        tol,
    ))
}

pub fn code_subspace_check_hamiltonian(
    h: &Hamiltonian,
    scheme: &EncodingScheme,
    sum: &PauliSum,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    match h {
        Hamiltonian::One(op) => code_subspace_check(op, scheme, sum, tol),
        Hamiltonian::Two(op) => code_subspace_check_two(op, scheme, sum, tol),
    }
}

fn single_qubit_matrix(g: &Gate) -> [[Cx; 2]; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match *g {
        Gate::H(_) => [
            [Cx::new(r, 0.0), Cx::new(r, 0.0)],
            [Cx::new(r, 0.0), Cx::new(-r, 0.0)],
        ],
        Gate::Rx(_, t) => {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            [[Cx::new(c, 0.0), Cx::new(0.0, -s)], [Cx::new(0.0, -s), Cx::new(c, 0.0)]]
        }
        Gate::Ry(_, t) => {
            let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
            [[Cx::new(c, 0.0), Cx::new(-s, 0.0)], [Cx::new(s, 0.0), Cx::new(c, 0.0)]]
        }
        Gate::Rz(_, t) => [
            [Cx::expi(-t / 2.0), Cx::ZERO],
            [Cx::ZERO, Cx::expi(t / 2.0)],
        ],
        Gate::Cnot(..) | Gate::Swap(..) => unreachable!("two-qubit gate"),
    }
}

/// Applies `g` to every column of `m` (left multiplication).
fn apply_gate(m: &mut DenseMatrix, g: &Gate) {
    let dim = m.dim;
    match *g {
        Gate::Cnot(c, t) => {
            for row in 0..dim {
                if (row >> c) & 1 == 1 && (row >> t) & 1 == 0 {
                    let other = row | (1 << t);
                    for col in 0..dim {
                        m.data.swap(row * dim + col, other * dim + col);
                    }
                }
            }
        }
        Gate::Swap(a, b) => {
            for row in 0..dim {
                if (row >> a) & 1 == 1 && (row >> b) & 1 == 0 {
                    let other = (row & !(1 << a)) | (1 << b);
                    for col in 0..dim {
                        m.data.swap(row * dim + col, other * dim + col);
                    }
                }
            }
        }
        _ => {
            let q = g.qubits()[0];
            let u = single_qubit_matrix(g);
            for r0 in (0..dim).filter(|r| (r >> q) & 1 == 0) {
                let r1 = r0 | (1 << q);
                for col in 0..dim {
                    let a = m.data[r0 * dim + col];
                    let b = m.data[r1 * dim + col];
                    m.data[r0 * dim + col] = u[0][0] * a + u[0][1] * b;
                    m.data[r1 * dim + col] = u[1][0] * a + u[1][1] * b;
                }
            }
        }
    }
}

/// Product of the gate matrices, first gate rightmost.
pub fn circuit_to_unitary(c: &Circuit) -> Result<DenseMatrix, VerifyError> {
    circuit_to_unitary_on(c, c.width())
}

/// [`circuit_to_unitary`] on a register at least as wide as the circuit.
pub fn circuit_to_unitary_on(c: &Circuit, width: usize) -> Result<DenseMatrix, VerifyError> {
    if width > MAX_UNITARY_QUBITS {
        return Err(VerifyError::TooWide {
            width,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    if width < c.width() {
        return Err(VerifyError::Dimension(width, c.width()));
    }
    let mut m = DenseMatrix::identity(1 << width);
    for g in c.gates() {
        apply_gate(&mut m, g);
    }
    Ok(m)
}

/// The basis permutation that moves program qubit `j` onto node `p(j)`.
pub fn placement_matrix(p: &Placement) -> Result<DenseMatrix, VerifyError> {
    let n = p.len();
    if n > MAX_UNITARY_QUBITS {
        return Err(VerifyError::TooWide {
            width: n,
            limit: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut m = DenseMatrix::zeros(dim);
    for x in 0..dim {
        let y = (0..n)
            .filter(|&j| (x >> j) & 1 == 1)
            .fold(0usize, |acc, j| acc | (1 << p.node_of(j)));
        m.set(y, x, Cx::ONE);
    }
    Ok(m)
}

/// Distance between `a` and `b` after aligning global phase on the
/// largest-magnitude entry of `b`.
pub fn phase_aligned_distance(a: &DenseMatrix, b: &DenseMatrix) -> f64 {
    let (k, _) = b
        .data
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bk, bv), (i, z)| if z.abs() > bv { (i, z.abs()) } else { (bk, bv) });
    let (za, zb) = (a.data[k], b.data[k]);
    if za.abs() < 1e-300 || zb.abs() < 1e-300 {
        return f64::INFINITY;
    }
    let ratio = za * zb.conj();
    let phase = ratio.scale(1.0 / ratio.abs());
    a.max_abs_diff(&b.scaled(phase))
}

/// Checks `U_routed = P_final (U (x) I) P_0^dagger` up to global phase, where
/// `P` are the placement permutations and `U` acts on the program qubits.
pub fn routed_equivalence(
    original: &Circuit,
    result: &RouteResult,
    p0: &Placement,
    tol: f64,
) -> Result<CheckReport, VerifyError> {
    let nodes = result.circuit.width();
    if p0.len() != nodes || result.final_placement.len() != nodes {
        return Err(VerifyError::Dimension(p0.len(), nodes));
    }
    let routed = circuit_to_unitary(&result.circuit)?;
    let logical = circuit_to_unitary_on(original, nodes)?;
    let expected = placement_matrix(&result.final_placement)?
        .mul(&logical)
        .mul(&placement_matrix(p0)?.adjoint());
    let max_deviation = phase_aligned_distance(&routed, &expected);
    Ok(CheckReport {
        passed: max_deviation <= tol,
        max_deviation,
    })
}

/// `exp(-i M tau)` for the dense form of `sum`.
pub fn evolution(sum: &PauliSum, tau: f64) -> Result<DenseMatrix, VerifyError> {
    Ok(pauli_sum_to_matrix(sum)?.scaled(Cx::new(0.0, -tau)).expm())
}
