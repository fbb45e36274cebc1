//! Truncated `d`-level operators in the number (or `S_z`) basis.
//!
//! Matrices are stored sparsely; amplitudes with modulus at or below
//! [`ZERO_TOL`] are never stored. Powers are products of already-truncated
//! matrices, so `q^2` carries the `(1, 3, 5, ...)/2` diagonal with its last
//! entry `(d - 1)/2` rather than the untruncated `(2d - 1)/2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

pub const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OperatorError {
    #[error("invalid number of levels d = {0} (need d >= 2)")]
    InvalidLevels(usize),
    #[error("invalid spin: 2s = {0} (need 2s >= 1)")]
    InvalidSpin(u32),
    #[error("power must be >= 1")]
    InvalidPower,
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("unknown operator name {0:?}")]
    UnknownName(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DLevelOperator {
    d: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
    label: String,
}

fn check_d(d: usize) -> Result<(), OperatorError> {
    if d < 2 {
        Err(OperatorError::InvalidLevels(d))
    } else {
        Ok(())
    }
}

impl DLevelOperator {
    /// Builds an operator from `(row, col, value)` triples, summing repeats
    /// and dropping negligible amplitudes.
    pub fn from_entries(
        d: usize,
        label: impl Into<String>,
        entries: impl IntoIterator<Item = (usize, usize, Complex64)>,
    ) -> Result<Self, OperatorError> {
        check_d(d)?;
        let mut map: BTreeMap<(usize, usize), Complex64> = BTreeMap::new();
        for (r, c, v) in entries {
            if r >= d || c >= d {
                return Err(OperatorError::DimensionMismatch(r.max(c), d));
            }
            *map.entry((r, c)).or_default() += v;
        }
        map.retain(|_, v| v.norm() > ZERO_TOL);
        Ok(DLevelOperator {
            d,
            entries: map,
            label: label.into(),
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries
            .get(&(row, col))
            .copied()
            .unwrap_or_default()
    }

    /// Non-zero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), Complex64)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.entries
            .iter()
            .all(|(&(r, c), v)| (v - self.entry(c, r).conj()).norm() <= tol)
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|&(r, c)| r == c)
    }

    pub fn scaled(&self, factor: Complex64, label: impl Into<String>) -> Self {
        DLevelOperator::from_entries(
            self.d,
            label,
            self.entries.iter().map(|(&(r, c), &v)| (r, c, v * factor)),
        )
        .expect("same dimension")
    }

    pub fn add(&self, other: &Self, label: impl Into<String>) -> Result<Self, OperatorError> {
        if self.d != other.d {
            return Err(OperatorError::DimensionMismatch(self.d, other.d));
        }
        DLevelOperator::from_entries(
            self.d,
            label,
            self.entries().chain(other.entries()).map(|((r, c), v)| (r, c, v)),
        )
    }

    /// Product of the two truncated matrices.
    pub fn mul(&self, other: &Self, label: impl Into<String>) -> Result<Self, OperatorError> {
        if self.d != other.d {
            return Err(OperatorError::DimensionMismatch(self.d, other.d));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, Complex64)>> = BTreeMap::new();
        for (&(r, c), &v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Vec::new();
        for (&(r, k), &a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                out.extend(row.iter().map(|&(c, b)| (r, c, a * b)));
            }
        }
        DLevelOperator::from_entries(self.d, label, out)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::default(); self.d]; self.d];
        for (&(r, c), &v) in &self.entries {
            m[r][c] = v;
        }
        m
    }
}

impl fmt::Display for DLevelOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} (d = {})", self.label, self.d)?;
        for (&(r, c), v) in &self.entries {
            writeln!(f, "  ({r}, {c}) = {:.6} {:+.6}i", v.re, v.im)?;
        }
        Ok(())
    }
}

/// Occupied bands `w = |l - l'|` of an operator.
pub fn band_profile(op: &DLevelOperator) -> BTreeSet<usize> {
    op.entries
        .iter()
        .filter(|(_, v)| v.norm() > ZERO_TOL)
        .map(|(&(r, c), _)| r.abs_diff(c))
        .collect()
}

/// `n = a^dagger a = diag(0, 1, ..., d - 1)`.
pub fn number_op(d: usize) -> Result<DLevelOperator, OperatorError> {
    check_d(d)?;
    DLevelOperator::from_entries(
        d,
        "n",
        (0..d).map(|l| (l, l, Complex64::new(l as f64, 0.0))),
    )
}

/// Truncated creation operator: `<l + 1| a^dagger |l> = sqrt(l + 1)`.
pub fn creation_op(d: usize) -> Result<DLevelOperator, OperatorError> {
    check_d(d)?;
    DLevelOperator::from_entries(
        d,
        "a+",
        (0..d - 1).map(|l| (l + 1, l, Complex64::new(((l + 1) as f64).sqrt(), 0.0))),
    )
}

/// Truncated annihilation operator: `<l| a |l + 1> = sqrt(l + 1)`.
pub fn annihilation_op(d: usize) -> Result<DLevelOperator, OperatorError> {
    check_d(d)?;
    DLevelOperator::from_entries(
        d,
        "a",
        (0..d - 1).map(|l| (l, l + 1, Complex64::new(((l + 1) as f64).sqrt(), 0.0))),
    )
}

/// The `(a^dagger, a)` pair used to build hopping terms.
pub fn hop_op(d: usize) -> Result<(DLevelOperator, DLevelOperator), OperatorError> {
    Ok((creation_op(d)?, annihilation_op(d)?))
}

/// `q = (a^dagger + a) / sqrt(2)`.
pub fn position_op(d: usize) -> Result<DLevelOperator, OperatorError> {
    let (up, down) = hop_op(d)?;
    Ok(up
        .add(&down, "q")?
        .scaled(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0), "q"))
}

/// `p = i (a^dagger - a) / sqrt(2)`.
pub fn momentum_op(d: usize) -> Result<DLevelOperator, OperatorError> {
    let (up, down) = hop_op(d)?;
    let diff = up.add(&down.scaled(Complex64::new(-1.0, 0.0), "-a"), "p")?;
    Ok(diff.scaled(Complex64::new(0.0, std::f64::consts::FRAC_1_SQRT_2), "p"))
}

/// `op^k` as a product of truncated matrices.
pub fn op_power(op: &DLevelOperator, k: u32) -> Result<DLevelOperator, OperatorError> {
    if k == 0 {
        return Err(OperatorError::InvalidPower);
    }
    let label = if k == 1 {
        op.label.clone()
    } else {
        format!("{}^{k}", op.label)
    };
    let mut acc = op.clone();
    for _ in 1..k {
        acc = acc.mul(op, label.clone())?;
    }
    acc.label = label;
    Ok(acc)
}

/// A spin quantum number stored as `2s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    pub fn from_twice(twice: u32) -> Result<Self, OperatorError> {
        if twice == 0 {
            return Err(OperatorError::InvalidSpin(twice));
        }
        Ok(Spin { twice })
    }

    /// The spin whose multiplet has `d = 2s + 1` levels.
    pub fn from_levels(d: usize) -> Result<Self, OperatorError> {
        check_d(d)?;
        Spin::from_twice((d - 1) as u32)
    }

    pub fn value(&self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn levels(&self) -> usize {
        self.twice as usize + 1
    }
}

#[derive(Debug, Clone)]
pub struct SpinOps {
    pub sx: DLevelOperator,
    pub sy: DLevelOperator,
    pub sz: DLevelOperator,
}

/// Spin-`s` matrices with level `l` holding `m = l - s`.
pub fn spin_ops(spin: Spin) -> SpinOps {
    let d = spin.levels();
    let s = spin.value();
    let m = |l: usize| l as f64 - s;
    // <m + 1| S+ |m> = sqrt(s(s + 1) - m(m + 1))
    let raise: Vec<(usize, usize, f64)> = (0..d - 1)
        .map(|l| (l + 1, l, (s * (s + 1.0) - m(l) * (m(l) + 1.0)).sqrt()))
        .collect();
    let sx = DLevelOperator::from_entries(
        d,
        "sx",
        raise.iter().flat_map(|&(r, c, v)| {
            [
                (r, c, Complex64::new(v / 2.0, 0.0)),
                (c, r, Complex64::new(v / 2.0, 0.0)),
            ]
        }),
    );
    let sy = DLevelOperator::from_entries(
        d,
        "sy",
        raise.iter().flat_map(|&(r, c, v)| {
            // (S+ - S-) / 2i
            [
                (r, c, Complex64::new(0.0, -v / 2.0)),
                (c, r, Complex64::new(0.0, v / 2.0)),
            ]
        }),
    );
    let sz = DLevelOperator::from_entries(
        d,
        "sz",
        (0..d).map(|l| (l, l, Complex64::new(m(l), 0.0))),
    );
    SpinOps {
        sx: sx.expect("valid d"),
        sy: sy.expect("valid d"),
        sz: sz.expect("valid d"),
    }
}

/// A sum of products `A_k (x) B_k` acting on two particles with equal `d`.
/// Factors are kept separate; nothing is expanded to a `d^2 x d^2` matrix.
#[derive(Debug, Clone)]
pub struct TwoParticleOperator {
    pub terms: Vec<(DLevelOperator, DLevelOperator)>,
    pub label: String,
}

impl TwoParticleOperator {
    pub fn d(&self) -> usize {
        self.terms.first().map(|(a, _)| a.d()).unwrap_or(0)
    }

    /// `<(a, b)| H |(a', b')>`.
    pub fn entry(&self, row: (usize, usize), col: (usize, usize)) -> Complex64 {
        self.terms
            .iter()
            .map(|(a, b)| a.entry(row.0, col.0) * b.entry(row.1, col.1))
            .sum()
    }
}

pub fn two_particle(
    a: &DLevelOperator,
    b: &DLevelOperator,
) -> Result<TwoParticleOperator, OperatorError> {
    if a.d() != b.d() {
        return Err(OperatorError::DimensionMismatch(a.d(), b.d()));
    }
    Ok(TwoParticleOperator {
        label: format!("{}{}", a.label(), b.label()),
        terms: vec![(a.clone(), b.clone())],
    })
}

/// `a_i^dagger a_j + a_i a_j^dagger`.
pub fn hopping(d: usize) -> Result<TwoParticleOperator, OperatorError> {
    let (up, down) = hop_op(d)?;
    Ok(TwoParticleOperator {
        label: "hop".into(),
        terms: vec![(up.clone(), down.clone()), (down, up)],
    })
}

/// Names accepted by the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OperatorName {
    N,
    Q,
    P,
    N2,
    Q2,
    NN,
    QN,
    QQ,
    Hop,
    Sx,
    Sy,
    Sz,
    SxSx,
    SzSz,
    SxSz,
}

impl OperatorName {
    pub const ALL: [OperatorName; 15] = [
        OperatorName::N,
        OperatorName::Q,
        OperatorName::P,
        OperatorName::N2,
        OperatorName::Q2,
        OperatorName::NN,
        OperatorName::QN,
        OperatorName::QQ,
        OperatorName::Hop,
        OperatorName::Sx,
        OperatorName::Sy,
        OperatorName::Sz,
        OperatorName::SxSx,
        OperatorName::SzSz,
        OperatorName::SxSz,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            OperatorName::N => "n",
            OperatorName::Q => "q",
            OperatorName::P => "p",
            OperatorName::N2 => "n2",
            OperatorName::Q2 => "q2",
            OperatorName::NN => "nn",
            OperatorName::QN => "qn",
            OperatorName::QQ => "qq",
            OperatorName::Hop => "hop",
            OperatorName::Sx => "sx",
            OperatorName::Sy => "sy",
            OperatorName::Sz => "sz",
            OperatorName::SxSx => "sxsx",
            OperatorName::SzSz => "szsz",
            OperatorName::SxSz => "sxsz",
        }
    }

    pub fn is_two_particle(&self) -> bool {
        matches!(
            self,
            OperatorName::NN
                | OperatorName::QN
                | OperatorName::QQ
                | OperatorName::Hop
                | OperatorName::SxSx
                | OperatorName::SzSz
                | OperatorName::SxSz
        )
    }

    pub fn build(&self, d: usize) -> Result<Hamiltonian, OperatorError> {
        use OperatorName::*;
        let spin = || Spin::from_levels(d).map(spin_ops);
        Ok(match self {
            N => Hamiltonian::One(number_op(d)?),
            Q => Hamiltonian::One(position_op(d)?),
            P => Hamiltonian::One(momentum_op(d)?),
            N2 => Hamiltonian::One(op_power(&number_op(d)?, 2)?),
            Q2 => Hamiltonian::One(op_power(&position_op(d)?, 2)?),
            NN => Hamiltonian::Two(two_particle(&number_op(d)?, &number_op(d)?)?),
            QN => Hamiltonian::Two(two_particle(&position_op(d)?, &number_op(d)?)?),
            QQ => Hamiltonian::Two(two_particle(&position_op(d)?, &position_op(d)?)?),
            Hop => Hamiltonian::Two(hopping(d)?),
            Sx => Hamiltonian::One(spin()?.sx),
            Sy => Hamiltonian::One(spin()?.sy),
            Sz => Hamiltonian::One(spin()?.sz),
            SxSx => {
                let s = spin()?;
                Hamiltonian::Two(two_particle(&s.sx, &s.sx)?)
            }
            SzSz => {
                let s = spin()?;
                Hamiltonian::Two(two_particle(&s.sz, &s.sz)?)
            }
            SxSz => {
                let s = spin()?;
                Hamiltonian::Two(two_particle(&s.sx, &s.sz)?)
            }
        })
    }
}

impl fmt::Display for OperatorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OperatorName {
    type Err = OperatorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        OperatorName::ALL
            .into_iter()
            .find(|o| o.as_str() == t)
            .ok_or_else(|| OperatorError::UnknownName(s.to_string()))
    }
}

/// A one- or two-particle operator from the registry.
#[derive(Debug, Clone)]
pub enum Hamiltonian {
    One(DLevelOperator),
    Two(TwoParticleOperator),
}

impl Hamiltonian {
    pub fn d(&self) -> usize {
        match self {
            Hamiltonian::One(op) => op.d(),
            Hamiltonian::Two(op) => op.d(),
        }
    }

    pub fn particles(&self) -> usize {
        match self {
            Hamiltonian::One(_) => 1,
            Hamiltonian::Two(_) => 2,
        }
    }
}
