//! Closed-form SWAP-count bounds for routing a Trotter step on a line.
//!
//! Compact-code bounds assume `d = 2^K`; for other `d` they are evaluated at
//! `K = ceil(log2 d)` and the report is flagged as extrapolated. Unary bounds
//! work per band `w = |l - l'|` and rest on counting inversions of a
//! residue-class qubit ordering.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{ceil_log2, Encoding, EncodingScheme};
use crate::operators::{band_profile, Hamiltonian, OperatorName};
use crate::pauli::{encode_hamiltonian, paired_entry, PauliError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("string length p = {p} outside 2..={k}")]
    BadLength { p: usize, k: usize },
    #[error("need h <= p <= K, got h = {h}, p = {p}, K = {k}")]
    BadDistribution { p: usize, h: usize, k: usize },
    #[error("hamming distance h = {h} exceeds K = {k}")]
    BadHamming { h: usize, k: usize },
    #[error("need 1 <= w < d, got w = {w}, d = {d}")]
    BadBand { w: usize, d: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i as u128 + 1))
}

/// Gather all `p` string qubits into one block: `(K - p) p / 2`.
pub fn cluster_bound(p: usize, k: usize) -> Result<f64, BoundError> {
    if p < 2 || p > k {
        return Err(BoundError::BadLength { p, k });
    }
    Ok((k - p) as f64 * p as f64 / 2.0)
}

/// Walk one qubit across the gap and back: `2 (K - p)`.
pub fn shuttle_bound(p: usize, k: usize) -> Result<f64, BoundError> {
    if p < 2 || p > k {
        return Err(BoundError::BadLength { p, k });
    }
    Ok(2.0 * (k - p) as f64)
}

/// Number of length-`p` strings in `|l><l'| + h.c.` when the codewords differ
/// in `h` of `K` bits: `2^h C(K - h, p - h) / 2`.
pub fn length_distribution(p: usize, h: usize, k: usize) -> Result<f64, BoundError> {
    if h > p || p > k {
        return Err(BoundError::BadDistribution { p, h, k });
    }
    Ok(0.5 * 2f64.powi(h as i32) * binomial(k - h, p - h) as f64)
}

/// `2^K (K - h) / 2` for a single `|l><l'| + h.c.` term.
pub fn single_term_bound(h: usize, k: usize) -> Result<f64, BoundError> {
    if h > k {
        return Err(BoundError::BadHamming { h, k });
    }
    Ok(0.5 * 2f64.powi(k as i32) * (k - h) as f64)
}

/// `sum_p f(p; h, K) * 2 (K - p)` over every length the term produces,
/// `p = h..=K`, in exact integer arithmetic.
pub fn single_term_summation(h: usize, k: usize) -> Result<u128, BoundError> {
    if h > k {
        return Err(BoundError::BadHamming { h, k });
    }
    // f * shuttle = 2^h C(K - h, p - h) (K - p)
    Ok((h..=k)
        .map(|p| (1u128 << h) * binomial(k - h, p - h) * (k - p) as u128)
        .sum())
}

/// Cluster-move bound over every `{I, sigma}` pattern on up to `K` qubits:
/// `(d K^2 - 2 d K + 3 d - 12) / 8` with `d = 2^K`, zero below `K = 3`.
pub fn all_strings_bound(k: usize) -> f64 {
    if k < 3 {
        return 0.0;
    }
    let d = 2f64.powi(k as i32);
    let k = k as f64;
    (d * k * k - 2.0 * d * k + 3.0 * d - 12.0) / 8.0
}

/// Counting bound over the `C(K, K/2)` half-length patterns: a placement
/// exposes `K/2 + 1` contiguous groups and each SWAP adds at most two more.
pub fn all_strings_lower(k: usize) -> u128 {
    let half = k / 2;
    let patterns = binomial(k, half);
    let initial = half as u128 + 1;
    patterns.saturating_sub(initial).div_ceil(2)
}

/// [`all_strings_bound`] at `2K`:
/// `(d^2 K^2 - d^2 K + 3 d^2 / 4 - 3) / 2` with `d = 2^K`.
pub fn two_particle_all_bound(k: usize) -> f64 {
    if 2 * k < 3 {
        return 0.0;
    }
    let d2 = 4f64.powi(k as i32);
    let k = k as f64;
    0.5 * (d2 * k * k - d2 * k + 0.75 * d2 - 3.0)
}

pub fn two_particle_lower(k: usize) -> u128 {
    all_strings_lower(2 * k)
}

/// Residue classes mod `w` laid out one after another, 0-indexed:
/// `[0, w, 2w, ..., 1, w + 1, ...]`.
pub fn grouped_ordering(w: usize, d: usize) -> Result<Vec<usize>, BoundError> {
    if w == 0 || w >= d {
        return Err(BoundError::BadBand { w, d });
    }
    Ok((0..w).flat_map(|r| (r..d).step_by(w)).collect())
}

/// Pairs `i < j` with `order[i] > order[j]`, counted by merge sort.
pub fn inversion_count(order: &[usize]) -> u64 {
    fn sort(v: &mut [usize], buf: &mut Vec<usize>) -> u64 {
        let n = v.len();
        if n < 2 {
            return 0;
        }
        let mid = n / 2;
        let mut count = sort(&mut v[..mid], buf) + sort(&mut v[mid..], buf);
        buf.clear();
        let (mut i, mut j) = (0, mid);
        while i < mid && j < n {
            if v[j] < v[i] {
                count += (mid - i) as u64;
                buf.push(v[j]);
                j += 1;
            } else {
                buf.push(v[i]);
                i += 1;
            }
        }
        buf.extend_from_slice(&v[i..mid]);
        buf.extend_from_slice(&v[j..n]);
        v.copy_from_slice(buf);
        count
    }
    let mut v = order.to_vec();
    sort(&mut v, &mut Vec::with_capacity(order.len()))
}

/// `d^2 (w - 1) / (4 w) - d (w - 1) / 4`.
pub fn unary_inversion_bound(w: usize, d: usize) -> f64 {
    let (w, d) = (w as f64, d as f64);
    d * d * (w - 1.0) / (4.0 * w) - d * (w - 1.0) / 4.0
}

/// Make each pair adjacent and swap back: `2 (d - w) w`.
pub fn unary_linear_bound(w: usize, d: usize) -> f64 {
    2.0 * d.saturating_sub(w) as f64 * w as f64
}

/// Fully dense one-particle unary operator. The default is the expression
/// `d^2/2 - 3/2 + 1`; `corrected` evaluates `d^2/2 - 3d/2 + 1` instead.
pub fn unary_dense_bound(d: usize, corrected: bool) -> f64 {
    let d = d as f64;
    if corrected {
        d * d / 2.0 - 1.5 * d + 1.0
    } else {
        d * d / 2.0 - 1.5 + 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TwoParticleKind {
    DiagDiag,
    Banded,
}

/// Two-particle unary bound: `d^2` when every band is `w <= 1`, otherwise
/// `d^2 + 2 min(inversion, linear)` evaluated at the widest band.
pub fn unary_two_particle_bound(kind: TwoParticleKind, w: usize, d: usize) -> f64 {
    let sweep = (d * d) as f64;
    match kind {
        TwoParticleKind::DiagDiag => sweep,
        TwoParticleKind::Banded if w <= 1 => sweep,
        TwoParticleKind::Banded => {
            sweep + 2.0 * unary_inversion_bound(w, d).min(unary_linear_bound(w, d))
        }
    }
}

/// First `d > w` at which the linear unary bound drops below the inversion
/// bound, scanning up to `max_d`.
pub fn unary_crossover(w: usize, max_d: usize) -> Option<usize> {
    (w + 1..=max_d).find(|&d| unary_linear_bound(w, d) < unary_inversion_bound(w, d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub operator: String,
    pub encoding: String,
    pub d: usize,
    pub particles: usize,
    pub qubits_per_particle: usize,
    /// `K = ceil(log2 d)`, present for compact codes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    /// Occupied bands of each one-particle factor.
    pub bands: Vec<usize>,
    /// Hamming distances of the off-diagonal pairs (compact codes).
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub hamming: Vec<usize>,
    /// Set when a compact bound is evaluated for `d` that is not a power of 2.
    pub extrapolated: bool,
    pub bounds: BTreeMap<String, f64>,
    /// Depths of the SWAP networks behind some bounds; informational only.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub metadata: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct BoundOptions {
    pub dense_corrected: bool,
}

fn factors(h: &Hamiltonian) -> Vec<&crate::operators::DLevelOperator> {
    match h {
        Hamiltonian::One(op) => vec![op],
        Hamiltonian::Two(tp) => tp.terms.iter().flat_map(|(a, b)| [a, b]).collect(),
    }
}

/// Every bound that applies to `(operator, encoding, d)`.
pub fn bound_report(
    name: OperatorName,
    h: &Hamiltonian,
    scheme: &EncodingScheme,
    opts: BoundOptions,
) -> Result<BoundReport, BoundError> {
    let d = scheme.d();
    let mut bands = BTreeSet::new();
    for f in factors(h) {
        bands.extend(band_profile(f));
    }
    let mut report = BoundReport {
        operator: name.as_str().to_string(),
        encoding: scheme.encoding().token(),
        d,
        particles: h.particles(),
        qubits_per_particle: scheme.qubit_count(),
        k: None,
        bands: bands.iter().copied().collect(),
        hamming: Vec::new(),
        extrapolated: false,
        bounds: BTreeMap::new(),
        metadata: BTreeMap::new(),
    };
    let off_bands: Vec<usize> = bands.iter().copied().filter(|&w| w > 0).collect();

    match (scheme.encoding(), h) {
        (Encoding::StdBinary | Encoding::Gray, _) => {
            let k = ceil_log2(d);
            report.k = Some(k);
            report.extrapolated = !d.is_power_of_two();
            match h {
                Hamiltonian::One(op) => {
                    let mut total = 0.0;
                    let mut hs = BTreeSet::new();
                    for ((l, lp), _) in op.entries() {
                        if l >= lp {
                            continue;
                        }
                        let dist = crate::codes::hamming(&scheme.encode(l).expect("in range"), &scheme.encode(lp).expect("in range"))
                            .expect("equal widths");
                        hs.insert(dist);
                        total += single_term_bound(dist, k)?;
                    }
                    for &dist in &hs {
                        report
                            .bounds
                            .insert(format!("UB_single_term_h{dist}"), single_term_bound(dist, k)?);
                    }
                    report.hamming = hs.into_iter().collect();
                    if !report.hamming.is_empty() {
                        report.bounds.insert("UB_single_term".into(), total);
                    }
                    let sum = encode_hamiltonian(h, scheme)?;
                    let lengths: Vec<usize> = sum
                        .terms()
                        .iter()
                        .map(|t| t.len_nontrivial())
                        .filter(|&p| p >= 2)
                        .collect();
                    let per_string = |f: fn(usize, usize) -> Result<f64, BoundError>| -> f64 {
                        lengths.iter().fold(0.0, |acc, &p| acc + f(p, k).expect("2 <= p <= K"))
                    };
                    report.bounds.insert("UB_cluster".into(), per_string(cluster_bound));
                    report.bounds.insert("UB_shuttle".into(), per_string(shuttle_bound));
                    report.bounds.insert("UB_all_strings".into(), all_strings_bound(k));
                    report
                        .bounds
                        .insert("LB_all_strings".into(), all_strings_lower(k) as f64);
                }
                Hamiltonian::Two(_) => {
                    report
                        .bounds
                        .insert("UB_all_strings_2pcl".into(), two_particle_all_bound(k));
                    report
                        .bounds
                        .insert("LB_all_strings_2pcl".into(), two_particle_lower(k) as f64);
                }
            }
        }
        (Encoding::Unary, Hamiltonian::One(_)) => {
            let mut inversion = 0.0;
            let mut linear = 0.0;
            for &w in &off_bands {
                inversion += unary_inversion_bound(w, d);
                linear += unary_linear_bound(w, d);
            }
            report.bounds.insert("UB_unary_inversion".into(), inversion);
            report.bounds.insert("UB_unary_linear".into(), linear);
            if off_bands.len() == d - 1 {
                report.bounds.insert(
                    "UB_unary_dense".into(),
                    unary_dense_bound(d, opts.dense_corrected),
                );
                report.metadata.insert("depth_dense_swap_network".into(), (2 * d) as f64 - 3.0);
            }
        }
        (Encoding::Unary, Hamiltonian::Two(_)) => {
            let widest = off_bands.last().copied().unwrap_or(0);
            let kind = if widest == 0 {
                TwoParticleKind::DiagDiag
            } else {
                TwoParticleKind::Banded
            };
            report.bounds.insert(
                "UB_unary_2pcl".into(),
                unary_two_particle_bound(kind, widest, d),
            );
            report.metadata.insert("depth_2pcl_swap_network".into(), (2 * d) as f64 - 1.0);
        }
        (Encoding::BlockUnary { .. }, _) => {}
    }
    Ok(report)
}

/// Length histogram of `|l><l'| + h.c.` next to the predicted distribution.
pub fn pair_distribution_check(
    l: usize,
    lp: usize,
    scheme: &EncodingScheme,
) -> Result<(BTreeMap<usize, usize>, BTreeMap<usize, f64>), BoundError> {
    let k = scheme.qubit_count();
    let h = crate::codes::hamming(
        &scheme.encode(l).map_err(PauliError::from)?,
        &scheme.encode(lp).map_err(PauliError::from)?,
    )
    .map_err(PauliError::from)?;
    let observed = crate::pauli::length_histogram(&paired_entry(l, lp, scheme)?);
    let mut predicted = BTreeMap::new();
    for p in h..=k {
        let f = length_distribution(p, h, k)?;
        if f > 0.0 {
            predicted.insert(p, f);
        }
    }
    Ok((observed, predicted))
}
