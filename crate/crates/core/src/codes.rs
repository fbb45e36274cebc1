//! Integer-to-bitstring encodings of a `d`-level particle.
//!
//! Four codes are supported: unary (one-hot), standard binary, Gray, and
//! block unary. Bit `i` of a codeword lives on qubit `i`; the textual form of
//! a [`BitString`] is printed most-significant bit first, so `encode(2)` under
//! a 4-bit Gray code renders as `0011`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("level {level} out of range for d = {d}")]
    LevelOutOfRange { level: usize, d: usize },
    #[error("invalid number of levels d = {0} (need d >= 2)")]
    InvalidLevels(usize),
    #[error("invalid block size g = {0} (need g >= 1)")]
    InvalidBlockSize(usize),
    #[error("bit string width {got} does not match code width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("{0} is not a codeword of this encoding")]
    InvalidCodeword(String),
    #[error("cannot parse bit string {0:?}")]
    Parse(String),
}

/// Compact sub-code used inside each block of a block unary encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompactCode {
    StdBinary,
    Gray,
}

impl CompactCode {
    fn encode_value(self, v: u64) -> u64 {
        match self {
            CompactCode::StdBinary => v,
            CompactCode::Gray => v ^ (v >> 1),
        }
    }

    fn decode_value(self, c: u64) -> u64 {
        match self {
            CompactCode::StdBinary => c,
            CompactCode::Gray => {
                let mut v = c;
                let mut shift = c >> 1;
                while shift != 0 {
                    v ^= shift;
                    shift >>= 1;
                }
                v
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Encoding {
    Unary,
    StdBinary,
    Gray,
    BlockUnary { block_size: usize, sub: CompactCode },
}

impl Encoding {
    pub fn is_compact(&self) -> bool {
        matches!(self, Encoding::StdBinary | Encoding::Gray)
    }

    /// Short token used by the CLI and in CSV output.
    pub fn token(&self) -> String {
        match self {
            Encoding::Unary => "unary".into(),
            Encoding::StdBinary => "sb".into(),
            Encoding::Gray => "gray".into(),
            Encoding::BlockUnary { block_size, sub } => match sub {
                CompactCode::StdBinary => format!("bu{block_size}-sb"),
                CompactCode::Gray => format!("bu{block_size}-gray"),
            },
        }
    }
}

impl fmt::Display for Encoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl FromStr for Encoding {
    type Err = CodeError;

    /// Accepts `unary`, `sb`, `gray`, `bu<g>` (standard binary blocks),
    /// `bu<g>-sb` and `bu<g>-gray`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "unary" | "onehot" => return Ok(Encoding::Unary),
            "sb" | "binary" | "stdbinary" => return Ok(Encoding::StdBinary),
            "gray" => return Ok(Encoding::Gray),
            _ => {}
        }
        let rest = t
            .strip_prefix("bu")
            .ok_or_else(|| CodeError::Parse(s.to_string()))?;
        let (g, sub) = match rest.split_once('-') {
            Some((g, "sb")) => (g, CompactCode::StdBinary),
            Some((g, "gray")) => (g, CompactCode::Gray),
            Some(_) => return Err(CodeError::Parse(s.to_string())),
            None => (rest, CompactCode::StdBinary),
        };
        let block_size: usize = g.parse().map_err(|_| CodeError::Parse(s.to_string()))?;
        if block_size == 0 {
            return Err(CodeError::InvalidBlockSize(0));
        }
        Ok(Encoding::BlockUnary { block_size, sub })
    }
}

/// Number of bits needed to write the integers `0..n`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// An encoding bound to a particle with `d` levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EncodingScheme {
    encoding: Encoding,
    d: usize,
}

impl EncodingScheme {
    pub fn new(encoding: Encoding, d: usize) -> Result<Self, CodeError> {
        if d < 2 {
            return Err(CodeError::InvalidLevels(d));
        }
        if let Encoding::BlockUnary { block_size, .. } = encoding {
            if block_size == 0 {
                return Err(CodeError::InvalidBlockSize(0));
            }
        }
        let scheme = EncodingScheme { encoding, d };
        // Codewords are handled as 128-bit patterns elsewhere.
        if scheme.qubit_count() > 128 {
            return Err(CodeError::InvalidLevels(d));
        }
        Ok(scheme)
    }

    pub fn unary(d: usize) -> Result<Self, CodeError> {
        Self::new(Encoding::Unary, d)
    }

    pub fn std_binary(d: usize) -> Result<Self, CodeError> {
        Self::new(Encoding::StdBinary, d)
    }

    pub fn gray(d: usize) -> Result<Self, CodeError> {
        Self::new(Encoding::Gray, d)
    }

    pub fn block_unary(d: usize, block_size: usize, sub: CompactCode) -> Result<Self, CodeError> {
        Self::new(Encoding::BlockUnary { block_size, sub }, d)
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// Qubits per block for block unary: `ceil(log2(g + 1))`.
    fn block_width(&self) -> usize {
        match self.encoding {
            Encoding::BlockUnary { block_size, .. } => ceil_log2(block_size + 1),
            _ => 0,
        }
    }

    fn block_count(&self) -> usize {
        match self.encoding {
            Encoding::BlockUnary { block_size, .. } => self.d.div_ceil(block_size),
            _ => 0,
        }
    }

    pub fn qubit_count(&self) -> usize {
        match self.encoding {
            Encoding::Unary => self.d,
            Encoding::StdBinary | Encoding::Gray => ceil_log2(self.d),
            Encoding::BlockUnary { .. } => self.block_count() * self.block_width(),
        }
    }

    fn check_level(&self, level: usize) -> Result<(), CodeError> {
        if level >= self.d {
            Err(CodeError::LevelOutOfRange { level, d: self.d })
        } else {
            Ok(())
        }
    }

    pub fn encode(&self, level: usize) -> Result<BitString, CodeError> {
        self.check_level(level)?;
        let width = self.qubit_count();
        let mut bits = vec![false; width];
        match self.encoding {
            Encoding::Unary => bits[level] = true,
            Encoding::StdBinary | Encoding::Gray => {
                let code = if self.encoding == Encoding::Gray {
                    CompactCode::Gray.encode_value(level as u64)
                } else {
                    level as u64
                };
                for (i, b) in bits.iter_mut().enumerate() {
                    *b = (code >> i) & 1 == 1;
                }
            }
            Encoding::BlockUnary { block_size, sub } => {
                let bw = self.block_width();
                let block = level / block_size;
                // occupied block is never all-zero
                let value = sub.encode_value((level % block_size + 1) as u64);
                for i in 0..bw {
                    bits[block * bw + i] = (value >> i) & 1 == 1;
                }
            }
        }
        Ok(BitString { bits })
    }

    pub fn decode(&self, b: &BitString) -> Result<usize, CodeError> {
        let width = self.qubit_count();
        if b.width() != width {
            return Err(CodeError::WidthMismatch {
                expected: width,
                got: b.width(),
            });
        }
        let invalid = || CodeError::InvalidCodeword(b.to_string());
        let level = match self.encoding {
            Encoding::Unary => {
                let mut ones = b.ones();
                match (ones.next(), ones.next()) {
                    (Some(l), None) => l,
                    _ => return Err(invalid()),
                }
            }
            Encoding::StdBinary => b.to_u128() as usize,
            Encoding::Gray => CompactCode::Gray.decode_value(b.to_u128() as u64) as usize,
            Encoding::BlockUnary { block_size, sub } => {
                let bw = self.block_width();
                let mut found = None;
                for block in 0..self.block_count() {
                    let raw = (0..bw)
                        .filter(|&i| b.bits[block * bw + i])
                        .fold(0u64, |acc, i| acc | (1 << i));
                    if raw != 0 {
                        if found.is_some() {
                            return Err(invalid());
                        }
                        found = Some((block, sub.decode_value(raw)));
                    }
                }
                let (block, value) = found.ok_or_else(invalid)?;
                if value == 0 || value as usize > block_size {
                    return Err(invalid());
                }
                block * block_size + value as usize - 1
            }
        };
        if level >= self.d {
            return Err(invalid());
        }
        Ok(level)
    }

    /// Qubits that must be inspected to identify `level`.
    pub fn bitmask_subset(&self, level: usize) -> Result<BTreeSet<usize>, CodeError> {
        self.check_level(level)?;
        Ok(match self.encoding {
            Encoding::Unary => BTreeSet::from([level]),
            Encoding::StdBinary | Encoding::Gray => (0..self.qubit_count()).collect(),
            Encoding::BlockUnary { block_size, .. } => {
                let bw = self.block_width();
                let block = level / block_size;
                (block * bw..(block + 1) * bw).collect()
            }
        })
    }

    /// All codewords, indexed by level.
    pub fn codewords(&self) -> Vec<BitString> {
        (0..self.d)
            .map(|l| self.encode(l).expect("level in range"))
            .collect()
    }
}

/// A fixed-width bit pattern. Index 0 is the least significant bit (qubit 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    bits: Vec<bool>,
}

impl BitString {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitString { bits }
    }

    pub fn zeros(width: usize) -> Self {
        BitString {
            bits: vec![false; width],
        }
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn bit(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }

    /// Packs the pattern into an integer. Panics above 128 bits.
    pub fn to_u128(&self) -> u128 {
        assert!(self.width() <= 128, "bit string wider than 128 bits");
        self.ones().fold(0u128, |acc, i| acc | (1u128 << i))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = CodeError;

    /// Parses an MSB-first string of `0`/`1`; whitespace is ignored so that
    /// block-separated forms such as `00 11 00` are accepted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::new();
        for c in s.chars().rev() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() || c == '_' => {}
                _ => return Err(CodeError::Parse(s.to_string())),
            }
        }
        Ok(BitString { bits })
    }
}

pub fn hamming(a: &BitString, b: &BitString) -> Result<usize, CodeError> {
    if a.width() != b.width() {
        return Err(CodeError::WidthMismatch {
            expected: a.width(),
            got: b.width(),
        });
    }
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}

/// Writes an encoding table as CSV: a `decimal` column followed by one
/// column per scheme holding the MSB-first codeword.
pub fn write_table_csv<W: std::io::Write>(
    schemes: &[EncodingScheme],
    levels: usize,
    out: W,
) -> Result<(), Box<dyn std::error::Error>> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["decimal".to_string()];
    header.extend(schemes.iter().map(|s| s.encoding().token()));
    w.write_record(&header)?;
    for l in 0..levels {
        let mut row = vec![l.to_string()];
        for s in schemes {
            row.push(match s.encode(l) {
                Ok(b) => b.to_string(),
                Err(_) => String::new(),
            });
        }
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn codeword_spot_checks() {
        let gray = EncodingScheme::gray(16).unwrap();
        assert_eq!(gray.encode(2).unwrap().to_string(), "0011");
        assert_eq!(gray.decode(&bs("0011")).unwrap(), 2);

        let unary = EncodingScheme::unary(9).unwrap();
        assert_eq!(unary.encode(0).unwrap().to_string(), "000000001");
        assert_eq!(unary.decode(&bs("000000001")).unwrap(), 0);
    }

    #[test]
    fn block_unary_spot_check() {
        let bu = EncodingScheme::block_unary(9, 3, CompactCode::Gray).unwrap();
        assert_eq!(bu.encode(4).unwrap(), bs("00 11 00"));
        assert_eq!(bu.qubit_count(), 6);
    }

    #[test]
    fn unary_rejects_two_hot() {
        let unary = EncodingScheme::unary(9).unwrap();
        assert!(matches!(
            unary.decode(&bs("000000011")),
            Err(CodeError::InvalidCodeword(_))
        ));
        assert!(unary.decode(&bs("000000000")).is_err());
    }

    #[test]
    fn compact_rejects_padding_levels() {
        let sb = EncodingScheme::std_binary(5).unwrap();
        assert!(sb.decode(&bs("110")).is_err());
        assert_eq!(sb.decode(&bs("100")).unwrap(), 4);
    }

    #[test]
    fn block_unary_rejects_bad_blocks() {
        let bu = EncodingScheme::block_unary(9, 3, CompactCode::StdBinary).unwrap();
        assert!(bu.decode(&bs("00 00 00")).is_err());
        assert!(bu.decode(&bs("01 00 01")).is_err());
        assert!(bu.decode(&bs("00 00 11")).is_ok());
        // g = 2 blocks hold values 1..=2 in 2 bits; value 3 is not a codeword
        let bu2 = EncodingScheme::block_unary(4, 2, CompactCode::StdBinary).unwrap();
        assert!(bu2.decode(&bs("00 11")).is_err());
    }

    #[test]
    fn bitmask_subsets() {
        let unary = EncodingScheme::unary(9).unwrap();
        assert_eq!(unary.bitmask_subset(3).unwrap(), BTreeSet::from([3]));
        let gray = EncodingScheme::gray(16).unwrap();
        assert_eq!(
            gray.bitmask_subset(5).unwrap(),
            BTreeSet::from([0, 1, 2, 3])
        );
        let bu = EncodingScheme::block_unary(9, 3, CompactCode::StdBinary).unwrap();
        assert_eq!(bu.bitmask_subset(4).unwrap(), BTreeSet::from([2, 3]));
        assert!(bu.bitmask_subset(9).is_err());
    }

    #[test]
    fn bitmask_subset_identifies_level() {
        // Inspecting only C(l) must be enough to tell level l apart from every
        // other codeword.
        let bu = EncodingScheme::block_unary(9, 3, CompactCode::Gray).unwrap();
        let words = bu.codewords();
        let subset = bu.bitmask_subset(4).unwrap();
        for (other, w) in words.iter().enumerate() {
            let same = subset.iter().all(|&q| w.bit(q) == words[4].bit(q));
            assert_eq!(same, other == 4);
        }
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&bs("0000"), &bs("0000")).unwrap(), 0);
        let sb = EncodingScheme::std_binary(16).unwrap();
        assert_eq!(
            hamming(&sb.encode(3).unwrap(), &sb.encode(4).unwrap()).unwrap(),
            3
        );
        assert!(hamming(&bs("00"), &bs("000")).is_err());
    }

    #[test]
    fn level_out_of_range() {
        let sb = EncodingScheme::std_binary(4).unwrap();
        assert_eq!(
            sb.encode(4),
            Err(CodeError::LevelOutOfRange { level: 4, d: 4 })
        );
        assert!(EncodingScheme::unary(1).is_err());
    }

    #[test]
    fn encoding_tokens_round_trip() {
        for t in ["unary", "sb", "gray", "bu3-sb", "bu2-gray"] {
            let e: Encoding = t.parse().unwrap();
            assert_eq!(e.token(), t);
        }
        assert_eq!(
            "bu3".parse::<Encoding>().unwrap(),
            Encoding::BlockUnary {
                block_size: 3,
                sub: CompactCode::StdBinary
            }
        );
        assert!("bu0".parse::<Encoding>().is_err());
        assert!("ternary".parse::<Encoding>().is_err());
    }

    #[test]
    fn table_csv_export() {
        let schemes = [
            EncodingScheme::std_binary(16).unwrap(),
            EncodingScheme::unary(9).unwrap(),
        ];
        let mut buf = Vec::new();
        write_table_csv(&schemes, 3, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "decimal,sb,unary\n0,0000,000000001\n1,0001,000000010\n2,0010,000000100\n"
        );
    }
}
