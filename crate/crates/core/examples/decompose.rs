//! Pauli decomposition of the truncated position operator under every
//! encoding, with string-length histograms.
//!
//! ```text
//! cargo run --example decompose -- 6
//! ```

use qudit_route::codes::{CompactCode, EncodingScheme};
use qudit_route::operators::position_op;
use qudit_route::pauli::{encode_operator, length_histogram};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(4);
    let q = position_op(d)?;

    for scheme in [
        EncodingScheme::std_binary(d)?,
        EncodingScheme::gray(d)?,
        EncodingScheme::unary(d)?,
        EncodingScheme::block_unary(d, 2, CompactCode::Gray)?,
    ] {
        let sum = encode_operator(&q, &scheme)?;
        println!(
            "== {} on {} qubits: {} strings, longest {}",
            scheme.encoding(),
            scheme.qubit_count(),
            sum.len(),
            sum.max_length()
        );
        for (p, n) in length_histogram(&sum) {
            println!("   length {p}: {n}");
        }
        print!("{sum}");
    }
    Ok(())
}
