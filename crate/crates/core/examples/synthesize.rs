//! One Trotter step of `n^2` under standard binary and Gray codes, written in
//! the circuit text format.

use qudit_route::circuit::{cnot_count, synthesize, Circuit, TrotterParams};
use qudit_route::codes::EncodingScheme;
use qudit_route::operators::OperatorName;
use qudit_route::pauli::encode_hamiltonian;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = 8;
    let h = OperatorName::N2.build(d)?;
    let params = TrotterParams::new(0.5, 4)?;

    for scheme in [EncodingScheme::std_binary(d)?, EncodingScheme::gray(d)?] {
        let sum = encode_hamiltonian(&h, &scheme)?;
        let step = synthesize(&sum, params)?;
        println!("# {}: {} gates, {} CNOTs", scheme.encoding(), step.len(), cnot_count(&step));
        let text = step.to_text();
        let parsed: Circuit = text.parse()?;
        assert_eq!(parsed, step);
        print!("{text}");
    }
    Ok(())
}
