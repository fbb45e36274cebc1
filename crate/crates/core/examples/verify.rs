//! Cross-checks with the dense oracles: code-space reconstruction of an
//! encoded operator, Trotter error against exact evolution, and unitary
//! equivalence of a routed circuit.

use qudit_route::circuit::{synthesize, TrotterParams};
use qudit_route::codes::EncodingScheme;
use qudit_route::operators::OperatorName;
use qudit_route::pauli::encode_hamiltonian;
use qudit_route::router::route_once;
use qudit_route::topology::{ladder, Placement};
use qudit_route::verify::{
    circuit_to_unitary, code_subspace_check_hamiltonian, evolution, phase_aligned_distance,
    routed_equivalence,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = 4;
    let scheme = EncodingScheme::std_binary(d)?;
    let h = OperatorName::QN.build(d)?;
    let sum = encode_hamiltonian(&h, &scheme)?;
    let check = code_subspace_check_hamiltonian(&h, &scheme, &sum, 1e-10)?;
    println!("qn reconstruction: passed {} (max deviation {:.2e})", check.passed, check.max_deviation);

    let tau = 1.0;
    let exact = evolution(&sum, tau)?;
    for eta in [1, 2, 8, 32] {
        let step = circuit_to_unitary(&synthesize(&sum, TrotterParams::new(tau, eta)?)?)?;
        println!("eta {eta:>2}: Trotter error {:.3e}", phase_aligned_distance(&step.pow(eta), &exact));
    }

    let step = synthesize(&sum, TrotterParams::default())?;
    let topology = ladder(step.width());
    let p0 = Placement::identity(topology.node_count());
    let routed = route_once(&step, &topology, &p0, 3)?;
    let eq = routed_equivalence(&step, &routed, &p0, 1e-9)?;
    println!(
        "routed on a ladder with {} SWAPs: equivalent {} (deviation {:.2e})",
        routed.swap_count, eq.passed, eq.max_deviation
    );
    Ok(())
}
