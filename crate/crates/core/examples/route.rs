//! Routes one Trotter step of `q (x) q` on each topology and compares the
//! SWAP counts, with and without the line-embedding fallback.

use qudit_route::circuit::{cnot_count, synthesize, TrotterParams};
use qudit_route::codes::EncodingScheme;
use qudit_route::operators::OperatorName;
use qudit_route::pauli::encode_hamiltonian;
use qudit_route::router::{respects_topology, Router};
use qudit_route::topology::{PlacementKind, TopologyKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let d = 4;
    let scheme = EncodingScheme::gray(d)?;
    let sum = encode_hamiltonian(&OperatorName::QQ.build(d)?, &scheme)?;
    let step = synthesize(&sum, TrotterParams::default())?;
    println!("{} qubits, {} CNOTs before routing", step.width(), cnot_count(&step));

    let kinds = [
        PlacementKind::Identity,
        PlacementKind::HorizontalSnake,
        PlacementKind::VerticalSnake,
    ];
    for kind in TopologyKind::ALL {
        let topology = kind.build(step.width());
        let router = Router::new(&topology);
        let placements: Vec<_> = kinds.iter().map(|k| k.build(&topology)).collect();
        let plain = router.route_best(&step, &placements, 200, 7)?;
        let fallback = router.route_best_with_fallback(&step, &placements, 200, 7)?;
        assert!(respects_topology(&plain.circuit, &topology));
        println!(
            "{:<7} {:>2} nodes  swaps {:>3}  with fallback {:>3}",
            kind.as_str(),
            topology.node_count(),
            plain.swap_count,
            fallback.swap_count
        );
    }
    Ok(())
}
