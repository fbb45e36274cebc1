//! Qudit-to-qubit encodings, Pauli decomposition, Trotter circuit synthesis
//! and SWAP routing on constrained qubit connectivity.
//!
//! The pipeline runs left to right:
//!
//! ```text
//! operators -> codes -> pauli -> circuit -> router (on a topology)
//! ```
//!
//! [`bounds`] gives closed-form SWAP estimates for the same instances and
//! [`verify`] holds dense oracles used to check the rest.
//!
//! ```
//! use qudit_route::{codes::EncodingScheme, operators::position_op, pauli::encode_operator};
//!
//! let scheme = EncodingScheme::unary(4).unwrap();
//! let sum = encode_operator(&position_op(4).unwrap(), &scheme).unwrap();
//! assert!(sum.max_length() <= 2);
//! ```

pub mod bounds;
pub mod circuit;
pub mod cli;
pub mod codes;
pub mod operators;
pub mod pauli;
pub mod router;
pub mod topology;
pub mod verify;

pub use circuit::{Circuit, Gate, TrotterParams};
pub use codes::{BitString, Encoding, EncodingScheme};
pub use operators::{DLevelOperator, Hamiltonian, OperatorName, TwoParticleOperator};
pub use pauli::{Pauli, PauliString, PauliSum};
pub use router::{RouteResult, Router};
pub use topology::{Placement, PlacementKind, Topology, TopologyKind};
