//! Discrete Wigner functions on the GF(2^n) phase space of `n` qubits.
//!
//! The phase space is a `d × d` grid (`d = 2^n`) whose coordinates live in
//! GF(d). Lines of the grid are mapped to stabilizer states through a
//! *quantum net*, a consistent choice of eigenvalues for the Pauli
//! translation operators along each ray. From a net follow point operators,
//! Wigner tables, interference profiles of superposed computational states,
//! and a code-adapted frame for the five-qubit perfect code.

pub mod checks;
pub mod code5;
pub mod dense;
pub mod error;
pub mod field;
pub mod interference;
pub mod net;
pub mod pauli;
pub mod phase_space;
pub mod state;
pub mod transform;
pub mod tuple;
pub mod wigner;

pub use error::{Error, Result};
pub use field::{BinaryMatrix, CoordinateMap, Field, FieldElement, FieldSpec};
pub use net::{enumerate_nets, NetEnumeration, QuantumNet, SignTable};
pub use pauli::{translation_op, PauliElement, PauliKind, TranslationBasis};
pub use phase_space::{Line, PhasePoint, PhaseSpace, Striation};
pub use state::{QuantumState, StabilizerState};
pub use transform::{fwht, GaussianInt};
pub use tuple::NTuple;
pub use wigner::{WignerTable, WignerValues};
