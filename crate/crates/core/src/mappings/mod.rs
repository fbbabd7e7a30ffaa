//! Fermion and boson operators on qubit, qudit and qumode registers.
//!
//! Fermions always use Jordan-Wigner on interleaved spin orbitals. The photon
//! mode is one-hot on qubits, a single `d`-level qudit, or a truncated Fock
//! space on a qumode.

mod boson;
mod fermion;
mod hamiltonian;
mod layout;
mod pauli;

pub use boson::{
    boson_creation_qubit, boson_creation_qudit, boson_ops_qumode, ladder_creation, one_hot_index, restrict_one_hot,
    GellMann, GellMannKind,
};
pub use fermion::{fermion_spin_operators, jw_creation, jw_creation_matrices, FermionSpinOperators};
pub use hamiltonian::{
    assemble_platform_hamiltonian, boson_creation_for, lift_bosonic, lift_fermionic, mapped_electronic, mapped_one_body,
    platform_observables, restrict, PlatformObservables,
};
pub use layout::{Platform, RegisterLayout};
pub use pauli::{raising, Pauli, PauliSum, PauliTerm};

/// Default qumode Fock cutoff.
pub const DEFAULT_QUMODE_CUTOFF: usize = 15;
