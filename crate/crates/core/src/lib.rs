//! Cavity-QED polaritonic chemistry on emulated qubit, qudit and qumode registers.
//!
//! The crate builds the single-mode Pauli-Fierz Hamiltonian for a small
//! molecule, solves it exactly in a determinant ⊗ photon-number basis, maps it
//! onto three register types, and runs a state-averaged VQE against it.

pub mod ansatz;
pub mod error;
pub mod integrals;
pub mod linalg;
pub mod mappings;
pub mod qedfci;
pub mod savqe;
pub mod simulator;

pub use error::{Error, Result};
