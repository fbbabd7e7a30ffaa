//! Exact diagonalization of the Pauli-Fierz Hamiltonian in a determinant ⊗
//! photon-number basis.

mod basis;
mod hamiltonian;
mod operators;
mod spectrum;

pub use basis::{build_hybrid_basis, spin_orbital, HybridBasis, DEFAULT_CAPACITY};
pub use hamiltonian::{build_pauli_fierz, dipole_on_dets, electronic_hamiltonian, pauli_fierz_system, CavitySpec};
pub use operators::{
    apply_string, electron_number, excitation, expectation, lift_electronic, lift_photonic, mean_photon_number,
    one_body_on_dets, photon_creation, photon_number, photon_projector, photon_sector_profile, s_plus_dets,
    s_squared, s_squared_dets, s_z, s_z_dets, spin_orbital_number, string_on_dets, Ladder, OperatorMatrix,
};
pub use spectrum::{
    diagonalize, diagonalize_in_subspace, diagonalize_with_reference, excited_pair, polaritonic_states,
    resonance_bond_length, singlet_spectrum, spin_subspace, truncation_convergence, Spectrum, TruncationRow, DEGENERACY_TOL,
};
