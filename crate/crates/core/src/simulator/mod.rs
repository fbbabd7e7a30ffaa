//! State-vector emulation of qubit, qudit and qumode registers.

mod engine;
mod gates;
mod state;

pub use engine::{apply, gate_matrix, Op, OpAction, Program, SiteMap};
pub use gates::{
    controlled_displacement_parity, controlled_givens_pauli_strings, controlled_givens_two_cx, entangling_cost, expand,
    local_action, Decomposition, Gate, GateKind, LocalAction, Param,
};
pub use state::StateVector;

use crate::error::{Error, Result};

/// Population above which the top Fock levels are reported as truncation tail.
pub const TAIL_WARNING: f64 = 1e-8;

/// Population of the displaced state that reached the two highest Fock levels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailWarning {
    pub population: f64,
}

/// Population on the bosonic levels `≥ cutoff − 1`.
pub fn fock_tail(state: &StateVector) -> f64 {
    let l = &state.layout;
    let bd = l.boson_dim();
    let top = l.photon_cutoff.saturating_sub(1);
    state
        .amps
        .iter()
        .enumerate()
        .filter(|(i, _)| l.photon_of_boson_index(i % bd).is_some_and(|n| n >= top))
        .map(|(_, z)| z.norm_sqr())
        .sum()
}

/// Real displacement on the qumode; reports population pushed into the top levels.
pub fn apply_displacement(state: &mut StateVector, theta: f64) -> Result<Option<TailWarning>> {
    let site = state.layout.mode_site().ok_or_else(|| Error::Layout("register has no bosonic mode".into()))?;
    apply(state, &Gate::new(GateKind::Displacement, vec![site], Param::Fixed(theta)), &[])?;
    let tail = fock_tail(state);
    Ok((tail > TAIL_WARNING).then_some(TailWarning { population: tail }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FabricKind {
    Single,
    Pair,
}

/// Fabric block between spatial orbitals `p` and `p + 1` (fermionic qubits `2p .. 2p + 4`).
pub fn apply_fabric_block(state: &mut StateVector, kind: FabricKind, p: usize, theta: f64) -> Result<()> {
    let sites: Vec<usize> = (2 * p..2 * p + 4).collect();
    let k = match kind {
        FabricKind::Single => GateKind::FabricSingle,
        FabricKind::Pair => GateKind::FabricPair,
    };
    apply(state, &Gate::new(k, sites, Param::Fixed(theta)), &[])
}
