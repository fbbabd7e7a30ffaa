use serde::{Deserialize, Serialize};

use super::basis::{spin_orbital, HybridBasis};
use super::operators::{apply_string, lift_electronic, lift_photonic, one_body_on_dets, photon_creation, Ladder, OperatorMatrix};
use crate::error::{Error, Result};
use crate::integrals::MolecularIntegrals;
use crate::linalg::{c, RMatrix};

/// Single cavity mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavitySpec {
    /// Mode frequency ω, hartree.
    pub omega: f64,
    /// Coupling magnitude λ, atomic units.
    pub lambda: f64,
    /// Unit polarization vector.
    pub polarization: [f64; 3],
    /// Photon cutoff.
    pub n_b_max: usize,
}

impl CavitySpec {
    /// Mode polarized along lab z.
    pub fn new(omega: f64, lambda: f64, n_b_max: usize) -> Result<Self> {
        Self::with_polarization(omega, lambda, [0.0, 0.0, 1.0], n_b_max)
    }

    pub fn with_polarization(omega: f64, lambda: f64, polarization: [f64; 3], n_b_max: usize) -> Result<Self> {
        let s = Self { omega, lambda, polarization, n_b_max };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega.is_finite() && self.omega > 0.0) {
            return Err(Error::Domain(format!("cavity frequency must be positive, got {}", self.omega)));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) {
            return Err(Error::Domain(format!("coupling must be non-negative, got {}", self.lambda)));
        }
        let norm: f64 = self.polarization.iter().map(|x| x * x).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("polarization has norm {norm}")));
        }
        Ok(())
    }

    /// Coupling vector `λ e`.
    pub fn field(&self) -> [f64; 3] {
        self.polarization.map(|e| e * self.lambda)
    }

    pub fn with_cutoff(&self, n_b_max: usize) -> Self {
        Self { n_b_max, ..*self }
    }
}

/// Electronic Hamiltonian (including `E_nuc`) on the determinant space.
pub fn electronic_hamiltonian(mi: &MolecularIntegrals, basis: &HybridBasis) -> Result<RMatrix> {
    check_shape(mi, basis)?;
    let n = mi.n_orb;
    let mut h = one_body_on_dets(basis, &mi.h);
    // ½ Σ g_pqrs a†_pσ a†_rτ a_sτ a_qσ
    let mut two = RMatrix::zeros(basis.n_dets(), basis.n_dets());
    for (j, &det) in basis.dets().iter().enumerate() {
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let g = mi.g.get(p, q, r, s);
                        if g == 0.0 {
                            continue;
                        }
                        for sig in 0..2 {
                            for tau in 0..2 {
                                let ops = [
                                    Ladder::Create(spin_orbital(p, sig)),
                                    Ladder::Create(spin_orbital(r, tau)),
                                    Ladder::Annihilate(spin_orbital(s, tau)),
                                    Ladder::Annihilate(spin_orbital(q, sig)),
                                ];
                                if let Some((sign, d)) = apply_string(&ops, det) {
                                    if let Some(i) = basis.det_index(d) {
                                        two[(i, j)] += 0.5 * sign * g;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    h += two;
    for i in 0..basis.n_dets() {
        h[(i, i)] += mi.e_nuc;
    }
    Ok(h)
}

fn check_shape(mi: &MolecularIntegrals, basis: &HybridBasis) -> Result<()> {
    if mi.n_orb != basis.n_orb || mi.n_e != basis.n_e {
        return Err(Error::Shape(format!(
            "integrals describe ({} orbitals, {} electrons), basis has ({}, {})",
            mi.n_orb, mi.n_e, basis.n_orb, basis.n_e
        )));
    }
    Ok(())
}

/// `λ·d̂` (with the nuclear shift) on the determinant space.
pub fn dipole_on_dets(mi: &MolecularIntegrals, cav: &CavitySpec, basis: &HybridBasis) -> Result<RMatrix> {
    check_shape(mi, basis)?;
    let d = mi.dipole.as_ref().ok_or(Error::AbsentDipole)?;
    Ok(one_body_on_dets(basis, &d.projected(cav.field(), mi.n_e)))
}

/// Pauli-Fierz Hamiltonian
/// `H = H_e + ω b†b − √(ω/2) (λ·d̂)(b† + b) + ½ (λ·d̂)²` on the hybrid basis.
///
/// The self-energy term is the square of the assembled hybrid `λ·d̂` matrix.
pub fn build_pauli_fierz(mi: &MolecularIntegrals, cav: &CavitySpec, basis: &HybridBasis) -> Result<OperatorMatrix> {
    cav.validate()?;
    if cav.n_b_max != basis.n_b_max {
        return Err(Error::Config(format!("cavity cutoff {} differs from basis cutoff {}", cav.n_b_max, basis.n_b_max)));
    }
    let he = electronic_hamiltonian(mi, basis)?;
    let dd = lift_electronic(basis, &dipole_on_dets(mi, cav, basis)?);
    let bdag = photon_creation(basis.n_b_max);
    let q = lift_photonic(basis, &(&bdag + bdag.adjoint()));
    let nb = lift_photonic(basis, &(&bdag * bdag.adjoint()));

    let mut h = lift_electronic(basis, &he);
    h += nb.scale(cav.omega);
    h -= (&dd * &q).scale((0.5 * cav.omega).sqrt());
    h += (&dd * &dd).scale(0.5);
    let h = (&h + h.adjoint()).map(|z| z * c(0.5));
    let op = OperatorMatrix::new(h);
    if !op.hermitian {
        return Err(Error::Domain("assembled Hamiltonian is not hermitian".into()));
    }
    Ok(op)
}

/// Convenience: build the basis and the Hamiltonian together.
pub fn pauli_fierz_system(mi: &MolecularIntegrals, cav: &CavitySpec) -> Result<(HybridBasis, OperatorMatrix)> {
    let basis = super::build_hybrid_basis(mi.n_orb, mi.n_e, cav.n_b_max)?;
    let h = build_pauli_fierz(mi, cav, &basis)?;
    Ok((basis, h))
}

