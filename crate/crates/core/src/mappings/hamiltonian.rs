use super::boson::{boson_creation_qubit, boson_creation_qudit, boson_ops_qumode};
use super::fermion::{fermion_spin_operators, jw_creation_matrices};
use super::layout::{Platform, RegisterLayout};
use crate::error::{Error, Result};
use crate::integrals::MolecularIntegrals;
use crate::linalg::{c, kron, CMatrix, RMatrix};
use crate::qedfci::{CavitySpec, OperatorMatrix};

/// Mapped `b†` on the bosonic block of a layout.
pub fn boson_creation_for(layout: &RegisterLayout) -> Result<CMatrix> {
    match layout.platform {
        Platform::Qubit => Ok(boson_creation_qubit(layout.photon_cutoff)?.to_matrix()),
        Platform::Qudit => boson_creation_qudit(layout.photon_cutoff + 1),
        Platform::Qumode => Ok(boson_ops_qumode(layout.photon_cutoff)?.0),
    }
}

/// `m ⊗ 1_boson`.
pub fn lift_fermionic(layout: &RegisterLayout, m: &CMatrix) -> CMatrix {
    kron(m, &CMatrix::identity(layout.boson_dim(), layout.boson_dim()))
}

/// `1_fermion ⊗ m`.
pub fn lift_bosonic(layout: &RegisterLayout, m: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(layout.fermion_dim(), layout.fermion_dim()), m)
}

/// Mapped `Σ_pq t_pq Σ_σ a†_pσ a_qσ` on the fermionic block.
pub fn mapped_one_body(a: &[CMatrix], t: &RMatrix) -> CMatrix {
    let d = a[0].nrows();
    let mut m = CMatrix::zeros(d, d);
    let n = t.nrows();
    for p in 0..n {
        for q in 0..n {
            if t[(p, q)] == 0.0 {
                continue;
            }
            for s in 0..2 {
                m += (&a[2 * p + s] * a[2 * q + s].adjoint()).map(|z| z * c(t[(p, q)]));
            }
        }
    }
    m
}

/// Mapped electronic Hamiltonian (including `E_nuc`) on the fermionic block.
pub fn mapped_electronic(mi: &MolecularIntegrals, a: &[CMatrix]) -> CMatrix {
    let n = mi.n_orb;
    let d = a[0].nrows();
    let mut h = mapped_one_body(a, &mi.h);
    let ad: Vec<CMatrix> = a.iter().map(|m| m.adjoint()).collect();
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
                            let term = &a[2 * p + sig] * &a[2 * r + tau] * &ad[2 * s + tau] * &ad[2 * q + sig];
                            h += term.map(|z| z * c(0.5 * g));
                        }
                    }
                }
            }
        }
    }
    h += CMatrix::identity(d, d).map(|z| z * c(mi.e_nuc));
    h
}

/// Pauli-Fierz Hamiltonian mapped term by term onto a platform register.
pub fn assemble_platform_hamiltonian(mi: &MolecularIntegrals, cav: &CavitySpec, layout: &RegisterLayout) -> Result<OperatorMatrix> {
    cav.validate()?;
    if layout.n_fermion_qubits != 2 * mi.n_orb {
        return Err(Error::Layout(format!(
            "{} orbitals need {} fermionic qubits, layout has {}",
            mi.n_orb,
            2 * mi.n_orb,
            layout.n_fermion_qubits
        )));
    }
    if cav.n_b_max != layout.photon_cutoff {
        return Err(Error::Config(format!(
            "cavity cutoff {} does not match the {} register cutoff {}",
            cav.n_b_max, layout.platform, layout.photon_cutoff
        )));
    }
    let dip = mi.dipole.as_ref().ok_or(Error::AbsentDipole)?;
    let a = jw_creation_matrices(layout.n_fermion_qubits);
    let he = mapped_electronic(mi, &a);
    let d = mapped_one_body(&a, &dip.projected(cav.field(), mi.n_e));
    let bdag = boson_creation_for(layout)?;
    let b = bdag.adjoint();

    let mut h = lift_fermionic(layout, &(he + (&d * &d).map(|z| z * c(0.5))));
    h += lift_bosonic(layout, &(&bdag * &b)).map(|z| z * c(cav.omega));
    h -= kron(&d, &(&bdag + &b)).map(|z| z * c((0.5 * cav.omega).sqrt()));
    let h = (&h + h.adjoint()).map(|z| z * c(0.5));
    Ok(OperatorMatrix::new(h))
}

/// Mapped observables on the full register.
#[derive(Debug, Clone)]
pub struct PlatformObservables {
    pub electron_number: CMatrix,
    pub s_z: CMatrix,
    pub s_squared: CMatrix,
    pub photon_number: CMatrix,
}

pub fn platform_observables(layout: &RegisterLayout) -> Result<PlatformObservables> {
    let f = fermion_spin_operators(layout.n_fermion_qubits);
    let bdag = boson_creation_for(layout)?;
    Ok(PlatformObservables {
        electron_number: lift_fermionic(layout, &f.number),
        s_z: lift_fermionic(layout, &f.s_z),
        s_squared: lift_fermionic(layout, &f.s_squared),
        photon_number: lift_bosonic(layout, &(&bdag * bdag.adjoint())),
    })
}

/// Restrict a register operator to the rows and columns listed in `embedding`.
pub fn restrict(m: &CMatrix, embedding: &[usize]) -> CMatrix {
    let n = embedding.len();
    CMatrix::from_fn(n, n, |i, j| m[(embedding[i], embedding[j])])
}
