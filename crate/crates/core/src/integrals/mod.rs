//! Molecular integrals for H₂/STO-3G and FCIDUMP interchange.

mod basis;
mod fcidump;
mod gaussian;
mod mo;
mod scf;

pub use basis::{Atom, BasisSpec, Geometry, ShellTemplate, ANGSTROM_TO_BOHR};
pub use fcidump::{format_dipole, format_fcidump, load_fcidump, parse_dipole, parse_fcidump, write_fcidump, Header};
pub use gaussian::{boys0, compute_ao_integrals, AOIntegrals, Eri};
pub use mo::{transform_to_mo, DipoleIntegrals, MolecularIntegrals};
pub use scf::{run_rhf, ScfResult, SCF_MAX_CYCLES, SCF_TOLERANCE};

use crate::error::Result;

/// Geometry → AO integrals → RHF → MO integrals, with the HF energy alongside.
pub fn h2_sto3g(r_angstrom: f64, theta_z: f64) -> Result<(MolecularIntegrals, ScfResult)> {
    let geometry = Geometry::h2_angstrom(r_angstrom, theta_z)?;
    let ao = compute_ao_integrals(&geometry, &BasisSpec::sto3g())?;
    let scf = run_rhf(&ao, 2)?;
    let mi = transform_to_mo(&ao, &scf.coefficients, 2)?;
    Ok((mi, scf))
}
