use serde::{Deserialize, Serialize};

use super::gaussian::{AOIntegrals, Eri};
use crate::error::{Error, Result};
use crate::linalg::RMatrix;

/// Dipole integrals in the MO basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DipoleIntegrals {
    /// `d^e_pq = -⟨φ_p| r_c |φ_q⟩` for c = x, y, z.
    pub electronic: [RMatrix; 3],
    /// `Σ_A Z_A r_A`.
    pub nuclear: [f64; 3],
}

impl DipoleIntegrals {
    /// One-body coefficients of `λ·d̂`, including the nuclear shift `δ_pq λ·d_nuc / N_e`.
    pub fn projected(&self, field: [f64; 3], n_e: usize) -> RMatrix {
        let n = self.electronic[0].nrows();
        let mut m = RMatrix::zeros(n, n);
        for c in 0..3 {
            m += self.electronic[c].scale(field[c]);
        }
        if n_e > 0 {
            let shift: f64 = (0..3).map(|c| field[c] * self.nuclear[c]).sum::<f64>() / n_e as f64;
            for p in 0..n {
                m[(p, p)] += shift;
            }
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MolecularIntegrals {
    pub n_orb: usize,
    pub n_e: usize,
    pub ms2: i32,
    pub h: RMatrix,
    pub g: Eri,
    pub dipole: Option<DipoleIntegrals>,
    pub e_nuc: f64,
}

impl MolecularIntegrals {
    /// Closed-shell determinant energy with the lowest `n_e / 2` orbitals doubly occupied.
    pub fn hf_energy(&self) -> f64 {
        let n_occ = self.n_e / 2;
        let mut e = self.e_nuc;
        for i in 0..n_occ {
            e += 2.0 * self.h[(i, i)];
            for j in 0..n_occ {
                e += 2.0 * self.g.get(i, i, j, j) - self.g.get(i, j, j, i);
            }
        }
        e
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_orb;
        if self.h.nrows() != n || self.h.ncols() != n || self.g.n != n {
            return Err(Error::Shape(format!("integrals do not match n_orb = {n}")));
        }
        if self.n_e > 2 * n {
            return Err(Error::Domain(format!("{} electrons exceed 2·{n} spin orbitals", self.n_e)));
        }
        if (&self.h - self.h.transpose()).amax() > 1e-10 {
            return Err(Error::Domain("one-electron integrals are not symmetric".into()));
        }
        if !self.h.iter().chain(self.g.data.iter()).all(|v| v.is_finite()) || !self.e_nuc.is_finite() {
            return Err(Error::Domain("non-finite integral".into()));
        }
        if let Some(d) = &self.dipole {
            for m in &d.electronic {
                if m.nrows() != n || m.ncols() != n {
                    return Err(Error::Shape("dipole block has the wrong size".into()));
                }
            }
        }
        Ok(())
    }

    /// Flip the sign of orbital `p` in every integral.
    pub fn flip_orbital_phase(&self, p: usize) -> Self {
        let n = self.n_orb;
        let sign = |i: usize| if i == p { -1.0 } else { 1.0 };
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out.h[(i, j)] *= sign(i) * sign(j);
                for k in 0..n {
                    for l in 0..n {
                        let idx = out.g.idx(i, j, k, l);
                        out.g.data[idx] *= sign(i) * sign(j) * sign(k) * sign(l);
                    }
                }
            }
        }
        if let Some(d) = &mut out.dipole {
            for m in &mut d.electronic {
                for i in 0..n {
                    for j in 0..n {
                        m[(i, j)] *= sign(i) * sign(j);
                    }
                }
            }
        }
        out
    }
}

/// Four-index transform of AO integrals into the orbital basis given by the
/// columns of `coeffs`.
pub fn transform_to_mo(ao: &AOIntegrals, coeffs: &RMatrix, n_e: usize) -> Result<MolecularIntegrals> {
    let n_ao = ao.n_ao();
    if coeffs.nrows() != n_ao {
        return Err(Error::Shape(format!("coefficients have {} rows, basis has {n_ao}", coeffs.nrows())));
    }
    let n = coeffs.ncols();
    let ct = coeffs.transpose();
    let h = &ct * ao.core_hamiltonian() * coeffs;
    let electronic = [0, 1, 2].map(|k| (&ct * &ao.position[k] * coeffs).scale(-1.0));

    // Quarter transforms, one index at a time.
    let mut t1 = vec![0.0; n * n_ao * n_ao * n_ao];
    for p in 0..n {
        for b in 0..n_ao {
            for c in 0..n_ao {
                for d in 0..n_ao {
                    let mut acc = 0.0;
                    for a in 0..n_ao {
                        acc += coeffs[(a, p)] * ao.eri.get(a, b, c, d);
                    }
                    t1[((p * n_ao + b) * n_ao + c) * n_ao + d] = acc;
                }
            }
        }
    }
    let mut t2 = vec![0.0; n * n * n_ao * n_ao];
    for p in 0..n {
        for q in 0..n {
            for c in 0..n_ao {
                for d in 0..n_ao {
                    let mut acc = 0.0;
                    for b in 0..n_ao {
                        acc += coeffs[(b, q)] * t1[((p * n_ao + b) * n_ao + c) * n_ao + d];
                    }
                    t2[((p * n + q) * n_ao + c) * n_ao + d] = acc;
                }
            }
        }
    }
    let mut t3 = vec![0.0; n * n * n * n_ao];
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for d in 0..n_ao {
                    let mut acc = 0.0;
                    for c in 0..n_ao {
                        acc += coeffs[(c, r)] * t2[((p * n + q) * n_ao + c) * n_ao + d];
                    }
                    t3[((p * n + q) * n + r) * n_ao + d] = acc;
                }
            }
        }
    }
    let mut g = Eri::zeros(n);
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let mut acc = 0.0;
                    for d in 0..n_ao {
                        acc += coeffs[(d, s)] * t3[((p * n + q) * n + r) * n_ao + d];
                    }
                    let i = g.idx(p, q, r, s);
                    g.data[i] = acc;
                }
            }
        }
    }
    let mi = MolecularIntegrals {
        n_orb: n,
        n_e,
        ms2: 0,
        h,
        g,
        dipole: Some(DipoleIntegrals { electronic, nuclear: ao.nuclear_dipole }),
        e_nuc: ao.e_nuc,
    };
    mi.validate()?;
    Ok(mi)
}
