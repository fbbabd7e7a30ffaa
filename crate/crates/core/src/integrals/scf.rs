use serde::{Deserialize, Serialize};

use super::gaussian::AOIntegrals;
use crate::error::{Error, Result};
use crate::linalg::RMatrix;

pub const SCF_TOLERANCE: f64 = 1e-10;
pub const SCF_MAX_CYCLES: usize = 200;
const DAMPING: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScfResult {
    /// MO coefficients, one orbital per column, ascending orbital energy.
    pub coefficients: RMatrix,
    pub orbital_energies: Vec<f64>,
    pub energy: f64,
    pub cycles: usize,
}

fn sym_eigen(m: &RMatrix) -> (Vec<f64>, RMatrix) {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = RMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        vecs.set_column(col, &eig.eigenvectors.column(k));
    }
    (vals, vecs)
}

/// Symmetric orthogonalizer S^{-1/2}.
fn inverse_sqrt(s: &RMatrix) -> Result<RMatrix> {
    let (vals, vecs) = sym_eigen(s);
    if vals[0] <= 1e-10 {
        return Err(Error::SingularGeometry(format!("overlap matrix is not positive definite (λ_min = {:e})", vals[0])));
    }
    let d = RMatrix::from_diagonal(&nalgebra::DVector::from_iterator(vals.len(), vals.iter().map(|v| 1.0 / v.sqrt())));
    Ok(&vecs * d * vecs.transpose())
}

fn density(c: &RMatrix, n_occ: usize) -> RMatrix {
    let occ = c.columns(0, n_occ);
    (&occ * occ.transpose()).scale(2.0)
}

fn fock(ao: &AOIntegrals, hcore: &RMatrix, d: &RMatrix) -> RMatrix {
    let n = ao.n_ao();
    let mut f = hcore.clone();
    for p in 0..n {
        for q in 0..n {
            let mut g = 0.0;
            for r in 0..n {
                for s in 0..n {
                    g += d[(r, s)] * (ao.eri.get(p, q, r, s) - 0.5 * ao.eri.get(p, r, q, s));
                }
            }
            f[(p, q)] += g;
        }
    }
    f
}

/// Fix each orbital's sign so its largest coefficient is positive.
fn fix_signs(c: &mut RMatrix) {
    for j in 0..c.ncols() {
        let mut best = 0;
        for i in 0..c.nrows() {
            if c[(i, j)].abs() > c[(best, j)].abs() + 1e-10 {
                best = i;
            }
        }
        if c[(best, j)] < 0.0 {
            let mut col = c.column_mut(j);
            col.neg_mut();
        }
    }
}

/// Closed-shell Roothaan-Hall SCF with simple density damping.
pub fn run_rhf(ao: &AOIntegrals, n_e: usize) -> Result<ScfResult> {
    let n = ao.n_ao();
    if n_e % 2 != 0 {
        return Err(Error::Domain(format!("restricted HF needs an even electron count, got {n_e}")));
    }
    if n_e > 2 * n {
        return Err(Error::Domain(format!("{n_e} electrons do not fit in {n} orbitals")));
    }
    let n_occ = n_e / 2;
    let x = inverse_sqrt(&ao.overlap)?;
    let hcore = ao.core_hamiltonian();

    let solve = |f: &RMatrix| {
        let fp = x.transpose() * f * &x;
        let (eps, cp) = sym_eigen(&fp);
        let mut c = &x * cp;
        fix_signs(&mut c);
        (eps, c)
    };

    let (_, c0) = solve(&hcore);
    let mut d = density(&c0, n_occ);
    let mut delta = f64::INFINITY;
    for cycle in 1..=SCF_MAX_CYCLES {
        let f = fock(ao, &hcore, &d);
        let (eps, c) = solve(&f);
        let d_new = density(&c, n_occ);
        delta = (&d_new - &d).amax();
        if delta < SCF_TOLERANCE {
            let f = fock(ao, &hcore, &d_new);
            let energy = 0.5 * d_new.component_mul(&(&hcore + &f)).sum() + ao.e_nuc;
            return Ok(ScfResult { coefficients: c, orbital_energies: eps, energy, cycles: cycle });
        }
        d = d_new.scale(1.0 - DAMPING) + d.scale(DAMPING);
    }
    Err(Error::ScfNotConverged { cycles: SCF_MAX_CYCLES, delta })
}
