use serde::{Deserialize, Serialize};

use super::basis::HybridBasis;
use super::hamiltonian::{pauli_fierz_system, CavitySpec};
use super::operators::{mean_photon_number, s_squared_dets, OperatorMatrix};
use crate::error::{Error, Result};
use crate::integrals::MolecularIntegrals;
use crate::linalg::{c, hermitian_eigen_blocked, inner, matvec, norm, CMatrix, C64, ZERO};

/// Eigenvalues closer than this are treated as one degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-8;
const RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    /// Ascending, hartree.
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<C64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Mean of the lowest `n` energies.
    pub fn ensemble_energy(&self, n: usize) -> f64 {
        self.energies[..n].iter().sum::<f64>() / n as f64
    }
}

/// Lowest `k` eigenpairs of a hermitian operator.
pub fn diagonalize(h: &OperatorMatrix, k: usize) -> Result<Spectrum> {
    diagonalize_with_reference(h, k, None)
}

/// As [`diagonalize`], with degenerate clusters resolved against `reference`.
///
/// Inside a cluster, reference vectors are projected onto the cluster in order
/// and orthonormalized; remaining directions are ordered by the basis index of
/// their largest amplitude.
pub fn diagonalize_with_reference(h: &OperatorMatrix, k: usize, reference: Option<&[Vec<C64>]>) -> Result<Spectrum> {
    h.require_hermitian()?;
    let q = CMatrix::identity(h.dim(), h.dim());
    diagonalize_in_subspace(h, &q, k, reference)
}

/// Lowest `k` eigenpairs of `h` restricted to the span of the orthonormal columns of `q`.
pub fn diagonalize_in_subspace(
    h: &OperatorMatrix,
    q: &CMatrix,
    k: usize,
    reference: Option<&[Vec<C64>]>,
) -> Result<Spectrum> {
    h.require_hermitian()?;
    if q.nrows() != h.dim() {
        return Err(Error::Shape(format!("subspace vectors have length {}, operator dimension {}", q.nrows(), h.dim())));
    }
    let m = q.ncols();
    if k > m {
        return Err(Error::Domain(format!("asked for {k} states from a {m}-dimensional space")));
    }
    let hq = q.adjoint() * &h.matrix * q;
    let (vals, vecs) = hermitian_eigen_blocked(&hq);
    let lifted = q * vecs;
    let columns: Vec<Vec<C64>> = (0..m).map(|j| lifted.column(j).iter().copied().collect()).collect();

    let mut energies = Vec::with_capacity(k);
    let mut vectors: Vec<Vec<C64>> = Vec::with_capacity(k);
    let mut start = 0;
    while start < k {
        let mut end = start + 1;
        while end < m && (vals[end] - vals[start]).abs() < DEGENERACY_TOL * (1.0 + vals[start].abs()) {
            end += 1;
        }
        let cluster = &columns[start..end];
        let ordered = order_cluster(cluster, reference);
        for v in ordered {
            if energies.len() == k {
                break;
            }
            let hv = matvec(&h.matrix, &v);
            energies.push(inner(&v, &hv).re);
            vectors.push(v);
        }
        start = end;
    }
    for (e, v) in energies.iter().zip(&vectors) {
        let hv = matvec(&h.matrix, v);
        let res: f64 = hv.iter().zip(v).map(|(a, b)| (a - b * e).norm_sqr()).sum::<f64>().sqrt();
        if res > RESIDUAL_TOL * (1.0 + e.abs()) {
            return Err(Error::Domain(format!("eigenpair residual {res:e} exceeds tolerance")));
        }
    }
    Ok(Spectrum { energies, vectors })
}

fn argmax_abs(v: &[C64]) -> usize {
    let mut best = 0;
    for (i, z) in v.iter().enumerate() {
        if z.norm() > v[best].norm() + 1e-12 {
            best = i;
        }
    }
    best
}

fn orthonormalize_against(v: &mut Vec<C64>, basis: &[Vec<C64>]) -> f64 {
    for _ in 0..2 {
        for b in basis {
            let ov = inner(b, v);
            for (x, y) in v.iter_mut().zip(b) {
                *x -= ov * y;
            }
        }
    }
    let n = norm(v);
    if n > 0.0 {
        for x in v.iter_mut() {
            *x /= n;
        }
    }
    n
}

fn order_cluster(cluster: &[Vec<C64>], reference: Option<&[Vec<C64>]>) -> Vec<Vec<C64>> {
    if cluster.len() == 1 {
        return cluster.to_vec();
    }
    let mut chosen: Vec<Vec<C64>> = Vec::with_capacity(cluster.len());
    if let Some(refs) = reference {
        for r in refs {
            if chosen.len() == cluster.len() || r.len() != cluster[0].len() {
                break;
            }
            let mut p = vec![ZERO; r.len()];
            for c in cluster {
                let ov = inner(c, r);
                for (x, y) in p.iter_mut().zip(c) {
                    *x += ov * y;
                }
            }
            if orthonormalize_against(&mut p, &chosen) > 1e-6 {
                crate::linalg::fix_phase(&mut p);
                chosen.push(p);
            }
        }
    }
    let mut rest: Vec<Vec<C64>> = Vec::new();
    for c in cluster {
        if chosen.len() + rest.len() == cluster.len() {
            break;
        }
        let mut v = c.clone();
        let all: Vec<Vec<C64>> = chosen.iter().chain(rest.iter()).cloned().collect();
        if orthonormalize_against(&mut v, &all) > 1e-6 {
            crate::linalg::fix_phase(&mut v);
            rest.push(v);
        }
    }
    rest.sort_by_key(|v| argmax_abs(v));
    chosen.extend(rest);
    chosen
}

/// Orthonormal basis of the hybrid-space subspace with total spin `s`.
///
/// Columns are spin eigenvectors on the determinants times one photon level,
/// so each column lies in a single photon sector.
pub fn spin_subspace(basis: &HybridBasis, s: f64) -> CMatrix {
    let target = s * (s + 1.0);
    let (vals, vecs) = hermitian_eigen_blocked(&s_squared_dets(basis).map(c));
    let keep: Vec<usize> = (0..vals.len()).filter(|&i| (vals[i] - target).abs() < 1e-6).collect();
    let levels = basis.n_photon_levels();
    let mut q = CMatrix::zeros(basis.dim(), keep.len() * levels);
    for (j, &i) in keep.iter().enumerate() {
        for n in 0..levels {
            for d in 0..basis.n_dets() {
                q[(basis.index(d, n), j * levels + n)] = vecs[(d, i)];
            }
        }
    }
    q
}

/// Lowest `k` singlet polaritonic states.
pub fn singlet_spectrum(
    h: &OperatorMatrix,
    basis: &HybridBasis,
    k: usize,
    reference: Option<&[Vec<C64>]>,
) -> Result<Spectrum> {
    diagonalize_in_subspace(h, &spin_subspace(basis, 0.0), k, reference)
}

/// Lowest `k` singlet polaritonic states for a molecule in a cavity.
pub fn polaritonic_states(mi: &MolecularIntegrals, cav: &CavitySpec, k: usize) -> Result<(HybridBasis, OperatorMatrix, Spectrum)> {
    let (basis, h) = pauli_fierz_system(mi, cav)?;
    let spec = singlet_spectrum(&h, &basis, k, None)?;
    Ok((basis, h, spec))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRow {
    pub n_b_max: usize,
    pub energies: Vec<f64>,
}

/// Lowest three singlet energies at each photon cutoff.
pub fn truncation_convergence(mi: &MolecularIntegrals, cav: &CavitySpec, cutoffs: &[usize]) -> Result<Vec<TruncationRow>> {
    if cutoffs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("cutoffs must be strictly ascending".into()));
    }
    cutoffs
        .iter()
        .map(|&nb| {
            let (_, _, spec) = polaritonic_states(mi, &cav.with_cutoff(nb), 3)?;
            Ok(TruncationRow { n_b_max: nb, energies: spec.energies })
        })
        .collect()
}

/// First and second excited singlets of H₂/STO-3G at `r` Å: `(E₂ − E₁, ⟨n⟩₁)`.
pub fn excited_pair(r_angstrom: f64, theta_z: f64, cav: &CavitySpec) -> Result<(f64, f64)> {
    let (mi, _) = crate::integrals::h2_sto3g(r_angstrom, theta_z)?;
    let (basis, _, spec) = polaritonic_states(&mi, cav, 3)?;
    Ok((spec.energies[2] - spec.energies[1], mean_photon_number(&spec.vectors[1], &basis)))
}

/// Bond length in `[r_lo, r_hi]` Å where the first excited singlet changes from
/// mostly one-photon to mostly zero-photon character.
///
/// Bisects the signed gap `(E₂ − E₁)·sign(⟨n⟩₁ − ½)`. With no light-matter
/// coupling this is the exact crossing of the two dressed states.
pub fn resonance_bond_length(theta_z: f64, cav: &CavitySpec, r_lo: f64, r_hi: f64, tol: f64) -> Result<f64> {
    let signed = |r: f64| -> Result<f64> {
        let (gap, n1) = excited_pair(r, theta_z, cav)?;
        Ok(if n1 >= 0.5 { gap } else { -gap })
    };
    let (mut a, mut b) = (r_lo, r_hi);
    let (fa, fb) = (signed(a)?, signed(b)?);
    if fa.signum() == fb.signum() {
        return Err(Error::Domain(format!("no photon-character exchange between {r_lo} and {r_hi} Å")));
    }
    while b - a > tol {
        let m = 0.5 * (a + b);
        if signed(m)?.signum() == fa.signum() {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}
