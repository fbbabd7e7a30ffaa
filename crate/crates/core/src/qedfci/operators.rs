//! Second-quantized operators as dense matrices over a [`HybridBasis`].

use serde::{Deserialize, Serialize};

use super::basis::{spin_orbital, HybridBasis};
use crate::error::{Error, Result};
use crate::linalg::{c, hermiticity_defect, inner, kron, CMatrix, C64, RMatrix};

/// Fermionic ladder operator on spin orbital `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    Create(usize),
    Annihilate(usize),
}

/// Apply a product of ladder operators (rightmost acts first) to a determinant.
///
/// Returns the sign and the resulting determinant, or `None` when the product
/// annihilates it. The phase of `a†_k` counts occupied spin orbitals below `k`.
pub fn apply_string(ops: &[Ladder], det: u64) -> Option<(f64, u64)> {
    let mut d = det;
    let mut sign = 1.0;
    for op in ops.iter().rev() {
        let (k, create) = match *op {
            Ladder::Create(k) => (k, true),
            Ladder::Annihilate(k) => (k, false),
        };
        let bit = 1u64 << k;
        if (d & bit != 0) == create {
            return None;
        }
        if (d & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        d ^= bit;
    }
    Some((sign, d))
}

/// Dense hermitian-tagged operator over a hybrid basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorMatrix {
    pub matrix: CMatrix,
    pub hermitian: bool,
}

impl OperatorMatrix {
    /// Wrap a matrix, tagging it hermitian when its defect is below 1e-12.
    pub fn new(matrix: CMatrix) -> Self {
        let hermitian = matrix.is_square() && hermiticity_defect(&matrix) < 1e-12;
        Self { matrix, hermitian }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.hermitian {
            Ok(())
        } else {
            Err(Error::Domain("operator is not hermitian".into()))
        }
    }
}

/// Electronic operator on the determinant space, from a rule producing
/// `(coefficient, determinant)` images of each determinant.
fn det_operator<F>(basis: &HybridBasis, mut image: F) -> RMatrix
where
    F: FnMut(u64, &mut dyn FnMut(f64, u64)),
{
    let n = basis.n_dets();
    let mut m = RMatrix::zeros(n, n);
    for (j, &det) in basis.dets().iter().enumerate() {
        image(det, &mut |coef, out| {
            if let Some(i) = basis.det_index(out) {
                m[(i, j)] += coef;
            }
        });
    }
    m
}

/// Ladder string on the determinant space. Images outside the N-electron sector are dropped.
pub fn string_on_dets(basis: &HybridBasis, ops: &[Ladder]) -> RMatrix {
    det_operator(basis, |det, push| {
        if let Some((s, d)) = apply_string(ops, det) {
            push(s, d);
        }
    })
}

/// `Σ_pq t_pq Ê_pq` with `Ê_pq = Σ_σ a†_pσ a_qσ`, on the determinant space.
pub fn one_body_on_dets(basis: &HybridBasis, t: &RMatrix) -> RMatrix {
    let n = basis.n_orb;
    det_operator(basis, |det, push| {
        for p in 0..n {
            for q in 0..n {
                let v = t[(p, q)];
                if v == 0.0 {
                    continue;
                }
                for s in 0..2 {
                    let ops = [Ladder::Create(spin_orbital(p, s)), Ladder::Annihilate(spin_orbital(q, s))];
                    if let Some((sign, d)) = apply_string(&ops, det) {
                        push(sign * v, d);
                    }
                }
            }
        }
    })
}

/// Lift a determinant-space operator to the hybrid space as `O ⊗ 1_photon`.
pub fn lift_electronic(basis: &HybridBasis, m: &RMatrix) -> CMatrix {
    kron(&m.map(c), &CMatrix::identity(basis.n_photon_levels(), basis.n_photon_levels()))
}

/// Lift a photon-space operator to the hybrid space as `1_det ⊗ O`.
pub fn lift_photonic(basis: &HybridBasis, m: &CMatrix) -> CMatrix {
    kron(&CMatrix::identity(basis.n_dets(), basis.n_dets()), m)
}

/// Truncated `b†` on levels `0..=n_b_max`.
pub fn photon_creation(n_b_max: usize) -> CMatrix {
    let d = n_b_max + 1;
    let mut m = CMatrix::zeros(d, d);
    for n in 0..n_b_max {
        m[(n + 1, n)] = c(((n + 1) as f64).sqrt());
    }
    m
}

pub fn photon_number(basis: &HybridBasis) -> OperatorMatrix {
    let d = basis.n_photon_levels();
    let n = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(d, |i, _| c(i as f64)));
    OperatorMatrix::new(lift_photonic(basis, &n))
}

/// Projector onto the `n`-photon sector.
pub fn photon_projector(basis: &HybridBasis, n: usize) -> Result<OperatorMatrix> {
    if n > basis.n_b_max {
        return Err(Error::IndexOutOfRange { index: n, len: basis.n_photon_levels() });
    }
    let d = basis.n_photon_levels();
    let mut p = CMatrix::zeros(d, d);
    p[(n, n)] = c(1.0);
    Ok(OperatorMatrix::new(lift_photonic(basis, &p)))
}

pub fn electron_number(basis: &HybridBasis) -> OperatorMatrix {
    let m = det_operator(basis, |det, push| push(det.count_ones() as f64, det));
    OperatorMatrix::new(lift_electronic(basis, &m))
}

/// `n̂_pσ` (σ = 0 for ↑, 1 for ↓).
pub fn spin_orbital_number(basis: &HybridBasis, p: usize, sigma: usize) -> OperatorMatrix {
    let k = spin_orbital(p, sigma);
    let m = string_on_dets(basis, &[Ladder::Create(k), Ladder::Annihilate(k)]);
    OperatorMatrix::new(lift_electronic(basis, &m))
}

pub fn s_z_dets(basis: &HybridBasis) -> RMatrix {
    let n = basis.n_orb;
    det_operator(basis, |det, push| {
        let mut sz = 0.0;
        for p in 0..n {
            sz += 0.5 * (((det >> spin_orbital(p, 0)) & 1) as f64 - ((det >> spin_orbital(p, 1)) & 1) as f64);
        }
        push(sz, det);
    })
}

/// `Ŝ₊ = Σ_p a†_p↑ a_p↓` on the determinant space.
pub fn s_plus_dets(basis: &HybridBasis) -> RMatrix {
    let n = basis.n_orb;
    det_operator(basis, |det, push| {
        for p in 0..n {
            let ops = [Ladder::Create(spin_orbital(p, 0)), Ladder::Annihilate(spin_orbital(p, 1))];
            if let Some((s, d)) = apply_string(&ops, det) {
                push(s, d);
            }
        }
    })
}

/// `Ŝ² = Ŝ₋Ŝ₊ + Ŝ_z² + Ŝ_z` on the determinant space.
pub fn s_squared_dets(basis: &HybridBasis) -> RMatrix {
    let sp = s_plus_dets(basis);
    let sz = s_z_dets(basis);
    sp.transpose() * &sp + &sz * &sz + sz
}

pub fn s_z(basis: &HybridBasis) -> OperatorMatrix {
    OperatorMatrix::new(lift_electronic(basis, &s_z_dets(basis)))
}

pub fn s_squared(basis: &HybridBasis) -> OperatorMatrix {
    OperatorMatrix::new(lift_electronic(basis, &s_squared_dets(basis)))
}

/// Spin-free excitation operator `Ê_pq`.
pub fn excitation(basis: &HybridBasis, p: usize, q: usize) -> OperatorMatrix {
    let mut t = RMatrix::zeros(basis.n_orb, basis.n_orb);
    t[(p, q)] = 1.0;
    OperatorMatrix::new(lift_electronic(basis, &one_body_on_dets(basis, &t)))
}

/// `⟨ψ|O|ψ⟩` for a hermitian operator and normalized state.
pub fn expectation(op: &OperatorMatrix, state: &[C64]) -> Result<f64> {
    op.require_hermitian()?;
    if state.len() != op.dim() {
        return Err(Error::Shape(format!("state has {} amplitudes, operator acts on {}", state.len(), op.dim())));
    }
    let v = inner(state, &crate::linalg::matvec(&op.matrix, state));
    let scale = 1.0 + v.re.abs();
    if v.im.abs() > 1e-10 * scale {
        return Err(Error::Domain(format!("expectation has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

/// Largest `|C_{I,n}|` over determinants for each photon number `n`.
pub fn photon_sector_profile(state: &[C64], basis: &HybridBasis) -> Result<Vec<f64>> {
    if state.len() != basis.dim() {
        return Err(Error::Shape(format!("state has {} amplitudes, basis has {}", state.len(), basis.dim())));
    }
    let nb = basis.n_photon_levels();
    let mut out = vec![0.0_f64; nb];
    for (i, z) in state.iter().enumerate() {
        let n = i % nb;
        out[n] = out[n].max(z.norm());
    }
    Ok(out)
}

/// Mean photon number of a hybrid-basis state.
pub fn mean_photon_number(state: &[C64], basis: &HybridBasis) -> f64 {
    let nb = basis.n_photon_levels();
    state.iter().enumerate().map(|(i, z)| (i % nb) as f64 * z.norm_sqr()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qedfci::build_hybrid_basis;

    #[test]
    fn jw_phase_counts_lower_occupations() {
        // a†_2 on |0,1 occupied⟩ passes two occupied modes.
        assert_eq!(apply_string(&[Ladder::Create(2)], 0b0011), Some((1.0, 0b0111)));
        assert_eq!(apply_string(&[Ladder::Create(1)], 0b0001), Some((-1.0, 0b0011)));
        assert_eq!(apply_string(&[Ladder::Create(0)], 0b0001), None);
        assert_eq!(apply_string(&[Ladder::Annihilate(3)], 0b0001), None);
        // a†_0 a†_1 |vac⟩ = -a†_1 a†_0 |vac⟩
        let ab = apply_string(&[Ladder::Create(0), Ladder::Create(1)], 0).unwrap();
        let ba = apply_string(&[Ladder::Create(1), Ladder::Create(0)], 0).unwrap();
        assert_eq!(ab.1, ba.1);
        assert_eq!(ab.0, -ba.0);
    }

    #[test]
    fn spin_of_closed_shell_and_open_shell() {
        let b = build_hybrid_basis(2, 2, 0).unwrap();
        let s2 = s_squared_dets(&b);
        let hf = b.det_index(0b0011).unwrap();
        assert!(s2[(hf, hf)].abs() < 1e-14);
        // ↑↑ triplet component has S² = 2.
        let t = b.det_index(0b0101).unwrap();
        assert!((s2[(t, t)] - 2.0).abs() < 1e-14);
        let eig = s2.symmetric_eigen();
        let mut vals: Vec<f64> = eig.eigenvalues.iter().map(|v| (v * 1e8).round() / 1e8).collect();
        vals.sort_by(f64::total_cmp);
        assert_eq!(vals, vec![0.0, 0.0, 0.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn projectors_resolve_identity() {
        let b = build_hybrid_basis(2, 2, 3).unwrap();
        let mut sum = CMatrix::zeros(b.dim(), b.dim());
        for n in 0..=3 {
            let p = photon_projector(&b, n).unwrap().matrix;
            assert!(crate::linalg::max_abs(&(&p * &p - &p)) < 1e-15);
            sum += p;
        }
        assert!(crate::linalg::max_abs(&(sum - CMatrix::identity(b.dim(), b.dim()))) < 1e-15);
        assert!(photon_projector(&b, 4).is_err());
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let b = build_hybrid_basis(1, 1, 1).unwrap();
        let op = OperatorMatrix::new(lift_photonic(&b, &photon_creation(1)));
        assert!(!op.hermitian);
        let psi = vec![c(1.0), c(0.0), c(0.0), c(0.0)];
        assert!(expectation(&op, &psi).is_err());
    }
}
