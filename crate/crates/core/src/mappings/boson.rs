use serde::{Deserialize, Serialize};

use super::pauli::{raising, PauliSum};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GellMannKind {
    X,
    Y,
}

/// Generalized Gell-Mann matrix on a `d`-level unit, coupling levels `l < l2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GellMann {
    pub d: usize,
    pub l: usize,
    pub l2: usize,
    pub kind: GellMannKind,
}

impl GellMann {
    pub fn new(d: usize, l: usize, l2: usize, kind: GellMannKind) -> Result<Self> {
        if !(l < l2 && l2 < d) {
            return Err(Error::Domain(format!("Gell-Mann indices need 0 ≤ l < l' < d, got ({l}, {l2}) at d = {d}")));
        }
        Ok(Self { d, l, l2, kind })
    }

    /// `Λ^X = |l⟩⟨l'| + |l'⟩⟨l|`, `Λ^Y = −i|l⟩⟨l'| + i|l'⟩⟨l|`.
    pub fn matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.d, self.d);
        match self.kind {
            GellMannKind::X => {
                m[(self.l, self.l2)] = c(1.0);
                m[(self.l2, self.l)] = c(1.0);
            }
            GellMannKind::Y => {
                m[(self.l, self.l2)] = -I;
                m[(self.l2, self.l)] = I;
            }
        }
        m
    }
}

/// Truncated creation operator on levels `0..=n_max`.
pub fn ladder_creation(n_max: usize) -> CMatrix {
    let d = n_max + 1;
    CMatrix::from_fn(d, d, |i, j| if i == j + 1 { c((i as f64).sqrt()) } else { c(0.0) })
}

/// One-hot boson creation on `n_b_max + 1` qubits: `Σ_q √(q+1) |1⟩⟨0|_{q+1} |0⟩⟨1|_q`.
///
/// Qubit `q` flags photon number `q`, so `b†|100⟩ = |010⟩` and `b†|010⟩ = √2 |001⟩`.
pub fn boson_creation_qubit(n_b_max: usize) -> Result<PauliSum> {
    if n_b_max < 1 {
        return Err(Error::Domain("one-hot boson encoding needs n_b_max ≥ 1".into()));
    }
    let n = n_b_max + 1;
    let mut out = PauliSum::zero(n);
    for q in 0..n_b_max {
        let term = raising(q + 1, n).mul(&raising(q, n).adjoint()).scale(c(((q + 1) as f64).sqrt()));
        out = out.add(&term);
    }
    Ok(out)
}

/// Qudit boson creation `Σ_l (√(l+1)/2)(Λ^X_{l,l+1} − iΛ^Y_{l,l+1})`.
pub fn boson_creation_qudit(d: usize) -> Result<CMatrix> {
    if d < 2 {
        return Err(Error::Domain(format!("qudit dimension must be ≥ 2, got {d}")));
    }
    let mut m = CMatrix::zeros(d, d);
    for l in 0..d - 1 {
        let x = GellMann::new(d, l, l + 1, GellMannKind::X)?.matrix();
        let y = GellMann::new(d, l, l + 1, GellMannKind::Y)?.matrix();
        let w = c(((l + 1) as f64).sqrt() / 2.0);
        m += (x - y.map(|z| z * I)).map(|z| z * w);
    }
    Ok(m)
}

/// Truncated Fock-space `(b†, b)` on levels `0..=n_cut`.
pub fn boson_ops_qumode(n_cut: usize) -> Result<(CMatrix, CMatrix)> {
    if n_cut < 1 {
        return Err(Error::Domain("qumode cutoff must be ≥ 1".into()));
    }
    let bdag = ladder_creation(n_cut);
    let b = bdag.adjoint();
    Ok((bdag, b))
}

/// Register index of the one-hot state for photon number `n` on `n_qubits` qubits.
pub fn one_hot_index(n: usize, n_qubits: usize) -> usize {
    1usize << (n_qubits - 1 - n)
}

/// Restrict a one-hot qubit operator to the one-hot subspace, ordered by photon number.
pub fn restrict_one_hot(m: &CMatrix, n_qubits: usize) -> CMatrix {
    let idx: Vec<usize> = (0..n_qubits).map(|n| one_hot_index(n, n_qubits)).collect();
    CMatrix::from_fn(n_qubits, n_qubits, |i, j| m[(idx[i], idx[j])])
}
