use super::pauli::{raising, Pauli, PauliSum, PauliTerm};
use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, ONE};

/// Jordan-Wigner image of `a†_p` on `n` qubits: `Z_0 ⋯ Z_{p−1} (X_p − iY_p)/2`.
pub fn jw_creation(p: usize, n_qubits: usize) -> Result<PauliSum> {
    if p >= n_qubits {
        return Err(Error::IndexOutOfRange { index: p, len: n_qubits });
    }
    let mut letters = vec![Pauli::I; n_qubits];
    for l in letters.iter_mut().take(p) {
        *l = Pauli::Z;
    }
    let string = PauliSum::from_terms(n_qubits, vec![PauliTerm { coeff: ONE, letters }]);
    Ok(string.mul(&raising(p, n_qubits)))
}

/// Dense `a†_k` for every `k` on an `n`-qubit register.
pub fn jw_creation_matrices(n_qubits: usize) -> Vec<CMatrix> {
    (0..n_qubits)
        .map(|k| jw_creation(k, n_qubits).expect("index in range").to_matrix())
        .collect()
}

/// Number, `Ŝ_z` and `Ŝ²` on a fermionic register with interleaved spin orbitals.
pub struct FermionSpinOperators {
    pub number: CMatrix,
    pub s_z: CMatrix,
    pub s_squared: CMatrix,
}

pub fn fermion_spin_operators(n_qubits: usize) -> FermionSpinOperators {
    let a = jw_creation_matrices(n_qubits);
    let d = 1 << n_qubits;
    let mut number = CMatrix::zeros(d, d);
    let mut s_z = CMatrix::zeros(d, d);
    let mut s_plus = CMatrix::zeros(d, d);
    for p in 0..n_qubits / 2 {
        let (up, dn) = (&a[2 * p], &a[2 * p + 1]);
        let n_up = up * up.adjoint();
        let n_dn = dn * dn.adjoint();
        number += &n_up + &n_dn;
        s_z += (&n_up - &n_dn).map(|z| z * c(0.5));
        s_plus += up * dn.adjoint();
    }
    if n_qubits % 2 == 1 {
        let k = &a[n_qubits - 1];
        number += k * k.adjoint();
    }
    let s_squared = s_plus.adjoint() * &s_plus + &s_z * &s_z + &s_z;
    FermionSpinOperators { number, s_z, s_squared }
}
