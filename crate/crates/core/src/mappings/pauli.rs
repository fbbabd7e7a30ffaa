use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::linalg::{c, kron_all, CMatrix, C64, I, ONE, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, ONE]),
            Pauli::X => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
            Pauli::Y => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
            Pauli::Z => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        }
    }

    /// Single-site product `self · other = phase · result`.
    pub fn mul(self, other: Pauli) -> (C64, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, p) | (p, I) => (ONE, p),
            (a, b) if a == b => (ONE, I),
            (X, Y) => (I_UNIT, Z),
            (Y, X) => (-I_UNIT, Z),
            (Y, Z) => (I_UNIT, X),
            (Z, Y) => (-I_UNIT, X),
            (Z, X) => (I_UNIT, Y),
            (X, Z) => (-I_UNIT, Y),
            _ => unreachable!(),
        }
    }
}

const I_UNIT: C64 = I;

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// Coefficient times a tensor product of single-qubit Paulis; letter 0 is the most significant qubit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliTerm {
    pub coeff: C64,
    pub letters: Vec<Pauli>,
}

impl PauliTerm {
    pub fn identity(n: usize, coeff: C64) -> Self {
        Self { coeff, letters: vec![Pauli::I; n] }
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn mul(&self, other: &PauliTerm) -> PauliTerm {
        assert_eq!(self.n_qubits(), other.n_qubits(), "Pauli terms act on different registers");
        let mut coeff = self.coeff * other.coeff;
        let letters = self
            .letters
            .iter()
            .zip(&other.letters)
            .map(|(a, b)| {
                let (ph, p) = a.mul(*b);
                coeff *= ph;
                p
            })
            .collect();
        PauliTerm { coeff, letters }
    }

    pub fn to_matrix(&self) -> CMatrix {
        let factors: Vec<CMatrix> = self.letters.iter().map(|p| p.matrix()).collect();
        kron_all(&factors).map(|z| z * self.coeff)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:+.6}{:+.6}i) ", self.coeff.re, self.coeff.im)?;
        for p in &self.letters {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// Sum of Pauli terms on a fixed register, with like terms merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PauliSum {
    pub n_qubits: usize,
    pub terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self { n_qubits, terms: Vec::new() }
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<PauliTerm>) -> Self {
        let mut s = Self { n_qubits, terms };
        s.simplify();
        s
    }

    /// Merge equal letter strings and drop terms below 1e-14.
    pub fn simplify(&mut self) {
        let mut acc: BTreeMap<Vec<Pauli>, C64> = BTreeMap::new();
        for t in self.terms.drain(..) {
            *acc.entry(t.letters).or_insert(ZERO) += t.coeff;
        }
        self.terms = acc
            .into_iter()
            .filter(|(_, c)| c.norm() > 1e-14)
            .map(|(letters, coeff)| PauliTerm { coeff, letters })
            .collect();
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        PauliSum::from_terms(self.n_qubits, terms)
    }

    pub fn scale(&self, k: C64) -> PauliSum {
        let terms = self.terms.iter().map(|t| PauliTerm { coeff: t.coeff * k, letters: t.letters.clone() }).collect();
        PauliSum::from_terms(self.n_qubits, terms)
    }

    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        PauliSum::from_terms(self.n_qubits, terms)
    }

    pub fn adjoint(&self) -> PauliSum {
        let terms = self.terms.iter().map(|t| PauliTerm { coeff: t.coeff.conj(), letters: t.letters.clone() }).collect();
        PauliSum::from_terms(self.n_qubits, terms)
    }

    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|t| t.coeff.im.abs() < 1e-14)
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(d, d);
        for t in &self.terms {
            m += t.to_matrix();
        }
        m
    }
}

/// `(X − iY)/2 = |1⟩⟨0|` on qubit `q` of `n`.
pub fn raising(q: usize, n: usize) -> PauliSum {
    let mut x = vec![Pauli::I; n];
    x[q] = Pauli::X;
    let mut y = vec![Pauli::I; n];
    y[q] = Pauli::Y;
    PauliSum::from_terms(n, vec![PauliTerm { coeff: c(0.5), letters: x }, PauliTerm { coeff: C64::new(0.0, -0.5), letters: y }])
}
