use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Operators are stored dense, so memory grows with the square of the basis size.
pub const DEFAULT_CAPACITY: usize = 8192;

/// Spin-orbital index of spatial orbital `p` with spin `sigma` (0 = ↑, 1 = ↓).
#[inline]
pub fn spin_orbital(p: usize, sigma: usize) -> usize {
    2 * p + sigma
}

/// Slater determinant ⊗ photon-number basis.
///
/// Determinants are bitmasks with bit `2p + σ` set when spin orbital `(p, σ)`
/// is occupied, listed in ascending integer order. States are ordered
/// determinant-major with the photon number running fastest:
/// `index = det_index · (n_b_max + 1) + n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HybridBasis {
    pub n_orb: usize,
    pub n_e: usize,
    pub n_b_max: usize,
    dets: Vec<u64>,
    #[serde(skip)]
    lookup: HashMap<u64, usize>,
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

pub fn build_hybrid_basis(n_orb: usize, n_e: usize, n_b_max: usize) -> Result<HybridBasis> {
    HybridBasis::with_capacity(n_orb, n_e, n_b_max, DEFAULT_CAPACITY)
}

impl HybridBasis {
    pub fn with_capacity(n_orb: usize, n_e: usize, n_b_max: usize, cap: usize) -> Result<Self> {
        let n_so = 2 * n_orb;
        if n_so > 64 {
            return Err(Error::Domain(format!("{n_orb} orbitals exceed the 32-orbital bitmask limit")));
        }
        if n_e > n_so {
            return Err(Error::Domain(format!("{n_e} electrons do not fit {n_so} spin orbitals")));
        }
        let size = binomial(n_so, n_e)
            .and_then(|d| d.checked_mul(n_b_max.checked_add(1)?))
            .unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::Capacity { size, cap });
        }
        let mut dets = Vec::with_capacity(size / (n_b_max + 1));
        // Gosper's hack enumerates fixed-popcount masks in ascending order.
        let mut m: u64 = if n_e == 64 { u64::MAX } else { (1u64 << n_e) - 1 };
        loop {
            dets.push(m);
            if n_e == 0 {
                break;
            }
            let c = m & m.wrapping_neg();
            let r = m.wrapping_add(c);
            if r == 0 {
                break;
            }
            let next = (((r ^ m) >> 2) / c) | r;
            if n_so < 64 && next >> n_so != 0 {
                break;
            }
            m = next;
        }
        let lookup = dets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
        Ok(Self { n_orb, n_e, n_b_max, dets, lookup })
    }

    pub fn n_spin_orbitals(&self) -> usize {
        2 * self.n_orb
    }

    pub fn n_dets(&self) -> usize {
        self.dets.len()
    }

    pub fn n_photon_levels(&self) -> usize {
        self.n_b_max + 1
    }

    pub fn dim(&self) -> usize {
        self.n_dets() * self.n_photon_levels()
    }

    pub fn dets(&self) -> &[u64] {
        &self.dets
    }

    pub fn det(&self, i: usize) -> u64 {
        self.dets[i]
    }

    pub fn det_index(&self, det: u64) -> Option<usize> {
        if self.lookup.is_empty() && !self.dets.is_empty() {
            return self.dets.iter().position(|&d| d == det);
        }
        self.lookup.get(&det).copied()
    }

    #[inline]
    pub fn index(&self, det_index: usize, photons: usize) -> usize {
        det_index * self.n_photon_levels() + photons
    }

    /// Inverse of [`HybridBasis::index`]: `(determinant bitmask, photon number)`.
    pub fn state(&self, index: usize) -> (u64, usize) {
        let nb = self.n_photon_levels();
        (self.dets[index / nb], index % nb)
    }

    /// Closed-shell reference with the lowest `n_e / 2` spatial orbitals doubly occupied.
    pub fn hartree_fock_det(&self) -> u64 {
        if self.n_e == 0 {
            0
        } else {
            (1u64 << self.n_e) - 1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(build_hybrid_basis(2, 2, 3).unwrap().dim(), 24);
        assert_eq!(build_hybrid_basis(2, 2, 0).unwrap().dim(), 6);
        assert_eq!(build_hybrid_basis(3, 2, 1).unwrap().dim(), 30);
        assert_eq!(build_hybrid_basis(2, 0, 2).unwrap().dim(), 3);
        assert_eq!(build_hybrid_basis(2, 4, 0).unwrap().dim(), 1);
    }

    #[test]
    fn ordering_and_maps() {
        let b = build_hybrid_basis(2, 2, 3).unwrap();
        assert_eq!(b.dets(), &[0b0011, 0b0101, 0b0110, 0b1001, 0b1010, 0b1100]);
        for i in 0..b.dim() {
            let (d, n) = b.state(i);
            assert_eq!(b.index(b.det_index(d).unwrap(), n), i);
        }
        assert_eq!(b.state(5), (0b0101, 1));
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(build_hybrid_basis(16, 16, 100), Err(Error::Capacity { .. })));
        assert!(HybridBasis::with_capacity(2, 2, 3, 23).is_err());
    }
}
