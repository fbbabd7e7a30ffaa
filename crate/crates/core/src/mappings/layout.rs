use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::boson::one_hot_index;
use crate::error::{Error, Result};
use crate::qedfci::HybridBasis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Platform {
    Qubit,
    Qudit,
    Qumode,
}

impl Platform {
    pub const ALL: [Platform; 3] = [Platform::Qubit, Platform::Qudit, Platform::Qumode];

    pub fn name(self) -> &'static str {
        match self {
            Platform::Qubit => "qubit",
            Platform::Qudit => "qudit",
            Platform::Qumode => "qumode",
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Platform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "qubit" => Ok(Platform::Qubit),
            "qudit" => Ok(Platform::Qudit),
            "qumode" => Ok(Platform::Qumode),
            other => Err(Error::Config(format!("unknown platform `{other}`"))),
        }
    }
}

/// Register description: fermionic qubits first (spin orbital `k` on site `k`,
/// interleaved `p↑, p↓`), then the bosonic sites. Site 0 is the most
/// significant digit of the register index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub platform: Platform,
    pub n_fermion_qubits: usize,
    /// Largest representable photon number.
    pub photon_cutoff: usize,
    pub site_dims: Vec<usize>,
}

impl RegisterLayout {
    pub fn new(platform: Platform, n_fermion_qubits: usize, photon_cutoff: usize) -> Result<Self> {
        if n_fermion_qubits == 0 || n_fermion_qubits > 32 {
            return Err(Error::Layout(format!("{n_fermion_qubits} fermionic qubits is outside 1..=32")));
        }
        if photon_cutoff < 1 {
            return Err(Error::Layout("photon cutoff must be ≥ 1".into()));
        }
        let mut site_dims = vec![2; n_fermion_qubits];
        match platform {
            Platform::Qubit => site_dims.extend(std::iter::repeat(2).take(photon_cutoff + 1)),
            Platform::Qudit | Platform::Qumode => site_dims.push(photon_cutoff + 1),
        }
        let dim = site_dims.iter().try_fold(1usize, |a, &d| a.checked_mul(d));
        if dim.map_or(true, |d| d > 1 << 24) {
            return Err(Error::Layout("register dimension exceeds 2^24".into()));
        }
        Ok(Self { platform, n_fermion_qubits, photon_cutoff, site_dims })
    }

    pub fn qubit(n_fermion_qubits: usize, n_b_max: usize) -> Result<Self> {
        Self::new(Platform::Qubit, n_fermion_qubits, n_b_max)
    }

    pub fn qudit(n_fermion_qubits: usize, n_b_max: usize) -> Result<Self> {
        Self::new(Platform::Qudit, n_fermion_qubits, n_b_max)
    }

    pub fn qumode(n_fermion_qubits: usize, n_cut: usize) -> Result<Self> {
        Self::new(Platform::Qumode, n_fermion_qubits, n_cut)
    }

    pub fn n_sites(&self) -> usize {
        self.site_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.site_dims.iter().product()
    }

    pub fn fermion_dim(&self) -> usize {
        1 << self.n_fermion_qubits
    }

    /// Dimension of the full bosonic block (`2^{N+1}` for one-hot qubits).
    pub fn boson_dim(&self) -> usize {
        self.site_dims[self.n_fermion_qubits..].iter().product()
    }

    pub fn boson_sites(&self) -> std::ops::Range<usize> {
        self.n_fermion_qubits..self.n_sites()
    }

    /// Qudit or qumode site.
    pub fn mode_site(&self) -> Option<usize> {
        match self.platform {
            Platform::Qubit => None,
            _ => Some(self.n_fermion_qubits),
        }
    }

    /// Site holding the one-hot flag for photon number `n` (qubit platform).
    pub fn one_hot_site(&self, n: usize) -> Option<usize> {
        (self.platform == Platform::Qubit && n <= self.photon_cutoff).then_some(self.n_fermion_qubits + n)
    }

    pub fn is_fermionic(&self, site: usize) -> bool {
        site < self.n_fermion_qubits
    }

    /// Index within the bosonic block that encodes photon number `n`.
    pub fn boson_index(&self, n: usize) -> Result<usize> {
        if n > self.photon_cutoff {
            return Err(Error::IndexOutOfRange { index: n, len: self.photon_cutoff + 1 });
        }
        Ok(match self.platform {
            Platform::Qubit => one_hot_index(n, self.photon_cutoff + 1),
            _ => n,
        })
    }

    /// Photon number encoded by a bosonic block index, `None` outside the code space.
    pub fn photon_of_boson_index(&self, idx: usize) -> Option<usize> {
        match self.platform {
            Platform::Qubit => {
                if idx.count_ones() != 1 {
                    return None;
                }
                let pos = idx.trailing_zeros() as usize;
                (pos <= self.photon_cutoff).then(|| self.photon_cutoff - pos)
            }
            _ => (idx <= self.photon_cutoff).then_some(idx),
        }
    }

    /// Fermionic block index for an occupation bitmask (bit `k` = spin orbital `k`).
    pub fn fermion_index(&self, occupation: u64) -> usize {
        let n = self.n_fermion_qubits;
        let mut idx = 0;
        for k in 0..n {
            if occupation >> k & 1 == 1 {
                idx |= 1 << (n - 1 - k);
            }
        }
        idx
    }

    /// Occupation bitmask of a fermionic block index.
    pub fn occupation(&self, fermion_index: usize) -> u64 {
        let n = self.n_fermion_qubits;
        let mut occ = 0u64;
        for k in 0..n {
            if fermion_index >> (n - 1 - k) & 1 == 1 {
                occ |= 1 << k;
            }
        }
        occ
    }

    pub fn encode(&self, occupation: u64, photons: usize) -> Result<usize> {
        if self.n_fermion_qubits < 64 && occupation >> self.n_fermion_qubits != 0 {
            return Err(Error::Layout("occupation touches non-existent fermionic qubits".into()));
        }
        Ok(self.fermion_index(occupation) * self.boson_dim() + self.boson_index(photons)?)
    }

    /// `(occupation, photon number)` of a register index, photon `None` outside the code space.
    pub fn decode(&self, index: usize) -> (u64, Option<usize>) {
        let bd = self.boson_dim();
        (self.occupation(index / bd), self.photon_of_boson_index(index % bd))
    }

    /// Register index of every hybrid-basis state, in hybrid order.
    pub fn hybrid_embedding(&self, basis: &HybridBasis) -> Result<Vec<usize>> {
        if basis.n_spin_orbitals() != self.n_fermion_qubits {
            return Err(Error::Layout(format!(
                "basis has {} spin orbitals, register has {} fermionic qubits",
                basis.n_spin_orbitals(),
                self.n_fermion_qubits
            )));
        }
        if basis.n_b_max > self.photon_cutoff {
            return Err(Error::Config(format!(
                "basis cutoff {} exceeds register cutoff {}",
                basis.n_b_max, self.photon_cutoff
            )));
        }
        (0..basis.dim())
            .map(|i| {
                let (det, n) = basis.state(i);
                self.encode(det, n)
            })
            .collect()
    }
}
