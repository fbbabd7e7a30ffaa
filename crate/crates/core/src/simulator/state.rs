use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, matvec, norm, CMatrix, C64, ONE, ZERO};
use crate::mappings::RegisterLayout;

/// Amplitudes over a register; site 0 is the most significant digit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    pub layout: RegisterLayout,
    pub amps: Vec<C64>,
}

impl StateVector {
    pub fn basis(layout: &RegisterLayout, index: usize) -> Result<Self> {
        let dim = layout.dim();
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { layout: layout.clone(), amps })
    }

    /// Product state with fermionic occupation bitmask and photon number.
    pub fn product(layout: &RegisterLayout, occupation: u64, photons: usize) -> Result<Self> {
        Self::basis(layout, layout.encode(occupation, photons)?)
    }

    /// Wrap amplitudes; the vector must have unit norm to 1e-10.
    pub fn from_amps(layout: &RegisterLayout, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != layout.dim() {
            return Err(Error::Shape(format!("{} amplitudes for a {}-dimensional register", amps.len(), layout.dim())));
        }
        let s = Self { layout: layout.clone(), amps };
        if (s.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("state norm {} is not 1", s.norm())));
        }
        Ok(s)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        inner(&self.amps, &other.amps)
    }

    pub fn expectation(&self, op: &CMatrix) -> C64 {
        inner(&self.amps, &matvec(op, &self.amps))
    }

    /// Squared norm outside the encoded physical photon space (non-one-hot or above cutoff).
    pub fn leakage(&self) -> f64 {
        let bd = self.layout.boson_dim();
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| self.layout.photon_of_boson_index(i % bd).is_none())
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }
}
