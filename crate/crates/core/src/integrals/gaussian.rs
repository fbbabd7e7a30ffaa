//! Closed-form integrals over contracted s-type Gaussians.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::basis::{BasisSpec, Geometry};
use crate::error::{Error, Result};
use crate::linalg::RMatrix;

/// Boys function of order zero.
pub fn boys0(x: f64) -> f64 {
    if x < 1e-10 {
        1.0 - x / 3.0 + x * x / 10.0
    } else {
        0.5 * (PI / x).sqrt() * libm::erf(x.sqrt())
    }
}

#[derive(Debug, Clone)]
struct Primitive {
    exponent: f64,
    /// Contraction coefficient times primitive normalization.
    weight: f64,
}

#[derive(Debug, Clone)]
struct ContractedS {
    center: [f64; 3],
    prims: Vec<Primitive>,
}

/// Four-index tensor stored densely, chemists' order `(pq|rs)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eri {
    pub n: usize,
    pub data: Vec<f64>,
}

impl Eri {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n * n * n] }
    }

    #[inline]
    pub fn idx(&self, p: usize, q: usize, r: usize, s: usize) -> usize {
        ((p * self.n + q) * self.n + r) * self.n + s
    }

    #[inline]
    pub fn get(&self, p: usize, q: usize, r: usize, s: usize) -> f64 {
        self.data[self.idx(p, q, r, s)]
    }

    /// Assign a value to all eight permutation-equivalent slots.
    pub fn set_sym(&mut self, p: usize, q: usize, r: usize, s: usize, v: f64) {
        for (a, b, c, d) in [
            (p, q, r, s),
            (q, p, r, s),
            (p, q, s, r),
            (q, p, s, r),
            (r, s, p, q),
            (s, r, p, q),
            (r, s, q, p),
            (s, r, q, p),
        ] {
            let i = self.idx(a, b, c, d);
            self.data[i] = v;
        }
    }

    /// Largest violation of the eightfold permutation symmetry.
    pub fn max_asymmetry(&self) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let v = self.get(p, q, r, s);
                        for w in [self.get(q, p, r, s), self.get(p, q, s, r), self.get(r, s, p, q)] {
                            worst = worst.max((v - w).abs());
                        }
                    }
                }
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AOIntegrals {
    pub overlap: RMatrix,
    pub kinetic: RMatrix,
    pub nuclear: RMatrix,
    pub eri: Eri,
    /// `⟨χ_p| r_c |χ_q⟩` for c = x, y, z (position operator, no charge).
    pub position: [RMatrix; 3],
    pub e_nuc: f64,
    /// Σ_A Z_A r_A.
    pub nuclear_dipole: [f64; 3],
}

impl AOIntegrals {
    pub fn n_ao(&self) -> usize {
        self.overlap.nrows()
    }

    pub fn core_hamiltonian(&self) -> RMatrix {
        &self.kinetic + &self.nuclear
    }
}

fn dist2(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).powi(2)).sum()
}

fn product_center(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> [f64; 3] {
    let p = a + b;
    [(a * ra[0] + b * rb[0]) / p, (a * ra[1] + b * rb[1]) / p, (a * ra[2] + b * rb[2]) / p]
}

fn prim_overlap(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
    let p = a + b;
    (PI / p).powf(1.5) * (-a * b / p * dist2(ra, rb)).exp()
}

fn prim_kinetic(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3]) -> f64 {
    let p = a + b;
    let mu = a * b / p;
    mu * (3.0 - 2.0 * mu * dist2(ra, rb)) * prim_overlap(a, ra, b, rb)
}

fn prim_nuclear(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3], z: f64, rc: &[f64; 3]) -> f64 {
    let p = a + b;
    let rp = product_center(a, ra, b, rb);
    -2.0 * PI / p * z * (-a * b / p * dist2(ra, rb)).exp() * boys0(p * dist2(&rp, rc))
}

#[allow(clippy::too_many_arguments)]
fn prim_eri(a: f64, ra: &[f64; 3], b: f64, rb: &[f64; 3], c: f64, rc: &[f64; 3], d: f64, rd: &[f64; 3]) -> f64 {
    let p = a + b;
    let q = c + d;
    let rp = product_center(a, ra, b, rb);
    let rq = product_center(c, rc, d, rd);
    2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt())
        * (-a * b / p * dist2(ra, rb) - c * d / q * dist2(rc, rd)).exp()
        * boys0(p * q / (p + q) * dist2(&rp, &rq))
}

fn build_shells(geometry: &Geometry, basis: &BasisSpec) -> Result<Vec<ContractedS>> {
    let mut shells = Vec::new();
    for atom in &geometry.atoms {
        let templates = basis
            .shells
            .get(&atom.element)
            .ok_or_else(|| Error::UnsupportedBasis(format!("no shells for element {}", atom.element)))?;
        for t in templates {
            if t.angular_momentum != 0 {
                return Err(Error::UnsupportedBasis(format!("angular momentum {} (only s shells)", t.angular_momentum)));
            }
            if t.exponents.len() != t.coefficients.len() || t.exponents.is_empty() {
                return Err(Error::UnsupportedBasis("contraction length mismatch".into()));
            }
            let mut prims: Vec<Primitive> = t
                .exponents
                .iter()
                .zip(&t.coefficients)
                .map(|(&e, &c)| Primitive { exponent: e, weight: c * (2.0 * e / PI).powf(0.75) })
                .collect();
            // Renormalize the contraction.
            let mut s = 0.0;
            for pa in &prims {
                for pb in &prims {
                    s += pa.weight * pb.weight * prim_overlap(pa.exponent, &atom.position, pb.exponent, &atom.position);
                }
            }
            let scale = 1.0 / s.sqrt();
            for p in &mut prims {
                p.weight *= scale;
            }
            shells.push(ContractedS { center: atom.position, prims });
        }
    }
    Ok(shells)
}

fn contract2(a: &ContractedS, b: &ContractedS, f: impl Fn(f64, f64) -> f64) -> f64 {
    let mut acc = 0.0;
    for pa in &a.prims {
        for pb in &b.prims {
            acc += pa.weight * pb.weight * f(pa.exponent, pb.exponent);
        }
    }
    acc
}

/// Evaluate overlap, kinetic, nuclear-attraction, repulsion and position
/// integrals for an all-s basis placed on `geometry`.
pub fn compute_ao_integrals(geometry: &Geometry, basis: &BasisSpec) -> Result<AOIntegrals> {
    if geometry.atoms.is_empty() {
        return Err(Error::Domain("geometry has no atoms".into()));
    }
    let e_nuc = geometry.nuclear_repulsion()?;
    let shells = build_shells(geometry, basis)?;
    let n = shells.len();
    let mut overlap = RMatrix::zeros(n, n);
    let mut kinetic = RMatrix::zeros(n, n);
    let mut nuclear = RMatrix::zeros(n, n);
    let mut position = [RMatrix::zeros(n, n), RMatrix::zeros(n, n), RMatrix::zeros(n, n)];
    for i in 0..n {
        for j in 0..=i {
            let (a, b) = (&shells[i], &shells[j]);
            let s = contract2(a, b, |x, y| prim_overlap(x, &a.center, y, &b.center));
            let t = contract2(a, b, |x, y| prim_kinetic(x, &a.center, y, &b.center));
            let mut v = 0.0;
            for atom in &geometry.atoms {
                v += contract2(a, b, |x, y| prim_nuclear(x, &a.center, y, &b.center, atom.charge, &atom.position));
            }
            let mut r = [0.0; 3];
            for (k, rk) in r.iter_mut().enumerate() {
                *rk = contract2(a, b, |x, y| {
                    product_center(x, &a.center, y, &b.center)[k] * prim_overlap(x, &a.center, y, &b.center)
                });
            }
            for (m, val) in [(&mut overlap, s), (&mut kinetic, t), (&mut nuclear, v)] {
                m[(i, j)] = val;
                m[(j, i)] = val;
            }
            for k in 0..3 {
                position[k][(i, j)] = r[k];
                position[k][(j, i)] = r[k];
            }
        }
    }
    let mut eri = Eri::zeros(n);
    for p in 0..n {
        for q in 0..=p {
            for r in 0..n {
                for s in 0..=r {
                    if p * (p + 1) / 2 + q < r * (r + 1) / 2 + s {
                        continue;
                    }
                    let (a, b, c, d) = (&shells[p], &shells[q], &shells[r], &shells[s]);
                    let mut acc = 0.0;
                    for pa in &a.prims {
                        for pb in &b.prims {
                            for pc in &c.prims {
                                for pd in &d.prims {
                                    acc += pa.weight
                                        * pb.weight
                                        * pc.weight
                                        * pd.weight
                                        * prim_eri(
                                            pa.exponent,
                                            &a.center,
                                            pb.exponent,
                                            &b.center,
                                            pc.exponent,
                                            &c.center,
                                            pd.exponent,
                                            &d.center,
                                        );
                                }
                            }
                        }
                    }
                    eri.set_sym(p, q, r, s, acc);
                }
            }
        }
    }
    Ok(AOIntegrals { overlap, kinetic, nuclear, eri, position, e_nuc, nuclear_dipole: geometry.nuclear_dipole() })
}
