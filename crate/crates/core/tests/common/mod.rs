//! Independent H₂/STO-3G reference: closed-form s-Gaussian integrals, symmetry-fixed
//! molecular orbitals and brute-force FCI over all 2-electron determinants.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

pub const EXPONENTS: [f64; 3] = [3.42525091, 0.62391373, 0.16885540];
pub const COEFFS: [f64; 3] = [0.15432897, 0.53532814, 0.44463454];

fn norm_s(a: f64) -> f64 {
    (2.0 * a / PI).powf(0.75)
}

fn f0(t: f64) -> f64 {
    if t < 1e-12 {
        1.0 - t / 3.0
    } else {
        0.5 * (PI / t).sqrt() * libm::erf(t.sqrt())
    }
}

/// Contracted-function pair sum over primitives of `f(a, A, b, B)`.
fn contract2(za: f64, zb: f64, f: impl Fn(f64, f64, f64, f64) -> f64) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (EXPONENTS[i], EXPONENTS[j]);
            s += COEFFS[i] * COEFFS[j] * norm_s(a) * norm_s(b) * f(a, za, b, zb);
        }
    }
    s
}

fn prim_overlap(a: f64, za: f64, b: f64, zb: f64) -> f64 {
    let p = a + b;
    (PI / p).powf(1.5) * (-a * b / p * (za - zb).powi(2)).exp()
}

fn prim_kinetic(a: f64, za: f64, b: f64, zb: f64) -> f64 {
    let mu = a * b / (a + b);
    let r2 = (za - zb).powi(2);
    mu * (3.0 - 2.0 * mu * r2) * prim_overlap(a, za, b, zb)
}

fn prim_nuclear(a: f64, za: f64, b: f64, zb: f64, zc: f64) -> f64 {
    let p = a + b;
    let zp = (a * za + b * zb) / p;
    -2.0 * PI / p * (-a * b / p * (za - zb).powi(2)).exp() * f0(p * (zp - zc).powi(2))
}

fn prim_eri(a: f64, za: f64, b: f64, zb: f64, c: f64, zc: f64, d: f64, zd: f64) -> f64 {
    let (p, q) = (a + b, c + d);
    let zp = (a * za + b * zb) / p;
    let zq = (c * zc + d * zd) / q;
    2.0 * PI.powf(2.5) / (p * q * (p + q).sqrt())
        * (-a * b / p * (za - zb).powi(2) - c * d / q * (zc - zd).powi(2)).exp()
        * f0(p * q / (p + q) * (zp - zq).powi(2))
}

pub struct H2Reference {
    pub overlap: f64,
    /// Position `⟨χ_a| z |χ_b⟩` in the AO basis.
    pub z_ao: [[f64; 2]; 2],
    pub h_mo: [[f64; 2]; 2],
    /// `(pq|rs)` chemist notation in the MO basis.
    pub g_mo: [[[[f64; 2]; 2]; 2]; 2],
    pub e_nuc: f64,
    pub e_hf: f64,
    /// All six 2-electron FCI eigenvalues, ascending.
    pub fci: Vec<f64>,
}

/// H₂ along z with atoms at `∓r/2` (bohr).
pub fn h2_reference(r: f64) -> H2Reference {
    let z = [-0.5 * r, 0.5 * r];
    let mut s = [[0.0; 2]; 2];
    let mut h = [[0.0; 2]; 2];
    let mut zpos = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            s[i][j] = contract2(z[i], z[j], prim_overlap);
            zpos[i][j] = contract2(z[i], z[j], |a, za, b, zb| (a * za + b * zb) / (a + b) * prim_overlap(a, za, b, zb));
            h[i][j] = contract2(z[i], z[j], prim_kinetic)
                + z.iter().map(|&zc| contract2(z[i], z[j], |a, za, b, zb| prim_nuclear(a, za, b, zb, zc))).sum::<f64>();
        }
    }
    let mut g = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let mut acc = 0.0;
                    for pi in 0..3 {
                        for pj in 0..3 {
                            for pk in 0..3 {
                                for pl in 0..3 {
                                    let e = [EXPONENTS[pi], EXPONENTS[pj], EXPONENTS[pk], EXPONENTS[pl]];
                                    let w = COEFFS[pi] * COEFFS[pj] * COEFFS[pk] * COEFFS[pl] * e.iter().map(|&x| norm_s(x)).product::<f64>();
                                    acc += w * prim_eri(e[0], z[i], e[1], z[j], e[2], z[k], e[3], z[l]);
                                }
                            }
                        }
                    }
                    g[i][j][k][l] = acc;
                }
            }
        }
    }
    // Gerade and ungerade combinations fixed by inversion symmetry.
    let s12 = s[0][1];
    let c = [[1.0 / (2.0 + 2.0 * s12).sqrt(), 1.0 / (2.0 - 2.0 * s12).sqrt()], [1.0 / (2.0 + 2.0 * s12).sqrt(), -1.0 / (2.0 - 2.0 * s12).sqrt()]];
    let mut h_mo = [[0.0; 2]; 2];
    let mut g_mo = [[[[0.0; 2]; 2]; 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            for a in 0..2 {
                for b in 0..2 {
                    h_mo[p][q] += c[a][p] * c[b][q] * h[a][b];
                }
            }
            for rr in 0..2 {
                for ss in 0..2 {
                    let mut acc = 0.0;
                    for a in 0..2 {
                        for b in 0..2 {
                            for cc in 0..2 {
                                for d in 0..2 {
                                    acc += c[a][p] * c[b][q] * c[cc][rr] * c[d][ss] * g[a][b][cc][d];
                                }
                            }
                        }
                    }
                    g_mo[p][q][rr][ss] = acc;
                }
            }
        }
    }
    let e_nuc = 1.0 / r;
    let e_hf = 2.0 * h_mo[0][0] + g_mo[0][0][0][0] + e_nuc;
    let fci = brute_force_fci(&h_mo, &g_mo, e_nuc);
    H2Reference { overlap: s12, z_ao: zpos, h_mo, g_mo, e_nuc, e_hf, fci }
}

/// Sign and result of `a_k` on a bitstring, or `None`.
fn annihilate(k: usize, det: u32) -> Option<(f64, u32)> {
    if det >> k & 1 == 0 {
        return None;
    }
    let sign = if (det & ((1 << k) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, det & !(1 << k)))
}

fn create(k: usize, det: u32) -> Option<(f64, u32)> {
    if det >> k & 1 == 1 {
        return None;
    }
    let sign = if (det & ((1 << k) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
    Some((sign, det | (1 << k)))
}

/// Second-quantized Hamiltonian applied determinant by determinant (spin orbital 2p+σ).
pub fn brute_force_fci(h: &[[f64; 2]; 2], g: &[[[[f64; 2]; 2]; 2]; 2], e_nuc: f64) -> Vec<f64> {
    let dets: Vec<u32> = (0u32..16).filter(|d| d.count_ones() == 2).collect();
    let n = dets.len();
    let pos = |d: u32| dets.iter().position(|&x| x == d).unwrap();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (j, &dj) in dets.iter().enumerate() {
        m[(j, j)] += e_nuc;
        for p in 0..4 {
            for q in 0..4 {
                if p % 2 != q % 2 {
                    continue;
                }
                if let Some((s1, d1)) = annihilate(q, dj) {
                    if let Some((s2, d2)) = create(p, d1) {
                        m[(pos(d2), j)] += s1 * s2 * h[p / 2][q / 2];
                    }
                }
                for r in 0..4 {
                    for s in 0..4 {
                        if r % 2 != s % 2 {
                            continue;
                        }
                        // ½ (pq|rs) a†_p a†_r a_s a_q
                        let step = annihilate(q, dj)
                            .and_then(|(a, d)| annihilate(s, d).map(|(b, d)| (a * b, d)))
                            .and_then(|(a, d)| create(r, d).map(|(b, d)| (a * b, d)))
                            .and_then(|(a, d)| create(p, d).map(|(b, d)| (a * b, d)));
                        if let Some((sg, d)) = step {
                            m[(pos(d), j)] += 0.5 * sg * g[p / 2][q / 2][r / 2][s / 2];
                        }
                    }
                }
            }
        }
    }
    let mut e: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

/// Trapezoid integral of `f` on a uniform grid over `[-L, L]`.
pub fn trapezoid(f: impl Fn(f64) -> f64, l: f64, n: usize) -> f64 {
    let h = 2.0 * l / n as f64;
    let mut s = 0.5 * (f(-l) + f(l));
    for k in 1..n {
        s += f(-l + k as f64 * h);
    }
    s * h
}

/// `⟨χ_a| w(z) |χ_b⟩` by grid quadrature: transverse axes separate, z is integrated on a grid.
pub fn quadrature_matrix_element(za: f64, zb: f64, w: impl Fn(f64) -> f64 + Copy) -> f64 {
    let mut s = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (EXPONENTS[i], EXPONENTS[j]);
            let transverse = trapezoid(|x| (-(a + b) * x * x).exp(), 12.0, 4000);
            let axial = trapezoid(|z| w(z) * (-a * (z - za).powi(2) - b * (z - zb).powi(2)).exp(), 14.0, 8000);
            s += COEFFS[i] * COEFFS[j] * norm_s(a) * norm_s(b) * transverse * transverse * axial;
        }
    }
    s
}
