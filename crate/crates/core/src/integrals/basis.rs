use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// 1 Å in bohr.
pub const ANGSTROM_TO_BOHR: f64 = 1.8897259886;

const STO3G_H: &str = include_str!("../../data/sto-3g-h.basis");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub element: String,
    pub charge: f64,
    /// Position in bohr.
    pub position: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Geometry {
    pub atoms: Vec<Atom>,
    /// Bond length in bohr (for diatomics; 0 otherwise).
    pub bond_length: f64,
    /// Tilt of the molecular axis away from the lab z-axis, radians.
    pub theta_z: f64,
}

impl Geometry {
    /// H₂ centred at the origin along the axis `(sin θ_z, 0, cos θ_z)`.
    ///
    /// Atom 0 sits at `-r/2` along the axis and atom 1 at `+r/2`.
    pub fn h2(r_bohr: f64, theta_z: f64) -> Result<Self> {
        if !(r_bohr.is_finite() && theta_z.is_finite()) {
            return Err(Error::Domain("non-finite geometry parameter".into()));
        }
        if r_bohr <= 0.0 {
            return Err(Error::SingularGeometry(format!("bond length {r_bohr} must be positive")));
        }
        let axis = [theta_z.sin(), 0.0, theta_z.cos()];
        let half = 0.5 * r_bohr;
        let place = |sign: f64| Atom {
            element: "H".into(),
            charge: 1.0,
            position: [sign * half * axis[0], sign * half * axis[1], sign * half * axis[2]],
        };
        Ok(Self { atoms: vec![place(-1.0), place(1.0)], bond_length: r_bohr, theta_z })
    }

    pub fn h2_angstrom(r_angstrom: f64, theta_z: f64) -> Result<Self> {
        Self::h2(r_angstrom * ANGSTROM_TO_BOHR, theta_z)
    }

    pub fn nuclear_repulsion(&self) -> Result<f64> {
        let mut e = 0.0;
        for (a, atom_a) in self.atoms.iter().enumerate() {
            for atom_b in &self.atoms[a + 1..] {
                let d = distance(&atom_a.position, &atom_b.position);
                if d < 1e-8 {
                    return Err(Error::SingularGeometry("coincident nuclei".into()));
                }
                e += atom_a.charge * atom_b.charge / d;
            }
        }
        Ok(e)
    }

    /// Σ_A Z_A r_A.
    pub fn nuclear_dipole(&self) -> [f64; 3] {
        let mut d = [0.0; 3];
        for atom in &self.atoms {
            for (k, dk) in d.iter_mut().enumerate() {
                *dk += atom.charge * atom.position[k];
            }
        }
        d
    }
}

pub(crate) fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
}

/// A contracted shell attached to an element, before it is placed on an atom.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellTemplate {
    pub angular_momentum: u32,
    pub exponents: Vec<f64>,
    pub coefficients: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BasisSpec {
    pub shells: BTreeMap<String, Vec<ShellTemplate>>,
}

impl BasisSpec {
    /// The bundled STO-3G hydrogen set.
    pub fn sto3g() -> Self {
        Self::parse(STO3G_H).expect("bundled basis file is well formed")
    }

    /// Parse the `element shell n` / `exponent coefficient` text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut spec = BasisSpec::default();
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        while let Some((lineno, header)) = lines.next() {
            let fields: Vec<&str> = header.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::Parse { line: lineno, msg: format!("expected `element shell count`, got `{header}`") });
            }
            let l = match fields[1].to_ascii_uppercase().as_str() {
                "S" => 0,
                "P" => 1,
                "D" => 2,
                "F" => 3,
                other => return Err(Error::Parse { line: lineno, msg: format!("unknown shell `{other}`") }),
            };
            let n: usize = fields[2]
                .parse()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad primitive count `{}`", fields[2]) })?;
            let mut shell = ShellTemplate { angular_momentum: l, exponents: Vec::with_capacity(n), coefficients: Vec::with_capacity(n) };
            for _ in 0..n {
                let (ln, prim) = lines
                    .next()
                    .ok_or(Error::Parse { line: lineno, msg: "truncated shell".into() })?;
                let vals: Vec<f64> = prim
                    .split_whitespace()
                    .map(|t| t.parse::<f64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| Error::Parse { line: ln, msg: e.to_string() })?;
                if vals.len() != 2 {
                    return Err(Error::Parse { line: ln, msg: "expected `exponent coefficient`".into() });
                }
                if !(vals[0] > 0.0) || !vals[0].is_finite() || !vals[1].is_finite() {
                    return Err(Error::Parse { line: ln, msg: "exponent must be positive and values finite".into() });
                }
                shell.exponents.push(vals[0]);
                shell.coefficients.push(vals[1]);
            }
            spec.shells.entry(fields[0].to_string()).or_default().push(shell);
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_sto3g_matches_zeta_scaled_fit() {
        // Unit-zeta STO-3G 1s fit (Hehre, Stewart, Pople 1969), scaled by ζ_H = 1.24.
        let unit = [2.227660584, 0.405771156, 0.109817510];
        let coef = [0.154328967, 0.535328142, 0.444634542];
        let spec = BasisSpec::sto3g();
        let h = &spec.shells["H"];
        assert_eq!(h.len(), 1);
        assert_eq!(h[0].angular_momentum, 0);
        for k in 0..3 {
            let expected = unit[k] * 1.24 * 1.24;
            assert!((h[0].exponents[k] - expected).abs() / expected < 1e-7, "exponent {k}");
            assert!((h[0].coefficients[k] - coef[k]).abs() < 1e-8, "coefficient {k}");
        }
    }

    #[test]
    fn h2_is_symmetric_about_origin() {
        let g = Geometry::h2(1.4, 0.3).unwrap();
        let d = g.nuclear_dipole();
        assert!(d.iter().all(|x| x.abs() < 1e-15));
        assert!((distance(&g.atoms[0].position, &g.atoms[1].position) - 1.4).abs() < 1e-14);
        assert!((g.nuclear_repulsion().unwrap() - 1.0 / 1.4).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(Geometry::h2(0.0, 0.0).is_err());
        assert!(BasisSpec::parse("H S 1\n -1.0 1.0\n").is_err());
        assert!(matches!(BasisSpec::parse("H S 2\n 1.0 1.0\n"), Err(Error::Parse { .. })));
    }
}
