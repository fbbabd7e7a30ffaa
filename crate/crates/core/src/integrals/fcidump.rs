//! FCIDUMP reader/writer plus a companion dipole file.
//!
//! Integral file body: `value i j k l`, 1-based, chemists' notation. `i j 0 0`
//! is a one-electron term and `0 0 0 0` the nuclear repulsion. Only one member
//! of each symmetry-equivalent set needs to be present.
//!
//! Dipole file: same header, body lines `value i j 0 0 c` with `c ∈ {x, y, z}`
//! holding `d^e_ij`, and one `nuc dx dy dz` line.

use std::fmt::Write as _;
use std::path::Path;

use super::gaussian::Eri;
use super::mo::{DipoleIntegrals, MolecularIntegrals};
use crate::error::{Error, Result};
use crate::linalg::RMatrix;

/// Entries below this magnitude are not written.
const WRITE_THRESHOLD: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Header {
    pub norb: usize,
    pub nelec: usize,
    pub ms2: i32,
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parse the namelist header. Returns the header and the 1-based line number
/// of the first body line.
fn parse_header(lines: &[&str]) -> Result<(Header, usize)> {
    let mut text = String::new();
    let mut end = None;
    for (i, line) in lines.iter().enumerate() {
        text.push_str(line);
        text.push(' ');
        let upper = line.to_ascii_uppercase();
        if upper.contains("&END") || line.trim() == "/" {
            end = Some(i + 1);
            break;
        }
    }
    let end = end.ok_or_else(|| perr(lines.len().max(1), "header is not terminated by &END"))?;
    let upper = text.to_ascii_uppercase();
    let start = upper.find("&FCI").ok_or_else(|| perr(1, "missing &FCI header"))?;
    let body = &upper[start + 4..];
    let body = body.split("&END").next().unwrap_or(body).replace('/', " ");

    let field = |name: &str| -> Result<Option<i64>> {
        let mut search = 0;
        while let Some(pos) = body[search..].find(name) {
            let at = search + pos;
            search = at + name.len();
            let prev_ok = at == 0 || !body.as_bytes()[at - 1].is_ascii_alphanumeric();
            let rest = body[at + name.len()..].trim_start();
            if !prev_ok || !rest.starts_with('=') {
                continue;
            }
            let val: String = rest[1..]
                .trim_start()
                .chars()
                .take_while(|c| c.is_ascii_digit() || *c == '-' || *c == '+')
                .collect();
            return val
                .parse::<i64>()
                .map(Some)
                .map_err(|_| perr(1, format!("bad value for {name}")));
        }
        Ok(None)
    };
    let norb = field("NORB")?.ok_or_else(|| perr(1, "header lacks NORB"))?;
    let nelec = field("NELEC")?.ok_or_else(|| perr(1, "header lacks NELEC"))?;
    let ms2 = field("MS2")?.unwrap_or(0);
    if norb <= 0 || norb > 64 {
        return Err(perr(1, format!("NORB = {norb} is outside 1..=64")));
    }
    if nelec < 0 || nelec > 2 * norb {
        return Err(perr(1, format!("NELEC = {nelec} does not fit NORB = {norb}")));
    }
    let ms2 = i32::try_from(ms2).map_err(|_| perr(1, "MS2 out of range"))?;
    Ok((Header { norb: norb as usize, nelec: nelec as usize, ms2 }, end + 1))
}

fn parse_value(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .replace(['D', 'd'], "e")
        .parse()
        .map_err(|_| perr(line, format!("bad number `{tok}`")))?;
    if !v.is_finite() {
        return Err(perr(line, "non-finite value"));
    }
    Ok(v)
}

fn parse_index(tok: &str, line: usize, norb: usize) -> Result<usize> {
    let i: usize = tok.parse().map_err(|_| perr(line, format!("bad index `{tok}`")))?;
    if i > norb {
        return Err(perr(line, format!("index {i} exceeds NORB = {norb}")));
    }
    Ok(i)
}

/// Parse an FCIDUMP from text. The result carries no dipole integrals.
pub fn parse_fcidump(text: &str) -> Result<MolecularIntegrals> {
    let lines: Vec<&str> = text.lines().collect();
    let (hdr, first) = parse_header(&lines)?;
    let n = hdr.norb;
    let mut h = RMatrix::zeros(n, n);
    let mut g = Eri::zeros(n);
    let mut e_nuc = 0.0;
    for (off, raw) in lines.iter().enumerate().skip(first - 1) {
        let lineno = off + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks.len() != 5 {
            return Err(perr(lineno, format!("expected 5 fields, found {}", toks.len())));
        }
        let v = parse_value(toks[0], lineno)?;
        let i = parse_index(toks[1], lineno, n)?;
        let j = parse_index(toks[2], lineno, n)?;
        let k = parse_index(toks[3], lineno, n)?;
        let l = parse_index(toks[4], lineno, n)?;
        match (i, j, k, l) {
            (0, 0, 0, 0) => e_nuc = v,
            (i, j, 0, 0) if i > 0 && j > 0 => {
                h[(i - 1, j - 1)] = v;
                h[(j - 1, i - 1)] = v;
            }
            (i, j, k, l) if i > 0 && j > 0 && k > 0 && l > 0 => g.set_sym(i - 1, j - 1, k - 1, l - 1, v),
            // Orbital energies (`i 0 0 0`) carry no information needed here.
            (_, 0, 0, 0) => {}
            _ => return Err(perr(lineno, format!("index pattern {i} {j} {k} {l} is not recognised"))),
        }
    }
    let mi = MolecularIntegrals { n_orb: n, n_e: hdr.nelec, ms2: hdr.ms2, h, g, dipole: None, e_nuc };
    mi.validate()?;
    Ok(mi)
}

/// Parse a dipole companion file for a system with `norb` orbitals.
pub fn parse_dipole(text: &str, norb: usize) -> Result<DipoleIntegrals> {
    let lines: Vec<&str> = text.lines().collect();
    let (hdr, first) = parse_header(&lines)?;
    if hdr.norb != norb {
        return Err(Error::Shape(format!("dipole file has NORB = {}, integrals have {norb}", hdr.norb)));
    }
    let mut electronic = [RMatrix::zeros(norb, norb), RMatrix::zeros(norb, norb), RMatrix::zeros(norb, norb)];
    let mut nuclear = None;
    for (off, raw) in lines.iter().enumerate().skip(first - 1) {
        let lineno = off + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if toks[0].eq_ignore_ascii_case("nuc") {
            if toks.len() != 4 {
                return Err(perr(lineno, "expected `nuc dx dy dz`"));
            }
            nuclear = Some([
                parse_value(toks[1], lineno)?,
                parse_value(toks[2], lineno)?,
                parse_value(toks[3], lineno)?,
            ]);
            continue;
        }
        if toks.len() != 6 {
            return Err(perr(lineno, format!("expected 6 fields, found {}", toks.len())));
        }
        let v = parse_value(toks[0], lineno)?;
        let i = parse_index(toks[1], lineno, norb)?;
        let j = parse_index(toks[2], lineno, norb)?;
        if i == 0 || j == 0 || toks[3] != "0" || toks[4] != "0" {
            return Err(perr(lineno, "dipole lines must read `value i j 0 0 c` with i, j ≥ 1"));
        }
        let c = match toks[5] {
            "x" | "X" => 0,
            "y" | "Y" => 1,
            "z" | "Z" => 2,
            other => return Err(perr(lineno, format!("unknown component `{other}`"))),
        };
        electronic[c][(i - 1, j - 1)] = v;
        electronic[c][(j - 1, i - 1)] = v;
    }
    let nuclear = nuclear.ok_or_else(|| perr(lines.len(), "missing `nuc` line"))?;
    Ok(DipoleIntegrals { electronic, nuclear })
}

/// Read an FCIDUMP and, when given, its dipole file.
///
/// A `dipole_path` that does not exist yields [`Error::AbsentDipole`].
pub fn load_fcidump(path: &Path, dipole_path: Option<&Path>) -> Result<MolecularIntegrals> {
    let mut mi = parse_fcidump(&std::fs::read_to_string(path)?)?;
    if let Some(dp) = dipole_path {
        if !dp.exists() {
            return Err(Error::AbsentDipole);
        }
        mi.dipole = Some(parse_dipole(&std::fs::read_to_string(dp)?, mi.n_orb)?);
    }
    Ok(mi)
}

fn header_text(mi: &MolecularIntegrals) -> String {
    let orbsym = vec!["1"; mi.n_orb].join(",");
    format!(
        "&FCI NORB={},NELEC={},MS2={},\n ORBSYM={},\n ISYM=1,\n&END\n",
        mi.n_orb, mi.n_e, mi.ms2, orbsym
    )
}

pub fn format_fcidump(mi: &MolecularIntegrals) -> String {
    let n = mi.n_orb;
    let mut out = header_text(mi);
    for i in 0..n {
        for j in 0..=i {
            for k in 0..n {
                for l in 0..=k {
                    if i * (i + 1) / 2 + j < k * (k + 1) / 2 + l {
                        continue;
                    }
                    let v = mi.g.get(i, j, k, l);
                    if v.abs() > WRITE_THRESHOLD {
                        let _ = writeln!(out, "{v:.16e} {} {} {} {}", i + 1, j + 1, k + 1, l + 1);
                    }
                }
            }
        }
    }
    for i in 0..n {
        for j in 0..=i {
            let v = mi.h[(i, j)];
            if v.abs() > WRITE_THRESHOLD {
                let _ = writeln!(out, "{v:.16e} {} {} 0 0", i + 1, j + 1);
            }
        }
    }
    let _ = writeln!(out, "{:.16e} 0 0 0 0", mi.e_nuc);
    out
}

pub fn format_dipole(mi: &MolecularIntegrals) -> Result<String> {
    let d = mi.dipole.as_ref().ok_or(Error::AbsentDipole)?;
    let mut out = header_text(mi);
    for (c, tag) in ["x", "y", "z"].iter().enumerate() {
        for i in 0..mi.n_orb {
            for j in 0..=i {
                let v = d.electronic[c][(i, j)];
                if v.abs() > WRITE_THRESHOLD {
                    let _ = writeln!(out, "{v:.16e} {} {} 0 0 {tag}", i + 1, j + 1);
                }
            }
        }
    }
    let _ = writeln!(out, "nuc {:.16e} {:.16e} {:.16e}", d.nuclear[0], d.nuclear[1], d.nuclear[2]);
    Ok(out)
}

/// Write the integral file and, if dipoles are present and a path is given, the dipole file.
pub fn write_fcidump(mi: &MolecularIntegrals, path: &Path, dipole_path: Option<&Path>) -> Result<()> {
    std::fs::write(path, format_fcidump(mi))?;
    if let Some(dp) = dipole_path {
        std::fs::write(dp, format_dipole(mi)?)?;
    }
    Ok(())
}
