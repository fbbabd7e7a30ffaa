use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, kron, CMatrix, C64, I, ONE, ZERO};
use crate::mappings::{jw_creation_matrices, ladder_creation, Pauli, RegisterLayout};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GateKind {
    H,
    S,
    Sdg,
    X,
    Z,
    /// `exp(−iθY/2)`.
    Ry,
    /// `exp(−iθZ/2)`.
    Rz,
    /// Sites `[control, target]`.
    Cx,
    Cz,
    Cry,
    Crz,
    /// Sites `[q, q']`: `|0_q 1_q'⟩ → cos θ |01⟩ + sin θ |10⟩`.
    GivensQubit,
    /// Sites `[control, q, q']`.
    ControlledGivensQubit,
    /// Site `[qudit]`: `|l⟩ → cos θ |l⟩ + sin θ |l+1⟩`.
    GivensQudit { level: usize },
    /// Sites `[control, qudit]`.
    ControlledGivensQudit { level: usize },
    /// Site `[mode]`: `exp(θ(b − b†))`, real θ.
    Displacement,
    /// Sites `[control, mode]`: `exp(iπ |1⟩⟨1| ⊗ n)`.
    ControlledParity,
    /// Sites `[control, mode]`: `exp(−iφ/2 Z ⊗ n)`.
    ControlledRotation,
    /// Sites `[control, mode]`: `exp(θ Z ⊗ (b − b†))`, real θ.
    ControlledDisplacement,
    /// Four contiguous fermionic sites `[p↑, p↓, q↑, q↓]`:
    /// `exp(θ Σ_σ (a†_qσ a_pσ − a†_pσ a_qσ))`.
    FabricSingle,
    /// Four contiguous fermionic sites `[p↑, p↓, q↑, q↓]`:
    /// `exp(θ (a†_q↑ a†_q↓ a_p↓ a_p↑ − h.c.))`.
    FabricPair,
}

impl GateKind {
    pub fn n_sites(self) -> usize {
        use GateKind::*;
        match self {
            H | S | Sdg | X | Z | Ry | Rz | GivensQudit { .. } | Displacement => 1,
            Cx | Cz | Cry | Crz | GivensQubit | ControlledGivensQudit { .. } | ControlledParity | ControlledRotation
            | ControlledDisplacement => 2,
            ControlledGivensQubit => 3,
            FabricSingle | FabricPair => 4,
        }
    }

    pub fn is_parameterized(self) -> bool {
        use GateKind::*;
        !matches!(self, H | S | Sdg | X | Z | Cx | Cz | ControlledParity)
    }

    /// Native two-site entangling primitive of some platform.
    pub fn is_entangling_primitive(self) -> bool {
        use GateKind::*;
        matches!(self, Cx | Cz | Cry | Crz | ControlledGivensQudit { .. } | ControlledParity | ControlledRotation)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    None,
    Fixed(f64),
    /// `scale · θ[slot]`.
    Slot { slot: usize, scale: f64 },
}

impl Param {
    pub fn slot(slot: usize) -> Self {
        Param::Slot { slot, scale: 1.0 }
    }

    pub fn value(&self, theta: &[f64]) -> f64 {
        match *self {
            Param::None => 0.0,
            Param::Fixed(v) => v,
            Param::Slot { slot, scale } => scale * theta[slot],
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        match *self {
            Param::None => Param::None,
            Param::Fixed(v) => Param::Fixed(k * v),
            Param::Slot { slot, scale } => Param::Slot { slot, scale: k * scale },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decomposition {
    Native,
    Compiled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    #[serde(flatten)]
    pub kind: GateKind,
    pub sites: Vec<usize>,
    pub param: Param,
    pub decomposition: Decomposition,
}

impl Gate {
    pub fn new(kind: GateKind, sites: Vec<usize>, param: Param) -> Self {
        Self { kind, sites, param, decomposition: Decomposition::Native }
    }

    pub fn fixed(kind: GateKind, sites: Vec<usize>) -> Self {
        Self::new(kind, sites, Param::None)
    }

    pub fn compiled(mut self) -> Self {
        self.decomposition = Decomposition::Compiled;
        self
    }

    /// Check arity, site range, distinctness and site types.
    pub fn validate(&self, layout: &RegisterLayout) -> Result<()> {
        let k = self.kind;
        if self.sites.len() != k.n_sites() {
            return Err(Error::Gate(format!("{k:?} acts on {} sites, got {:?}", k.n_sites(), self.sites)));
        }
        for (i, &s) in self.sites.iter().enumerate() {
            if s >= layout.n_sites() {
                return Err(Error::IndexOutOfRange { index: s, len: layout.n_sites() });
            }
            if self.sites[..i].contains(&s) {
                return Err(Error::Gate(format!("{k:?} uses site {s} twice")));
            }
        }
        if k.is_parameterized() == matches!(self.param, Param::None) {
            return Err(Error::Gate(format!("{k:?} parameter mismatch: {:?}", self.param)));
        }
        if let Param::Fixed(v) = self.param {
            if !v.is_finite() {
                return Err(Error::Gate("non-finite angle".into()));
            }
        }
        let dim = |s: usize| layout.site_dims[s];
        use GateKind::*;
        match k {
            GivensQudit { level } => {
                if dim(self.sites[0]) < level + 2 {
                    return Err(Error::Gate(format!("level {level} transition needs a ≥{}-level site", level + 2)));
                }
            }
            ControlledGivensQudit { level } => {
                if dim(self.sites[0]) != 2 || dim(self.sites[1]) < level + 2 {
                    return Err(Error::Gate("controlled qudit Givens needs a qubit control and a qudit target".into()));
                }
            }
            Displacement => {
                if layout.mode_site() != Some(self.sites[0]) {
                    return Err(Error::Layout("displacement acts on the bosonic mode".into()));
                }
            }
            ControlledParity | ControlledRotation | ControlledDisplacement => {
                if dim(self.sites[0]) != 2 || layout.mode_site() != Some(self.sites[1]) {
                    return Err(Error::Layout(format!("{k:?} needs a qubit control and the bosonic mode")));
                }
            }
            FabricSingle | FabricPair => {
                let s0 = self.sites[0];
                let contiguous = self.sites.iter().enumerate().all(|(i, &s)| s == s0 + i);
                if !contiguous || !self.sites.iter().all(|&s| layout.is_fermionic(s)) {
                    return Err(Error::Layout("fabric blocks need four contiguous fermionic qubits".into()));
                }
            }
            _ => {
                if self.sites.iter().any(|&s| dim(s) != 2) {
                    return Err(Error::Gate(format!("{k:?} acts on qubits only")));
                }
            }
        }
        Ok(())
    }
}

/// Local action of a gate: a fixed unitary or an exponential family `exp(θ G)`.
#[derive(Debug, Clone)]
pub enum LocalAction {
    Fixed(CMatrix),
    Generator(CMatrix),
}

fn m2(a: [C64; 4]) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &a)
}

fn proj(bit: usize) -> CMatrix {
    let mut p = CMatrix::zeros(2, 2);
    p[(bit, bit)] = ONE;
    p
}

fn controlled(u: &CMatrix) -> CMatrix {
    let d = u.nrows();
    kron(&proj(0), &CMatrix::identity(d, d)) + kron(&proj(1), u)
}

fn controlled_generator(g: &CMatrix) -> CMatrix {
    kron(&proj(1), g)
}

fn scale(m: &CMatrix, z: C64) -> CMatrix {
    m.map(|x| x * z)
}

fn number_op(d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| if i == j { c(i as f64) } else { ZERO })
}

/// `b − b†` on `d` levels.
fn displacement_generator(d: usize) -> CMatrix {
    let bdag = ladder_creation(d - 1);
    bdag.adjoint() - bdag
}

pub(crate) fn fabric_generators() -> (CMatrix, CMatrix) {
    let a = jw_creation_matrices(4);
    let ad: Vec<CMatrix> = a.iter().map(|m| m.adjoint()).collect();
    let mut single = CMatrix::zeros(16, 16);
    for s in 0..2 {
        let t = &a[2 + s] * &ad[s];
        single += &t - t.adjoint();
    }
    let t = &a[2] * &a[3] * &ad[1] * &ad[0];
    let pair = &t - t.adjoint();
    (single, pair)
}

/// Local action of `kind` on sites of the given dimensions.
pub fn local_action(kind: GateKind, dims: &[usize]) -> LocalAction {
    use GateKind::*;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let half_i = C64::new(0.0, -0.5);
    match kind {
        H => LocalAction::Fixed(m2([c(h), c(h), c(h), c(-h)])),
        S => LocalAction::Fixed(m2([ONE, ZERO, ZERO, I])),
        Sdg => LocalAction::Fixed(m2([ONE, ZERO, ZERO, -I])),
        X => LocalAction::Fixed(Pauli::X.matrix()),
        Z => LocalAction::Fixed(Pauli::Z.matrix()),
        Ry => LocalAction::Generator(scale(&Pauli::Y.matrix(), half_i)),
        Rz => LocalAction::Generator(scale(&Pauli::Z.matrix(), half_i)),
        Cx => LocalAction::Fixed(controlled(&Pauli::X.matrix())),
        Cz => LocalAction::Fixed(controlled(&Pauli::Z.matrix())),
        Cry => LocalAction::Generator(controlled_generator(&scale(&Pauli::Y.matrix(), half_i))),
        Crz => LocalAction::Generator(controlled_generator(&scale(&Pauli::Z.matrix(), half_i))),
        GivensQubit => LocalAction::Generator(givens_qubit_generator()),
        ControlledGivensQubit => LocalAction::Generator(controlled_generator(&givens_qubit_generator())),
        GivensQudit { level } => LocalAction::Generator(qudit_givens_generator(dims[0], level)),
        ControlledGivensQudit { level } => {
            LocalAction::Generator(controlled_generator(&qudit_givens_generator(dims[1], level)))
        }
        Displacement => LocalAction::Generator(displacement_generator(dims[0])),
        ControlledParity => {
            let d = dims[1];
            let parity = CMatrix::from_fn(d, d, |i, j| if i == j { c(if i % 2 == 0 { 1.0 } else { -1.0 }) } else { ZERO });
            LocalAction::Fixed(controlled(&parity))
        }
        ControlledRotation => LocalAction::Generator(scale(&kron(&Pauli::Z.matrix(), &number_op(dims[1])), half_i)),
        ControlledDisplacement => LocalAction::Generator(kron(&Pauli::Z.matrix(), &displacement_generator(dims[1]))),
        FabricSingle => LocalAction::Generator(fabric_generators().0),
        FabricPair => LocalAction::Generator(fabric_generators().1),
    }
}

/// `|10⟩⟨01| − |01⟩⟨10|` in local order `[q, q']`.
fn givens_qubit_generator() -> CMatrix {
    let mut g = CMatrix::zeros(4, 4);
    g[(2, 1)] = ONE;
    g[(1, 2)] = -ONE;
    g
}

/// `|l+1⟩⟨l| − |l⟩⟨l+1|`, i.e. `−i Λ^Y_{l,l+1}`.
fn qudit_givens_generator(d: usize, level: usize) -> CMatrix {
    let mut g = CMatrix::zeros(d, d);
    g[(level + 1, level)] = ONE;
    g[(level, level + 1)] = -ONE;
    g
}

/// Two controlled CX + two CRY realization of a controlled qubit Givens rotation.
///
/// Applied in order: `H_b, CX(b→a), CRY(c→b, θ), CRY(c→a, θ), CX(b→a), H_b`
/// for sites `[c, a, b]`.
pub fn controlled_givens_two_cx(c_: usize, a: usize, b: usize, param: Param) -> Vec<Gate> {
    vec![
        Gate::fixed(GateKind::H, vec![b]),
        Gate::fixed(GateKind::Cx, vec![b, a]),
        Gate::new(GateKind::Cry, vec![c_, b], param),
        Gate::new(GateKind::Cry, vec![c_, a], param),
        Gate::fixed(GateKind::Cx, vec![b, a]),
        Gate::fixed(GateKind::H, vec![b]),
    ]
}

/// Controlled Givens as two controlled Pauli-string exponentials,
/// `exp(iθ/2 X_aY_b)` and `exp(−iθ/2 Y_aX_b)`, each conjugated into `Z_aZ_b`
/// and realized with `CX · CRZ · CX`. Six entangling gates in total.
pub fn controlled_givens_pauli_strings(c_: usize, a: usize, b: usize, param: Param) -> Vec<Gate> {
    let mut out = Vec::new();
    // (letter on a, letter on b, CRZ angle scale)
    for (pa, pb, k) in [(Pauli::X, Pauli::Y, -1.0), (Pauli::Y, Pauli::X, 1.0)] {
        let into_z = |p: Pauli, s: usize| -> Vec<Gate> {
            match p {
                Pauli::X => vec![Gate::fixed(GateKind::H, vec![s])],
                Pauli::Y => vec![Gate::fixed(GateKind::Sdg, vec![s]), Gate::fixed(GateKind::H, vec![s])],
                _ => unreachable!(),
            }
        };
        let out_of_z = |p: Pauli, s: usize| -> Vec<Gate> {
            match p {
                Pauli::X => vec![Gate::fixed(GateKind::H, vec![s])],
                Pauli::Y => vec![Gate::fixed(GateKind::H, vec![s]), Gate::fixed(GateKind::S, vec![s])],
                _ => unreachable!(),
            }
        };
        out.extend(into_z(pa, a));
        out.extend(into_z(pb, b));
        out.push(Gate::fixed(GateKind::Cx, vec![a, b]));
        out.push(Gate::new(GateKind::Crz, vec![c_, b], param.scaled(k)));
        out.push(Gate::fixed(GateKind::Cx, vec![a, b]));
        out.extend(out_of_z(pa, a));
        out.extend(out_of_z(pb, b));
    }
    out
}

/// Controlled displacement as parity-conjugated displacement: `CP · D(θ) · CP`.
pub fn controlled_displacement_parity(c_: usize, mode: usize, param: Param) -> Vec<Gate> {
    vec![
        Gate::fixed(GateKind::ControlledParity, vec![c_, mode]),
        Gate::new(GateKind::Displacement, vec![mode], param),
        Gate::fixed(GateKind::ControlledParity, vec![c_, mode]),
    ]
}

/// Expand a gate into platform primitives when it is flagged `Compiled`.
pub fn expand(gate: &Gate) -> Vec<Gate> {
    if gate.decomposition == Decomposition::Native {
        return vec![gate.clone()];
    }
    match gate.kind {
        GateKind::ControlledGivensQubit => {
            controlled_givens_two_cx(gate.sites[0], gate.sites[1], gate.sites[2], gate.param)
        }
        GateKind::ControlledDisplacement => controlled_displacement_parity(gate.sites[0], gate.sites[1], gate.param),
        _ => vec![Gate { decomposition: Decomposition::Native, ..gate.clone() }],
    }
}

/// Entangling primitives a gate costs once compiled for its platform.
pub fn entangling_cost(gate: &Gate) -> usize {
    match gate.kind {
        GateKind::ControlledGivensQubit => 4,
        GateKind::ControlledDisplacement => 2,
        k if k.is_entangling_primitive() => 1,
        _ => 0,
    }
}
