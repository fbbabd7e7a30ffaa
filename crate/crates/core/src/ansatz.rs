//! Layered platform circuits, the three ensemble initial states, and resource counts.
//!
//! Each layer applies a spin-free single and a pair Gate-Fabric block to the
//! four fermionic qubits, then an electron-photon entangler ladder. Controls
//! `p↑` and `p↓` of the same spatial orbital always share one parameter slot.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, matvec, norm, ZERO};
use crate::mappings::{jw_creation_matrices, mapped_one_body, Platform, RegisterLayout};
use crate::simulator::{entangling_cost, Gate, GateKind, Param, Program, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlotRole {
    Fabric,
    Entangler,
}

/// One variational parameter and the gates that read it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSlot {
    pub role: SlotRole,
    pub layer: usize,
    pub label: String,
    /// Indices into `Circuit::gates`.
    pub gates: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub layout: RegisterLayout,
    pub n_layers: usize,
    pub gates: Vec<Gate>,
    pub slots: Vec<ParamSlot>,
}

impl Circuit {
    pub fn platform(&self) -> Platform {
        self.layout.platform
    }

    pub fn n_params(&self) -> usize {
        self.slots.len()
    }

    pub fn program(&self) -> Result<Program> {
        Program::new(&self.layout, &self.gates)
    }

    /// Output of the circuit on `state` at parameters `theta`.
    pub fn run(&self, state: &StateVector, theta: &[f64]) -> Result<StateVector> {
        let mut out = state.clone();
        self.program()?.run(&mut out, theta)?;
        Ok(out)
    }

    /// Parameters of a shallower circuit extended with zeros for the added layers.
    ///
    /// Zero slots are the identity, so the extended circuit reproduces the
    /// shallower one's states exactly.
    pub fn warm_start(&self, previous: &[f64]) -> Result<Vec<f64>> {
        let k = previous.len();
        let on_boundary = k == 0 || k == self.slots.len() || (k < self.slots.len() && self.slots[k - 1].layer != self.slots[k].layer);
        if k > self.slots.len() || !on_boundary {
            return Err(Error::Shape(format!("{k} parameters do not fill whole layers of a {}-slot circuit", self.slots.len())));
        }
        let mut out = previous.to_vec();
        out.resize(self.slots.len(), 0.0);
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Parse and validate a circuit dump.
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
        c.validate()?;
        Ok(c)
    }

    /// Every gate fits the layout, every slot is read, and the slot table matches the gates.
    pub fn validate(&self) -> Result<()> {
        let layout = RegisterLayout::new(self.layout.platform, self.layout.n_fermion_qubits, self.layout.photon_cutoff)?;
        if layout != self.layout {
            return Err(Error::Layout("site dimensions do not match the platform".into()));
        }
        let mut readers = vec![Vec::new(); self.slots.len()];
        for (i, g) in self.gates.iter().enumerate() {
            g.validate(&self.layout)?;
            if let Param::Slot { slot, scale } = g.param {
                if slot >= self.slots.len() {
                    return Err(Error::IndexOutOfRange { index: slot, len: self.slots.len() });
                }
                if !scale.is_finite() {
                    return Err(Error::Gate("non-finite parameter scale".into()));
                }
                readers[slot].push(i);
            }
        }
        for (k, (slot, r)) in self.slots.iter().zip(&readers).enumerate() {
            if r.is_empty() || *r != slot.gates {
                return Err(Error::Config(format!("slot {k} gate list does not match the circuit")));
            }
        }
        Ok(())
    }
}

struct Builder {
    gates: Vec<Gate>,
    slots: Vec<ParamSlot>,
}

impl Builder {
    fn slot(&mut self, role: SlotRole, layer: usize, label: String) -> usize {
        self.slots.push(ParamSlot { role, layer, label, gates: Vec::new() });
        self.slots.len() - 1
    }

    fn push(&mut self, gate: Gate) {
        if let Param::Slot { slot, .. } = gate.param {
            self.slots[slot].gates.push(self.gates.len());
        }
        self.gates.push(gate);
    }
}

/// Layered ansatz for a platform register with four fermionic qubits.
pub fn build_ansatz(platform: Platform, n_layers: usize, layout: &RegisterLayout) -> Result<Circuit> {
    if layout.platform != platform {
        return Err(Error::Layout(format!("{platform} ansatz on a {} register", layout.platform)));
    }
    if layout.n_fermion_qubits != 4 {
        return Err(Error::Layout(format!("ansatz needs 4 fermionic qubits, layout has {}", layout.n_fermion_qubits)));
    }
    let n_ferm = layout.n_fermion_qubits;
    let nb = layout.photon_cutoff;
    let mut b = Builder { gates: Vec::new(), slots: Vec::new() };
    for layer in 0..n_layers {
        let s = b.slot(SlotRole::Fabric, layer, "fabric_single".into());
        b.push(Gate::new(GateKind::FabricSingle, (0..4).collect(), Param::slot(s)));
        let s = b.slot(SlotRole::Fabric, layer, "fabric_pair".into());
        b.push(Gate::new(GateKind::FabricPair, (0..4).collect(), Param::slot(s)));
        match platform {
            Platform::Qubit | Platform::Qudit => {
                let first = b.slots.len();
                for p in 0..n_ferm / 2 {
                    for n in 0..nb {
                        b.slot(SlotRole::Entangler, layer, format!("orbital{p}_photon{n}_{}", n + 1));
                    }
                }
                for q in 0..n_ferm {
                    for n in 0..nb {
                        let slot = first + (q / 2) * nb + n;
                        let gate = match platform {
                            Platform::Qubit => {
                                let hi = layout.one_hot_site(n + 1).expect("qubit layout");
                                let lo = layout.one_hot_site(n).expect("qubit layout");
                                Gate::new(GateKind::ControlledGivensQubit, vec![q, hi, lo], Param::slot(slot))
                            }
                            _ => Gate::new(
                                GateKind::ControlledGivensQudit { level: n },
                                vec![q, layout.mode_site().expect("qudit layout")],
                                Param::slot(slot),
                            ),
                        };
                        b.push(gate);
                    }
                }
            }
            Platform::Qumode => {
                let mode = layout.mode_site().expect("qumode layout");
                let first = b.slots.len();
                for p in 0..n_ferm / 2 {
                    b.slot(SlotRole::Entangler, layer, format!("orbital{p}_displacement"));
                }
                for q in 0..n_ferm {
                    b.push(Gate::new(GateKind::ControlledDisplacement, vec![q, mode], Param::slot(first + q / 2)));
                }
            }
        }
    }
    let circuit = Circuit { layout: layout.clone(), n_layers, gates: b.gates, slots: b.slots };
    circuit.validate()?;
    Ok(circuit)
}

/// Register for a platform with the default bosonic truncation of that platform.
pub fn platform_layout(platform: Platform, n_b_max: usize, qumode_cutoff: usize) -> Result<RegisterLayout> {
    match platform {
        Platform::Qubit => RegisterLayout::qubit(4, n_b_max),
        Platform::Qudit => RegisterLayout::qudit(4, n_b_max),
        Platform::Qumode => RegisterLayout::qumode(4, qumode_cutoff),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialState {
    /// Hartree-Fock, no photon.
    A,
    /// HOMO→LUMO singlet excitation of Hartree-Fock, no photon.
    B,
    /// Hartree-Fock, one photon.
    C,
}

/// Ensemble of initial states with equal weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub states: Vec<InitialState>,
    pub weights: Vec<f64>,
}

impl Default for EnsembleSpec {
    fn default() -> Self {
        Self::equal(vec![InitialState::A, InitialState::B, InitialState::C])
    }
}

impl EnsembleSpec {
    pub fn equal(states: Vec<InitialState>) -> Self {
        let w = 1.0 / states.len() as f64;
        Self { weights: vec![w; states.len()], states }
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn prepare(&self, layout: &RegisterLayout) -> Result<Vec<StateVector>> {
        let all = prepare_initial_states(layout)?;
        Ok(self
            .states
            .iter()
            .map(|s| match s {
                InitialState::A => all[0].clone(),
                InitialState::B => all[1].clone(),
                InitialState::C => all[2].clone(),
            })
            .collect())
    }
}

const HF_OCCUPATION: u64 = 0b0011;

/// `[ψ_A, ψ_B, ψ_C]` on a two-orbital, two-electron register.
///
/// ψ_B is `(1/√2) Σ_σ a†_{1σ} a_{0σ} |HF⟩` with the Jordan-Wigner signs of the
/// mapped operator, so the two spin terms enter with the signs that make it a singlet.
pub fn prepare_initial_states(layout: &RegisterLayout) -> Result<[StateVector; 3]> {
    if layout.n_fermion_qubits != 4 {
        return Err(Error::Layout(format!(
            "initial states need two spatial orbitals, layout has {} fermionic qubits",
            layout.n_fermion_qubits
        )));
    }
    let a = StateVector::product(layout, HF_OCCUPATION, 0)?;
    let cst = StateVector::product(layout, HF_OCCUPATION, 1)?;

    let jw = jw_creation_matrices(4);
    let mut t = crate::linalg::RMatrix::zeros(2, 2);
    t[(1, 0)] = 1.0;
    let e_lh = mapped_one_body(&jw, &t);
    let mut hf = vec![ZERO; 16];
    hf[layout.fermion_index(HF_OCCUPATION)] = c(1.0);
    let mut excited = matvec(&e_lh, &hf);
    let nrm = norm(&excited);
    excited.iter_mut().for_each(|z| *z /= nrm);
    let bd = layout.boson_dim();
    let vac = layout.boson_index(0)?;
    let mut amps = vec![ZERO; layout.dim()];
    for (f, z) in excited.iter().enumerate() {
        amps[f * bd + vac] = *z;
    }
    let b = StateVector::from_amps(layout, amps)?;
    Ok([a, b, cst])
}

/// Resource tallies for a built ansatz.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceReport {
    pub platform: Platform,
    pub n_layers: usize,
    pub n_fermion_qubits: usize,
    pub n_b_max: usize,
    /// Number of bosonic information carriers (qubits, qudits or modes).
    pub boson_units: usize,
    /// Levels of each bosonic carrier.
    pub boson_unit_levels: usize,
    /// Electron-photon entangling primitives after compilation.
    pub entangling_per_layer: usize,
    pub entangling_total: usize,
    pub params_per_layer: usize,
    pub params_total: usize,
    pub params_fabric: usize,
    pub params_entangler: usize,
}

/// Closed-form electron-photon entangling count per layer.
pub fn entangling_per_layer_formula(platform: Platform, n_ferm: usize, n_b_max: usize) -> usize {
    match platform {
        Platform::Qubit => 4 * n_ferm * n_b_max,
        Platform::Qudit => n_ferm * n_b_max,
        Platform::Qumode => 2 * n_ferm,
    }
}

pub fn count_resources(circuit: &Circuit) -> ResourceReport {
    let l = &circuit.layout;
    let bridges = |g: &Gate| g.sites.iter().any(|&s| l.is_fermionic(s)) && g.sites.iter().any(|&s| !l.is_fermionic(s));
    let entangling_total: usize = circuit.gates.iter().filter(|g| bridges(g)).map(entangling_cost).sum();
    let params_fabric = circuit.slots.iter().filter(|s| s.role == SlotRole::Fabric).count();
    let params_total = circuit.slots.len();
    let per = |x: usize| if circuit.n_layers == 0 { 0 } else { x / circuit.n_layers };
    let (boson_units, boson_unit_levels) = match l.platform {
        Platform::Qubit => (l.photon_cutoff + 1, 2),
        _ => (1, l.photon_cutoff + 1),
    };
    ResourceReport {
        platform: l.platform,
        n_layers: circuit.n_layers,
        n_fermion_qubits: l.n_fermion_qubits,
        n_b_max: l.photon_cutoff,
        boson_units,
        boson_unit_levels,
        entangling_per_layer: per(entangling_total),
        entangling_total,
        params_per_layer: per(params_total),
        params_total,
        params_fabric,
        params_entangler: params_total - params_fabric,
    }
}
