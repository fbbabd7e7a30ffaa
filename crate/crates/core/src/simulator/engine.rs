use std::collections::HashMap;
use std::sync::Arc;

use super::gates::{expand, local_action, Gate, GateKind, LocalAction, Param};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::linalg::{BlockOp, CMatrix, GeneratorExp, C64, ONE, ZERO};
use crate::mappings::RegisterLayout;

/// Index bookkeeping for a gate acting on a subset of sites.
#[derive(Debug, Clone)]
pub struct SiteMap {
    /// Offset of each local basis state, local order = site list order.
    pub offsets: Vec<usize>,
    /// Register indices with every acted-on digit zero.
    pub bases: Vec<usize>,
}

impl SiteMap {
    pub fn new(layout: &RegisterLayout, sites: &[usize]) -> Self {
        let dims = &layout.site_dims;
        let n = dims.len();
        let mut strides = vec![1usize; n];
        for k in (0..n - 1).rev() {
            strides[k] = strides[k + 1] * dims[k + 1];
        }
        let mut offsets = vec![0usize];
        for &s in sites {
            let mut next = Vec::with_capacity(offsets.len() * dims[s]);
            for &o in &offsets {
                for v in 0..dims[s] {
                    next.push(o + v * strides[s]);
                }
            }
            offsets = next;
        }
        let mut bases = vec![0usize];
        for k in 0..n {
            if sites.contains(&k) {
                continue;
            }
            let mut next = Vec::with_capacity(bases.len() * dims[k]);
            for &b in &bases {
                for v in 0..dims[k] {
                    next.push(b + v * strides[k]);
                }
            }
            bases = next;
        }
        Self { offsets, bases }
    }

    pub fn local_dim(&self) -> usize {
        self.offsets.len()
    }

    /// `amps ← (1 ⊗ op) amps`; indices outside the blocks are left unchanged.
    pub fn apply_blocks(&self, amps: &mut [C64], op: &BlockOp) {
        let mut buf = Vec::new();
        for &b in &self.bases {
            for (idx, m) in &op.blocks {
                buf.clear();
                buf.extend(idx.iter().map(|&k| amps[b + self.offsets[k]]));
                for (i, &k) in idx.iter().enumerate() {
                    let mut acc = ZERO;
                    for (j, x) in buf.iter().enumerate() {
                        acc += m[(i, j)] * x;
                    }
                    amps[b + self.offsets[k]] = acc;
                }
            }
        }
    }

    /// `⟨left|(1 ⊗ op)|right⟩` with `op` zero outside its blocks.
    pub fn sandwich(&self, left: &[C64], op: &BlockOp, right: &[C64]) -> C64 {
        let mut total = ZERO;
        for &b in &self.bases {
            for (idx, m) in &op.blocks {
                for (i, &ki) in idx.iter().enumerate() {
                    let l = left[b + self.offsets[ki]];
                    if l == ZERO {
                        continue;
                    }
                    let mut acc = ZERO;
                    for (j, &kj) in idx.iter().enumerate() {
                        acc += m[(i, j)] * right[b + self.offsets[kj]];
                    }
                    total += l.conj() * acc;
                }
            }
        }
        total
    }
}

fn local_dims(layout: &RegisterLayout, sites: &[usize]) -> Vec<usize> {
    sites.iter().map(|&s| layout.site_dims[s]).collect()
}

#[derive(Debug, Clone)]
pub enum OpAction {
    Fixed(Arc<BlockOp>),
    Param { family: Arc<GeneratorExp>, param: Param },
}

/// One primitive step of a prepared program.
#[derive(Debug, Clone)]
pub struct Op {
    pub kind: GateKind,
    pub map: Arc<SiteMap>,
    pub action: OpAction,
}

/// A gate list lowered to index maps and cached exponential families.
#[derive(Debug, Clone)]
pub struct Program {
    pub layout: RegisterLayout,
    pub ops: Vec<Op>,
    pub n_params: usize,
}

impl Program {
    pub fn new(layout: &RegisterLayout, gates: &[Gate]) -> Result<Self> {
        let mut maps: HashMap<Vec<usize>, Arc<SiteMap>> = HashMap::new();
        let mut families: HashMap<(GateKind, Vec<usize>), Arc<GeneratorExp>> = HashMap::new();
        let mut ops = Vec::new();
        let mut n_params = 0;
        for g in gates {
            g.validate(layout)?;
            for p in expand(g) {
                p.validate(layout)?;
                if let Param::Slot { slot, .. } = p.param {
                    n_params = n_params.max(slot + 1);
                }
                let map = maps.entry(p.sites.clone()).or_insert_with(|| Arc::new(SiteMap::new(layout, &p.sites))).clone();
                let dims = local_dims(layout, &p.sites);
                let action = match local_action(p.kind, &dims) {
                    LocalAction::Fixed(u) => OpAction::Fixed(Arc::new(BlockOp::from_dense(&u, ONE))),
                    LocalAction::Generator(gen) => {
                        let fam = families
                            .entry((p.kind, dims.clone()))
                            .or_insert_with(|| Arc::new(GeneratorExp::new(gen)))
                            .clone();
                        OpAction::Param { family: fam, param: p.param }
                    }
                };
                ops.push(Op { kind: p.kind, map, action });
            }
        }
        Ok(Self { layout: layout.clone(), ops, n_params })
    }

    fn check(&self, state: &StateVector, theta: &[f64]) -> Result<()> {
        if state.layout != self.layout {
            return Err(Error::Layout("state and program use different registers".into()));
        }
        if theta.len() < self.n_params {
            return Err(Error::Shape(format!("{} parameters supplied, program needs {}", theta.len(), self.n_params)));
        }
        Ok(())
    }

    /// Unitary of every op at `theta`, in program order.
    pub fn prepare(&self, theta: &[f64]) -> Vec<Arc<BlockOp>> {
        self.ops
            .iter()
            .map(|op| match &op.action {
                OpAction::Fixed(u) => u.clone(),
                OpAction::Param { family, param } => Arc::new(family.unitary_blocks(param.value(theta))),
            })
            .collect()
    }

    /// Apply unitaries from [`Program::prepare`].
    pub fn run_prepared(&self, amps: &mut [C64], unitaries: &[Arc<BlockOp>]) {
        for (op, u) in self.ops.iter().zip(unitaries) {
            op.map.apply_blocks(amps, u);
        }
    }

    pub fn run(&self, state: &mut StateVector, theta: &[f64]) -> Result<()> {
        self.check(state, theta)?;
        let us = self.prepare(theta);
        self.run_prepared(&mut state.amps, &us);
        Ok(())
    }

    /// Dense unitary of the whole program (test path).
    pub fn matrix(&self, theta: &[f64]) -> Result<CMatrix> {
        let d = self.layout.dim();
        let mut out = CMatrix::zeros(d, d);
        for j in 0..d {
            let mut s = StateVector::basis(&self.layout, j)?;
            self.run(&mut s, theta)?;
            out.set_column(j, &nalgebra::DVector::from_vec(s.amps));
        }
        Ok(out)
    }
}

/// Apply a single gate with parameter vector `theta`.
pub fn apply(state: &mut StateVector, gate: &Gate, theta: &[f64]) -> Result<()> {
    let prog = Program::new(&state.layout, std::slice::from_ref(gate))?;
    prog.run(state, theta)
}

/// Full-register unitary of a gate.
pub fn gate_matrix(gate: &Gate, theta: &[f64], layout: &RegisterLayout) -> Result<CMatrix> {
    Program::new(layout, std::slice::from_ref(gate))?.matrix(theta)
}
