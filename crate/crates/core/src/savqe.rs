//! State-averaged VQE: ensemble energy, multistart optimization, subspace
//! resolution and comparison against exact polaritonic states.

use std::cell::RefCell;

use argmin::core::{CostFunction, Executor, Gradient, State, TerminationReason};
use argmin::solver::linesearch::MoreThuenteLineSearch;
use argmin::solver::quasinewton::LBFGS;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ansatz::{build_ansatz, platform_layout, Circuit, EnsembleSpec};
use crate::error::{Error, Result};
use crate::integrals::MolecularIntegrals;
use crate::linalg::{hermitian_eigen, inner, BlockOp, CMatrix, C64, ZERO};
use crate::mappings::{assemble_platform_hamiltonian, platform_observables, Platform};
use crate::qedfci::{polaritonic_states, CavitySpec, HybridBasis, OperatorMatrix, Spectrum, DEGENERACY_TOL};
use crate::simulator::{OpAction, Param, Program, StateVector};

/// Hermitian register Hamiltonian in compressed-row form.
#[derive(Debug, Clone)]
pub struct SparseHamiltonian {
    csr: CsrMatrix<C64>,
}

impl SparseHamiltonian {
    pub fn from_operator(op: &OperatorMatrix) -> Result<Self> {
        if !op.hermitian {
            return Err(Error::Domain("Hamiltonian is not hermitian".into()));
        }
        let n = op.dim();
        let mut coo = CooMatrix::new(n, n);
        for j in 0..n {
            for i in 0..n {
                let z = op.matrix[(i, j)];
                if z.norm() > 1e-14 {
                    coo.push(i, j, z);
                }
            }
        }
        Ok(Self { csr: CsrMatrix::from(&coo) })
    }

    pub fn dim(&self) -> usize {
        self.csr.nrows()
    }

    pub fn nnz(&self) -> usize {
        self.csr.nnz()
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        self.csr
            .row_iter()
            .map(|row| row.col_indices().iter().zip(row.values()).map(|(&j, z)| z * v[j]).sum())
            .collect()
    }

    pub fn expectation(&self, v: &[C64]) -> f64 {
        inner(v, &self.apply(v)).re
    }

    /// Copy with `c·I` added.
    pub fn shifted(&self, c: f64) -> Self {
        let mut coo = CooMatrix::new(self.dim(), self.dim());
        for (i, j, z) in self.csr.triplet_iter() {
            coo.push(i, j, *z);
        }
        for i in 0..self.dim() {
            coo.push(i, i, C64::new(c, 0.0));
        }
        Self { csr: CsrMatrix::from(&coo) }
    }
}

fn check_orthonormal(states: &[StateVector]) -> Result<()> {
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate() {
            let want = if i == j { 1.0 } else { 0.0 };
            if (a.inner(b) - C64::new(want, 0.0)).norm() > 1e-10 {
                return Err(Error::Domain(format!("initial states {i} and {j} are not orthonormal")));
            }
        }
    }
    Ok(())
}

/// Ensemble energy as a function of the circuit parameters.
#[derive(Debug, Clone)]
pub struct Objective {
    pub program: Program,
    pub hamiltonian: SparseHamiltonian,
    pub initial: Vec<StateVector>,
    pub weights: Vec<f64>,
}

impl Objective {
    pub fn new(circuit: &Circuit, hamiltonian: SparseHamiltonian, initial: Vec<StateVector>, weights: Vec<f64>) -> Result<Self> {
        if initial.is_empty() || initial.len() != weights.len() {
            return Err(Error::Shape(format!("{} states with {} weights", initial.len(), weights.len())));
        }
        if weights.iter().any(|&w| !(w > 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::Domain("ensemble weights must be positive and sum to 1".into()));
        }
        if hamiltonian.dim() != circuit.layout.dim() || initial.iter().any(|s| s.layout != circuit.layout) {
            return Err(Error::Layout("Hamiltonian, states and circuit use different registers".into()));
        }
        check_orthonormal(&initial)?;
        Ok(Self { program: circuit.program()?, hamiltonian, initial, weights })
    }

    pub fn n_params(&self) -> usize {
        self.program.n_params
    }

    pub fn states(&self, theta: &[f64]) -> Result<Vec<StateVector>> {
        if theta.len() < self.n_params() {
            return Err(Error::Shape(format!("{} parameters supplied, program needs {}", theta.len(), self.n_params())));
        }
        let us = self.program.prepare(theta);
        Ok(self
            .initial
            .iter()
            .map(|s| {
                let mut out = s.clone();
                self.program.run_prepared(&mut out.amps, &us);
                out
            })
            .collect())
    }

    pub fn energy(&self, theta: &[f64]) -> Result<f64> {
        let states = self.states(theta)?;
        Ok(states.iter().zip(&self.weights).map(|(s, w)| w * self.hamiltonian.expectation(&s.amps)).sum())
    }

    /// Energy and its gradient by reverse-mode sweep through the program.
    pub fn energy_and_gradient(&self, theta: &[f64]) -> Result<(f64, Vec<f64>)> {
        if theta.len() < self.n_params() {
            return Err(Error::Shape(format!("{} parameters supplied, program needs {}", theta.len(), self.n_params())));
        }
        let us = self.program.prepare(theta);
        let dag: Vec<BlockOp> = us.iter().map(|u| u.adjoint()).collect();
        let mut grad = vec![0.0; theta.len()];
        let mut energy = 0.0;
        for (s, &w) in self.initial.iter().zip(&self.weights) {
            let mut phi = s.amps.clone();
            self.program.run_prepared(&mut phi, &us);
            let mut lam = self.hamiltonian.apply(&phi);
            energy += w * inner(&phi, &lam).re;
            for (j, op) in self.program.ops.iter().enumerate().rev() {
                if let OpAction::Param { family, param: Param::Slot { slot, scale } } = &op.action {
                    grad[*slot] += 2.0 * w * scale * op.map.sandwich(&lam, family.generator_blocks(), &phi).re;
                }
                op.map.apply_blocks(&mut phi, &dag[j]);
                op.map.apply_blocks(&mut lam, &dag[j]);
            }
        }
        Ok((energy, grad))
    }
}

/// `Σ_k w_k ⟨ψ_k|U†(θ) H U(θ)|ψ_k⟩`.
pub fn sa_energy(circuit: &Circuit, theta: &[f64], h: &OperatorMatrix, initial: &[StateVector], weights: &[f64]) -> Result<f64> {
    Objective::new(circuit, SparseHamiltonian::from_operator(h)?, initial.to_vec(), weights.to_vec())?.energy(theta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    /// Stop a local run when one iteration lowers the energy by less than this.
    pub energy_tol: f64,
    pub grad_tol: f64,
    /// Iteration cap of each local run.
    pub max_iterations: u64,
    /// Perturbed restarts in addition to the run from the starting point.
    pub restarts: usize,
    pub seed: u64,
    /// Restart offsets are uniform in `[-perturbation, perturbation]`.
    pub perturbation: f64,
    pub lbfgs_memory: usize,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        Self { energy_tol: 1e-9, grad_tol: 1e-8, max_iterations: 5000, restarts: 5, seed: 0, perturbation: 0.5, lbfgs_memory: 10 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerTrace {
    pub energy_evaluations: usize,
    pub gradient_evaluations: usize,
    pub runs: usize,
    /// Final energy of each local run.
    pub run_energies: Vec<f64>,
    /// Best energy after each run; non-increasing.
    pub best_so_far: Vec<f64>,
    /// At least one local run met a stopping tolerance.
    pub converged: bool,
}

struct Tracked<'a> {
    objective: &'a Objective,
    evals: &'a RefCell<(usize, usize)>,
    best: &'a RefCell<(f64, Vec<f64>)>,
}

impl Tracked<'_> {
    fn record(&self, e: f64, theta: &[f64]) {
        let mut b = self.best.borrow_mut();
        if e < b.0 {
            *b = (e, theta.to_vec());
        }
    }
}

impl CostFunction for Tracked<'_> {
    type Param = Vec<f64>;
    type Output = f64;

    fn cost(&self, p: &Vec<f64>) -> std::result::Result<f64, argmin::core::Error> {
        self.evals.borrow_mut().0 += 1;
        let e = self.objective.energy(p)?;
        self.record(e, p);
        Ok(e)
    }
}

impl Gradient for Tracked<'_> {
    type Param = Vec<f64>;
    type Gradient = Vec<f64>;

    fn gradient(&self, p: &Vec<f64>) -> std::result::Result<Vec<f64>, argmin::core::Error> {
        self.evals.borrow_mut().1 += 1;
        let (e, g) = self.objective.energy_and_gradient(p)?;
        self.record(e, p);
        Ok(g)
    }
}

/// Local L-BFGS run; returns `(energy, θ, converged, evaluations)`.
fn local_run(objective: &Objective, start: Vec<f64>, opts: &OptimizerOptions) -> Result<(f64, Vec<f64>, bool, (usize, usize))> {
    let e0 = objective.energy(&start)?;
    let evals = RefCell::new((1, 0));
    let best = RefCell::new((e0, start.clone()));
    let tracked = Tracked { objective, evals: &evals, best: &best };
    if start.is_empty() {
        return Ok((e0, start, true, (1, 0)));
    }
    let solver = LBFGS::new(MoreThuenteLineSearch::new(), opts.lbfgs_memory)
        .with_tolerance_grad(opts.grad_tol)
        .and_then(|s| s.with_tolerance_cost(opts.energy_tol))
        .map_err(|e| Error::Config(e.to_string()))?;
    let outcome = Executor::new(tracked, solver).configure(|s| s.param(start).max_iters(opts.max_iterations)).run();
    // Line-search failures near a minimum end the run; the tracked best point stands.
    let converged = match &outcome {
        Ok(res) => matches!(res.state().get_termination_reason(), Some(TerminationReason::SolverConverged)),
        Err(_) => false,
    };
    let (e, theta) = best.into_inner();
    Ok((e, theta, converged, evals.into_inner()))
}

/// Lowest ensemble energy over a run from `start` (zeros if `None`) and
/// `opts.restarts` perturbed runs.
pub fn minimize(objective: &Objective, start: Option<&[f64]>, opts: &OptimizerOptions) -> Result<(Vec<f64>, f64, OptimizerTrace)> {
    let n = objective.n_params();
    let start: Vec<f64> = match start {
        Some(s) if s.len() == n => s.to_vec(),
        Some(s) => return Err(Error::Shape(format!("start has {} parameters, circuit has {n}", s.len()))),
        None => vec![0.0; n],
    };
    let mut trace = OptimizerTrace {
        energy_evaluations: 0,
        gradient_evaluations: 0,
        runs: 0,
        run_energies: Vec::new(),
        best_so_far: Vec::new(),
        converged: false,
    };
    let mut best = (f64::INFINITY, start.clone());
    for run in 0..=opts.restarts {
        let mut x0 = start.clone();
        if run > 0 {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(1_000_003).wrapping_add(run as u64));
            for x in x0.iter_mut() {
                *x += opts.perturbation * (2.0 * rng.random::<f64>() - 1.0);
            }
        }
        let (e, theta, conv, (ne, ng)) = local_run(objective, x0, opts)?;
        trace.runs += 1;
        trace.energy_evaluations += ne;
        trace.gradient_evaluations += ng;
        trace.converged |= conv;
        trace.run_energies.push(e);
        if e < best.0 {
            best = (e, theta);
        }
        trace.best_so_far.push(best.0);
        if n == 0 {
            break;
        }
    }
    Ok((best.1, best.0, trace))
}

/// Subspace matrix, its eigen-decomposition and the rotated states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub subspace: CMatrix,
    pub energies: Vec<f64>,
    /// Column `k` holds the coefficients of resolved state `k` on the trial states.
    pub rotation: CMatrix,
    pub states: Vec<StateVector>,
}

/// Diagonalize `H_kk' = ⟨ψ_k(θ)|H|ψ_k'(θ)⟩`.
///
/// Degenerate eigenvalues are ordered by overlap with `reference` register
/// states when given, else by trial-state index.
pub fn subspace_resolve(objective: &Objective, theta: &[f64], reference: Option<&[StateVector]>) -> Result<Resolved> {
    let states = objective.states(theta)?;
    let n = states.len();
    let hs: Vec<Vec<C64>> = states.iter().map(|s| objective.hamiltonian.apply(&s.amps)).collect();
    let mut m = CMatrix::from_fn(n, n, |i, j| inner(&states[i].amps, &hs[j]));
    m = (&m + m.adjoint()).map(|z| z * 0.5);
    let (vals, vecs) = hermitian_eigen(&m);

    let targets: Vec<Vec<C64>> = match reference {
        Some(refs) => refs.iter().map(|r| states.iter().map(|s| s.inner(r)).collect()).collect(),
        None => (0..n).map(|k| (0..n).map(|i| if i == k { C64::new(1.0, 0.0) } else { ZERO }).collect()).collect(),
    };
    let mut rotation = vecs.clone();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && (vals[end] - vals[start]).abs() < DEGENERACY_TOL * (1.0 + vals[start].abs()) {
            end += 1;
        }
        if end - start > 1 {
            let cluster: Vec<Vec<C64>> = (start..end).map(|j| vecs.column(j).iter().copied().collect()).collect();
            let ordered = order_in_cluster(&cluster, &targets);
            for (k, v) in ordered.into_iter().enumerate() {
                rotation.set_column(start + k, &nalgebra::DVector::from_vec(v));
            }
        }
        start = end;
    }
    let resolved: Vec<StateVector> = (0..n)
        .map(|k| {
            let mut amps = vec![ZERO; objective.hamiltonian.dim()];
            for (i, s) in states.iter().enumerate() {
                let coef = rotation[(i, k)];
                for (a, b) in amps.iter_mut().zip(&s.amps) {
                    *a += coef * b;
                }
            }
            StateVector { layout: states[0].layout.clone(), amps }
        })
        .collect();
    Ok(Resolved { subspace: m, energies: vals, rotation, states: resolved })
}

fn order_in_cluster(cluster: &[Vec<C64>], targets: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut chosen: Vec<Vec<C64>> = Vec::new();
    let candidates = targets.iter().cloned().chain(cluster.iter().cloned());
    for t in candidates {
        if chosen.len() == cluster.len() {
            break;
        }
        let mut p = vec![ZERO; t.len()];
        for c in cluster {
            let ov = inner(c, &t);
            for (x, y) in p.iter_mut().zip(c) {
                *x += ov * y;
            }
        }
        for b in &chosen {
            let ov = inner(b, &p);
            for (x, y) in p.iter_mut().zip(b) {
                *x -= ov * y;
            }
        }
        let nrm = crate::linalg::norm(&p);
        if nrm > 1e-6 {
            p.iter_mut().for_each(|z| *z /= nrm);
            crate::linalg::fix_phase(&mut p);
            chosen.push(p);
        }
    }
    chosen
}

/// Register state re-indexed onto a QED-FCI basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decoded {
    pub amps: Vec<C64>,
    /// Norm² on physical states above the basis photon cutoff.
    pub truncated: f64,
}

/// Re-index a register state onto `basis`; amplitude outside the code space
/// or outside the basis electron sector is leakage.
pub fn decode_to_hybrid(state: &StateVector, basis: &HybridBasis) -> Result<Decoded> {
    let layout = &state.layout;
    let emb = layout.hybrid_embedding(basis)?;
    let amps: Vec<C64> = emb.iter().map(|&i| state.amps[i]).collect();
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let mut truncated = 0.0;
    for (i, z) in state.amps.iter().enumerate() {
        let (occ, n) = layout.decode(i);
        if let Some(n) = n {
            if n > basis.n_b_max && occ.count_ones() as usize == basis.n_e {
                truncated += z.norm_sqr();
            }
        }
    }
    let leakage = (state.norm().powi(2) - kept - truncated).max(0.0);
    if leakage > 1e-8 {
        return Err(Error::Leakage(leakage));
    }
    Ok(Decoded { amps, truncated })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SAVQEResult {
    pub platform: Platform,
    pub n_layers: usize,
    pub params: Vec<f64>,
    pub energy_sa: f64,
    pub subspace: CMatrix,
    pub energies: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<StateVector>,
    pub photon_numbers: Vec<f64>,
    pub trace: OptimizerTrace,
}

/// Optimize and resolve.
pub fn optimize(objective: &Objective, start: Option<&[f64]>, opts: &OptimizerOptions, reference: Option<&[StateVector]>) -> Result<SAVQEResult> {
    let (params, energy_sa, trace) = minimize(objective, start, opts)?;
    let resolved = subspace_resolve(objective, &params, reference)?;
    let layout = &objective.program.layout;
    let n_op = platform_observables(layout)?.photon_number;
    let photon_numbers = resolved.states.iter().map(|s| s.expectation(&n_op).re).collect();
    Ok(SAVQEResult {
        platform: layout.platform,
        n_layers: 0,
        params,
        energy_sa,
        subspace: resolved.subspace,
        energies: resolved.energies,
        states: resolved.states,
        photon_numbers,
        trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub delta_e_sa: f64,
    pub delta_e: Vec<f64>,
    pub infidelities: Vec<f64>,
    /// Error of the first vertical excitation `E₂ − E₁` (needs three states).
    pub delta_e12: Option<f64>,
}

pub fn diagnostics(result: &SAVQEResult, oracle: &Spectrum, basis: &HybridBasis) -> Result<Diagnostics> {
    let n = result.energies.len();
    if oracle.len() < n || result.states.len() != n {
        return Err(Error::Shape(format!("{n} SA-VQE states against {} exact states", oracle.len())));
    }
    let e_ens = oracle.ensemble_energy(n);
    let delta_e = (0..n).map(|k| (result.energies[k] - oracle.energies[k]).abs()).collect();
    let infidelities = (0..n)
        .map(|k| {
            let d = decode_to_hybrid(&result.states[k], basis)?;
            Ok((1.0 - inner(&oracle.vectors[k], &d.amps).norm_sqr()).clamp(0.0, 1.0))
        })
        .collect::<Result<Vec<f64>>>()?;
    let delta_e12 = (n >= 3).then(|| {
        ((result.energies[2] - result.energies[1]) - (oracle.energies[2] - oracle.energies[1])).abs()
    });
    Ok(Diagnostics { delta_e_sa: (result.energy_sa - e_ens).abs(), delta_e, infidelities, delta_e12 })
}

/// Everything needed to run SA-VQE for one molecule, cavity and platform.
#[derive(Debug, Clone)]
pub struct PolaritonProblem {
    pub circuit: Circuit,
    pub objective: Objective,
    /// Exact singlet states at the oracle cutoff.
    pub basis: HybridBasis,
    pub oracle: Spectrum,
}

impl PolaritonProblem {
    /// `cav.n_b_max` is the photon cutoff of the qubit/qudit registers and of
    /// the oracle; the qumode register uses `qumode_cutoff`.
    pub fn new(
        mi: &MolecularIntegrals,
        cav: &CavitySpec,
        platform: Platform,
        n_layers: usize,
        qumode_cutoff: usize,
        ensemble: &EnsembleSpec,
    ) -> Result<Self> {
        let layout = platform_layout(platform, cav.n_b_max, qumode_cutoff)?;
        let circuit = build_ansatz(platform, n_layers, &layout)?;
        let h = assemble_platform_hamiltonian(mi, &cav.with_cutoff(layout.photon_cutoff), &layout)?;
        let objective = Objective::new(&circuit, SparseHamiltonian::from_operator(&h)?, ensemble.prepare(&layout)?, ensemble.weights.clone())?;
        let (basis, _, oracle) = polaritonic_states(mi, cav, ensemble.n_states())?;
        Ok(Self { circuit, objective, basis, oracle })
    }

    /// Oracle states embedded in the register, for degenerate tie-breaking.
    pub fn reference_states(&self) -> Result<Vec<StateVector>> {
        let layout = &self.circuit.layout;
        let emb = layout.hybrid_embedding(&self.basis)?;
        Ok(self
            .oracle
            .vectors
            .iter()
            .map(|v| {
                let mut amps = vec![ZERO; layout.dim()];
                for (&i, z) in emb.iter().zip(v) {
                    amps[i] = *z;
                }
                StateVector { layout: layout.clone(), amps }
            })
            .collect())
    }

    pub fn solve(&self, start: Option<&[f64]>, opts: &OptimizerOptions) -> Result<(SAVQEResult, Diagnostics)> {
        let refs = self.reference_states()?;
        let mut res = optimize(&self.objective, start, opts, Some(&refs))?;
        res.n_layers = self.circuit.n_layers;
        let diag = diagnostics(&res, &self.oracle, &self.basis)?;
        Ok((res, diag))
    }
}
