//! Experiment drivers: single-point reports and the row-table commands.

use std::path::Path;
use std::time::Instant;

use polariton_core::ansatz::{build_ansatz, count_resources, platform_layout, EnsembleSpec, ResourceReport};
use polariton_core::integrals::{h2_sto3g, load_fcidump, write_fcidump, MolecularIntegrals, ANGSTROM_TO_BOHR};
use polariton_core::mappings::Platform;
use polariton_core::qedfci::{
    mean_photon_number, photon_sector_profile, polaritonic_states, truncation_convergence, CavitySpec, TruncationRow,
};
use polariton_core::savqe::{Diagnostics, OptimizerOptions, PolaritonProblem, SAVQEResult};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{row_seed, Command, ExperimentConfig, MoleculeSource};
use crate::error::CliError;
use crate::output::{ResultRow, RowLog, Table};

/// Chemical accuracy in Ha.
pub const CHEMICAL_ACCURACY: f64 = 1.6e-3;

/// Molecular integrals at a geometry; FCIDUMP input ignores the geometry.
pub struct Molecule {
    fixed: Option<MolecularIntegrals>,
}

impl Molecule {
    pub fn load(config: &ExperimentConfig) -> Result<Self, CliError> {
        let fixed = match &config.molecule {
            MoleculeSource::H2 => None,
            MoleculeSource::Fcidump { path, dipole } => Some(load_fcidump(path, dipole.as_deref())?),
        };
        Ok(Self { fixed })
    }

    pub fn at(&self, r: f64, theta_z: f64) -> polariton_core::Result<MolecularIntegrals> {
        match &self.fixed {
            Some(mi) => Ok(mi.clone()),
            None => Ok(h2_sto3g(r, theta_z)?.0),
        }
    }
}

fn cavity(config: &ExperimentConfig, lambda: f64) -> polariton_core::Result<CavitySpec> {
    CavitySpec::new(config.omega, lambda, config.n_b_max)
}

#[derive(Debug, Clone, Serialize)]
pub struct IntegralsReport {
    pub r_angstrom: f64,
    pub r_bohr: f64,
    pub theta_z: f64,
    pub n_orb: usize,
    pub n_e: usize,
    pub e_nuc: f64,
    pub e_hf: f64,
    pub fcidump: Option<String>,
    pub dipole: Option<String>,
}

/// Integrals at `r`, written to `out` (and `out.dip`) when given.
pub fn integrals_report(config: &ExperimentConfig, out: Option<&Path>) -> Result<IntegralsReport, CliError> {
    let mi = Molecule::load(config)?.at(config.r, config.theta_z)?;
    let (mut fcidump, mut dipole) = (None, None);
    if let Some(path) = out {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        let dip = path.with_extension("dip");
        write_fcidump(&mi, path, mi.dipole.as_ref().map(|_| dip.as_path()))?;
        fcidump = Some(path.display().to_string());
        dipole = mi.dipole.as_ref().map(|_| dip.display().to_string());
    }
    Ok(IntegralsReport {
        r_angstrom: config.r,
        r_bohr: config.r * ANGSTROM_TO_BOHR,
        theta_z: config.theta_z,
        n_orb: mi.n_orb,
        n_e: mi.n_e,
        e_nuc: mi.e_nuc,
        e_hf: mi.hf_energy(),
        fcidump,
        dipole,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct QedfciReport {
    pub r: f64,
    pub theta_z: f64,
    pub omega: f64,
    pub lambda: f64,
    pub n_b_max: usize,
    pub energies: Vec<f64>,
    pub photon_numbers: Vec<f64>,
    /// `[state][photon sector]` largest amplitude.
    pub sector_profiles: Vec<Vec<f64>>,
    /// Lowest three energies at `n_b_max` and at the qumode cutoff.
    pub truncation: Vec<TruncationRow>,
}

pub fn qedfci_report(config: &ExperimentConfig) -> Result<QedfciReport, CliError> {
    let mi = Molecule::load(config)?.at(config.r, config.theta_z)?;
    let cav = cavity(config, config.lambda)?;
    let (basis, _, spec) = polaritonic_states(&mi, &cav, config.states)?;
    let photon_numbers = spec.vectors.iter().map(|v| mean_photon_number(v, &basis)).collect();
    let sector_profiles = spec.vectors.iter().map(|v| photon_sector_profile(v, &basis)).collect::<Result<_, _>>()?;
    let mut cutoffs = vec![config.n_b_max];
    if config.qumode_cutoff > config.n_b_max {
        cutoffs.push(config.qumode_cutoff);
    }
    Ok(QedfciReport {
        r: config.r,
        theta_z: config.theta_z,
        omega: config.omega,
        lambda: config.lambda,
        n_b_max: config.n_b_max,
        energies: spec.energies,
        photon_numbers,
        sector_profiles,
        truncation: truncation_convergence(&mi, &cav, &cutoffs)?,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SavqeReport {
    pub platform: Platform,
    pub layers: usize,
    pub r: f64,
    pub theta_z: f64,
    pub lambda: f64,
    pub oracle_energies: Vec<f64>,
    pub result: SAVQEResult,
    pub diagnostics: Diagnostics,
    pub resources: ResourceReport,
}

/// One SA-VQE solve.
///
/// With `start` (parameters of a shallower circuit) the warm start competes
/// with a cold start and the lower ensemble energy wins, so the result never
/// exceeds the shallower circuit's energy.
pub fn solve_point(
    mi: &MolecularIntegrals,
    config: &ExperimentConfig,
    platform: Platform,
    layers: usize,
    lambda: f64,
    opts: &OptimizerOptions,
    start: Option<&[f64]>,
) -> polariton_core::Result<(PolaritonProblem, SAVQEResult, Diagnostics)> {
    let prob = PolaritonProblem::new(mi, &cavity(config, lambda)?, platform, layers, config.qumode_cutoff, &EnsembleSpec::default())?;
    let (res, diag) = match start {
        Some(prev) => {
            let warm = prob.solve(Some(&prob.circuit.warm_start(prev)?), opts)?;
            let cold = prob.solve(None, opts)?;
            if cold.0.energy_sa < warm.0.energy_sa {
                cold
            } else {
                warm
            }
        }
        None => prob.solve(None, opts)?,
    };
    Ok((prob, res, diag))
}

pub fn savqe_report(config: &ExperimentConfig) -> Result<Vec<SavqeReport>, CliError> {
    let mi = Molecule::load(config)?.at(config.r, config.theta_z)?;
    config
        .platforms
        .iter()
        .map(|&p| {
            let (prob, result, diagnostics) = solve_point(&mi, config, p, config.layers, config.lambda, &config.optimizer, None)?;
            Ok(SavqeReport {
                platform: p,
                layers: config.layers,
                r: config.r,
                theta_z: config.theta_z,
                lambda: config.lambda,
                oracle_energies: prob.oracle.energies.clone(),
                resources: count_resources(&prob.circuit),
                result,
                diagnostics,
            })
        })
        .collect()
}

pub fn resources_report(config: &ExperimentConfig) -> Result<Vec<ResourceReport>, CliError> {
    config
        .platforms
        .iter()
        .map(|&p| {
            let layout = platform_layout(p, config.n_b_max, config.qumode_cutoff)?;
            Ok(count_resources(&build_ansatz(p, config.layers, &layout)?))
        })
        .collect()
}

/// A unit of parallel work producing consecutive rows.
#[derive(Debug, Clone, PartialEq)]
pub enum Task {
    /// One SA-VQE solve.
    Point { row: usize, r: f64, theta_z: f64, platform: Platform },
    /// Warm-started layer counts on one platform, one row per count.
    LayerChain { first_row: usize, platform: Platform },
    /// Smallest layer count reaching chemical accuracy.
    Coupling { row: usize, lambda: f64, platform: Platform },
    /// Exact sector profile.
    Profile { row: usize, lambda: f64 },
}

impl Task {
    pub fn rows(&self, config: &ExperimentConfig) -> std::ops::Range<usize> {
        match *self {
            Task::Point { row, .. } | Task::Coupling { row, .. } | Task::Profile { row, .. } => row..row + 1,
            Task::LayerChain { first_row, .. } => first_row..first_row + config.layer_list.len(),
        }
    }
}

/// Work list of a table command in row order.
pub fn plan(config: &ExperimentConfig) -> Vec<Task> {
    let mut tasks = Vec::new();
    let mut row = 0;
    match config.command {
        Command::ScanLiac | Command::ScanLici => {
            let thetas = if config.command == Command::ScanLiac { vec![config.theta_z] } else { config.theta_grid.points() };
            for r in config.r_grid.points() {
                for &theta_z in &thetas {
                    for &platform in &config.platforms {
                        tasks.push(Task::Point { row, r, theta_z, platform });
                        row += 1;
                    }
                }
            }
        }
        Command::LayerSweep => {
            for &platform in &config.platforms {
                tasks.push(Task::LayerChain { first_row: row, platform });
                row += config.layer_list.len();
            }
        }
        Command::CouplingSweep => {
            for &lambda in &config.lambdas {
                for &platform in &config.platforms {
                    tasks.push(Task::Coupling { row, lambda, platform });
                    row += 1;
                }
            }
        }
        Command::SectorProfile => {
            for &lambda in &config.lambdas {
                tasks.push(Task::Profile { row, lambda });
                row += 1;
            }
        }
        _ => {}
    }
    tasks
}

fn fill_savqe(row: &mut ResultRow, prob: &PolaritonProblem, res: &SAVQEResult, diag: &Diagnostics) {
    let n = res.energies.len();
    row.oracle_energies = prob.oracle.energies[..n].to_vec();
    row.oracle_photon_numbers = prob.oracle.vectors[..n].iter().map(|v| mean_photon_number(v, &prob.basis)).collect();
    row.vqe_energies = res.energies.clone();
    row.vqe_photon_numbers = res.photon_numbers.clone();
    row.energy_sa = Some(res.energy_sa);
    row.delta_e_sa = Some(diag.delta_e_sa);
    row.delta_e = diag.delta_e.clone();
    row.infidelities = diag.infidelities.clone();
    row.delta_e12 = diag.delta_e12;
    let rep = count_resources(&prob.circuit);
    row.entangling_gates = Some(rep.entangling_total);
    row.params_total = Some(rep.params_total);
    row.params_fabric = Some(rep.params_fabric);
    row.params_entangler = Some(rep.params_entangler);
    row.converged = Some(res.trace.converged);
    row.evaluations = Some(res.trace.energy_evaluations + res.trace.gradient_evaluations);
}

fn seeded(config: &ExperimentConfig, row: usize) -> OptimizerOptions {
    OptimizerOptions { seed: row_seed(config.optimizer.seed, row), ..config.optimizer.clone() }
}

/// Run one task; numerical failures are recorded in the rows.
pub fn run_task(task: &Task, mol: &Molecule, config: &ExperimentConfig) -> Vec<ResultRow> {
    match *task {
        Task::Point { row, r, theta_z, platform } => {
            let t = Instant::now();
            let mut out = ResultRow::new(row, r, theta_z, config.lambda);
            out.platform = Some(platform);
            out.layers = Some(config.layers);
            let opts = seeded(config, row);
            out.seed = Some(opts.seed);
            let solved = mol.at(r, theta_z).and_then(|mi| solve_point(&mi, config, platform, config.layers, config.lambda, &opts, None));
            match solved {
                Ok((prob, res, diag)) => fill_savqe(&mut out, &prob, &res, &diag),
                Err(e) => out.error = Some(e.to_string()),
            }
            out.wall_time_s = t.elapsed().as_secs_f64();
            vec![out]
        }
        Task::LayerChain { first_row, platform } => {
            let mi = mol.at(config.r, config.theta_z);
            let mut prev: Option<Vec<f64>> = None;
            let mut rows = Vec::new();
            for (k, &layers) in config.layer_list.iter().enumerate() {
                let t = Instant::now();
                let row = first_row + k;
                let mut out = ResultRow::new(row, config.r, config.theta_z, config.lambda);
                out.platform = Some(platform);
                out.layers = Some(layers);
                let opts = seeded(config, row);
                out.seed = Some(opts.seed);
                let solved = match &mi {
                    Ok(mi) => solve_point(mi, config, platform, layers, config.lambda, &opts, prev.as_deref()).map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                };
                match solved {
                    Ok((prob, res, diag)) => {
                        fill_savqe(&mut out, &prob, &res, &diag);
                        prev = Some(res.params);
                    }
                    Err(e) => {
                        out.error = Some(e);
                        prev = None;
                    }
                }
                out.wall_time_s = t.elapsed().as_secs_f64();
                rows.push(out);
            }
            rows
        }
        Task::Coupling { row, lambda, platform } => {
            let t = Instant::now();
            let mut out = ResultRow::new(row, config.r, config.theta_z, lambda);
            out.platform = Some(platform);
            let opts = seeded(config, row);
            out.seed = Some(opts.seed);
            let outcome = mol.at(config.r, config.theta_z).and_then(|mi| {
                let mut prev: Option<Vec<f64>> = None;
                let mut last = None;
                for layers in 0..=config.max_layers {
                    let (prob, res, diag) = solve_point(&mi, config, platform, layers, lambda, &opts, prev.as_deref())?;
                    out.layer_errors.push(diag.delta_e_sa);
                    prev = Some(res.params.clone());
                    let reached = diag.delta_e_sa < CHEMICAL_ACCURACY;
                    last = Some((layers, prob, res, diag));
                    if reached {
                        break;
                    }
                }
                Ok(last)
            });
            match outcome {
                Ok(Some((layers, prob, res, diag))) => {
                    fill_savqe(&mut out, &prob, &res, &diag);
                    out.layers = Some(layers);
                    out.min_layers = (diag.delta_e_sa < CHEMICAL_ACCURACY).then_some(layers);
                }
                Ok(None) => {}
                Err(e) => out.error = Some(e.to_string()),
            }
            out.wall_time_s = t.elapsed().as_secs_f64();
            vec![out]
        }
        Task::Profile { row, lambda } => {
            let t = Instant::now();
            let mut out = ResultRow::new(row, config.r, config.theta_z, lambda);
            let profiled = mol.at(config.r, config.theta_z).and_then(|mi| {
                let (basis, _, spec) = polaritonic_states(&mi, &cavity(config, lambda)?, config.states)?;
                let profiles = spec.vectors.iter().map(|v| photon_sector_profile(v, &basis)).collect::<Result<Vec<_>, _>>()?;
                let photons = spec.vectors.iter().map(|v| mean_photon_number(v, &basis)).collect();
                Ok((spec.energies, photons, profiles))
            });
            match profiled {
                Ok((e, n, p)) => {
                    out.oracle_energies = e;
                    out.oracle_photon_numbers = n;
                    out.sector_profiles = p;
                }
                Err(e) => out.error = Some(e.to_string()),
            }
            out.wall_time_s = t.elapsed().as_secs_f64();
            vec![out]
        }
    }
}

/// Run a table command on `config.jobs` workers.
///
/// With an output directory every finished task is appended to the row log;
/// with `resume` the tasks whose rows are all logged are skipped.
pub fn run_table(config: &ExperimentConfig) -> Result<Table, CliError> {
    if !config.command.is_table() {
        return Err(CliError::config(format!("{} does not produce a table", config.command.name())));
    }
    let mol = Molecule::load(config)?;
    let tasks = plan(config);
    let (log, mut done) = match &config.output {
        Some(dir) => {
            let (log, done) = RowLog::open(dir, config)?;
            (Some(log), done)
        }
        None => (None, Default::default()),
    };
    let pending: Vec<&Task> = tasks.iter().filter(|t| !t.rows(config).all(|r| done.contains_key(&r))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.jobs).build().map_err(|e| CliError::config(e.to_string()))?;
    let fresh: Vec<Vec<ResultRow>> = pool.install(|| {
        pending
            .par_iter()
            .map(|task| {
                let rows = run_task(task, &mol, config);
                if let Some(log) = &log {
                    for r in &rows {
                        log.append(r)?;
                    }
                }
                Ok(rows)
            })
            .collect::<Result<_, CliError>>()
    })?;
    for row in fresh.into_iter().flatten() {
        done.insert(row.row, row);
    }
    let n_rows: usize = tasks.iter().map(|t| t.rows(config).len()).sum();
    let rows: Vec<ResultRow> = done.into_values().filter(|r| r.row < n_rows).collect();
    let table = Table::new(config, rows);
    if let Some(dir) = &config.output {
        table.write(dir)?;
    }
    Ok(table)
}
