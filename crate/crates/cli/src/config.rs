//! Experiment configuration: built-in defaults per command, a key-value file
//! format, and command-line overrides applied through the same keys.
//!
//! File format: one `key = value` per line, `#` starts a comment, lists are
//! comma-separated. Keys are the long flag names; `-` and `_` are interchangeable.

use std::f64::consts::PI;
use std::path::PathBuf;

use polariton_core::mappings::Platform;
use polariton_core::savqe::OptimizerOptions;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "POLARITON_OUT_DIR";

/// λ range where the N_B = 3 truncation is trusted.
pub const MAX_SWEEP_LAMBDA: f64 = 0.25;
/// Upper bounds that keep a mistyped value from exhausting memory.
pub const MAX_GRID_STEPS: usize = 10_000;
pub const MAX_LAYERS: usize = 64;
pub const MAX_QUMODE_CUTOFF: usize = 128;
pub const MAX_JOBS: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Integrals,
    Qedfci,
    Savqe,
    ScanLiac,
    ScanLici,
    LayerSweep,
    CouplingSweep,
    SectorProfile,
    Resources,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Integrals => "integrals",
            Command::Qedfci => "qedfci",
            Command::Savqe => "savqe",
            Command::ScanLiac => "scan-liac",
            Command::ScanLici => "scan-lici",
            Command::LayerSweep => "layer-sweep",
            Command::CouplingSweep => "coupling-sweep",
            Command::SectorProfile => "sector-profile",
            Command::Resources => "resources",
        }
    }

    /// Commands that emit a row table.
    pub fn is_table(self) -> bool {
        matches!(self, Command::ScanLiac | Command::ScanLici | Command::LayerSweep | Command::CouplingSweep | Command::SectorProfile)
    }

    /// Commands that need a geometry scan of the built-in molecule.
    fn scans_geometry(self) -> bool {
        matches!(self, Command::ScanLiac | Command::ScanLici)
    }
}

/// Evenly spaced points; a single step gives `[min]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, steps: usize) -> Self {
        Self { min, max, steps }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|k| if k + 1 == self.steps { self.max } else { self.min + h * k as f64 }).collect()
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.steps == 0 || self.steps > MAX_GRID_STEPS {
            return Err(CliError::config(format!("{name} grid needs 1..={MAX_GRID_STEPS} steps")));
        }
        if !self.min.is_finite() || !self.max.is_finite() || self.max < self.min {
            return Err(CliError::config(format!("{name} grid range [{}, {}] is empty", self.min, self.max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoleculeSource {
    /// H₂/STO-3G built at the configured geometry.
    H2,
    Fcidump { path: PathBuf, dipole: Option<PathBuf> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub molecule: MoleculeSource,
    /// Bond length in Å for single-point commands.
    pub r: f64,
    pub theta_z: f64,
    pub r_grid: Grid,
    pub theta_grid: Grid,
    pub omega: f64,
    pub lambda: f64,
    pub lambdas: Vec<f64>,
    pub n_b_max: usize,
    pub qumode_cutoff: usize,
    /// Number of exact states reported by `qedfci`.
    pub states: usize,
    pub layers: usize,
    pub layer_list: Vec<usize>,
    pub max_layers: usize,
    pub platforms: Vec<Platform>,
    pub optimizer: OptimizerOptions,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[serde(skip)]
    pub jobs: usize,
    #[serde(skip)]
    pub resume: bool,
}

impl ExperimentConfig {
    pub fn defaults(command: Command) -> Self {
        let mut c = Self {
            command,
            molecule: MoleculeSource::H2,
            r: 0.74,
            theta_z: 0.0,
            r_grid: Grid::new(0.4, 1.0, 31),
            theta_grid: Grid::new(0.0, PI, 15),
            omega: 1.0,
            lambda: 0.05,
            lambdas: vec![0.0, 0.025, 0.05, 0.1, 0.15, 0.2, 0.25],
            n_b_max: 3,
            qumode_cutoff: 15,
            states: 3,
            layers: 2,
            layer_list: vec![0, 1, 2, 3, 4],
            max_layers: 4,
            platforms: Platform::ALL.to_vec(),
            optimizer: OptimizerOptions::default(),
            output: None,
            jobs: 1,
            resume: false,
        };
        match command {
            Command::ScanLiac => {
                c.lambda = 0.1;
                c.layers = 3;
            }
            Command::ScanLici => {
                c.lambda = 0.08;
                c.layers = 3;
                c.r_grid.steps = 15;
            }
            Command::SectorProfile => c.lambdas = vec![0.0, 0.05, 0.1, 0.15, 0.2, 0.25],
            _ => {}
        }
        c
    }

    /// Apply one `key = value` setting.
    pub fn apply(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let key = key.trim().replace('-', "_");
        let v = value.trim();
        let bad = |what: &str| CliError::config(format!("{key}: cannot parse {v:?} as {what}"));
        let float = || v.parse::<f64>().map_err(|_| bad("a number"));
        let uint = || v.parse::<usize>().map_err(|_| bad("a non-negative integer"));
        match key.as_str() {
            "r" => self.r = float()?,
            "theta_z" => self.theta_z = float()?,
            "omega" => self.omega = float()?,
            "lambda" => self.lambda = float()?,
            "nbmax" | "n_b_max" => self.n_b_max = uint()?,
            "qumode_cutoff" => self.qumode_cutoff = uint()?,
            "k" | "states" => self.states = uint()?,
            "layers" => self.layers = uint()?,
            "max_layers" => self.max_layers = uint()?,
            "r_min" => self.r_grid.min = float()?,
            "r_max" => self.r_grid.max = float()?,
            "r_steps" => self.r_grid.steps = uint()?,
            "theta_min" => self.theta_grid.min = float()?,
            "theta_max" => self.theta_grid.max = float()?,
            "theta_steps" => self.theta_grid.steps = uint()?,
            "lambdas" => self.lambdas = list(v, |s| s.parse::<f64>().ok()).ok_or_else(|| bad("a list of numbers"))?,
            "layer_list" => self.layer_list = list(v, |s| s.parse::<usize>().ok()).ok_or_else(|| bad("a list of integers"))?,
            "platform" | "platforms" => {
                self.platforms = if v == "all" {
                    Platform::ALL.to_vec()
                } else {
                    list(v, |s| s.parse::<Platform>().ok()).ok_or_else(|| bad("qubit, qudit, qumode or all"))?
                }
            }
            "seed" => self.optimizer.seed = v.parse().map_err(|_| bad("a non-negative integer"))?,
            "restarts" => self.optimizer.restarts = uint()?,
            "energy_tol" => self.optimizer.energy_tol = float()?,
            "grad_tol" => self.optimizer.grad_tol = float()?,
            "max_iterations" => self.optimizer.max_iterations = v.parse().map_err(|_| bad("a non-negative integer"))?,
            "perturbation" => self.optimizer.perturbation = float()?,
            "lbfgs_memory" => self.optimizer.lbfgs_memory = uint()?,
            "molecule" => match v {
                "h2" => self.molecule = MoleculeSource::H2,
                _ => return Err(bad("h2 (use the fcidump key for integral files)")),
            },
            "fcidump" => {
                let dipole = match &self.molecule {
                    MoleculeSource::Fcidump { dipole, .. } => dipole.clone(),
                    MoleculeSource::H2 => None,
                };
                self.molecule = MoleculeSource::Fcidump { path: PathBuf::from(v), dipole };
            }
            "dipole" => match &mut self.molecule {
                MoleculeSource::Fcidump { dipole, .. } => *dipole = Some(PathBuf::from(v)),
                MoleculeSource::H2 => return Err(CliError::config("dipole needs an fcidump path set first")),
            },
            "out" | "output" => self.output = Some(PathBuf::from(v)),
            "jobs" => self.jobs = uint()?,
            "resume" => self.resume = v.parse().map_err(|_| bad("true or false"))?,
            _ => return Err(CliError::config(format!("unknown key {key:?}"))),
        }
        Ok(())
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (line, key, value) in parse_key_values(text)? {
            self.apply(&key, &value).map_err(|e| CliError::config(format!("line {line}: {e}")))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(self.omega) {
            return Err(CliError::config("omega must be positive"));
        }
        if !(self.lambda.is_finite() && self.lambda >= 0.0) || self.lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
            return Err(CliError::config("coupling strengths must be non-negative"));
        }
        if !positive(self.r) || !self.theta_z.is_finite() {
            return Err(CliError::config("r must be positive and theta_z finite"));
        }
        self.r_grid.validate("r")?;
        self.theta_grid.validate("theta")?;
        if self.r_grid.min <= 0.0 {
            return Err(CliError::config("r grid must stay positive"));
        }
        if self.n_b_max == 0 || self.qumode_cutoff < self.n_b_max || self.qumode_cutoff > MAX_QUMODE_CUTOFF {
            return Err(CliError::config(format!("need nbmax ≥ 1 and nbmax ≤ qumode_cutoff ≤ {MAX_QUMODE_CUTOFF}")));
        }
        let deepest = self.layer_list.iter().copied().chain([self.layers, self.max_layers]).max().unwrap_or(0);
        if deepest > MAX_LAYERS {
            return Err(CliError::config(format!("circuits are limited to {MAX_LAYERS} layers")));
        }
        if self.states == 0 {
            return Err(CliError::config("states must be at least 1"));
        }
        if self.platforms.is_empty() {
            return Err(CliError::config("platform list is empty"));
        }
        if self.lambdas.is_empty() || self.layer_list.is_empty() {
            return Err(CliError::config("lambda and layer lists must be nonempty"));
        }
        if self.layer_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::config("layer list must be strictly ascending"));
        }
        if self.jobs == 0 || self.jobs > MAX_JOBS {
            return Err(CliError::config(format!("jobs must be in 1..={MAX_JOBS}")));
        }
        let o = &self.optimizer;
        if !positive(o.energy_tol) || !positive(o.grad_tol) || !(o.perturbation.is_finite() && o.perturbation >= 0.0) || o.lbfgs_memory == 0 {
            return Err(CliError::config("optimizer tolerances, perturbation and memory must be positive"));
        }
        if self.command == Command::CouplingSweep && self.lambdas.iter().any(|&l| l > MAX_SWEEP_LAMBDA) {
            return Err(CliError::config(format!("coupling sweep is limited to λ ≤ {MAX_SWEEP_LAMBDA}")));
        }
        if self.command.scans_geometry() && self.molecule != MoleculeSource::H2 {
            return Err(CliError::config("geometry scans need the built-in H2 molecule"));
        }
        if self.resume && self.output.is_none() {
            return Err(CliError::config(format!("resume needs an output directory (--out or {OUT_DIR_ENV})")));
        }
        Ok(())
    }
}

fn list<T>(v: &str, f: impl Fn(&str) -> Option<T>) -> Option<Vec<T>> {
    v.split(',').map(|s| f(s.trim())).collect()
}

/// `(line, key, value)` triples of a key-value text.
pub fn parse_key_values(text: &str) -> Result<Vec<(usize, String, String)>, CliError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| CliError::config(format!("line {}: expected key = value", i + 1)))?;
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(CliError::config(format!("line {}: empty key or value", i + 1)));
        }
        out.push((i + 1, k.to_string(), v.to_string()));
    }
    Ok(out)
}

/// Splitmix64 of the global seed and the row index.
pub fn row_seed(global: u64, row: usize) -> u64 {
    let mut z = global ^ (row as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
