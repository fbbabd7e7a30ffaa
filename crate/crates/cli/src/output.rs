//! Result rows, their CSV and JSON encodings, and the append-only row log
//! that makes table commands resumable.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use polariton_core::mappings::Platform;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// One grid point on one platform. Fields a command does not produce stay empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub row: usize,
    pub r: f64,
    pub theta_z: f64,
    pub lambda: f64,
    pub platform: Option<Platform>,
    pub layers: Option<usize>,
    pub seed: Option<u64>,
    pub oracle_energies: Vec<f64>,
    pub oracle_photon_numbers: Vec<f64>,
    pub vqe_energies: Vec<f64>,
    pub vqe_photon_numbers: Vec<f64>,
    pub energy_sa: Option<f64>,
    pub delta_e_sa: Option<f64>,
    pub delta_e: Vec<f64>,
    pub infidelities: Vec<f64>,
    pub delta_e12: Option<f64>,
    /// `[state][photon sector]` largest amplitude.
    pub sector_profiles: Vec<Vec<f64>>,
    /// Ensemble error after each layer count tried (coupling sweep).
    pub layer_errors: Vec<f64>,
    pub min_layers: Option<usize>,
    pub entangling_gates: Option<usize>,
    pub params_total: Option<usize>,
    pub params_fabric: Option<usize>,
    pub params_entangler: Option<usize>,
    pub converged: Option<bool>,
    pub evaluations: Option<usize>,
    pub error: Option<String>,
    pub wall_time_s: f64,
}

impl ResultRow {
    pub fn new(row: usize, r: f64, theta_z: f64, lambda: f64) -> Self {
        Self {
            row,
            r,
            theta_z,
            lambda,
            platform: None,
            layers: None,
            seed: None,
            oracle_energies: vec![],
            oracle_photon_numbers: vec![],
            vqe_energies: vec![],
            vqe_photon_numbers: vec![],
            energy_sa: None,
            delta_e_sa: None,
            delta_e: vec![],
            infidelities: vec![],
            delta_e12: None,
            sector_profiles: vec![],
            layer_errors: vec![],
            min_layers: None,
            entangling_gates: None,
            params_total: None,
            params_fabric: None,
            params_entangler: None,
            converged: None,
            evaluations: None,
            error: None,
            wall_time_s: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub schema: u32,
    pub command: String,
    pub config: ExperimentConfig,
    pub rows: Vec<ResultRow>,
}

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

fn push_vec(cols: &mut Vec<(String, String)>, name: &str, v: &[f64], n: usize) {
    for k in 0..n {
        cols.push((format!("{name}_{k}"), v.get(k).map(|x| x.to_string()).unwrap_or_default()));
    }
}

/// Flat CSV columns; list fields expand to one column per state (or sector).
pub fn csv_columns(row: &ResultRow, n_states: usize, n_sectors: usize) -> Vec<(String, String)> {
    let mut c: Vec<(String, String)> = vec![
        ("row".into(), row.row.to_string()),
        ("r".into(), row.r.to_string()),
        ("theta_z".into(), row.theta_z.to_string()),
        ("lambda".into(), row.lambda.to_string()),
        ("platform".into(), opt(&row.platform)),
        ("layers".into(), opt(&row.layers)),
        ("seed".into(), opt(&row.seed)),
    ];
    push_vec(&mut c, "oracle_energy", &row.oracle_energies, n_states);
    push_vec(&mut c, "oracle_photons", &row.oracle_photon_numbers, n_states);
    push_vec(&mut c, "vqe_energy", &row.vqe_energies, n_states);
    push_vec(&mut c, "vqe_photons", &row.vqe_photon_numbers, n_states);
    c.push(("energy_sa".into(), opt(&row.energy_sa)));
    c.push(("delta_e_sa".into(), opt(&row.delta_e_sa)));
    push_vec(&mut c, "delta_e", &row.delta_e, n_states);
    push_vec(&mut c, "infidelity", &row.infidelities, n_states);
    c.push(("delta_e12".into(), opt(&row.delta_e12)));
    for s in 0..n_states {
        let prof = row.sector_profiles.get(s).cloned().unwrap_or_default();
        push_vec(&mut c, &format!("profile_s{s}_n"), &prof, n_sectors);
    }
    c.push(("layer_errors".into(), row.layer_errors.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")));
    c.push(("min_layers".into(), opt(&row.min_layers)));
    c.push(("entangling_gates".into(), opt(&row.entangling_gates)));
    c.push(("params_total".into(), opt(&row.params_total)));
    c.push(("params_fabric".into(), opt(&row.params_fabric)));
    c.push(("params_entangler".into(), opt(&row.params_entangler)));
    c.push(("converged".into(), opt(&row.converged)));
    c.push(("evaluations".into(), opt(&row.evaluations)));
    c.push(("error".into(), row.error.clone().unwrap_or_default()));
    c.push(("wall_time_s".into(), row.wall_time_s.to_string()));
    c
}

impl Table {
    pub fn new(config: &ExperimentConfig, mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by_key(|r| r.row);
        Self { schema: SCHEMA_VERSION, command: config.command.name().to_string(), config: config.clone(), rows }
    }

    fn widths(&self) -> (usize, usize) {
        let states = self.rows.iter().map(|r| r.oracle_energies.len().max(r.vqe_energies.len())).max().unwrap_or(0);
        let sectors = self.rows.iter().flat_map(|r| r.sector_profiles.iter().map(Vec::len)).max().unwrap_or(0);
        (states, sectors)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let (ns, nsec) = self.widths();
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = csv_columns(&ResultRow::new(0, 0.0, 0.0, 0.0), ns, nsec);
        w.write_record(header.iter().map(|(k, _)| k))?;
        for r in &self.rows {
            w.write_record(csv_columns(r, ns, nsec).iter().map(|(_, v)| v))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// Write `<dir>/<command>.csv` and `<dir>/<command>.json`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf), CliError> {
        std::fs::create_dir_all(dir)?;
        let csv_path = dir.join(format!("{}.csv", self.command));
        let json_path = dir.join(format!("{}.json", self.command));
        std::fs::write(&csv_path, self.to_csv()?)?;
        std::fs::write(&json_path, self.to_json()?)?;
        Ok((csv_path, json_path))
    }
}

/// Append-only log of finished rows; the first line records the configuration.
pub struct RowLog {
    file: Mutex<File>,
}

impl RowLog {
    pub fn path(dir: &Path, config: &ExperimentConfig) -> PathBuf {
        dir.join(format!("{}.rows.jsonl", config.command.name()))
    }

    /// Open the log, returning rows already present when resuming.
    ///
    /// A resumed log must have been written with the same configuration.
    /// Unparseable lines (a row cut short by an interruption) are dropped.
    pub fn open(dir: &Path, config: &ExperimentConfig) -> Result<(Self, BTreeMap<usize, ResultRow>), CliError> {
        std::fs::create_dir_all(dir)?;
        let path = Self::path(dir, config);
        let header = serde_json::to_string(config)?;
        let mut done = BTreeMap::new();
        if config.resume && path.exists() {
            let mut lines = BufReader::new(File::open(&path)?).lines();
            let first = lines.next().transpose()?.unwrap_or_default();
            if first != header {
                return Err(CliError::config(format!("{} was written with a different configuration", path.display())));
            }
            for line in lines {
                if let Ok(row) = serde_json::from_str::<ResultRow>(&line?) {
                    done.insert(row.row, row);
                }
            }
            // Rewrite without any torn tail.
            let mut f = File::create(&path)?;
            writeln!(f, "{header}")?;
            for row in done.values() {
                writeln!(f, "{}", serde_json::to_string(row)?)?;
            }
        } else {
            let mut f = File::create(&path)?;
            writeln!(f, "{header}")?;
        }
        let file = OpenOptions::new().append(true).open(&path)?;
        Ok((Self { file: Mutex::new(file) }, done))
    }

    pub fn append(&self, row: &ResultRow) -> Result<(), CliError> {
        let line = serde_json::to_string(row)?;
        let mut f = self.file.lock().expect("row log lock");
        writeln!(f, "{line}")?;
        f.flush()?;
        Ok(())
    }
}
