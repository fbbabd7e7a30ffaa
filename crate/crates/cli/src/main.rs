use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use polariton_cli::config::OUT_DIR_ENV;
use polariton_cli::experiments::{integrals_report, qedfci_report, resources_report, run_table, savqe_report};
use polariton_cli::{CliError, Command, ExperimentConfig};
use serde::Serialize;

/// Cavity QED polaritonic states of H₂: exact diagonalization and SA-VQE on
/// qubit, qudit and qumode registers.
#[derive(Parser)]
#[command(name = "polariton", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// H₂/STO-3G integrals, written as FCIDUMP plus dipole file.
    Integrals(Flags),
    /// Exact polaritonic states at one geometry.
    Qedfci(Flags),
    /// SA-VQE at one geometry.
    Savqe(Flags),
    /// Bond-length scan at fixed polarization angle.
    ScanLiac(Flags),
    /// Bond length × polarization angle grid.
    ScanLici(Flags),
    /// Ensemble error against circuit depth, warm-started.
    LayerSweep(Flags),
    /// Smallest depth reaching chemical accuracy for each coupling strength.
    CouplingSweep(Flags),
    /// Largest amplitude per photon sector against coupling strength.
    SectorProfile(Flags),
    /// Gate and parameter counts of the platform circuits.
    Resources(Flags),
}

/// Every flag has a config-file key of the same name; flags win.
#[derive(Args, Default)]
struct Flags {
    /// Key-value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Bond length in Å.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Angle between the bond and the cavity polarization, rad.
    #[arg(long, allow_hyphen_values = true)]
    theta_z: Option<String>,
    /// Cavity frequency, Ha.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Light-matter coupling, a.u.
    #[arg(long, allow_hyphen_values = true)]
    lambda: Option<String>,
    /// Comma-separated coupling strengths for sweeps.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: Option<String>,
    /// Photon cutoff of the qubit and qudit registers and of the exact reference.
    #[arg(long, allow_hyphen_values = true)]
    nbmax: Option<String>,
    /// Fock cutoff of the qumode register.
    #[arg(long, allow_hyphen_values = true)]
    qumode_cutoff: Option<String>,
    /// Number of exact states to report.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Circuit layers.
    #[arg(long, allow_hyphen_values = true)]
    layers: Option<String>,
    /// Comma-separated ascending layer counts for the layer sweep.
    #[arg(long, allow_hyphen_values = true)]
    layer_list: Option<String>,
    /// Deepest circuit tried by the coupling sweep.
    #[arg(long, allow_hyphen_values = true)]
    max_layers: Option<String>,
    /// qubit, qudit, qumode, a comma-separated list, or all.
    #[arg(long, alias = "platforms")]
    platform: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    r_steps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta_max: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta_steps: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Perturbed optimizer restarts after the first run.
    #[arg(long, allow_hyphen_values = true)]
    restarts: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    energy_tol: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    grad_tol: Option<String>,
    /// Iteration cap of each optimizer run.
    #[arg(long, allow_hyphen_values = true)]
    max_iterations: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    perturbation: Option<String>,
    /// FCIDUMP file used instead of the built-in H₂.
    #[arg(long, allow_hyphen_values = true)]
    fcidump: Option<String>,
    /// Dipole file accompanying --fcidump.
    #[arg(long, allow_hyphen_values = true)]
    dipole: Option<String>,
    /// Output directory; for `integrals` the FCIDUMP path.
    #[arg(long, allow_hyphen_values = true)]
    out: Option<String>,
    /// Worker threads for table commands.
    #[arg(long, allow_hyphen_values = true)]
    jobs: Option<String>,
    /// Skip rows already present in the output directory's row log.
    #[arg(long)]
    resume: bool,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &str)> {
        let all = [
            ("r", &self.r),
            ("theta_z", &self.theta_z),
            ("omega", &self.omega),
            ("lambda", &self.lambda),
            ("lambdas", &self.lambdas),
            ("nbmax", &self.nbmax),
            ("qumode_cutoff", &self.qumode_cutoff),
            ("k", &self.k),
            ("layers", &self.layers),
            ("layer_list", &self.layer_list),
            ("max_layers", &self.max_layers),
            ("platform", &self.platform),
            ("r_min", &self.r_min),
            ("r_max", &self.r_max),
            ("r_steps", &self.r_steps),
            ("theta_min", &self.theta_min),
            ("theta_max", &self.theta_max),
            ("theta_steps", &self.theta_steps),
            ("seed", &self.seed),
            ("restarts", &self.restarts),
            ("energy_tol", &self.energy_tol),
            ("grad_tol", &self.grad_tol),
            ("max_iterations", &self.max_iterations),
            ("perturbation", &self.perturbation),
            ("fcidump", &self.fcidump),
            ("dipole", &self.dipole),
            ("out", &self.out),
            ("jobs", &self.jobs),
        ];
        all.into_iter().filter_map(|(k, v)| v.as_deref().map(|v| (k, v))).collect()
    }
}

fn resolve(command: Command, flags: &Flags) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::defaults(command);
    if let Ok(dir) = std::env::var(OUT_DIR_ENV) {
        if !dir.is_empty() {
            config.output = Some(match command {
                Command::Integrals => PathBuf::from(dir).join("h2.fcidump"),
                _ => PathBuf::from(dir),
            });
        }
    }
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        config.apply_text(&text)?;
    }
    for (k, v) in flags.pairs() {
        config.apply(k, v)?;
    }
    if flags.resume {
        config.resume = true;
    }
    config.validate()?;
    Ok(config)
}

fn emit<T: Serialize>(value: &T, config: &ExperimentConfig) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    if let Some(dir) = &config.output {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{}.json", config.command.name())), &text)?;
    }
    print!("{text}");
    Ok(())
}

/// A single platform prints one object, several print an array.
fn emit_per_platform<T: Serialize>(mut items: Vec<T>, config: &ExperimentConfig) -> Result<(), CliError> {
    if items.len() == 1 {
        emit(&items.remove(0), config)
    } else {
        emit(&items, config)
    }
}

fn run(command: Command, flags: &Flags) -> Result<(), CliError> {
    let config = resolve(command, flags)?;
    match command {
        Command::Integrals => {
            let report = integrals_report(&config, config.output.as_deref())?;
            print!("{}", serde_json::to_string_pretty(&report)? + "\n");
            Ok(())
        }
        Command::Qedfci => emit(&qedfci_report(&config)?, &config),
        Command::Savqe => emit_per_platform(savqe_report(&config)?, &config),
        Command::Resources => emit_per_platform(resources_report(&config)?, &config),
        _ => {
            let table = run_table(&config)?;
            match &config.output {
                Some(dir) => {
                    eprintln!("{} rows written to {}", table.rows.len(), dir.display());
                    Ok(())
                }
                None => {
                    print!("{}", table.to_json()?);
                    Ok(())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, flags) = match &cli.command {
        Sub::Integrals(f) => (Command::Integrals, f),
        Sub::Qedfci(f) => (Command::Qedfci, f),
        Sub::Savqe(f) => (Command::Savqe, f),
        Sub::ScanLiac(f) => (Command::ScanLiac, f),
        Sub::ScanLici(f) => (Command::ScanLici, f),
        Sub::LayerSweep(f) => (Command::LayerSweep, f),
        Sub::CouplingSweep(f) => (Command::CouplingSweep, f),
        Sub::SectorProfile(f) => (Command::SectorProfile, f),
        Sub::Resources(f) => (Command::Resources, f),
    };
    match run(command, flags) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("polariton: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
