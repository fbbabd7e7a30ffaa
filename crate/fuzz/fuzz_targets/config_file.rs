#![no_main]

use libfuzzer_sys::fuzz_target;
use polariton_cli::config::parse_key_values;
use polariton_cli::{Command, ExperimentConfig};

const COMMANDS: [Command; 9] = [
    Command::Integrals,
    Command::Qedfci,
    Command::Savqe,
    Command::ScanLiac,
    Command::ScanLici,
    Command::LayerSweep,
    Command::CouplingSweep,
    Command::SectorProfile,
    Command::Resources,
];

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let _ = parse_key_values(text);
    let mut config = ExperimentConfig::defaults(COMMANDS[first as usize % COMMANDS.len()]);
    if config.apply_text(text).is_ok() && config.validate().is_ok() {
        let _ = config.r_grid.points();
        let _ = config.theta_grid.points();
    }
});
