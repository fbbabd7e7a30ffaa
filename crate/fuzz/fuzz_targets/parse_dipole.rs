#![no_main]

use libfuzzer_sys::fuzz_target;
use polariton_core::integrals::parse_dipole;

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let _ = parse_dipole(text, 1 + first as usize % 4);
});
