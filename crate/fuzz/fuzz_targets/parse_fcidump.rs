#![no_main]

use libfuzzer_sys::fuzz_target;
use polariton_core::integrals::{format_fcidump, parse_fcidump};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mi) = parse_fcidump(text) {
        // Anything accepted must survive a write and re-read.
        let again = parse_fcidump(&format_fcidump(&mi)).expect("formatted FCIDUMP parses");
        assert_eq!((again.n_orb, again.n_e, again.ms2), (mi.n_orb, mi.n_e, mi.ms2));
    }
});
