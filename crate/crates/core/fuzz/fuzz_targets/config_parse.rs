//! Config-file text is untrusted input: arbitrary bytes must either
//! parse into a layer or fail with a structured error, never panic.
//! A successful layer must also survive resolution against defaults.

#![no_main]

use emft_quench::harness::{PartialConfig, SweepConfig};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(layer) = PartialConfig::parse_str(text) {
        let _ = SweepConfig::resolve(&layer);
    }
});
