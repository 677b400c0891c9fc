//! Sweep CSV is read back by downstream tooling, so the parser faces
//! arbitrary bytes. It must never panic, and anything it accepts must
//! round-trip bit-exactly through the renderer.

#![no_main]

use emft_quench::harness::{parse_sweep_csv, render_sweep_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(records) = parse_sweep_csv(text) {
        let rendered = render_sweep_csv(&records);
        let again = parse_sweep_csv(&rendered).expect("rendered output must parse");
        assert_eq!(records, again, "round trip must preserve every record");
    }
});
